#pragma once

#include <ostream>

namespace otfs {

/// Built-in property suites: DFT/precoder unitarity, modem round trips and
/// channel-matrix oracle equivalence. Prints one pass/fail line per property.
/// Returns true only when every property passes.
bool run_selfcheck(std::ostream& os);

}  // namespace otfs
