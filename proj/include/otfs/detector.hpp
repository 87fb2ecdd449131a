#pragma once

#include <cstdint>

#include "otfs/linalg.hpp"
#include "otfs/modem.hpp"

namespace otfs {

enum class DetectorKind { ML, LMMSE };

struct DetectorConfig {
    DetectorKind kind = DetectorKind::ML;
    std::uint64_t ml_budget = std::uint64_t{1} << 20;  // max candidate evaluations
    double noise_var = 0.0;                            // N0, LMMSE only
};

/// Number of ML candidates |A|^n, or nullopt if it exceeds the budget.
bool ml_feasible(std::size_t n, const Alphabet& a, std::uint64_t budget);

/// Exact argmin over all alphabet vectors of ||y - a_eff*x||^2. Ties break
/// toward the lexicographically smallest candidate (symbol 0 most
/// significant, alphabet index order per symbol). Throws CapacityError when
/// the search space exceeds cfg.ml_budget.
Frame ml_detect(const CVector& y, const CMatrix& a_eff, const Alphabet& alphabet,
                const DetectorConfig& cfg);

/// x_soft = A^H (A A^H + N0 I)^{-1} y, then per-entry nearest-point slicing.
Frame lmmse_detect(const CVector& y, const CMatrix& a_eff, const Alphabet& alphabet,
                   const DetectorConfig& cfg);

/// Per-entry nearest alphabet point; ties toward the smallest alphabet index.
Frame slice(const CVector& v, const Alphabet& alphabet);

}  // namespace otfs
