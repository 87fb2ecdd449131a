#pragma once

#include <cstdint>
#include <random>

#include "otfs/linalg.hpp"

namespace otfs {

/// SplitMix64 finalizer; the counter-based seed derivation builds on it.
std::uint64_t splitmix64(std::uint64_t z);

/// Per-frame seed: an order-free function of (master, snr index, frame index)
/// so frames can run in any order or in parallel with identical draws.
std::uint64_t frame_seed(std::uint64_t master, std::uint64_t snr_index,
                         std::uint64_t frame_index);

using Rng = std::mt19937_64;

/// One CN(0, var) sample (independent real/imag, variance var/2 each).
cplx complex_gaussian(Rng& rng, double var);

/// Length-n vector of i.i.d. CN(0, var) samples.
CVector complex_gaussian_vector(Rng& rng, std::size_t n, double var);

}  // namespace otfs
