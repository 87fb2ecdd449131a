#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfs/linalg.hpp"

namespace otfs {

struct OtfsDims {
    std::size_t M = 1;  // delay bins
    std::size_t N = 1;  // Doppler bins

    std::size_t mn() const { return M * N; }
};

enum class AlphabetKind { BPSK, QPSK };

/// Unit-energy modulation alphabet with its bit mapping. Symbol index equals
/// the bit pattern read MSB-first, so points[idx] <-> bits of idx.
struct Alphabet {
    AlphabetKind kind;
    std::string name;
    std::vector<cplx> points;
    std::size_t bits_per_symbol;

    static Alphabet bpsk();  // bit 0 -> +1
    static Alphabet qpsk();  // Gray: (b0,b1) -> ((1-2*b0) + j*(1-2*b1))/sqrt(2)
    static Alphabet make(AlphabetKind k);

    std::size_t size() const { return points.size(); }
    cplx point(std::size_t idx) const { return points[idx]; }
    void index_to_bits(std::size_t idx, std::uint8_t* out) const;
};

struct Frame {
    CVector x;                       // MN delay-Doppler symbols
    std::vector<std::uint8_t> bits;  // MN * bits_per_symbol
};

/// Map a bit stream onto delay-Doppler symbols.
Frame map_bits(const std::vector<std::uint8_t>& bits, const Alphabet& a, const OtfsDims& dims);

/// Exact inverse of map_bits for on-alphabet symbol vectors.
std::vector<std::uint8_t> demap_symbols(const CVector& x, const Alphabet& a);

/// ISFFT + Heisenberg transform with rectangular pulse: s = vec(invec(xbar,M) * F_N^H).
CVector otfs_modulate(const CVector& xbar, const OtfsDims& dims);

/// Wigner transform + SFFT with rectangular pulse: y = vec(invec(r,M) * F_N).
CVector otfs_demodulate(const CVector& r, const OtfsDims& dims);

CVector add_cp(const CVector& s, std::size_t lcp);
CVector remove_cp(const CVector& v, std::size_t lcp);

}  // namespace otfs
