#include "otfs/modem.hpp"

#include <cmath>

namespace otfs {

Alphabet Alphabet::bpsk() {
    Alphabet a;
    a.kind = AlphabetKind::BPSK;
    a.name = "bpsk";
    a.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    a.bits_per_symbol = 1;
    return a;
}

Alphabet Alphabet::qpsk() {
    Alphabet a;
    a.kind = AlphabetKind::QPSK;
    a.name = "qpsk";
    const double s = 1.0 / std::sqrt(2.0);
    a.points.resize(4);
    for (std::size_t idx = 0; idx < 4; ++idx) {
        const int b0 = static_cast<int>((idx >> 1) & 1);
        const int b1 = static_cast<int>(idx & 1);
        a.points[idx] = cplx((1 - 2 * b0) * s, (1 - 2 * b1) * s);
    }
    a.bits_per_symbol = 2;
    return a;
}

Alphabet Alphabet::make(AlphabetKind k) {
    return k == AlphabetKind::BPSK ? bpsk() : qpsk();
}

void Alphabet::index_to_bits(std::size_t idx, std::uint8_t* out) const {
    for (std::size_t b = 0; b < bits_per_symbol; ++b)
        out[b] = static_cast<std::uint8_t>((idx >> (bits_per_symbol - 1 - b)) & 1);
}

Frame map_bits(const std::vector<std::uint8_t>& bits, const Alphabet& a, const OtfsDims& dims) {
    const std::size_t mn = dims.mn();
    if (bits.size() != mn * a.bits_per_symbol)
        throw DimensionError("map_bits: bit count != MN * bits_per_symbol");
    Frame f;
    f.bits = bits;
    f.x.resize(static_cast<Eigen::Index>(mn));
    for (std::size_t i = 0; i < mn; ++i) {
        std::size_t idx = 0;
        for (std::size_t b = 0; b < a.bits_per_symbol; ++b)
            idx = (idx << 1) | (bits[i * a.bits_per_symbol + b] & 1);
        f.x(static_cast<Eigen::Index>(i)) = a.point(idx);
    }
    return f;
}

std::vector<std::uint8_t> demap_symbols(const CVector& x, const Alphabet& a) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(x.size()) * a.bits_per_symbol);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::size_t best = 0;
        double best_d = std::norm(x(i) - a.points[0]);
        for (std::size_t idx = 1; idx < a.size(); ++idx) {
            const double d = std::norm(x(i) - a.points[idx]);
            if (d < best_d) {
                best_d = d;
                best = idx;
            }
        }
        a.index_to_bits(best, &bits[static_cast<std::size_t>(i) * a.bits_per_symbol]);
    }
    return bits;
}

CVector otfs_modulate(const CVector& xbar, const OtfsDims& dims) {
    if (static_cast<std::size_t>(xbar.size()) != dims.mn())
        throw DimensionError("otfs_modulate: input length != MN");
    const CMatrix& fn = dft_matrix_cached(dims.N);
    return vec(invec(xbar, dims.M) * fn.adjoint());
}

CVector otfs_demodulate(const CVector& r, const OtfsDims& dims) {
    if (static_cast<std::size_t>(r.size()) != dims.mn())
        throw DimensionError("otfs_demodulate: input length != MN");
    const CMatrix& fn = dft_matrix_cached(dims.N);
    return vec(invec(r, dims.M) * fn);
}

CVector add_cp(const CVector& s, std::size_t lcp) {
    if (lcp >= static_cast<std::size_t>(s.size()))
        throw DimensionError("add_cp: CP length must be < signal length");
    CVector out(s.size() + static_cast<Eigen::Index>(lcp));
    out.head(static_cast<Eigen::Index>(lcp)) = s.tail(static_cast<Eigen::Index>(lcp));
    out.tail(s.size()) = s;
    return out;
}

CVector remove_cp(const CVector& v, std::size_t lcp) {
    if (lcp >= static_cast<std::size_t>(v.size()))
        throw DimensionError("remove_cp: CP length must be < signal length");
    return v.tail(v.size() - static_cast<Eigen::Index>(lcp));
}

}  // namespace otfs
