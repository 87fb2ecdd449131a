#include "otfs/detector.hpp"

#include <cmath>
#include <vector>

namespace otfs {

bool ml_feasible(std::size_t n, const Alphabet& a, std::uint64_t budget) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (count > budget / a.size()) return false;
        count *= a.size();
    }
    return count <= budget;
}

Frame slice(const CVector& v, const Alphabet& alphabet) {
    Frame f;
    f.x.resize(v.size());
    f.bits.resize(static_cast<std::size_t>(v.size()) * alphabet.bits_per_symbol);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::size_t best = 0;
        double best_d = std::norm(v(i) - alphabet.points[0]);
        for (std::size_t idx = 1; idx < alphabet.size(); ++idx) {
            const double d = std::norm(v(i) - alphabet.points[idx]);
            if (d < best_d) {  // strict: ties keep the smaller index
                best_d = d;
                best = idx;
            }
        }
        f.x(i) = alphabet.points[best];
        alphabet.index_to_bits(best, &f.bits[static_cast<std::size_t>(i) * alphabet.bits_per_symbol]);
    }
    return f;
}

Frame ml_detect(const CVector& y, const CMatrix& a_eff, const Alphabet& alphabet,
                const DetectorConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(a_eff.cols());
    if (y.size() != a_eff.rows()) throw DimensionError("ml_detect: y length != rows of A");
    if (!ml_feasible(n, alphabet, cfg.ml_budget))
        throw CapacityError(
            "ml_detect: |alphabet|^MN exceeds the ML budget; use the LMMSE detector");

    const std::size_t B = alphabet.size();

    // Lexicographic weights for the tie-break index (symbol 0 most significant).
    std::vector<std::uint64_t> weight(n);
    {
        std::uint64_t w = 1;
        for (std::size_t i = n; i-- > 0;) {
            weight[i] = w;
            w *= B;
        }
    }

    // Reflected-Gray walk over mixed-radix digits: one symbol changes per step,
    // so the residual update is O(rows). Adjacent Gray digits differ by +-1,
    // which lets every step's column-times-delta vector be precomputed; the
    // hot loop is then a fused subtract-and-accumulate over split re/im
    // arrays.
    const std::size_t rows = static_cast<std::size_t>(a_eff.rows());
    // step_re/step_im[(i*B + d_from)*2 + (dir>0 ? 1 : 0)] = a_eff.col(i) * delta
    std::vector<std::vector<double>> step_re(n * B * 2), step_im(n * B * 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < B; ++d)
            for (int up = 0; up < 2; ++up) {
                const long to = static_cast<long>(d) + (up ? 1 : -1);
                if (to < 0 || to >= static_cast<long>(B)) continue;
                const cplx delta = alphabet.points[static_cast<std::size_t>(to)] -
                                   alphabet.points[d];
                auto& re = step_re[(i * B + d) * 2 + static_cast<std::size_t>(up)];
                auto& im = step_im[(i * B + d) * 2 + static_cast<std::size_t>(up)];
                re.resize(rows);
                im.resize(rows);
                for (std::size_t k = 0; k < rows; ++k) {
                    const cplx v = a_eff(static_cast<Eigen::Index>(k),
                                         static_cast<Eigen::Index>(i)) *
                                   delta;
                    re[k] = v.real();
                    im[k] = v.imag();
                }
            }

    std::vector<std::size_t> digit(n, 0);
    std::vector<int> dir(n, 1);
    CVector x = CVector::Constant(static_cast<Eigen::Index>(n), alphabet.points[0]);
    CVector r0 = y - a_eff * x;
    std::vector<double> r_re(rows), r_im(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        r_re[k] = r0(static_cast<Eigen::Index>(k)).real();
        r_im[k] = r0(static_cast<Eigen::Index>(k)).imag();
    }
    double res = r0.squaredNorm();
    std::uint64_t idx = 0;

    std::vector<std::size_t> best_digits = digit;
    double best_res = res;
    std::uint64_t best_idx = idx;

    std::uint64_t steps = 0;
    while (true) {
        // advance one Gray step; digit position order matches the canonical
        // reflected-Gray enumeration (least significant symbol fastest)
        std::size_t i = n;
        for (std::size_t j = n; j-- > 0;) {
            const long nd = static_cast<long>(digit[j]) + dir[j];
            if (nd < 0 || nd >= static_cast<long>(B)) {
                dir[j] = -dir[j];
            } else {
                i = j;
                break;
            }
        }
        if (i == n) break;  // walk exhausted

        const std::size_t old_d = digit[i];
        const std::size_t new_d = old_d + static_cast<std::size_t>(dir[i]);
        const std::size_t slot = (i * B + old_d) * 2 + (dir[i] > 0 ? 1u : 0u);
        digit[i] = new_d;
        idx += (static_cast<std::uint64_t>(new_d) - static_cast<std::uint64_t>(old_d)) * weight[i];

        const double* dre = step_re[slot].data();
        const double* dim = step_im[slot].data();
        double acc = 0.0;
        for (std::size_t k = 0; k < rows; ++k) {
            const double re = r_re[k] - dre[k];
            const double im = r_im[k] - dim[k];
            r_re[k] = re;
            r_im[k] = im;
            acc += re * re + im * im;
        }
        res = acc;

        if ((++steps & 0xfff) == 0) {  // cap incremental drift
            for (std::size_t j = 0; j < n; ++j)
                x(static_cast<Eigen::Index>(j)) = alphabet.points[digit[j]];
            r0 = y - a_eff * x;
            for (std::size_t k = 0; k < rows; ++k) {
                r_re[k] = r0(static_cast<Eigen::Index>(k)).real();
                r_im[k] = r0(static_cast<Eigen::Index>(k)).imag();
            }
            res = r0.squaredNorm();
        }

        if (res < best_res || (res == best_res && idx < best_idx)) {
            best_res = res;
            best_idx = idx;
            best_digits = digit;
        }
    }

    Frame f;
    f.x.resize(static_cast<Eigen::Index>(n));
    f.bits.resize(n * alphabet.bits_per_symbol);
    for (std::size_t i = 0; i < n; ++i) {
        f.x(static_cast<Eigen::Index>(i)) = alphabet.points[best_digits[i]];
        alphabet.index_to_bits(best_digits[i], &f.bits[i * alphabet.bits_per_symbol]);
    }
    return f;
}

Frame lmmse_detect(const CVector& y, const CMatrix& a_eff, const Alphabet& alphabet,
                   const DetectorConfig& cfg) {
    if (cfg.noise_var <= 0) throw ParameterError("lmmse_detect: noise_var must be > 0");
    if (y.size() != a_eff.rows()) throw DimensionError("lmmse_detect: y length != rows of A");

    CMatrix g = a_eff * a_eff.adjoint();
    g.diagonal().array() += cfg.noise_var;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0 || hi / lo > 1e12)
        throw NumericalError("lmmse_detect: system matrix condition estimate > 1e12");

    const CVector z = es.eigenvectors() *
                      (es.eigenvalues().cwiseInverse().asDiagonal() *
                       (es.eigenvectors().adjoint() * y));
    const CVector soft = a_eff.adjoint() * z;
    return slice(soft, alphabet);
}

}  // namespace otfs
