#include "otfs/fastops.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace otfs {

CVector apply_w(const CVector& z, const OtfsDims& dims) { return otfs_demodulate(z, dims); }

CVector apply_wh(const CVector& z, const OtfsDims& dims) { return otfs_modulate(z, dims); }

CVector theta_twiddle(std::size_t mn) {
    static std::mutex m;
    static std::map<std::size_t, CVector> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(mn);
    if (it != cache.end()) return it->second;
    const std::vector<cplx> nodes = vandermonde_nodes(mn);
    const double phase1 = std::arg(nodes[0]);
    CVector t(static_cast<Eigen::Index>(mn));
    for (std::size_t i = 0; i < mn; ++i) {
        const double ph = phase1 * static_cast<double>(i);
        t(static_cast<Eigen::Index>(i)) = cplx(std::cos(ph), std::sin(ph));
    }
    cache[mn] = t;
    return t;
}

CVector theta_apply(const CVector& z, std::size_t mn) {
    if (static_cast<std::size_t>(z.size()) != mn) throw DimensionError("theta_apply: length != MN");
    CVector w = theta_twiddle(mn).cwiseProduct(z);
    fft_unitary(w, true);
    return w;
}

CVector theta_apply_adjoint(const CVector& z, std::size_t mn) {
    if (static_cast<std::size_t>(z.size()) != mn)
        throw DimensionError("theta_apply_adjoint: length != MN");
    CVector w = z;
    fft_unitary(w, false);
    return theta_twiddle(mn).conjugate().cwiseProduct(w);
}

CVector precode_fast(PrecoderKind kind, double phase_theta, const CVector& x,
                     const OtfsDims& dims) {
    const std::size_t mn = dims.mn();
    switch (kind) {
        case PrecoderKind::Identity:
            return x;
        case PrecoderKind::PhaseRotation: {
            CVector out(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double ph = phase_theta * static_cast<double>(i);
                out(i) = x(i) * cplx(std::cos(ph), std::sin(ph));
            }
            return out;
        }
        case PrecoderKind::ProposedTimeSel:
            return apply_w(theta_apply(x, mn), dims);
        case PrecoderKind::ProposedFreqSel: {
            CVector z = theta_apply(x, mn);
            fft_unitary(z, true);
            return apply_w(z, dims);
        }
    }
    throw ParameterError("precode_fast: unknown precoder kind");
}

CVector precode_adjoint_fast(PrecoderKind kind, double phase_theta, const CVector& y,
                             const OtfsDims& dims) {
    const std::size_t mn = dims.mn();
    switch (kind) {
        case PrecoderKind::Identity:
            return y;
        case PrecoderKind::PhaseRotation: {
            CVector out(y.size());
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double ph = -phase_theta * static_cast<double>(i);
                out(i) = y(i) * cplx(std::cos(ph), std::sin(ph));
            }
            return out;
        }
        case PrecoderKind::ProposedTimeSel:
            return theta_apply_adjoint(apply_wh(y, dims), mn);
        case PrecoderKind::ProposedFreqSel: {
            CVector z = apply_wh(y, dims);
            fft_unitary(z, false);
            return theta_apply_adjoint(z, mn);
        }
    }
    throw ParameterError("precode_adjoint_fast: unknown precoder kind");
}

namespace {

CVector wiener_scale(const CVector& g, double noise_var) {
    CVector s(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        s(i) = std::conj(g(i)) / (std::norm(g(i)) + noise_var);
    return s;
}

void check_condition(const CVector& g, double noise_var) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double v = std::norm(g(i)) + noise_var;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo <= 0 || hi / lo > 1e12)
        throw NumericalError("lmmse: system matrix condition estimate > 1e12");
}

}  // namespace

CVector lmmse_soft_fir(const CVector& y, const FirChannel& ch, PrecoderKind kind,
                       double phase_theta, const OtfsDims& dims, double noise_var) {
    if (noise_var <= 0) throw ParameterError("lmmse_soft_fir: noise_var must be > 0");
    const std::size_t mn = dims.mn();
    const CVector g = fir_spectrum(ch, mn);
    check_condition(g, noise_var);
    CVector z = apply_wh(y, dims);  // U^H y = F_MN (F_N^H (x) I_M) y
    fft_unitary(z, false);
    z = wiener_scale(g, noise_var).cwiseProduct(z);
    fft_unitary(z, true);  // back through U
    z = apply_w(z, dims);
    return precode_adjoint_fast(kind, phase_theta, z, dims);
}

CVector lmmse_soft_bem(const CVector& y, const BemChannel& ch, PrecoderKind kind,
                       double phase_theta, const OtfsDims& dims, double noise_var) {
    if (noise_var <= 0) throw ParameterError("lmmse_soft_bem: noise_var must be > 0");
    const CVector h = bem_time_response(ch);
    check_condition(h, noise_var);
    CVector z = apply_wh(y, dims);  // W^H y
    z = wiener_scale(h, noise_var).cwiseProduct(z);
    z = apply_w(z, dims);
    return precode_adjoint_fast(kind, phase_theta, z, dims);
}

}  // namespace otfs
