#include "otfs/channel.hpp"

#include <cmath>
#include <numbers>

namespace otfs {

FirChannel sample_fir(std::size_t L, Rng& rng) {
    if (L == 0) throw DimensionError("sample_fir: L must be >= 1");
    FirChannel ch;
    ch.taps = complex_gaussian_vector(rng, L, 1.0 / static_cast<double>(L));
    return ch;
}

BemChannel sample_bem(const OtfsDims& dims, double f_max, double delta_f, Rng& rng) {
    if (delta_f <= 0) throw ParameterError("sample_bem: delta_f must be > 0");
    if (f_max < 0) throw ParameterError("sample_bem: f_max must be >= 0");
    BemChannel ch;
    ch.dims = dims;
    ch.f_max = f_max;
    ch.fbar_max = f_max / delta_f;
    ch.Q = 2 * static_cast<std::size_t>(std::ceil(static_cast<double>(dims.N) * ch.fbar_max));
    const std::size_t nq = ch.Q + 1;
    ch.coeffs = complex_gaussian_vector(rng, nq, 1.0 / static_cast<double>(nq));
    ch.omegas.resize(nq);
    const double base = 2.0 * std::numbers::pi / static_cast<double>(dims.mn());
    const double shift = std::ceil(static_cast<double>(ch.Q) / 2.0);
    for (std::size_t q = 0; q < nq; ++q)
        ch.omegas[q] = base * (static_cast<double>(q) - shift);
    return ch;
}

double doppler_from_velocity(double v_kmh, double carrier_hz) {
    constexpr double kSpeedOfLight = 3.0e8;
    return (v_kmh / 3.6) * carrier_hz / kSpeedOfLight;
}

CVector apply_fir(const FirChannel& ch, const CVector& s) {
    const std::size_t n = static_cast<std::size_t>(s.size());
    const std::size_t L = ch.length();
    if (L > n) throw DimensionError("apply_fir: channel longer than signal");
    CVector r = CVector::Zero(s.size());
    for (std::size_t c = 0; c < n; ++c) {
        cplx acc(0.0, 0.0);
        for (std::size_t p = 0; p < L; ++p)
            acc += ch.taps(static_cast<Eigen::Index>(p)) *
                   s(static_cast<Eigen::Index>((c + n - p) % n));
        r(static_cast<Eigen::Index>(c)) = acc;
    }
    return r;
}

CVector apply_fir_linear(const FirChannel& ch, const CVector& s) {
    const std::size_t n = static_cast<std::size_t>(s.size());
    const std::size_t L = ch.length();
    if (L > n) throw DimensionError("apply_fir_linear: channel longer than signal");
    CVector r = CVector::Zero(s.size());
    for (std::size_t c = 0; c < n; ++c) {
        cplx acc(0.0, 0.0);
        const std::size_t pmax = std::min(L - 1, c);
        for (std::size_t p = 0; p <= pmax; ++p)
            acc += ch.taps(static_cast<Eigen::Index>(p)) * s(static_cast<Eigen::Index>(c - p));
        r(static_cast<Eigen::Index>(c)) = acc;
    }
    return r;
}

CVector bem_time_response(const BemChannel& ch) {
    const std::size_t mn = ch.dims.mn();
    CVector h = CVector::Zero(static_cast<Eigen::Index>(mn));
    for (std::size_t q = 0; q <= ch.Q; ++q) {
        const double w = ch.omegas[q];
        for (std::size_t c = 0; c < mn; ++c)
            h(static_cast<Eigen::Index>(c)) +=
                ch.coeffs(static_cast<Eigen::Index>(q)) *
                cplx(std::cos(w * static_cast<double>(c)), std::sin(w * static_cast<double>(c)));
    }
    return h;
}

CVector apply_bem(const BemChannel& ch, const CVector& s) {
    if (static_cast<std::size_t>(s.size()) != ch.dims.mn())
        throw DimensionError("apply_bem: signal length != MN");
    return bem_time_response(ch).cwiseProduct(s);
}

CVector fir_spectrum(const FirChannel& ch, std::size_t mn) {
    if (ch.length() > mn) throw DimensionError("fir_spectrum: L > MN");
    CVector padded = CVector::Zero(static_cast<Eigen::Index>(mn));
    padded.head(ch.taps.size()) = ch.taps;
    fft_unitary(padded, false);
    return std::sqrt(static_cast<double>(mn)) * padded;
}

CMatrix effective_matrix_fir(const FirChannel& ch, const OtfsDims& dims) {
    const std::size_t mn = dims.mn();
    if (ch.length() > mn) throw DimensionError("effective_matrix_fir: L > MN");
    const CVector g = fir_spectrum(ch, mn);
    const CMatrix u = kron(dft_matrix_cached(dims.N), CMatrix::Identity(dims.M, dims.M)) *
                      dft_matrix_cached(mn).adjoint();
    return u * g.asDiagonal() * u.adjoint();
}

CMatrix effective_matrix_bem(const BemChannel& ch, const OtfsDims& dims) {
    const std::size_t mn = dims.mn();
    const CVector h = bem_time_response(ch);
    const CMatrix w = kron(dft_matrix_cached(dims.N), CMatrix::Identity(dims.M, dims.M));
    return w * h.asDiagonal() * w.adjoint();
}

}  // namespace otfs
