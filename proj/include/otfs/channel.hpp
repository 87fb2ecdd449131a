#pragma once

#include <vector>

#include "otfs/linalg.hpp"
#include "otfs/modem.hpp"
#include "otfs/rng.hpp"

namespace otfs {

/// Frequency-selective channel: L taps, i.i.d. CN(0, 1/L).
struct FirChannel {
    CVector taps;

    std::size_t length() const { return static_cast<std::size_t>(taps.size()); }
};

/// Time-selective channel in basis-expansion form:
/// h[c] = sum_q coeffs[q] * exp(j*omegas[q]*c).
struct BemChannel {
    std::size_t Q = 0;
    CVector coeffs;              // Q+1 entries, i.i.d. CN(0, 1/(Q+1))
    std::vector<double> omegas;  // (2*pi/MN) * (q - ceil(Q/2))
    double f_max = 0.0;          // Hz
    double fbar_max = 0.0;       // f_max / delta_f
    OtfsDims dims;
};

FirChannel sample_fir(std::size_t L, Rng& rng);

/// BEM order Q = 2*ceil(N*f_max/delta_f); f_max = 0 gives the flat Q = 0 case.
BemChannel sample_bem(const OtfsDims& dims, double f_max, double delta_f, Rng& rng);

/// Doppler frequency in Hz for a user velocity (km/h) at the given carrier.
double doppler_from_velocity(double v_kmh, double carrier_hz);

/// Circular convolution of length s.size().
CVector apply_fir(const FirChannel& ch, const CVector& s);

/// Linear convolution truncated to s.size(); the CP pipeline uses this.
CVector apply_fir_linear(const FirChannel& ch, const CVector& s);

/// Per-sample multiplication by h[c].
CVector apply_bem(const BemChannel& ch, const CVector& s);

/// Time response h[c], c = 0..MN-1.
CVector bem_time_response(const BemChannel& ch);

/// Effective delay-Doppler matrix H with H*xbar == demod(channel(mod(xbar))).
CMatrix effective_matrix_fir(const FirChannel& ch, const OtfsDims& dims);
CMatrix effective_matrix_bem(const BemChannel& ch, const OtfsDims& dims);

/// Channel spectrum g = sqrt(MN) * F_{MN x L} * h, i.e. the unnormalized
/// MN-point DFT of the zero-padded taps. H = U diag(g) U^H with
/// U = (F_N (x) I_M) F_MN^H.
CVector fir_spectrum(const FirChannel& ch, std::size_t mn);

}  // namespace otfs
