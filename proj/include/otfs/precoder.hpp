#pragma once

#include <optional>
#include <string>

#include "otfs/linalg.hpp"
#include "otfs/modem.hpp"

namespace otfs {

enum class PrecoderKind { ProposedFreqSel, ProposedTimeSel, Identity, PhaseRotation };

std::string to_string(PrecoderKind k);

struct Precoder {
    PrecoderKind kind;
    CMatrix V;                    // MN x MN
    std::optional<CMatrix> theta; // Vandermonde generator, proposed kinds only
    double xi = 1.0;
    OtfsDims dims;
};

struct VandermondeTheta {
    CMatrix theta;
    double xi;
};

/// Unit-modulus Vandermonde nodes alpha_k, k = 1..mn. Supported dimension
/// classes: 2^d (d>=1), 3*2^d (d>=0), 2^d*3^t (d>=1, t>=1); mn = 1 is the
/// trivial scalar case. Anything else throws UnsupportedDimensionError.
std::vector<cplx> vandermonde_nodes(std::size_t mn);

/// Theta with row k = (1/xi)*[1, alpha_k, ..., alpha_k^{mn-1}], xi = sqrt(mn).
/// Theta is unitary for every supported mn.
VandermondeTheta vandermonde_theta(std::size_t mn);

/// V = (F_N (x) I_M) * F_MN^H * Theta; full diversity in FIR channels.
Precoder precoder_frequency_selective(const OtfsDims& dims);

/// V = (F_N (x) I_M) * Theta; full diversity in BEM channels.
Precoder precoder_time_selective(const OtfsDims& dims);

Precoder precoder_identity(const OtfsDims& dims);

/// V = diag(1, e^{j*theta}, ..., e^{j*(MN-1)*theta}); baseline comparator.
Precoder precoder_phase_rotation(const OtfsDims& dims, double theta_step);

/// Default phase step for the rotation baseline: pi/(2*MN).
double default_phase_step(const OtfsDims& dims);

/// xbar = V * x.
CVector precode(const Precoder& p, const CVector& x);

}  // namespace otfs
