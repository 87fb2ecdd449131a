#pragma once

#include "otfs/channel.hpp"
#include "otfs/linalg.hpp"
#include "otfs/modem.hpp"
#include "otfs/precoder.hpp"

namespace otfs {

// FFT-backed applications of the structured matrices used by the link chain.
// Every proposed precoder factors into (F_N (x) I_M), F_MN and a diagonal
// twiddle, so V, V^H and the LMMSE solve all run in O(MN log MN) without
// materializing MN x MN matrices. The dense constructions in precoder.cpp,
// channel.cpp and detector.cpp are the serial reference implementations;
// tests pin these paths against them.

/// (F_N (x) I_M) * z; identical to otfs_demodulate.
CVector apply_w(const CVector& z, const OtfsDims& dims);

/// (F_N^H (x) I_M) * z; identical to otfs_modulate.
CVector apply_wh(const CVector& z, const OtfsDims& dims);

/// Diagonal twiddle with Theta = F_MN^H * diag(t): t_m = exp(j*2*pi*(1-a)*m/MN)
/// where a is the node-family offset (3/4, 1/6 or 5/6).
CVector theta_twiddle(std::size_t mn);

/// Theta * z without the dense matrix.
CVector theta_apply(const CVector& z, std::size_t mn);

/// Theta^H * z.
CVector theta_apply_adjoint(const CVector& z, std::size_t mn);

/// V * x for any supported precoder kind.
CVector precode_fast(PrecoderKind kind, double phase_theta, const CVector& x,
                     const OtfsDims& dims);

/// V^H * y.
CVector precode_adjoint_fast(PrecoderKind kind, double phase_theta, const CVector& y,
                             const OtfsDims& dims);

/// LMMSE soft estimate for a FIR channel and a unitary precoder:
/// H = U diag(g) U^H with U = (F_N (x) I_M) F_MN^H and g the channel spectrum.
CVector lmmse_soft_fir(const CVector& y, const FirChannel& ch, PrecoderKind kind,
                       double phase_theta, const OtfsDims& dims, double noise_var);

/// Same for a BEM channel: H = (F_N (x) I_M) diag(h[c]) (F_N^H (x) I_M).
CVector lmmse_soft_bem(const CVector& y, const BemChannel& ch, PrecoderKind kind,
                       double phase_theta, const OtfsDims& dims, double noise_var);

}  // namespace otfs
