#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "otfs/errors.hpp"

namespace otfs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Unitary n-point DFT matrix: F(k,l) = exp(-j*2*pi*k*l/n)/sqrt(n).
CMatrix dft_matrix(std::size_t n);

/// Shared immutable copy of dft_matrix(n); built once per size.
const CMatrix& dft_matrix_cached(std::size_t n);

/// First l columns of dft_matrix(n).
CMatrix dft_submatrix(std::size_t n, std::size_t l);

/// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Column-major stacking of a matrix into a vector.
CVector vec(const CMatrix& x);

/// Inverse of vec: reshape v into a matrix with the given row count.
CMatrix invec(const CVector& v, std::size_t rows);

/// Count of singular values above rel_tol * sigma_max. Zero matrix -> 0.
std::size_t numerical_rank(const CMatrix& a, double rel_tol = 1e-10);

struct EigH {
    RVector eigenvalues;   // real, sorted descending
    CMatrix eigenvectors;  // columns match eigenvalue order
};

/// Eigen-decomposition of a Hermitian matrix. Throws ContractViolationError
/// when the input deviates from Hermitian symmetry by more than 1e-10
/// relative to its largest entry.
EigH eig_hermitian(const CMatrix& a);

/// In-place unitary FFT (1/sqrt(n) scaling both directions), FFTW-backed.
void fft_unitary(CVector& v, bool inverse);

/// Throws DimensionError if any entry is non-finite.
void ensure_finite(const CMatrix& a, const char* what);
void ensure_finite(const CVector& v, const char* what);

}  // namespace otfs
