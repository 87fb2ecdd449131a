#include "otfs/linalg.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace otfs {

CMatrix dft_matrix(std::size_t n) {
    if (n == 0) throw DimensionError("dft_matrix: n must be >= 1");
    CMatrix f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            // reduce k*l mod n before the trig call to keep large n accurate
            const double phase = w * static_cast<double>((k * l) % n);
            f(k, l) = scale * cplx(std::cos(phase), std::sin(phase));
        }
    }
    return f;
}

const CMatrix& dft_matrix_cached(std::size_t n) {
    static std::mutex m;
    static std::map<std::size_t, CMatrix> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, dft_matrix(n)).first;
    return it->second;
}

CMatrix dft_submatrix(std::size_t n, std::size_t l) {
    if (l == 0 || l > n) throw DimensionError("dft_submatrix: need 1 <= l <= n");
    return dft_matrix(n).leftCols(static_cast<Eigen::Index>(l));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    const std::size_t rows = static_cast<std::size_t>(a.rows()) * b.rows();
    const std::size_t cols = static_cast<std::size_t>(a.cols()) * b.cols();
    if (a.rows() > 0 && rows / a.rows() != static_cast<std::size_t>(b.rows()))
        throw DimensionError("kron: dimension product overflow");
    CMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector vec(const CMatrix& x) {
    return Eigen::Map<const CVector>(x.data(), x.size());
}

CMatrix invec(const CVector& v, std::size_t rows) {
    if (rows == 0 || static_cast<std::size_t>(v.size()) % rows != 0)
        throw DimensionError("invec: length not divisible by row count");
    return Eigen::Map<const CMatrix>(v.data(), rows, v.size() / static_cast<Eigen::Index>(rows));
}

std::size_t numerical_rank(const CMatrix& a, double rel_tol) {
    if (rel_tol <= 0) throw ParameterError("numerical_rank: rel_tol must be > 0");
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double thresh = rel_tol * sv(0);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++r;
    return r;
}

EigH eig_hermitian(const CMatrix& a) {
    if (a.rows() != a.cols()) throw ContractViolationError("eig_hermitian: matrix not square");
    const double scale = a.cwiseAbs().maxCoeff();
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (scale > 0 && dev > 1e-10 * scale)
        throw ContractViolationError("eig_hermitian: input not Hermitian within tolerance");

    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    const Eigen::Index n = a.rows();
    // SelfAdjointEigenSolver returns ascending order; flip to descending.
    EigH out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues(i) = es.eigenvalues()(n - 1 - i);
        out.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
    static std::map<std::size_t, PlanPair> cache;
    return cache;
}

PlanPair get_plans(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> buf(n);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.inv = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[n] = pp;
    return pp;
}

}  // namespace

void fft_unitary(CVector& v, bool inverse) {
    const std::size_t n = static_cast<std::size_t>(v.size());
    if (n == 0) throw DimensionError("fft_unitary: empty vector");
    if (n == 1) return;
    PlanPair pp = get_plans(n);
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(inverse ? pp.inv : pp.fwd, p, p);
    v *= 1.0 / std::sqrt(static_cast<double>(n));
}

void ensure_finite(const CMatrix& a, const char* what) {
    if (!a.allFinite()) throw DimensionError(std::string(what) + ": non-finite entries");
}

void ensure_finite(const CVector& v, const char* what) {
    if (!v.allFinite()) throw DimensionError(std::string(what) + ": non-finite entries");
}

}  // namespace otfs
