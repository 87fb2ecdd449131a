#include "otfs/precoder.hpp"

#include <cmath>
#include <numbers>

namespace otfs {

std::string to_string(PrecoderKind k) {
    switch (k) {
        case PrecoderKind::ProposedFreqSel: return "proposed-freqsel";
        case PrecoderKind::ProposedTimeSel: return "proposed-timesel";
        case PrecoderKind::Identity: return "identity";
        case PrecoderKind::PhaseRotation: return "phase-rotation";
    }
    return "?";
}

namespace {

// Factor mn = 2^d * 3^t * rem and pick the node family. The families are
// tried in order: 2^d, then 3*2^d, then 2^d*3^t.
enum class NodeFamily { PowerOfTwo, ThreeTimesPow2, Pow2TimesPow3 };

NodeFamily classify(std::size_t mn) {
    std::size_t rem = mn, d = 0, t = 0;
    while (rem % 2 == 0) { rem /= 2; ++d; }
    while (rem % 3 == 0) { rem /= 3; ++t; }
    const char* msg =
        "unsupported MN: supported classes are 2^d (d>=1), 3*2^d (d>=0), "
        "2^d*3^t (d>=1, t>=1)";
    if (rem != 1) throw UnsupportedDimensionError(msg);
    if (t == 0 && d >= 1) return NodeFamily::PowerOfTwo;
    if (t == 1) return NodeFamily::ThreeTimesPow2;
    if (t >= 2 && d >= 1) return NodeFamily::Pow2TimesPow3;
    throw UnsupportedDimensionError(msg);  // mn = 3^t with t >= 2
}

}  // namespace

std::vector<cplx> vandermonde_nodes(std::size_t mn) {
    if (mn == 0) throw DimensionError("vandermonde_nodes: mn must be >= 1");
    if (mn == 1) return {cplx(1.0, 0.0)};
    const NodeFamily fam = classify(mn);
    std::vector<cplx> alpha(mn);
    const double pi = std::numbers::pi;
    for (std::size_t k = 1; k <= mn; ++k) {
        double phase = 0.0;
        switch (fam) {
            case NodeFamily::PowerOfTwo:
                phase = (4.0 * k - 3.0) * pi / (2.0 * mn);
                break;
            case NodeFamily::ThreeTimesPow2:
                phase = (6.0 * k - 1.0) * pi / (3.0 * mn);
                break;
            case NodeFamily::Pow2TimesPow3:
                phase = (6.0 * k - 5.0) * pi / (3.0 * mn);
                break;
        }
        alpha[k - 1] = cplx(std::cos(phase), std::sin(phase));
    }
    return alpha;
}

VandermondeTheta vandermonde_theta(std::size_t mn) {
    const std::vector<cplx> alpha = vandermonde_nodes(mn);
    const double xi = std::sqrt(static_cast<double>(mn));
    CMatrix theta(mn, mn);
    for (std::size_t k = 0; k < mn; ++k) {
        cplx pow(1.0, 0.0);
        for (std::size_t m = 0; m < mn; ++m) {
            theta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = pow / xi;
            pow *= alpha[k];
        }
    }
    return {std::move(theta), xi};
}

Precoder precoder_frequency_selective(const OtfsDims& dims) {
    const std::size_t mn = dims.mn();
    VandermondeTheta vt = vandermonde_theta(mn);
    Precoder p;
    p.kind = PrecoderKind::ProposedFreqSel;
    p.dims = dims;
    p.xi = vt.xi;
    const CMatrix u = kron(dft_matrix_cached(dims.N), CMatrix::Identity(dims.M, dims.M)) *
                      dft_matrix_cached(mn).adjoint();
    p.V = u * vt.theta;
    p.theta = std::move(vt.theta);
    return p;
}

Precoder precoder_time_selective(const OtfsDims& dims) {
    const std::size_t mn = dims.mn();
    VandermondeTheta vt = vandermonde_theta(mn);
    Precoder p;
    p.kind = PrecoderKind::ProposedTimeSel;
    p.dims = dims;
    p.xi = vt.xi;
    p.V = kron(dft_matrix_cached(dims.N), CMatrix::Identity(dims.M, dims.M)) * vt.theta;
    p.theta = std::move(vt.theta);
    return p;
}

Precoder precoder_identity(const OtfsDims& dims) {
    Precoder p;
    p.kind = PrecoderKind::Identity;
    p.dims = dims;
    p.V = CMatrix::Identity(dims.mn(), dims.mn());
    return p;
}

Precoder precoder_phase_rotation(const OtfsDims& dims, double theta_step) {
    Precoder p;
    p.kind = PrecoderKind::PhaseRotation;
    p.dims = dims;
    const std::size_t mn = dims.mn();
    p.V = CMatrix::Zero(mn, mn);
    for (std::size_t i = 0; i < mn; ++i) {
        const double ph = theta_step * static_cast<double>(i);
        p.V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            cplx(std::cos(ph), std::sin(ph));
    }
    return p;
}

double default_phase_step(const OtfsDims& dims) {
    return std::numbers::pi / (2.0 * static_cast<double>(dims.mn()));
}

CVector precode(const Precoder& p, const CVector& x) {
    if (x.size() != p.V.cols()) throw DimensionError("precode: x length != MN");
    return p.V * x;
}

}  // namespace otfs
