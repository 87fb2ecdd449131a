#include "otfs/selfcheck.hpp"

#include <vector>

#include "otfs/channel.hpp"
#include "otfs/modem.hpp"
#include "otfs/precoder.hpp"
#include "otfs/rng.hpp"

namespace otfs {

namespace {

bool report(std::ostream& os, const char* name, bool ok) {
    os << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    return ok;
}

bool check_dft_unitarity() {
    for (std::size_t n = 1; n <= 32; ++n) {
        const CMatrix f = dft_matrix(n);
        if ((f.adjoint() * f - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12)
            return false;
    }
    return true;
}

bool check_modem_roundtrip() {
    Rng rng(42);
    for (std::size_t m = 1; m <= 8; ++m)
        for (std::size_t n = 1; n <= 8; ++n) {
            const OtfsDims dims{m, n};
            const CVector x = complex_gaussian_vector(rng, dims.mn(), 1.0);
            const CVector back = otfs_demodulate(otfs_modulate(x, dims), dims);
            if ((back - x).cwiseAbs().maxCoeff() > 1e-12) return false;
        }
    return true;
}

bool check_theta_unitarity() {
    for (std::size_t mn : {2ul, 3ul, 4ul, 6ul, 8ul, 12ul, 16ul, 18ul, 24ul, 32ul, 36ul,
                           48ul, 64ul}) {
        const auto [theta, xi] = vandermonde_theta(mn);
        if ((theta.adjoint() * theta - CMatrix::Identity(mn, mn)).cwiseAbs().maxCoeff() >
            1e-10)
            return false;
        (void)xi;
    }
    return true;
}

bool check_precoder_power() {
    for (const OtfsDims dims : {OtfsDims{2, 2}, OtfsDims{4, 2}, OtfsDims{2, 4}}) {
        for (const Precoder& p :
             {precoder_frequency_selective(dims), precoder_time_selective(dims)}) {
            const double mn = static_cast<double>(dims.mn());
            if (std::abs((p.V * p.V.adjoint()).trace().real() - mn) > 1e-9) return false;
            if ((p.V.adjoint() * p.V - CMatrix::Identity(dims.mn(), dims.mn()))
                    .cwiseAbs()
                    .maxCoeff() > 1e-10)
                return false;
        }
    }
    return true;
}

bool check_fir_oracle() {
    Rng rng(7);
    for (const OtfsDims dims : {OtfsDims{2, 2}, OtfsDims{4, 2}, OtfsDims{2, 4}}) {
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t L = 1 + rng() % dims.mn();
            const FirChannel ch = sample_fir(L, rng);
            const CVector x = complex_gaussian_vector(rng, dims.mn(), 1.0);
            const CVector via_matrix = effective_matrix_fir(ch, dims) * x;
            const CVector via_pipeline =
                otfs_demodulate(apply_fir(ch, otfs_modulate(x, dims)), dims);
            if ((via_matrix - via_pipeline).norm() > 1e-9) return false;
        }
    }
    return true;
}

bool check_bem_oracle() {
    Rng rng(9);
    for (const OtfsDims dims : {OtfsDims{2, 2}, OtfsDims{4, 2}, OtfsDims{2, 4}}) {
        for (int rep = 0; rep < 10; ++rep) {
            const BemChannel ch = sample_bem(dims, 1851.85, 15e3, rng);
            const CVector x = complex_gaussian_vector(rng, dims.mn(), 1.0);
            const CVector via_matrix = effective_matrix_bem(ch, dims) * x;
            const CVector via_pipeline =
                otfs_demodulate(apply_bem(ch, otfs_modulate(x, dims)), dims);
            if ((via_matrix - via_pipeline).norm() > 1e-9) return false;
        }
    }
    return true;
}

bool check_cp_roundtrip() {
    Rng rng(11);
    const CVector s = complex_gaussian_vector(rng, 16, 1.0);
    for (std::size_t lcp = 0; lcp < 8; ++lcp)
        if ((remove_cp(add_cp(s, lcp), lcp) - s).cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
}

}  // namespace

bool run_selfcheck(std::ostream& os) {
    bool ok = true;
    ok &= report(os, "dft unitarity (n = 1..32)", check_dft_unitarity());
    ok &= report(os, "modem round trip (M,N = 1..8)", check_modem_roundtrip());
    ok &= report(os, "cyclic prefix round trip", check_cp_roundtrip());
    ok &= report(os, "vandermonde theta unitarity (supported MN <= 64)",
                 check_theta_unitarity());
    ok &= report(os, "precoder power constraint and unitarity", check_precoder_power());
    ok &= report(os, "FIR effective-matrix oracle equivalence", check_fir_oracle());
    ok &= report(os, "BEM effective-matrix oracle equivalence", check_bem_oracle());
    os << (ok ? "selfcheck: all properties passed\n" : "selfcheck: FAILURES present\n");
    return ok;
}

}  // namespace otfs
