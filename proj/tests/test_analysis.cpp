#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "otfs/analysis.hpp"
#include "otfs/channel.hpp"
#include "otfs/rng.hpp"

using namespace otfs;
using std::numbers::pi;

namespace {

CMatrix random_unitary(std::size_t n, std::uint64_t seed) {
    Rng g(seed);
    CMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) a.col(j) = complex_gaussian_vector(g, n, 1.0);
    Eigen::HouseholderQR<CMatrix> qr(a);
    return qr.householderQ() * CMatrix::Identity(n, n);
}

}  // namespace

TEST_CASE("phi_freq against the effective-matrix oracle") {
    const OtfsDims d{2, 2};
    const Precoder p = precoder_frequency_selective(d);
    Rng g(1);
    const CVector x = complex_gaussian_vector(g, 4, 1.0);

    // flat single-tap channel: Phi(x) * [1] = V x
    const CMatrix phi1 = phi_freq(x, p.V, d, 1);
    CVector one(1);
    one << cplx(1.0, 0.0);
    CHECK((phi1 * one - p.V * x).cwiseAbs().maxCoeff() <= 1e-10);

    const CMatrix phi2 = phi_freq(x, p.V, d, 2);
    for (int t = 0; t < 20; ++t) {
        const FirChannel ch{complex_gaussian_vector(g, 2, 0.5)};
        const CVector want = effective_matrix_fir(ch, d) * (p.V * x);
        CHECK((phi2 * ch.taps - want).cwiseAbs().maxCoeff() <= 1e-9);
    }

    CHECK(phi_freq(CVector::Zero(4), p.V, d, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phi_time against the effective-matrix oracle") {
    const OtfsDims d{2, 2};
    const Precoder p = precoder_time_selective(d);
    Rng g(2);
    const CVector x = complex_gaussian_vector(g, 4, 1.0);

    const TimeSelScenario flat = time_sel_scenario(0, d);
    const CMatrix phi0 = phi_time(x, p.V, d, flat.omegas);
    CHECK(phi0.cols() == 1);
    CVector c0(1);
    c0 << cplx(0.3, -1.1);
    CHECK((phi0 * c0 - c0(0) * (p.V * x)).cwiseAbs().maxCoeff() <= 1e-10);

    const TimeSelScenario sc = time_sel_scenario(2, d);
    const CMatrix phi2 = phi_time(x, p.V, d, sc.omegas);
    for (int t = 0; t < 20; ++t) {
        BemChannel ch;
        ch.Q = 2;
        ch.omegas = sc.omegas;
        ch.dims = d;
        ch.coeffs = complex_gaussian_vector(g, 3, 1.0 / 3.0);
        const CVector want = effective_matrix_bem(ch, d) * (p.V * x);
        CHECK((phi2 * ch.coeffs - want).cwiseAbs().maxCoeff() <= 1e-9);
    }

    CHECK(phi_time(CVector::Zero(4), p.V, d, sc.omegas).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phi linearity") {
    const OtfsDims d{2, 2};
    Rng g(3);
    const Precoder pf = precoder_frequency_selective(d);
    const TimeSelScenario sc = time_sel_scenario(2, d);
    const Precoder pt = precoder_time_selective(d);
    for (int t = 0; t < 10; ++t) {
        const CVector x = complex_gaussian_vector(g, 4, 1.0);
        const CVector xh = complex_gaussian_vector(g, 4, 1.0);
        const CMatrix df = phi_freq(x, pf.V, d, 3) - phi_freq(xh, pf.V, d, 3) -
                           phi_freq(CVector(x - xh), pf.V, d, 3);
        CHECK(df.cwiseAbs().maxCoeff() <= 1e-12);
        const CMatrix dt = phi_time(x, pt.V, d, sc.omegas) - phi_time(xh, pt.V, d, sc.omegas) -
                           phi_time(CVector(x - xh), pt.V, d, sc.omegas);
        CHECK(dt.cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("build_b") {
    const CMatrix b0 = build_b(3, {0.0});
    for (int i = 0; i < 3; ++i) CHECK(std::abs(b0(i, 0) - cplx(1.0, 0.0)) <= 1e-15);

    const CMatrix b = build_b(4, {-pi / 2, 0.0, pi / 2});
    CHECK(numerical_rank(b) == 3);

    CHECK_THROWS_AS(build_b(4, {0.0, 0.0}), ParameterError);
    CHECK_THROWS_AS(build_b(4, {0.0, 2 * pi}), ParameterError);
}

TEST_CASE("pairwise_report small cases") {
    const OtfsDims d21{2, 1};
    const Alphabet b = Alphabet::bpsk();

    // single-tap channel: Phi has one column, rank 1
    {
        const Precoder p = precoder_frequency_selective(d21);
        CVector e(2);
        e << cplx(2.0), cplx(0.0);
        const auto rep = pairwise_report(e, FreqSelScenario{1}, p.V, d21);
        CHECK(rep.rank == 1);
        CHECK(rep.eigenvalues.size() == 1);
    }

    // unprecoded, L=2: the all-twos difference has a vanishing DFT bin
    {
        const Precoder id = precoder_identity(d21);
        CVector e(2);
        e << cplx(2.0), cplx(2.0);
        const auto rep = pairwise_report(e, FreqSelScenario{2}, id.V, d21);
        CHECK(rep.rank == 1);
        CHECK(rep.det_c == 0.0);

        const Precoder p = precoder_frequency_selective(d21);
        const auto rep2 = pairwise_report(e, FreqSelScenario{2}, p.V, d21);
        CHECK(rep2.rank == 2);
        CHECK(rep2.det_c > 0.0);
    }

    CHECK_THROWS_AS(
        pairwise_report(CVector::Zero(2), FreqSelScenario{1}, precoder_identity(d21).V, d21),
        ParameterError);
    (void)b;
}

TEST_CASE("pairwise rank/eigenvalues from an independent SVD oracle") {
    const OtfsDims d{2, 2};
    const Precoder p = precoder_frequency_selective(d);
    Rng g(5);
    for (int t = 0; t < 10; ++t) {
        const CVector e = complex_gaussian_vector(g, 4, 1.0);
        const auto rep = pairwise_report(e, FreqSelScenario{3}, p.V, d);
        const CMatrix phi = phi_freq(e, p.V, d, 3);
        Eigen::JacobiSVD<CMatrix> svd(phi);
        std::size_t r = 0;
        const double smax = svd.singularValues()(0);
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-10 * smax) ++r;
        CHECK(rep.rank == r);
        REQUIRE(rep.eigenvalues.size() == r);
        for (std::size_t i = 0; i < r; ++i) {
            const double sv2 = svd.singularValues()(static_cast<int>(i));
            CHECK(rep.eigenvalues[i] == doctest::Approx(sv2 * sv2).epsilon(1e-8));
        }
    }
}

TEST_CASE("rank and eigenvalues invariant under left-unitary multiplication") {
    const OtfsDims d{2, 2};
    Rng g(6);
    const Precoder p = precoder_frequency_selective(d);
    const CVector e = complex_gaussian_vector(g, 4, 1.0);
    const CMatrix phi = phi_freq(e, p.V, d, 2);
    const CMatrix q = random_unitary(4, 7);
    Eigen::JacobiSVD<CMatrix> s1(phi), s2(CMatrix(q * phi));
    CHECK(numerical_rank(phi) == numerical_rank(CMatrix(q * phi)));
    for (int i = 0; i < s1.singularValues().size(); ++i)
        CHECK(std::abs(s1.singularValues()(i) - s2.singularValues()(i)) <= 1e-10);
}

TEST_CASE("alphabet_differences") {
    const auto db = alphabet_differences(Alphabet::bpsk());
    REQUIRE(db.size() == 3);
    CHECK(db[0] == cplx(0.0, 0.0));

    const auto dq = alphabet_differences(Alphabet::qpsk());
    REQUIRE(dq.size() == 9);
    CHECK(dq[0] == cplx(0.0, 0.0));
}

TEST_CASE("full-diversity certificate, frequency-selective") {
    const OtfsDims d{2, 2};
    const Precoder p = precoder_frequency_selective(d);
    const Alphabet q = Alphabet::qpsk();
    for (std::size_t L : {1u, 2u, 3u, 4u}) {
        const auto rep = diversity_gain(FreqSelScenario{L}, p, q, std::uint64_t{1} << 20);
        CHECK(rep.exhaustive);
        CHECK(rep.pairs_examined == 6560);
        CHECK(rep.g_d == L);
        CHECK(rep.full_diversity);
        CHECK(rep.g_c > 0.0);
    }
}

TEST_CASE("full-diversity certificate, time-selective, and identity deficiency") {
    const OtfsDims d{2, 2};
    const Alphabet q = Alphabet::qpsk();
    const auto sc = AnalysisScenario{time_sel_scenario(2, d)};

    const auto rep = diversity_gain(sc, precoder_time_selective(d), q, std::uint64_t{1} << 20);
    CHECK(rep.exhaustive);
    CHECK(rep.g_d == 3);

    const auto rid = diversity_gain(sc, precoder_identity(d), q, std::uint64_t{1} << 20);
    CHECK(rid.g_d <= 2);
    CHECK_FALSE(rid.full_diversity);
    CHECK(rid.worst_pairs.size() >= 1);
}

TEST_CASE("single-tap scenario pins diversity to one") {
    const OtfsDims d{2, 2};
    const Alphabet b = Alphabet::bpsk();
    for (const Precoder& p : {precoder_identity(d), precoder_frequency_selective(d),
                              precoder_phase_rotation(d, default_phase_step(d))}) {
        const auto rep = diversity_gain(FreqSelScenario{1}, p, b, std::uint64_t{1} << 20);
        CHECK(rep.g_d == 1);
    }
}

TEST_CASE("diversity ceiling") {
    const OtfsDims d{2, 1};
    const Precoder p = precoder_frequency_selective(d);
    const auto rep = diversity_gain(FreqSelScenario{2}, p, Alphabet::bpsk(), 1u << 20);
    CHECK(rep.g_d <= std::min<std::size_t>(d.mn(), 2));
    CHECK(rep.max_diversity == 2);
}

TEST_CASE("sampling fallback is labeled and deterministic") {
    const OtfsDims d{4, 2};
    const Precoder p = precoder_frequency_selective(d);
    const auto r1 = diversity_gain(FreqSelScenario{2}, p, Alphabet::qpsk(), 2000);
    CHECK_FALSE(r1.exhaustive);
    CHECK(r1.pairs_examined == 2000);
    const auto r2 = diversity_gain(FreqSelScenario{2}, p, Alphabet::qpsk(), 2000);
    CHECK(r1.g_d == r2.g_d);
    CHECK(r1.g_c == r2.g_c);
}

TEST_CASE("parallel and serial scans agree") {
    const OtfsDims d{2, 2};
    const Precoder p = precoder_frequency_selective(d);
    const auto a = diversity_gain(FreqSelScenario{2}, p, Alphabet::qpsk(), 1u << 20, 1e-10, true);
    const auto b = diversity_gain(FreqSelScenario{2}, p, Alphabet::qpsk(), 1u << 20, 1e-10, false);
    CHECK(a.g_d == b.g_d);
    CHECK(a.g_c == doctest::Approx(b.g_c).epsilon(1e-12));
    CHECK(a.worst_pairs.size() == b.worst_pairs.size());
    for (std::size_t i = 0; i < a.worst_pairs.size(); ++i)
        CHECK((a.worst_pairs[i] - b.worst_pairs[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coding gain") {
    const OtfsDims d21{2, 1};
    const Precoder p = precoder_frequency_selective(d21);
    const Alphabet b = Alphabet::bpsk();

    // scalar case: lambda_1 = ||Theta e||^2, minimized over BPSK differences
    const auto rep = diversity_gain(FreqSelScenario{1}, p, b, 1u << 20);
    double want = 1e300;
    const auto diffs = alphabet_differences(b);
    for (std::size_t i = 0; i < diffs.size(); ++i)
        for (std::size_t j = 0; j < diffs.size(); ++j) {
            if (i == 0 && j == 0) continue;
            CVector e(2);
            e << diffs[i], diffs[j];
            want = std::min(want, (p.theta.value() * e).squaredNorm());
        }
    CHECK(coding_gain(rep) == doctest::Approx(want).epsilon(1e-10));

    // homogeneity: e -> 2e scales every eigenvalue by 4
    Rng g(8);
    const CVector e = complex_gaussian_vector(g, 2, 1.0);
    const auto r1 = pairwise_report(e, FreqSelScenario{2}, p.V, d21);
    const auto r2 = pairwise_report(CVector(2.0 * e), FreqSelScenario{2}, p.V, d21);
    REQUIRE(r1.eigenvalues.size() == r2.eigenvalues.size());
    for (std::size_t i = 0; i < r1.eigenvalues.size(); ++i)
        CHECK(r2.eigenvalues[i] == doctest::Approx(4.0 * r1.eigenvalues[i]).epsilon(1e-9));

    const auto rfull = diversity_gain(FreqSelScenario{2}, precoder_frequency_selective({2, 2}),
                                      Alphabet::qpsk(), 1u << 20);
    CHECK(coding_gain(rfull) > 0.0);
    CHECK(rfull.g_c_normalized > 0.0);
}

TEST_CASE("pep_bound") {
    CHECK(pep_bound({1.0, 2.0}, 0.0, 2) == doctest::Approx(0.5));
    // single eigenvalue 4d cancels the 1/(4d) factor
    for (std::size_t dd : {1u, 3u}) {
        const double rho = 31.7;
        CHECK(pep_bound({4.0 * dd}, rho, dd) == doctest::Approx(0.5 / (1.0 + rho)));
    }

    double prev = 0.5;
    for (double snr_db = 0; snr_db <= 30; snr_db += 2) {
        const double v = pep_bound({0.8, 1.7}, std::pow(10.0, snr_db / 10.0) - 1.0, 2);
        CHECK(v <= prev + 1e-15);
        CHECK(v > 0.0);
        prev = v;
    }

    CHECK_THROWS_AS(pep_bound({1.0}, -1.0, 1), ParameterError);
    CHECK_THROWS_AS(pep_bound({-1.0}, 1.0, 1), ParameterError);
}

TEST_CASE("scenario_order") {
    CHECK(scenario_order(AnalysisScenario{FreqSelScenario{3}}) == 3);
    CHECK(scenario_order(AnalysisScenario{time_sel_scenario(2, {2, 2})}) == 3);
}
