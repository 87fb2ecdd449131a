#include "otfs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "otfs/rng.hpp"

namespace otfs {

TimeSelScenario time_sel_scenario(std::size_t Q, const OtfsDims& dims) {
    TimeSelScenario sc;
    sc.Q = Q;
    sc.omegas.resize(Q + 1);
    const double base = 2.0 * std::numbers::pi / static_cast<double>(dims.mn());
    const double shift = std::ceil(static_cast<double>(Q) / 2.0);
    for (std::size_t q = 0; q <= Q; ++q)
        sc.omegas[q] = base * (static_cast<double>(q) - shift);
    return sc;
}

std::size_t scenario_order(const AnalysisScenario& sc) {
    if (const auto* f = std::get_if<FreqSelScenario>(&sc)) return f->L;
    return std::get<TimeSelScenario>(sc).Q + 1;
}

namespace {

CMatrix kron_fn_im(const OtfsDims& dims) {
    return kron(dft_matrix_cached(dims.N), CMatrix::Identity(dims.M, dims.M));
}

}  // namespace

CMatrix phi_freq(const CVector& x, const CMatrix& V, const OtfsDims& dims, std::size_t L) {
    const std::size_t mn = dims.mn();
    if (L == 0 || L > mn) throw DimensionError("phi_freq: need 1 <= L <= MN");
    if (static_cast<std::size_t>(x.size()) != mn) throw DimensionError("phi_freq: x length != MN");
    const CMatrix w = kron_fn_im(dims);
    const CMatrix& f = dft_matrix_cached(mn);
    const CVector u = f * (w.adjoint() * (V * x));
    const CMatrix fl =
        std::sqrt(static_cast<double>(mn)) * f.leftCols(static_cast<Eigen::Index>(L));
    return w * (f.adjoint() * (u.asDiagonal() * fl));
}

CMatrix build_b(std::size_t mn, const std::vector<double>& omegas) {
    if (omegas.empty()) throw DimensionError("build_b: need at least one frequency");
    for (std::size_t a = 0; a < omegas.size(); ++a)
        for (std::size_t b = a + 1; b < omegas.size(); ++b) {
            const cplx za(std::cos(omegas[a]), std::sin(omegas[a]));
            const cplx zb(std::cos(omegas[b]), std::sin(omegas[b]));
            if (std::abs(za - zb) < 1e-12)
                throw ParameterError("build_b: duplicate modeling frequency (mod 2*pi)");
        }
    CMatrix b(mn, omegas.size());
    for (std::size_t q = 0; q < omegas.size(); ++q)
        for (std::size_t c = 0; c < mn; ++c) {
            const double ph = omegas[q] * static_cast<double>(c);
            b(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(q)) =
                cplx(std::cos(ph), std::sin(ph));
        }
    return b;
}

CMatrix phi_time(const CVector& x, const CMatrix& V, const OtfsDims& dims,
                 const std::vector<double>& omegas) {
    const std::size_t mn = dims.mn();
    if (static_cast<std::size_t>(x.size()) != mn) throw DimensionError("phi_time: x length != MN");
    const CMatrix w = kron_fn_im(dims);
    const CVector u = w.adjoint() * (V * x);
    return w * (u.asDiagonal() * build_b(mn, omegas));
}

namespace {

CMatrix phi_of(const CVector& e, const AnalysisScenario& sc, const CMatrix& V,
               const OtfsDims& dims) {
    if (const auto* f = std::get_if<FreqSelScenario>(&sc)) return phi_freq(e, V, dims, f->L);
    const auto& t = std::get<TimeSelScenario>(sc);
    return phi_time(e, V, dims, t.omegas);
}

PairwiseReport report_from_phi(const CVector& e, const CMatrix& phi, double rank_tol) {
    PairwiseReport rep;
    rep.e = e;
    const CMatrix c = phi.adjoint() * phi;
    EigH eh = eig_hermitian(c);
    const std::size_t d = static_cast<std::size_t>(c.rows());
    const double top = eh.eigenvalues.size() ? std::max(eh.eigenvalues(0), 0.0) : 0.0;
    // rank threshold on eigenvalues of C = squared singular-value threshold
    const double thresh = rank_tol * rank_tol * top;
    for (Eigen::Index i = 0; i < eh.eigenvalues.size(); ++i) {
        if (top > 0 && eh.eigenvalues(i) > thresh) {
            rep.eigenvalues.push_back(eh.eigenvalues(i));
            ++rep.rank;
        }
    }
    if (rep.rank == d) {
        double det = 1.0;
        for (double lam : rep.eigenvalues) det *= lam;
        rep.det_c = det;
    }
    return rep;
}

}  // namespace

PairwiseReport pairwise_report(const CVector& e, const AnalysisScenario& sc,
                               const CMatrix& V, const OtfsDims& dims, double rank_tol) {
    if (e.squaredNorm() == 0.0) throw ParameterError("pairwise_report: e must be nonzero");
    return report_from_phi(e, phi_of(e, sc, V, dims), rank_tol);
}

std::vector<cplx> alphabet_differences(const Alphabet& a) {
    std::vector<cplx> out;
    out.push_back(cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            const cplx d = a.points[i] - a.points[j];
            bool seen = false;
            for (const cplx& x : out)
                if (std::abs(x - d) < 1e-12) {
                    seen = true;
                    break;
                }
            if (!seen) out.push_back(d);
        }
    return out;
}

namespace {

struct ScanPartial {
    std::size_t min_rank = SIZE_MAX;
    double min_gc = 0.0;
    double min_gc_norm = 0.0;
    bool any_rank_deficient = false;
    std::vector<std::pair<std::uint64_t, CVector>> worst;
};

void scan_accumulate(ScanPartial& acc, std::uint64_t t, const CVector& e,
                     const PairwiseReport& rep, std::size_t d) {
    double gm = 0.0;
    if (rep.rank > 0) {
        double prod = 1.0;
        for (double lam : rep.eigenvalues) prod *= lam;
        gm = std::pow(prod, 1.0 / static_cast<double>(rep.rank));
    }
    if (rep.rank < acc.min_rank) {
        acc.min_rank = rep.rank;
        acc.worst.clear();
    }
    if (rep.rank == acc.min_rank) acc.worst.emplace_back(t, e);
    if (acc.min_gc == 0.0 || gm < acc.min_gc) acc.min_gc = gm;
    if (rep.rank == d) {
        const double norm_gc =
            std::pow(rep.det_c, 1.0 / static_cast<double>(d)) / static_cast<double>(d);
        if (acc.min_gc_norm == 0.0 || norm_gc < acc.min_gc_norm) acc.min_gc_norm = norm_gc;
    } else {
        acc.any_rank_deficient = true;
    }
}

void scan_merge(ScanPartial& into, ScanPartial& from) {
    if (from.min_rank < into.min_rank) {
        into.min_rank = from.min_rank;
        into.worst.clear();
    }
    if (from.min_rank == into.min_rank)
        into.worst.insert(into.worst.end(), from.worst.begin(), from.worst.end());
    if (into.min_gc == 0.0 || (from.min_gc > 0.0 && from.min_gc < into.min_gc))
        into.min_gc = from.min_gc;
    if (into.min_gc_norm == 0.0 ||
        (from.min_gc_norm > 0.0 && from.min_gc_norm < into.min_gc_norm))
        into.min_gc_norm = from.min_gc_norm;
    into.any_rank_deficient = into.any_rank_deficient || from.any_rank_deficient;
}

CVector diff_vector_from_index(std::uint64_t t, const std::vector<cplx>& diffs,
                               std::size_t mn) {
    CVector e(static_cast<Eigen::Index>(mn));
    const std::uint64_t base = diffs.size();
    for (std::size_t i = 0; i < mn; ++i) {
        e(static_cast<Eigen::Index>(i)) = diffs[t % base];
        t /= base;
    }
    return e;
}

}  // namespace

DiversityReport diversity_gain(const AnalysisScenario& sc, const Precoder& p,
                               const Alphabet& alphabet, std::uint64_t pair_budget,
                               double rank_tol, bool parallel, std::uint64_t sample_seed) {
    if (pair_budget == 0) throw ParameterError("diversity_gain: pair_budget must be > 0");
    const OtfsDims dims = p.dims;
    const std::size_t mn = dims.mn();
    const std::size_t d = scenario_order(sc);
    const std::vector<cplx> diffs = alphabet_differences(alphabet);

    // total nonzero difference vectors = |diffs|^MN - 1, saturating
    std::uint64_t total = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < mn; ++i) {
        if (total > UINT64_MAX / diffs.size()) {
            overflow = true;
            break;
        }
        total *= diffs.size();
    }
    const bool exhaustive = !overflow && (total - 1) <= pair_budget;
    const std::uint64_t count = exhaustive ? total - 1 : pair_budget;

    ScanPartial result;
    const int nthreads = parallel ?
#ifdef _OPENMP
                                  omp_get_max_threads()
#else
                                  1
#endif
                                  : 1;
    std::vector<ScanPartial> partials(static_cast<std::size_t>(nthreads));

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads) if (parallel)
#endif
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(count); ++k) {
#ifdef _OPENMP
        ScanPartial& acc = partials[static_cast<std::size_t>(omp_get_thread_num())];
#else
        ScanPartial& acc = partials[0];
#endif
        CVector e;
        std::uint64_t tag;
        if (exhaustive) {
            tag = static_cast<std::uint64_t>(k) + 1;
            e = diff_vector_from_index(tag, diffs, mn);
        } else {
            // independent per-index stream keeps sampling order-free
            Rng rng(frame_seed(sample_seed, 0, static_cast<std::uint64_t>(k)));
            e.resize(static_cast<Eigen::Index>(mn));
            do {
                for (std::size_t i = 0; i < mn; ++i)
                    e(static_cast<Eigen::Index>(i)) = diffs[rng() % diffs.size()];
            } while (e.squaredNorm() == 0.0);
            tag = static_cast<std::uint64_t>(k) + 1;
        }
        const PairwiseReport rep = report_from_phi(e, phi_of(e, sc, p.V, dims), rank_tol);
        scan_accumulate(acc, tag, e, rep, d);
    }

    for (auto& part : partials) scan_merge(result, part);
    std::sort(result.worst.begin(), result.worst.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    DiversityReport rep;
    rep.scenario = sc;
    rep.dims = dims;
    rep.precoder = p.kind;
    rep.g_d = result.min_rank == SIZE_MAX ? 0 : result.min_rank;
    rep.max_diversity = std::min(mn, d);
    rep.full_diversity = !result.any_rank_deficient && rep.g_d == rep.max_diversity;
    rep.g_c = result.min_gc;
    rep.g_c_normalized = rep.full_diversity ? result.min_gc_norm : 0.0;
    rep.worst_pairs.reserve(result.worst.size());
    for (auto& [tag, e] : result.worst) rep.worst_pairs.push_back(std::move(e));
    rep.pairs_examined = count;
    rep.exhaustive = exhaustive;
    return rep;
}

double coding_gain(const DiversityReport& r) { return r.g_c; }

double pep_bound(const std::vector<double>& eigenvalues, double rho, std::size_t d) {
    if (rho < 0) throw ParameterError("pep_bound: rho must be >= 0");
    if (d == 0) throw ParameterError("pep_bound: d must be >= 1");
    double out = 0.5;
    for (double lam : eigenvalues) {
        if (lam < 0) throw ParameterError("pep_bound: eigenvalues must be >= 0");
        out /= 1.0 + rho * lam / (4.0 * static_cast<double>(d));
    }
    return out;
}

}  // namespace otfs
