#pragma once

#include <variant>
#include <vector>

#include "otfs/linalg.hpp"
#include "otfs/modem.hpp"
#include "otfs/precoder.hpp"

namespace otfs {

struct FreqSelScenario {
    std::size_t L = 1;
};

struct TimeSelScenario {
    std::size_t Q = 0;
    std::vector<double> omegas;  // Q+1 modeling frequencies
};

using AnalysisScenario = std::variant<FreqSelScenario, TimeSelScenario>;

/// Standard BEM frequencies (2*pi/MN)*(q - ceil(Q/2)) for q = 0..Q.
TimeSelScenario time_sel_scenario(std::size_t Q, const OtfsDims& dims);

/// Diversity ceiling of the scenario: L, or Q+1.
std::size_t scenario_order(const AnalysisScenario& sc);

/// Phi(x) for FIR channels, MN x L, with y = Phi(x)*h for every tap vector h.
CMatrix phi_freq(const CVector& x, const CMatrix& V, const OtfsDims& dims, std::size_t L);

/// Phi(x) for BEM channels, MN x (Q+1), with y = Phi(x)*c for every
/// coefficient vector c.
CMatrix phi_time(const CVector& x, const CMatrix& V, const OtfsDims& dims,
                 const std::vector<double>& omegas);

/// B = [b_0 .. b_Q] with b_q geometric in exp(j*omega_q). Throws on
/// frequencies that coincide modulo 2*pi.
CMatrix build_b(std::size_t mn, const std::vector<double>& omegas);

struct PairwiseReport {
    CVector e;                       // difference vector x - xhat
    std::size_t rank = 0;            // rank of C = Phi(e)^H Phi(e)
    std::vector<double> eigenvalues; // nonzero eigenvalues, descending
    double det_c = 0.0;              // product of eigenvalues when full rank, else 0
};

PairwiseReport pairwise_report(const CVector& e, const AnalysisScenario& sc,
                               const CMatrix& V, const OtfsDims& dims,
                               double rank_tol = 1e-10);

struct DiversityReport {
    AnalysisScenario scenario;
    OtfsDims dims;
    PrecoderKind precoder;
    std::size_t g_d = 0;           // min rank over examined differences
    std::size_t max_diversity = 0; // L or Q+1
    bool full_diversity = false;
    double g_c = 0.0;              // min (prod nonzero eigenvalues)^(1/R)
    double g_c_normalized = 0.0;   // det(R_h)^(1/D) * det(C)^(1/D) min, full rank only
    std::vector<CVector> worst_pairs;
    std::uint64_t pairs_examined = 0;
    bool exhaustive = false;
};

/// Per-entry difference set {p - q : p,q in alphabet}, zero included,
/// deterministic order.
std::vector<cplx> alphabet_differences(const Alphabet& a);

/// Scan difference vectors (exhaustively when |diff|^MN - 1 <= pair_budget,
/// else a seeded uniform sample of pair_budget vectors) and aggregate the
/// minimum rank, coding gain and worst difference vectors.
DiversityReport diversity_gain(const AnalysisScenario& sc, const Precoder& p,
                               const Alphabet& alphabet, std::uint64_t pair_budget,
                               double rank_tol = 1e-10, bool parallel = true,
                               std::uint64_t sample_seed = 0x5eedULL);

/// G_c of an already computed report (min geometric mean of nonzero
/// eigenvalues over examined differences).
double coding_gain(const DiversityReport& r);

/// Eq-style averaged PEP upper bound: 0.5 * prod_i 1/(1 + rho*lambda_i/(4d)).
double pep_bound(const std::vector<double>& eigenvalues, double rho, std::size_t d);

}  // namespace otfs
