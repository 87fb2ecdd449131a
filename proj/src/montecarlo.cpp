#include "otfs/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "otfs/fastops.hpp"
#include "otfs/rng.hpp"

namespace otfs {

std::string to_string(DetectorKind k) { return k == DetectorKind::ML ? "ml" : "lmmse"; }

std::string to_string(AlphabetKind k) { return k == AlphabetKind::BPSK ? "bpsk" : "qpsk"; }

namespace {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::string ScenarioConfig::to_string() const {
    if (kind == ScenarioKind::FreqSel) return "fir:L=" + std::to_string(L);
    if (velocity_kmh) return "bem:v=" + fmt_double(*velocity_kmh);
    return "bem:fmax=" + fmt_double(f_max);
}

std::string config_fingerprint(const SimConfig& cfg) {
    std::ostringstream os;
    os << cfg.dims.M << '|' << cfg.dims.N << '|' << cfg.scenario.to_string() << '|'
       << otfs::to_string(cfg.precoder) << '|' << cfg.phase_theta << '|'
       << otfs::to_string(cfg.alphabet) << '|' << otfs::to_string(cfg.detector) << '|';
    for (double s : cfg.snr_grid_db) os << fmt_double(s) << ',';
    os << '|' << cfg.max_frames << '|' << cfg.target_bit_errors << '|' << cfg.master_seed
       << '|' << fmt_double(cfg.delta_f) << '|' << fmt_double(cfg.carrier) << '|'
       << cfg.ml_budget;
    const std::string s = os.str();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Precoder build_precoder_for(const SimConfig& cfg) {
    switch (cfg.precoder) {
        case PrecoderKind::ProposedFreqSel:
        case PrecoderKind::ProposedTimeSel:
            return cfg.scenario.kind == ScenarioKind::FreqSel
                       ? precoder_frequency_selective(cfg.dims)
                       : precoder_time_selective(cfg.dims);
        case PrecoderKind::Identity:
            return precoder_identity(cfg.dims);
        case PrecoderKind::PhaseRotation: {
            const double th = cfg.phase_theta != 0.0 ? cfg.phase_theta
                                                     : default_phase_step(cfg.dims);
            return precoder_phase_rotation(cfg.dims, th);
        }
    }
    throw ParameterError("build_precoder_for: unknown precoder kind");
}

std::size_t bem_order_for(const SimConfig& cfg) {
    const double fbar = cfg.scenario.f_max / cfg.delta_f;
    return 2 * static_cast<std::size_t>(
                   std::ceil(static_cast<double>(cfg.dims.N) * fbar));
}

namespace {

struct FrameResult {
    std::uint32_t bit_errors = 0;
};

// Everything a frame worker needs, built once per run.
struct RunContext {
    const SimConfig& cfg;
    Alphabet alphabet;
    OtfsDims dims;
    std::size_t mn;
    std::size_t lcp;
    PrecoderKind vkind;
    double phase_theta;
    bool fast_path;      // structured LMMSE, no dense matrices
    CMatrix V;           // dense path only
    CMatrix U;           // (F_N (x) I_M) F_MN^H, dense path + FIR
    CMatrix W;           // (F_N (x) I_M), dense path + BEM
};

FrameResult simulate_frame(const RunContext& ctx, double n0, std::uint64_t snr_index,
                           std::uint64_t frame_index) {
    const SimConfig& cfg = ctx.cfg;
    Rng rng(frame_seed(cfg.master_seed, snr_index, frame_index));

    // Draw order is fixed (bits, channel, noise) so that precoder and
    // detector choices never perturb the random stream: paired-seed runs see
    // identical channels and noise.
    std::vector<std::uint8_t> bits(ctx.mn * ctx.alphabet.bits_per_symbol);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
    const Frame tx = map_bits(bits, ctx.alphabet, ctx.dims);

    FirChannel fir;
    BemChannel bem;
    if (cfg.scenario.kind == ScenarioKind::FreqSel) {
        fir = sample_fir(cfg.scenario.L, rng);
    } else {
        bem = sample_bem(ctx.dims, cfg.scenario.f_max, cfg.delta_f, rng);
    }
    const CVector noise =
        n0 > 0 ? complex_gaussian_vector(rng, ctx.mn + ctx.lcp, n0)
               : CVector::Zero(static_cast<Eigen::Index>(ctx.mn + ctx.lcp));

    // Transmit chain
    CVector xbar = ctx.fast_path
                       ? precode_fast(ctx.vkind, ctx.phase_theta, tx.x, ctx.dims)
                       : CVector(ctx.V * tx.x);
    CVector s = otfs_modulate(xbar, ctx.dims);
    CVector r;
    if (cfg.scenario.kind == ScenarioKind::FreqSel) {
        CVector scp = ctx.lcp > 0 ? add_cp(s, ctx.lcp) : s;
        r = apply_fir_linear(fir, scp);
        r += noise;
        if (ctx.lcp > 0) r = remove_cp(r, ctx.lcp);
    } else {
        r = apply_bem(bem, s);
        r += noise;
    }
    const CVector y = otfs_demodulate(r, ctx.dims);

    // Detect
    Frame rx;
    if (cfg.detector == DetectorKind::ML) {
        CMatrix h = cfg.scenario.kind == ScenarioKind::FreqSel
                        ? CMatrix(ctx.U * fir_spectrum(fir, ctx.mn).asDiagonal() *
                                  ctx.U.adjoint())
                        : CMatrix(ctx.W * bem_time_response(bem).asDiagonal() *
                                  ctx.W.adjoint());
        DetectorConfig dcfg;
        dcfg.kind = DetectorKind::ML;
        dcfg.ml_budget = cfg.ml_budget;
        rx = ml_detect(y, h * ctx.V, ctx.alphabet, dcfg);
    } else {
        const double nv = n0 > 0 ? n0 : 1e-12;
        const CVector soft =
            cfg.scenario.kind == ScenarioKind::FreqSel
                ? lmmse_soft_fir(y, fir, ctx.vkind, ctx.phase_theta, ctx.dims, nv)
                : lmmse_soft_bem(y, bem, ctx.vkind, ctx.phase_theta, ctx.dims, nv);
        rx = slice(soft, ctx.alphabet);
    }

    FrameResult res;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (rx.bits[i] != bits[i]) ++res.bit_errors;
    return res;
}

}  // namespace

std::vector<BerRecord> run_ber(const SimConfig& cfg) {
    if (cfg.max_frames < 1) throw ParameterError("run_ber: max_frames must be >= 1");
    if (cfg.snr_grid_db.empty()) throw ParameterError("run_ber: empty SNR grid");
    for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i)
        if (!(cfg.snr_grid_db[i] > cfg.snr_grid_db[i - 1]))
            throw ParameterError("run_ber: SNR grid must be strictly increasing");
    if (cfg.delta_f <= 0) throw ParameterError("run_ber: delta_f must be > 0");

    RunContext ctx{cfg,
                   Alphabet::make(cfg.alphabet),
                   cfg.dims,
                   cfg.dims.mn(),
                   0,
                   cfg.precoder,
                   cfg.phase_theta != 0.0 ? cfg.phase_theta : default_phase_step(cfg.dims),
                   cfg.detector == DetectorKind::LMMSE,
                   {},
                   {},
                   {}};
    if (cfg.scenario.kind == ScenarioKind::FreqSel && cfg.scenario.L == 0)
        throw ParameterError("run_ber: L must be >= 1");
    ctx.lcp = cfg.scenario.kind == ScenarioKind::FreqSel ? cfg.scenario.L - 1 : 0;

    // Normalize the proposed kind to the scenario before anything else.
    if (cfg.precoder == PrecoderKind::ProposedFreqSel ||
        cfg.precoder == PrecoderKind::ProposedTimeSel) {
        ctx.vkind = cfg.scenario.kind == ScenarioKind::FreqSel
                        ? PrecoderKind::ProposedFreqSel
                        : PrecoderKind::ProposedTimeSel;
        vandermonde_nodes(ctx.mn);  // fail fast on unsupported MN
    }

    if (cfg.detector == DetectorKind::ML) {
        if (!ml_feasible(ctx.mn, ctx.alphabet, cfg.ml_budget))
            throw CapacityError(
                "run_ber: ML search space exceeds the budget; use --detector lmmse");
        SimConfig norm = cfg;
        norm.precoder = ctx.vkind;
        norm.phase_theta = ctx.phase_theta;
        ctx.V = build_precoder_for(norm).V;
        if (cfg.scenario.kind == ScenarioKind::FreqSel)
            ctx.U = kron(dft_matrix_cached(cfg.dims.N),
                         CMatrix::Identity(cfg.dims.M, cfg.dims.M)) *
                    dft_matrix_cached(ctx.mn).adjoint();
        else
            ctx.W = kron(dft_matrix_cached(cfg.dims.N),
                         CMatrix::Identity(cfg.dims.M, cfg.dims.M));
    }

    const std::string fp = config_fingerprint(cfg);
    std::vector<BerRecord> records;
    records.reserve(cfg.snr_grid_db.size());

    const std::size_t bits_per_frame = ctx.mn * ctx.alphabet.bits_per_symbol;
    constexpr std::uint64_t kBatch = 512;

    for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
        const double snr_db = cfg.snr_grid_db[si];
        const double n0 = std::isinf(snr_db) ? 0.0 : std::pow(10.0, -snr_db / 10.0);

        std::uint64_t frames = 0, errors = 0;
        bool stop = false;
        std::vector<std::uint32_t> batch_err(kBatch);
        while (!stop && frames < cfg.max_frames) {
            const std::uint64_t n = std::min<std::uint64_t>(kBatch, cfg.max_frames - frames);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads( \
        cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
#endif
            for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
                batch_err[static_cast<std::size_t>(k)] =
                    simulate_frame(ctx, n0, si, frames + static_cast<std::uint64_t>(k))
                        .bit_errors;
            }
            // serial scan keeps the early-stop frame count independent of
            // thread scheduling
            for (std::uint64_t k = 0; k < n; ++k) {
                errors += batch_err[k];
                ++frames;
                if (errors >= cfg.target_bit_errors) {
                    stop = true;
                    break;
                }
            }
        }

        BerRecord rec;
        rec.snr_db = snr_db;
        rec.frames = frames;
        rec.bits = frames * bits_per_frame;
        rec.bit_errors = errors;
        rec.ber = rec.bits ? static_cast<double>(errors) / static_cast<double>(rec.bits) : 0.0;
        rec.config_fingerprint = fp;
        rec.seed = cfg.master_seed;
        records.push_back(rec);
    }
    return records;
}

double estimate_slope(const std::vector<BerRecord>& records, double lo_db, double hi_db) {
    const BerRecord* lo = nullptr;
    const BerRecord* hi = nullptr;
    for (const auto& r : records) {
        if (std::abs(r.snr_db - lo_db) < 1e-9) lo = &r;
        if (std::abs(r.snr_db - hi_db) < 1e-9) hi = &r;
    }
    if (!lo || !hi) throw ParameterError("estimate_slope: SNR points not found in records");
    if (lo->bit_errors < 50 || hi->bit_errors < 50)
        throw StatisticalValidityError(
            "estimate_slope: need >= 50 bit errors at both SNR points");
    const double num = std::log10(hi->ber) - std::log10(lo->ber);
    return -num / ((hi_db - lo_db) / 10.0);
}

std::string records_to_csv(const std::vector<BerRecord>& records, const SimConfig& cfg) {
    std::ostringstream os;
    os << "snr_db,frames,bits,bit_errors,ber,precoder,detector,scenario,M,N,L_or_Q,seed,"
          "fingerprint\n";
    const std::size_t l_or_q = cfg.scenario.kind == ScenarioKind::FreqSel
                                   ? cfg.scenario.L
                                   : bem_order_for(cfg);
    for (const auto& r : records) {
        os << fmt_double(r.snr_db) << ',' << r.frames << ',' << r.bits << ','
           << r.bit_errors << ',' << fmt_double(r.ber) << ',' << to_string(cfg.precoder)
           << ',' << to_string(cfg.detector) << ',' << cfg.scenario.to_string() << ','
           << cfg.dims.M << ',' << cfg.dims.N << ',' << l_or_q << ',' << r.seed << ','
           << r.config_fingerprint << '\n';
    }
    return os.str();
}

}  // namespace otfs
