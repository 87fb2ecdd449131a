// Timing comparison between the serial reference paths and the OpenMP /
// FFT-structured production paths.

#include <chrono>
#include <cstdio>

#include "otfs/analysis.hpp"
#include "otfs/montecarlo.hpp"

using namespace otfs;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

void bench_diversity() {
    const OtfsDims dims{2, 2};
    const Precoder p = precoder_frequency_selective(dims);
    const Alphabet a = Alphabet::qpsk();
    const AnalysisScenario sc = FreqSelScenario{2};

    auto t0 = clk::now();
    const auto serial = diversity_gain(sc, p, a, 1u << 20, 1e-10, /*parallel=*/false);
    const double ts = seconds_since(t0);

    t0 = clk::now();
    const auto par = diversity_gain(sc, p, a, 1u << 20, 1e-10, /*parallel=*/true);
    const double tp = seconds_since(t0);

    std::printf("diversity scan (MN=4, qpsk, 6560 vectors): serial %.3fs  parallel %.3fs"
                "  speedup %.2fx  (g_d %zu == %zu: %s)\n",
                ts, tp, ts / tp, serial.g_d, par.g_d,
                serial.g_d == par.g_d ? "match" : "MISMATCH");
}

void bench_ber_point() {
    SimConfig cfg;
    cfg.dims = {4, 2};
    cfg.scenario = {ScenarioKind::FreqSel, 2, 0.0, std::nullopt};
    cfg.precoder = PrecoderKind::ProposedFreqSel;
    cfg.detector = DetectorKind::ML;
    cfg.snr_grid_db = {10.0};
    cfg.max_frames = 2000;
    cfg.target_bit_errors = 1u << 30;  // no early stop
    cfg.master_seed = 1;

    cfg.threads = 1;
    auto t0 = clk::now();
    const auto serial = run_ber(cfg);
    const double ts = seconds_since(t0);

    cfg.threads = 0;
    t0 = clk::now();
    const auto par = run_ber(cfg);
    const double tp = seconds_since(t0);

    std::printf("ml ber point (M=4 N=2 qpsk, 2000 frames): serial %.3fs  parallel %.3fs"
                "  speedup %.2fx  (errors %llu == %llu: %s)\n",
                ts, tp, ts / tp, static_cast<unsigned long long>(serial[0].bit_errors),
                static_cast<unsigned long long>(par[0].bit_errors),
                serial[0].bit_errors == par[0].bit_errors ? "match" : "MISMATCH");
    std::printf("ml throughput: %.0f frames/s single thread\n", 2000.0 / ts);
}

void bench_lmmse_large() {
    SimConfig cfg;
    cfg.dims = {128, 16};
    cfg.scenario = {ScenarioKind::FreqSel, 4, 0.0, std::nullopt};
    cfg.precoder = PrecoderKind::ProposedFreqSel;
    cfg.detector = DetectorKind::LMMSE;
    cfg.snr_grid_db = {12.0};
    cfg.max_frames = 200;
    cfg.target_bit_errors = 1u << 30;
    cfg.master_seed = 1;

    auto t0 = clk::now();
    run_ber(cfg);
    const double t = seconds_since(t0);
    std::printf("structured lmmse (M=128 N=16, 200 frames): %.3fs  (%.0f frames/s)\n", t,
                200.0 / t);
}

}  // namespace

int main() {
    bench_diversity();
    bench_ber_point();
    bench_lmmse_large();
    return 0;
}
