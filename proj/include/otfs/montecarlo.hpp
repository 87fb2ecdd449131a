#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otfs/analysis.hpp"
#include "otfs/channel.hpp"
#include "otfs/detector.hpp"
#include "otfs/modem.hpp"
#include "otfs/precoder.hpp"

namespace otfs {

enum class ScenarioKind { FreqSel, TimeSel };

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::FreqSel;
    std::size_t L = 1;                        // FreqSel: resolvable paths
    double f_max = 0.0;                       // TimeSel: max Doppler, Hz
    std::optional<double> velocity_kmh;       // provenance when given as velocity

    std::string to_string() const;
};

struct SimConfig {
    OtfsDims dims;
    ScenarioConfig scenario;
    PrecoderKind precoder = PrecoderKind::Identity;
    double phase_theta = 0.0;  // PhaseRotation only; 0 means "use default"
    AlphabetKind alphabet = AlphabetKind::QPSK;
    DetectorKind detector = DetectorKind::ML;
    std::vector<double> snr_grid_db;
    std::uint64_t max_frames = 1'000'000;
    std::uint64_t target_bit_errors = 500;
    std::uint64_t master_seed = 0;
    double delta_f = 15e3;   // Hz
    double carrier = 4e9;    // Hz
    std::uint64_t ml_budget = std::uint64_t{1} << 20;
    int threads = 0;         // 0 = library default
};

struct BerRecord {
    double snr_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::string config_fingerprint;
    std::uint64_t seed = 0;
};

/// FNV-1a hash over the canonical textual form of the config.
std::string config_fingerprint(const SimConfig& cfg);

/// Scenario-matched precoder for the config (proposed kind follows the
/// scenario; phase_theta of 0 resolves to the pi/(2 MN) default).
Precoder build_precoder_for(const SimConfig& cfg);

/// BEM order the scenario induces (TimeSel only).
std::size_t bem_order_for(const SimConfig& cfg);

/// One BER measurement per SNR grid point. Deterministic for a fixed config
/// regardless of the thread count; frames use counter-derived seeds and a
/// point stops early once target_bit_errors is reached.
std::vector<BerRecord> run_ber(const SimConfig& cfg);

/// Diversity-order estimate from two grid points:
/// -(log10 BER(hi) - log10 BER(lo)) / ((hi - lo)/10).
double estimate_slope(const std::vector<BerRecord>& records, double lo_db, double hi_db);

/// CSV serialization, one row per record:
/// snr_db,frames,bits,bit_errors,ber,precoder,detector,scenario,M,N,L_or_Q,seed,fingerprint
std::string records_to_csv(const std::vector<BerRecord>& records, const SimConfig& cfg);

std::string to_string(DetectorKind k);
std::string to_string(AlphabetKind k);

}  // namespace otfs
