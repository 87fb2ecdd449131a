#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "otfs/analysis.hpp"
#include "otfs/montecarlo.hpp"
#include "otfs/selfcheck.hpp"

using json = nlohmann::json;
using namespace otfs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNonExhaustive = 4;

ScenarioConfig parse_scenario(const std::string& s, std::optional<std::size_t>* bem_q,
                              double carrier) {
    ScenarioConfig sc;
    if (s.rfind("fir:L=", 0) == 0) {
        sc.kind = ScenarioKind::FreqSel;
        sc.L = std::stoul(s.substr(6));
        if (sc.L == 0) throw ParameterError("--scenario: L must be >= 1");
        return sc;
    }
    if (s.rfind("bem:v=", 0) == 0) {
        sc.kind = ScenarioKind::TimeSel;
        sc.velocity_kmh = std::stod(s.substr(6));
        sc.f_max = doppler_from_velocity(*sc.velocity_kmh, carrier);
        return sc;
    }
    if (s.rfind("bem:fmax=", 0) == 0) {
        sc.kind = ScenarioKind::TimeSel;
        sc.f_max = std::stod(s.substr(9));
        return sc;
    }
    if (s.rfind("bem:Q=", 0) == 0 && bem_q) {
        // direct BEM order, handy for diversity scans
        sc.kind = ScenarioKind::TimeSel;
        *bem_q = std::stoul(s.substr(6));
        return sc;
    }
    throw ParameterError("--scenario: expected fir:L=<n>, bem:v=<kmh> or bem:fmax=<Hz>");
}

PrecoderKind parse_precoder(const std::string& s, ScenarioKind scen, double* phase_theta) {
    if (s == "proposed")
        return scen == ScenarioKind::FreqSel ? PrecoderKind::ProposedFreqSel
                                             : PrecoderKind::ProposedTimeSel;
    if (s == "identity") return PrecoderKind::Identity;
    if (s.rfind("phase", 0) == 0) {
        if (s.size() > 5 && s[5] == ':') *phase_theta = std::stod(s.substr(6));
        return PrecoderKind::PhaseRotation;
    }
    throw ParameterError("--precoder: expected proposed|identity|phase[:<theta>]");
}

std::vector<double> parse_snr_grid(const std::string& s) {
    // lo:step:hi or a single value
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3 || parts[1] <= 0)
        throw ParameterError("--snr: expected <lo:step:hi> with step > 0");
    std::vector<double> grid;
    for (double v = parts[0]; v <= parts[2] + 1e-9; v += parts[1]) grid.push_back(v);
    return grid;
}

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("OTFS_SEED")) return std::stoull(env);
    return flag_seed;
}

json manifest_for(const SimConfig& cfg, const std::string& out, const std::string& format) {
    json m;
    m["command"] = "ber";
    m["artifact_version"] = "1.0.0";
    m["timestamp"] = []() {
        char buf[64];
        std::time_t t = std::time(nullptr);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        return std::string(buf);
    }();
    m["M"] = cfg.dims.M;
    m["N"] = cfg.dims.N;
    m["scenario"] = cfg.scenario.to_string();
    m["precoder"] = to_string(cfg.precoder);
    m["phase_theta"] = cfg.phase_theta;
    m["alphabet"] = to_string(cfg.alphabet);
    m["detector"] = to_string(cfg.detector);
    m["snr_grid_db"] = cfg.snr_grid_db;
    m["max_frames"] = cfg.max_frames;
    m["target_bit_errors"] = cfg.target_bit_errors;
    m["master_seed"] = cfg.master_seed;
    m["delta_f"] = cfg.delta_f;
    m["carrier"] = cfg.carrier;
    m["ml_budget"] = cfg.ml_budget;
    m["out"] = out;
    m["format"] = format;
    m["fingerprint"] = config_fingerprint(cfg);
    return m;
}

SimConfig config_from_manifest(const json& m, std::string* out, std::string* format) {
    SimConfig cfg;
    cfg.dims = {m.at("M").get<std::size_t>(), m.at("N").get<std::size_t>()};
    cfg.carrier = m.at("carrier").get<double>();
    std::optional<std::size_t> unused;
    cfg.scenario = parse_scenario(m.at("scenario").get<std::string>(), &unused, cfg.carrier);
    cfg.phase_theta = m.at("phase_theta").get<double>();
    cfg.precoder = parse_precoder(
        m.at("precoder").get<std::string>() == "phase-rotation"
            ? "phase"
            : (m.at("precoder").get<std::string>() == "identity" ? "identity" : "proposed"),
        cfg.scenario.kind, &cfg.phase_theta);
    cfg.alphabet = m.at("alphabet").get<std::string>() == "bpsk" ? AlphabetKind::BPSK
                                                                 : AlphabetKind::QPSK;
    cfg.detector = m.at("detector").get<std::string>() == "ml" ? DetectorKind::ML
                                                               : DetectorKind::LMMSE;
    cfg.snr_grid_db = m.at("snr_grid_db").get<std::vector<double>>();
    cfg.max_frames = m.at("max_frames").get<std::uint64_t>();
    cfg.target_bit_errors = m.at("target_bit_errors").get<std::uint64_t>();
    cfg.master_seed = m.at("master_seed").get<std::uint64_t>();
    cfg.delta_f = m.at("delta_f").get<double>();
    cfg.ml_budget = m.at("ml_budget").get<std::uint64_t>();
    *out = m.at("out").get<std::string>();
    *format = m.at("format").get<std::string>();
    return cfg;
}

json records_to_json(const std::vector<BerRecord>& records, const SimConfig& cfg) {
    json arr = json::array();
    for (const auto& r : records) {
        json row;
        row["snr_db"] = std::isinf(r.snr_db) ? json("inf") : json(r.snr_db);
        row["frames"] = r.frames;
        row["bits"] = r.bits;
        row["bit_errors"] = r.bit_errors;
        row["ber"] = r.ber;
        row["precoder"] = to_string(cfg.precoder);
        row["detector"] = to_string(cfg.detector);
        row["scenario"] = cfg.scenario.to_string();
        row["M"] = cfg.dims.M;
        row["N"] = cfg.dims.N;
        row["seed"] = r.seed;
        row["fingerprint"] = r.config_fingerprint;
        arr.push_back(row);
    }
    return arr;
}

int cmd_ber_run(SimConfig cfg, const std::string& out, const std::string& format) {
    const std::vector<BerRecord> records = run_ber(cfg);
    std::string payload = format == "json" ? records_to_json(records, cfg).dump(2) + "\n"
                                           : records_to_csv(records, cfg);
    {
        std::ofstream f(out);
        if (!f) throw Error("cannot open output file: " + out);
        f << payload;
    }
    {
        std::ofstream f(out + ".manifest.json");
        f << manifest_for(cfg, out, format).dump(2) << "\n";
    }
    std::cout << "snr_db        frames        bit_errors    ber\n";
    for (const auto& r : records) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-13g %-13llu %-13llu %.4g\n", r.snr_db,
                      static_cast<unsigned long long>(r.frames),
                      static_cast<unsigned long long>(r.bit_errors), r.ber);
        std::cout << line;
    }
    std::cout << "wrote " << out << " (+ manifest)\n";
    return kExitOk;
}

json diversity_to_json(const DiversityReport& rep) {
    json j;
    if (const auto* f = std::get_if<FreqSelScenario>(&rep.scenario)) {
        j["scenario"] = {{"kind", "freq-selective"}, {"L", f->L}};
    } else {
        const auto& t = std::get<TimeSelScenario>(rep.scenario);
        j["scenario"] = {{"kind", "time-selective"}, {"Q", t.Q}, {"omegas", t.omegas}};
    }
    j["M"] = rep.dims.M;
    j["N"] = rep.dims.N;
    j["precoder"] = to_string(rep.precoder);
    j["g_d"] = rep.g_d;
    j["max_diversity"] = rep.max_diversity;
    j["full_diversity"] = rep.full_diversity;
    j["g_c"] = rep.g_c;
    j["g_c_normalized"] = rep.g_c_normalized;
    j["pairs_examined"] = rep.pairs_examined;
    j["exhaustive"] = rep.exhaustive;
    json worst = json::array();
    for (const auto& e : rep.worst_pairs) {
        json re = json::array(), im = json::array();
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            re.push_back(e(i).real());
            im.push_back(e(i).imag());
        }
        worst.push_back({{"re", re}, {"im", im}});
    }
    j["worst_difference_vectors"] = worst;
    if (rep.full_diversity)
        j["note"] = "full diversity certified for every examined difference vector";
    else
        j["note"] = "rank-deficient difference vectors found; see worst_difference_vectors";
    return j;
}

void dump_matrix_csv(const CMatrix& m, std::ostream& os) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            char buf[80];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(r, c).real(), m(r, c).imag());
            os << buf;
        }
        os << '\n';
    }
}

struct SeriesData {
    std::string name;
    std::map<double, double> ber;  // snr -> ber
};

SeriesData load_ber_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParameterError("plotdata: cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("snr_db,", 0) != 0)
        throw ParameterError("plotdata: schema mismatch in " + path);
    SeriesData sd;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
        if (cols.size() < 13) throw ParameterError("plotdata: schema mismatch in " + path);
        const double snr = std::stod(cols[0]);
        const double ber = std::stod(cols[4]);
        if (sd.ber.count(snr))
            std::cerr << "warning: duplicate SNR row " << snr << " in " << path
                      << "; last wins\n";
        sd.ber[snr] = ber;
        sd.name = cols[5] + "/" + cols[7];
    }
    return sd;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OTFS linear-precoding link simulator and diversity certifier"};
    app.require_subcommand(1);

    // ---- ber ----
    auto* ber = app.add_subcommand("ber", "Monte Carlo BER sweep");
    std::size_t M = 4, N = 2;
    std::string scenario_s, precoder_s = "identity", detector_s = "ml", snr_s = "0:2:16";
    std::string alphabet_s = "qpsk", out = "ber.csv", format = "csv", manifest_path;
    std::uint64_t frames = 1'000'000, target_errors = 500, seed = 0,
                  ml_budget = std::uint64_t{1} << 20;
    double delta_f = 15e3, carrier = 4e9;
    int threads = 0;
    ber->set_config("--config");
    ber->add_option("--M", M);
    ber->add_option("--N", N);
    auto* scen_opt = ber->add_option("--scenario", scenario_s,
                                     "fir:L=<n> | bem:v=<kmh> | bem:fmax=<Hz>");
    ber->add_option("--precoder", precoder_s, "proposed|identity|phase[:<theta>]");
    ber->add_option("--detector", detector_s, "ml|lmmse");
    ber->add_option("--alphabet", alphabet_s, "bpsk|qpsk");
    ber->add_option("--snr", snr_s, "<lo:step:hi> in dB");
    ber->add_option("--frames", frames, "max frames per SNR point");
    ber->add_option("--target-errors", target_errors, "early-stop bit error count");
    ber->add_option("--seed", seed);
    ber->add_option("--out", out);
    ber->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    ber->add_option("--delta-f", delta_f, "subcarrier spacing, Hz");
    ber->add_option("--carrier", carrier, "carrier frequency, Hz");
    ber->add_option("--ml-budget", ml_budget);
    ber->add_option("--threads", threads, "0 = all cores");
    ber->add_option("--manifest", manifest_path, "replay a previous run manifest");

    // ---- diversity ----
    auto* div = app.add_subcommand("diversity", "exhaustive pairwise rank certification");
    std::size_t dM = 2, dN = 2;
    std::string dscen, dprec = "proposed", dalpha = "qpsk", dout;
    std::uint64_t pair_budget = 1'000'000;
    bool require_exhaustive = false;
    double ddelta_f = 15e3, dcarrier = 4e9;
    div->add_option("--M", dM);
    div->add_option("--N", dN);
    div->add_option("--scenario", dscen, "fir:L=<n> | bem:v=<kmh> | bem:fmax=<Hz> | bem:Q=<n>")
        ->required();
    div->add_option("--precoder", dprec);
    div->add_option("--alphabet", dalpha)->check(CLI::IsMember({"bpsk", "qpsk"}));
    div->add_option("--pair-budget", pair_budget);
    div->add_option("--delta-f", ddelta_f);
    div->add_option("--carrier", dcarrier);
    div->add_flag("--require-exhaustive", require_exhaustive);
    div->add_option("--out", dout);

    // ---- precoder dump ----
    auto* pre = app.add_subcommand("precoder", "precoder matrix utilities");
    auto* dump = pre->add_subcommand("dump", "emit Theta or V as CSV (re,im pairs)");
    std::size_t pM = 2, pN = 1;
    std::string which = "theta", pscen = "fir:L=1", pout;
    dump->add_option("--M", pM);
    dump->add_option("--N", pN);
    dump->add_option("--which", which)->check(CLI::IsMember({"theta", "v"}));
    dump->add_option("--scenario", pscen);
    dump->add_option("--out", pout);

    // ---- selfcheck ----
    auto* self = app.add_subcommand("selfcheck", "run built-in property suites");

    // ---- plotdata ----
    auto* plot = app.add_subcommand("plotdata", "merge BER CSVs into gnuplot columns");
    std::vector<std::string> plot_in;
    std::string plot_out = "ber.dat";
    plot->add_option("--in", plot_in, "input CSV files");
    plot->add_option("--out", plot_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*ber) {
            SimConfig cfg;
            std::string rout = out, rformat = format;
            if (!manifest_path.empty()) {
                std::ifstream f(manifest_path);
                if (!f) throw ParameterError("cannot open manifest: " + manifest_path);
                json m = json::parse(f);
                cfg = config_from_manifest(m, &rout, &rformat);
            } else {
                if (!*scen_opt) throw ParameterError("missing required flag: --scenario");
                cfg.dims = {M, N};
                cfg.carrier = carrier;
                cfg.scenario = parse_scenario(scenario_s, nullptr, carrier);
                cfg.precoder = parse_precoder(precoder_s, cfg.scenario.kind, &cfg.phase_theta);
                if (detector_s != "ml" && detector_s != "lmmse")
                    throw ParameterError("--detector: expected ml|lmmse");
                cfg.detector = detector_s == "ml" ? DetectorKind::ML : DetectorKind::LMMSE;
                cfg.alphabet = alphabet_s == "bpsk" ? AlphabetKind::BPSK : AlphabetKind::QPSK;
                cfg.snr_grid_db = parse_snr_grid(snr_s);
                cfg.max_frames = frames;
                cfg.target_bit_errors = target_errors;
                cfg.master_seed = resolve_seed(seed);
                cfg.delta_f = delta_f;
                cfg.ml_budget = ml_budget;
                cfg.threads = threads;
            }
            return cmd_ber_run(cfg, rout, rformat);
        }

        if (*div) {
            const OtfsDims dims{dM, dN};
            std::optional<std::size_t> bem_q;
            ScenarioConfig sc = parse_scenario(dscen, &bem_q, dcarrier);
            double phase_theta = 0.0;
            const PrecoderKind pk = parse_precoder(dprec, sc.kind, &phase_theta);
            Precoder p;
            switch (pk) {
                case PrecoderKind::ProposedFreqSel:
                    p = precoder_frequency_selective(dims);
                    break;
                case PrecoderKind::ProposedTimeSel:
                    p = precoder_time_selective(dims);
                    break;
                case PrecoderKind::Identity:
                    p = precoder_identity(dims);
                    break;
                case PrecoderKind::PhaseRotation:
                    p = precoder_phase_rotation(
                        dims, phase_theta != 0.0 ? phase_theta : default_phase_step(dims));
                    break;
            }
            AnalysisScenario asc;
            if (sc.kind == ScenarioKind::FreqSel) {
                asc = FreqSelScenario{sc.L};
            } else {
                std::size_t q = bem_q ? *bem_q
                                      : 2 * static_cast<std::size_t>(std::ceil(
                                                static_cast<double>(dN) * sc.f_max / ddelta_f));
                asc = time_sel_scenario(q, dims);
            }
            const Alphabet a = dalpha == "bpsk" ? Alphabet::bpsk() : Alphabet::qpsk();
            const DiversityReport rep = diversity_gain(asc, p, a, pair_budget);
            const std::string payload = diversity_to_json(rep).dump(2) + "\n";
            if (dout.empty()) {
                std::cout << payload;
            } else {
                std::ofstream f(dout);
                f << payload;
            }
            if (require_exhaustive && !rep.exhaustive) {
                std::cerr << "diversity scan fell back to sampling ("
                          << rep.pairs_examined << " pairs)\n";
                return kExitNonExhaustive;
            }
            return kExitOk;
        }

        if (*dump) {
            const OtfsDims dims{pM, pN};
            std::optional<std::size_t> bem_q;
            ScenarioConfig sc = parse_scenario(pscen, &bem_q, 4e9);
            CMatrix m;
            if (which == "theta") {
                m = vandermonde_theta(dims.mn()).theta;
            } else {
                m = (sc.kind == ScenarioKind::FreqSel ? precoder_frequency_selective(dims)
                                                      : precoder_time_selective(dims))
                        .V;
            }
            if (pout.empty()) {
                dump_matrix_csv(m, std::cout);
            } else {
                std::ofstream f(pout);
                dump_matrix_csv(m, f);
            }
            return kExitOk;
        }

        if (*self) {
            return run_selfcheck(std::cout) ? kExitOk : kExitRuntime;
        }

        if (*plot) {
            if (plot_in.empty()) {
                std::cerr << "plotdata: no input files\n";
                return kExitUsage;
            }
            std::vector<SeriesData> series;
            for (const auto& path : plot_in) series.push_back(load_ber_csv(path));
            std::map<double, std::vector<double>> table;
            for (std::size_t i = 0; i < series.size(); ++i)
                for (const auto& [snr, ber] : series[i].ber) {
                    auto& row = table[snr];
                    row.resize(series.size(), std::nan(""));
                    row[i] = ber;
                }
            std::ofstream f(plot_out);
            if (!f) throw Error("cannot open output file: " + plot_out);
            f << "# gnuplot data; suggest: set logscale y\n# snr_db";
            for (const auto& s : series) f << " " << s.name;
            f << "\n";
            for (const auto& [snr, row] : table) {
                f << snr;
                for (std::size_t i = 0; i < series.size(); ++i) {
                    f << " ";
                    if (i < row.size() && !std::isnan(row[i]))
                        f << row[i];
                    else
                        f << "nan";
                }
                f << "\n";
            }
            return kExitOk;
        }
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const UnsupportedDimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
