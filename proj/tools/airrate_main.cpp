// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "airrate/config.hpp"

namespace {

using namespace airrate;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTrace = 3;
constexpr int kExitInternal = 4;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

Vec3 parse_vec3(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw ConfigError("expected x,y,z in '" + s + "'");
    return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
}

// "x,y,z;x,y,z@v;..." — '@v' sets the speed of the segment ending there.
void parse_trajectory(const std::string& s, ScenarioConfig& cfg) {
    cfg.waypoints.clear();
    cfg.speeds.clear();
    double last_speed = 2.0;
    for (const auto& part : split(s, ';')) {
        std::string coords = part;
        const auto at = part.find('@');
        if (at != std::string::npos) {
            last_speed = std::stod(part.substr(at + 1));
            coords = part.substr(0, at);
        }
        cfg.waypoints.push_back(parse_vec3(coords));
        if (cfg.waypoints.size() > 1) cfg.speeds.push_back(last_speed);
    }
    if (cfg.waypoints.size() < 2) throw ConfigError("trajectory needs at least 2 waypoints");
}

// "x,y,z[:nlos][:moving];..."
void parse_clients(const std::string& s, ScenarioConfig& cfg) {
    cfg.clients.clear();
    for (const auto& part : split(s, ';')) {
        const auto fields = split(part, ':');
        if (fields.empty()) continue;
        ClientConfig c;
        c.position = parse_vec3(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            if (fields[i] == "nlos")
                c.nlos = true;
            else if (fields[i] == "moving")
                c.moving = true;
            else
                throw ConfigError("unknown client tag '" + fields[i] + "'");
        }
        cfg.clients.push_back(c);
    }
    if (cfg.clients.empty()) throw ConfigError("no clients parsed");
}

struct Overrides {
    std::optional<std::string> name, trajectory, clients, arms;
    std::optional<double> duration, t_pkt, f_s, f_r, f_b, v_max, lambda, rho, ref_snr,
        snr_noise, spacing, packet_bits, backoff, floor, sigma_pos, sigma_vel;
    std::optional<std::uint64_t> seed;
    std::optional<int> antennas;
    std::optional<bool> sampled;
};

void add_config_flags(CLI::App* cmd, std::optional<std::string>& config_path, Overrides& ov) {
    cmd->add_option("-c,--config", config_path, "Scenario JSON file (flags override it)");
    cmd->add_option("--name", ov.name, "Scenario name (default: scenario)");
    cmd->add_option("--duration", ov.duration, "Simulated seconds (default: 30)");
    cmd->add_option("--seed", ov.seed, "Master RNG seed (default: 1)");
    cmd->add_option("--t-pkt", ov.t_pkt, "Transmission round seconds (default: 0.002)");
    cmd->add_option("--f-s", ov.f_s, "Channel synthesis rate, Hz (default: 1000)");
    cmd->add_option("--f-r", ov.f_r, "CSI reading rate, Hz (default: 50)");
    cmd->add_option("--f-b", ov.f_b, "Sensor broadcast rate, Hz (default: 0 = follow f_r)");
    cmd->add_option("--v-max", ov.v_max, "Flight speed limit, m/s (default: 10)");
    cmd->add_option("--lambda", ov.lambda, "Carrier wavelength, m (default: 0.06)");
    cmd->add_option("--rho", ov.rho, "Ground reflection coefficient (default: -0.95)");
    cmd->add_option("--ref-snr", ov.ref_snr, "SNR of unit gain at 1 m, dB (default: 40)");
    cmd->add_option("--snr-noise", ov.snr_noise, "Reading SNR jitter sigma, dB (default: 0.5)");
    cmd->add_option("--antennas", ov.antennas, "UAV antenna count, 2..3 (default: 2)");
    cmd->add_option("--spacing", ov.spacing, "Antenna spacing, m (default: 0 = lambda/2)");
    cmd->add_option("--packet-bits", ov.packet_bits, "Bits per packet (default: 12000)");
    cmd->add_option("--backoff-threshold", ov.backoff,
                    "Power backoff threshold, dB (default: 26)");
    cmd->add_option("--contention-floor", ov.floor,
                    "Minimum projected SNR to join, dB (default: 4)");
    cmd->add_option("--sigma-pos", ov.sigma_pos, "Broadcast position noise, m (default: 0)");
    cmd->add_option("--sigma-vel", ov.sigma_vel, "Broadcast velocity noise, m/s (default: 0)");
    cmd->add_option("--sampled", ov.sampled,
                    "Sample packet outcomes instead of expectations (default: false)");
    cmd->add_option("--arms", ov.arms,
                    "Comma list of sensor_assisted,stale_csi,single_user,oracle (default: all)");
    cmd->add_option("--trajectory", ov.trajectory,
                    "Waypoints 'x,y,z;x,y,z@v;...' (default: 20 m line at 2 m/s)");
    cmd->add_option("--clients", ov.clients,
                    "Clients 'x,y,z[:nlos][:moving];...' (default: two near the line ends)");
}

ScenarioConfig build_config(const std::optional<std::string>& path, const Overrides& ov) {
    ScenarioConfig cfg = path ? load_scenario(*path) : ScenarioConfig{};
    if (ov.name) cfg.name = *ov.name;
    if (ov.duration) cfg.duration_s = *ov.duration;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.t_pkt) cfg.t_pkt_s = *ov.t_pkt;
    if (ov.f_s) cfg.f_s = *ov.f_s;
    if (ov.f_r) cfg.f_r = *ov.f_r;
    if (ov.f_b) cfg.f_b = *ov.f_b;
    if (ov.v_max) cfg.v_max = *ov.v_max;
    if (ov.lambda) cfg.radio.wavelength_m = *ov.lambda;
    if (ov.rho) cfg.radio.ground_rho = *ov.rho;
    if (ov.ref_snr) cfg.radio.ref_snr_db_at_1m = *ov.ref_snr;
    if (ov.snr_noise) cfg.snr_noise_db = *ov.snr_noise;
    if (ov.antennas) cfg.n_antennas = *ov.antennas;
    if (ov.spacing) cfg.antenna_spacing_m = *ov.spacing;
    if (ov.packet_bits) cfg.packet_bits = *ov.packet_bits;
    if (ov.backoff) cfg.backoff_threshold_db = *ov.backoff;
    if (ov.floor) cfg.contention_floor_db = *ov.floor;
    if (ov.sigma_pos) cfg.broadcast_noise.sigma_pos_m = *ov.sigma_pos;
    if (ov.sigma_vel) cfg.broadcast_noise.sigma_vel_mps = *ov.sigma_vel;
    if (ov.sampled) cfg.sampled_outcomes = *ov.sampled;
    if (ov.arms) {
        cfg.arms.clear();
        for (const auto& a : split(*ov.arms, ',')) cfg.arms.push_back(policy_from_string(a));
    }
    if (ov.trajectory) parse_trajectory(*ov.trajectory, cfg);
    if (ov.clients) parse_clients(*ov.clients, cfg);
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + path);
    return f;
}

int cmd_validate(const ScenarioConfig& cfg) {
    validate(cfg);
    std::cout << "OK\n";
    return kExitOk;
}

int cmd_run(const ScenarioConfig& cfg, const std::string& out, const std::string& rounds_out,
            const std::string& report) {
    validate(cfg);
    std::optional<std::ofstream> rounds_file;
    if (!rounds_out.empty()) rounds_file = open_out(rounds_out);

    std::cerr << "running scenario '" << cfg.name << "' for " << cfg.duration_s
              << " s, seed " << cfg.seed << "\n";
    const ScenarioResult res = run_scenario(cfg, rounds_file ? &*rounds_file : nullptr);
    const auto rows = rows_from_result(cfg, res);

    if (out.empty() || out == "-") {
        emit_summary_csv(rows, std::cout);
    } else {
        auto f = open_out(out);
        emit_summary_csv(rows, f);
    }
    if (!report.empty()) {
        auto f = open_out(report);
        emit_text_report(rows, f);
    }
    return kExitOk;
}

int cmd_sweep(const ScenarioConfig& cfg, const std::string& axis_name,
              const std::string& values_s, const std::string& seeds_s, const std::string& out,
              const std::string& report) {
    validate(cfg);
    const SweepAxis axis = sweep_axis_from_string(axis_name);
    std::vector<double> values;
    for (const auto& v : split(values_s, ',')) values.push_back(std::stod(v));
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split(seeds_s, ',')) seeds.push_back(std::stoull(s));
    if (values.empty() || seeds.empty()) throw ConfigError("sweep needs values and seeds");

    std::cerr << "sweeping " << axis_name << " over " << values.size() << " values x "
              << seeds.size() << " seeds\n";
    const auto rows = sweep(cfg, axis, values, seeds);

    if (out.empty() || out == "-") {
        emit_summary_csv(rows, std::cout);
    } else {
        auto f = open_out(out);
        emit_summary_csv(rows, f);
    }
    if (!report.empty()) {
        auto f = open_out(report);
        emit_text_report(rows, f);
    }
    return kExitOk;
}

int cmd_synth_trace(const ScenarioConfig& cfg, const std::string& out) {
    validate(cfg);
    SynthesisConfig synth;
    synth.f_s = cfg.f_s;
    synth.duration_s = cfg.duration_s;
    synth.snr_noise_db = cfg.snr_noise_db;
    synth.seed = cfg.seed;
    synth.reflectors = cfg.reflectors;

    const Trajectory traj(cfg.waypoints, cfg.speeds);
    std::vector<ClientSite> sites;
    for (const auto& c : cfg.clients) sites.push_back({c.position, c.nlos, c.nlos_penalty_db, std::nullopt});
    const double spacing =
        cfg.antenna_spacing_m > 0.0 ? cfg.antenna_spacing_m : cfg.radio.wavelength_m / 2.0;
    const auto series = synthesize_csi(traj, sites, AntennaArray::uniform_x(cfg.n_antennas, spacing),
                                       cfg.radio, synth);
    if (out.empty() || out == "-") {
        write_trace(std::cout, series);
    } else {
        write_trace_file(out, series);
        std::cerr << "trace written to " << out << "\n";
    }
    return kExitOk;
}

// Replays a channel trace through the predictor at a chosen reading rate and
// reports one-step-ahead prediction error per client.
int cmd_analyze_trace(const std::string& in, double f_r) {
    const auto series = read_trace_file(in);
    if (series.empty()) throw TraceError("trace has no clients");
    if (!(f_r > 0.0)) throw ConfigError("reading rate must be > 0");

    std::cout << "client,readings,snr_rmse_db,dir_rmse_deg\n";
    double total_sq = 0.0;
    long total_n = 0;
    for (const auto& cs : series) {
        if (cs.samples.size() < 3) throw TraceError("trace too short to analyze");
        const double f_trace =
            1.0 / (cs.samples[1].t - cs.samples[0].t);
        const std::size_t stride = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(f_trace / f_r)));

        PredictorConfig pc;
        Predictor pred(static_cast<int>(cs.samples[0].h.size()), pc);
        double snr_sq = 0.0, dir_sq = 0.0;
        long n = 0;
        for (std::size_t i = 0; i + stride < cs.samples.size(); i += stride) {
            pred.ingest(cs.samples[i]);
            const auto& next = cs.samples[i + stride];
            const ChannelPrediction p = pred.predict(next.t);
            for (std::size_t m = 0; m < next.snr_db.size(); ++m) {
                const double e = p.snr_orig_db[m] - next.snr_db[m];
                snr_sq += e * e;
            }
            const auto est = p.direction();
            const auto truth = ChannelDirection::from_gains(next.h);
            const double c2 = cos_sq_theta(
                std::span<const std::complex<double>>(est.components),
                std::span<const std::complex<double>>(truth.components));
            const double ang = std::acos(std::sqrt(std::min(c2, 1.0))) * 180.0 / M_PI;
            dir_sq += ang * ang;
            ++n;
        }
        const double snr_rmse =
            std::sqrt(snr_sq / (n * static_cast<double>(cs.samples[0].h.size())));
        const double dir_rmse = std::sqrt(dir_sq / n);
        std::printf("%d,%ld,%.4f,%.4f\n", cs.client, n, snr_rmse, dir_rmse);
        total_sq += snr_sq;
        total_n += n * static_cast<long>(cs.samples[0].h.size());
    }
    std::fprintf(stderr, "overall snr rmse: %.4f dB\n", std::sqrt(total_sq / total_n));
    return kExitOk;
}

int cmd_report(const std::string& in, const std::string& out) {
    std::ifstream f(in);
    if (!f) throw ConfigError("cannot open summary CSV: " + in);
    std::string line;
    if (!std::getline(f, line) || line.rfind("schema,", 0) != 0)
        throw ConfigError("unrecognized summary CSV header");

    std::vector<SweepRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cols = [&] {
            std::vector<std::string> c;
            std::stringstream ss(line);
            std::string item;
            while (std::getline(ss, item, ',')) c.push_back(item);
            return c;
        }();
        if (cols.size() < 7) throw ConfigError("malformed summary row: " + line);
        SweepRow r;
        r.scenario = cols[1];
        r.axis = cols[2];
        r.value = cols[3].empty() ? 0.0 : std::stod(cols[3]);
        r.seed = std::stoull(cols[4]);
        r.summary.kind = policy_from_string(cols[5]);
        r.summary.mean_throughput_mbps = cols[6].empty() ? 0.0 : std::stod(cols[6]);
        rows.push_back(std::move(r));
    }
    if (out.empty() || out == "-") {
        emit_text_report(rows, std::cout);
    } else {
        auto o = open_out(out);
        emit_text_report(rows, o);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"airrate: UAV MU-MIMO link simulator with sensor-assisted rate adaptation"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 2 configuration error, 3 trace I/O error, "
               "4 internal invariant violation.");

    std::optional<std::string> config_path;
    Overrides ov;

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario without running it");
    add_config_flags(validate_cmd, config_path, ov);

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and emit a summary CSV");
    add_config_flags(run_cmd, config_path, ov);
    std::string run_out, rounds_out, report_out;
    run_cmd->add_option("-o,--out", run_out, "Summary CSV path ('-' = stdout)");
    run_cmd->add_option("--rounds-out", rounds_out, "Optional per-round CSV path");
    run_cmd->add_option("--report", report_out, "Optional plain-text report path");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario across one swept parameter");
    add_config_flags(sweep_cmd, config_path, ov);
    std::string axis, values_s, seeds_s = "1", sweep_out, sweep_report;
    sweep_cmd->add_option("--axis", axis,
                          "velocity | distance | csi_rate | reflectors | client_motion")
        ->required();
    sweep_cmd->add_option("--values", values_s, "Comma list of axis values")->required();
    sweep_cmd->add_option("--seeds", seeds_s, "Comma list of seeds (default: 1)");
    sweep_cmd->add_option("-o,--out", sweep_out, "Summary CSV path ('-' = stdout)");
    sweep_cmd->add_option("--report", sweep_report, "Optional plain-text report path");

    auto* synth_cmd = app.add_subcommand("synth-trace", "Write the synthesized channel trace");
    add_config_flags(synth_cmd, config_path, ov);
    std::string synth_out;
    synth_cmd->add_option("-o,--out", synth_out, "Trace CSV path ('-' = stdout)");

    auto* analyze_cmd =
        app.add_subcommand("analyze-trace", "Replay a trace through the channel predictor");
    std::string analyze_in;
    double analyze_fr = 50.0;
    analyze_cmd->add_option("-i,--in", analyze_in, "Trace CSV path")->required();
    analyze_cmd->add_option("--reading-rate", analyze_fr,
                            "CSI reading rate to emulate, Hz (default: 50)");

    auto* report_cmd = app.add_subcommand("report", "Aggregate a summary CSV into a text table");
    std::string report_in, report_path;
    report_cmd->add_option("-i,--in", report_in, "Summary CSV path")->required();
    report_cmd->add_option("-o,--out", report_path, "Text output path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(build_config(config_path, ov));
        if (run_cmd->parsed())
            return cmd_run(build_config(config_path, ov), run_out, rounds_out, report_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(build_config(config_path, ov), axis, values_s, seeds_s, sweep_out,
                             sweep_report);
        if (synth_cmd->parsed()) return cmd_synth_trace(build_config(config_path, ov), synth_out);
        if (analyze_cmd->parsed()) return cmd_analyze_trace(analyze_in, analyze_fr);
        if (report_cmd->parsed()) return cmd_report(report_in, report_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TraceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTrace;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
