// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <iosfwd>
#include <string>

#include "airrate/policies.hpp"

namespace airrate {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClientConfig {
    Vec3 position{0.0, 0.0, 1.0};
    bool nlos = false;
    double nlos_penalty_db = 25.0;
    bool moving = false;
    double walk_speed_mps = 1.5;   // top walking speed when moving
    double walk_box_m = 2.0;       // half-extent of the walk box around home
};

struct ScenarioConfig {
    std::string name = "scenario";
    double duration_s = 30.0;
    std::uint64_t seed = 1;
    double t_pkt_s = 0.002;  // transmission round length
    double f_s = 1000.0;     // channel synthesis rate
    double f_r = 50.0;       // CSI reading rate
    double f_b = 0.0;        // sensor broadcast rate; 0 follows f_r
    double v_max = 10.0;     // flight envelope limit

    RadioParams radio;
    double snr_noise_db = 0.5;       // per-reading SNR measurement jitter
    int n_antennas = 2;
    double antenna_spacing_m = 0.0;  // 0 = lambda/2

    std::vector<Vec3> waypoints{{0.0, 0.0, 10.0}, {20.0, 0.0, 10.0}};
    std::vector<double> speeds{2.0};

    std::vector<ClientConfig> clients{{{-3.0, 2.0, 1.0}}, {{23.0, -2.0, 1.0}}};
    std::vector<Reflector> reflectors;

    std::vector<PolicyKind> arms{PolicyKind::sensor_assisted, PolicyKind::stale_csi,
                                 PolicyKind::single_user, PolicyKind::oracle};
    std::vector<RateEntry> rate_table;  // empty = default table
    double packet_bits = 12000.0;
    double backoff_threshold_db = kBackoffThresholdDb;
    double contention_floor_db = kContentionFloorDb;
    BroadcastNoise broadcast_noise;
    bool sampled_outcomes = false;  // Bernoulli packet draws in the round log

    double broadcast_rate() const { return f_b > 0.0 ? f_b : f_r; }
    RateTable table() const {
        return rate_table.empty() ? RateTable::default_table() : RateTable(rate_table);
    }
};

// Throws ConfigError describing the first violated constraint.
void validate(const ScenarioConfig& cfg);

struct ArmSummary {
    PolicyKind kind = PolicyKind::sensor_assisted;
    double mean_throughput_mbps = 0.0;          // airtime overheads applied
    std::vector<double> per_client_mbps;
    double snr_rmse_db = std::numeric_limits<double>::quiet_NaN();
    double dir_rmse_deg = std::numeric_limits<double>::quiet_NaN();
    double fade_interval_err_pct = std::numeric_limits<double>::quiet_NaN();
    long rounds = 0;
};

struct ScenarioResult {
    std::vector<ArmSummary> arms;
    double duration_s = 0.0;
    std::uint64_t seed = 0;

    const ArmSummary& arm(PolicyKind k) const;
};

// Run one scenario. When `rounds_out` is non-null, one row per
// (round, arm, joined client) is streamed to it as CSV.
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* rounds_out = nullptr);

enum class SweepAxis { velocity, distance, csi_rate, reflectors, client_motion };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepRow {
    std::string scenario;
    std::string axis = "single";
    double value = 0.0;
    std::uint64_t seed = 0;
    ArmSummary summary;
    double dn_mean_abs_db = std::numeric_limits<double>::quiet_NaN();
};

// One run per (value, seed) with all arms paired on the same seed.
std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis,
                            const std::vector<double>& values,
                            const std::vector<std::uint64_t>& seeds);

std::vector<SweepRow> rows_from_result(const ScenarioConfig& cfg, const ScenarioResult& res);

// CSV: header row, comma-delimited, dot decimals; one row per
// arm x value x seed. Gain columns relate arms within the same (value, seed).
void emit_summary_csv(const std::vector<SweepRow>& rows, std::ostream& os);
// Plain-text digest: per (axis value, arm) means across seeds, gains as the
// arithmetic mean of per-seed ratios.
void emit_text_report(const std::vector<SweepRow>& rows, std::ostream& os);

// Applies one sweep-axis transform to a config (exposed for tests).
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

} // namespace airrate
