// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace airrate {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

Trajectory build_trajectory(const ScenarioConfig& cfg) {
    return Trajectory(cfg.waypoints, cfg.speeds);
}

Trajectory random_walk(const Vec3& home, double box_half, double v_max, double min_duration,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-box_half, box_half);
    std::uniform_real_distribution<double> spd(0.3 * v_max, v_max);

    std::vector<Vec3> wps{home};
    std::vector<double> speeds;
    double covered = 0.0;
    while (covered < min_duration) {
        Vec3 next{home.x + pos(rng), home.y + pos(rng), home.z};
        if (distance(next, wps.back()) < 0.1) continue;
        const double v = spd(rng);
        covered += distance(next, wps.back()) / v;
        wps.push_back(next);
        speeds.push_back(v);
    }
    return Trajectory(wps, speeds);
}

std::vector<ClientSite> build_clients(const ScenarioConfig& cfg) {
    std::vector<ClientSite> sites;
    for (std::size_t i = 0; i < cfg.clients.size(); ++i) {
        const ClientConfig& cc = cfg.clients[i];
        ClientSite s;
        s.position = cc.position;
        s.nlos = cc.nlos;
        s.nlos_penalty_db = cc.nlos_penalty_db;
        if (cc.moving && cc.walk_speed_mps > 0.0)
            s.walk = random_walk(cc.position, cc.walk_box_m, cc.walk_speed_mps,
                                 cfg.duration_s + 1.0, mix_seed(cfg.seed, 100 + i));
        sites.push_back(std::move(s));
    }
    return sites;
}

double angle_error_deg(const Cvec& est, const Cvec& truth) {
    const double c2 = cos_sq_theta(std::span<const std::complex<double>>(est),
                                   std::span<const std::complex<double>>(truth));
    return std::acos(std::sqrt(std::clamp(c2, 0.0, 1.0))) * 180.0 / M_PI;
}

struct ErrStats {
    double sq_sum = 0.0;
    long n = 0;
    void add(double e) {
        sq_sum += e * e;
        ++n;
    }
    double rmse() const {
        return n ? std::sqrt(sq_sum / n) : std::numeric_limits<double>::quiet_NaN();
    }
};

// Mean relative error between forecast intervals and the intervals actually
// separating deep-fade minima of the clean synthesized SNR.
double fade_interval_error_pct(const std::vector<ClientChannelSeries>& truth,
                               const std::vector<std::vector<FadingForecast>>& forecasts,
                               double f_s) {
    double err_sum = 0.0;
    long n = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const auto& samples = truth[k].samples;
        std::vector<double> clean(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            clean[i] = 20.0 * std::log10(std::abs(samples[i].h[0]));
        const auto minima = extract_fade_minima(clean);
        if (minima.size() < 2) continue;
        const auto& fc = forecasts[k];
        for (std::size_t j = 0; j + 1 < minima.size(); ++j) {
            const double t0 = minima[j] / f_s;
            const double t1 = minima[j + 1] / f_s;
            // First forecast formed after the interval opened.
            auto it = std::find_if(fc.begin(), fc.end(),
                                   [&](const FadingForecast& f) { return f.t >= t0; });
            if (it == fc.end() || !it->fading_expected() || it->t >= t1) continue;
            err_sum += std::abs(it->t_fading - (t1 - t0)) / (t1 - t0);
            ++n;
        }
    }
    return n ? 100.0 * err_sum / n : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

void validate(const ScenarioConfig& cfg) {
    if (cfg.duration_s < 0.0) throw ConfigError("duration must be >= 0");
    if (!(cfg.t_pkt_s > 0.0)) throw ConfigError("round length t_pkt must be > 0");
    if (!(cfg.f_s > 0.0) || !(cfg.f_r > 0.0)) throw ConfigError("rates must be > 0");
    if (cfg.f_r > cfg.f_s) throw ConfigError("CSI reading rate exceeds synthesis rate");
    if (cfg.arms.empty()) throw ConfigError("no policy arms configured");
    if (cfg.clients.empty()) throw ConfigError("no clients configured");
    if (cfg.n_antennas < 2 || cfg.n_antennas > 3)
        throw ConfigError("antenna count must be 2 or 3");
    try {
        cfg.radio.validate();
        cfg.table();
        const Trajectory traj = build_trajectory(cfg);
        if (traj.min_altitude() < 2.0 || traj.max_altitude() > 120.0)
            throw ConfigError("trajectory altitude outside [2, 120] m");
        if (traj.max_speed() > cfg.v_max)
            throw ConfigError("trajectory speed exceeds the configured limit");
        if (cfg.duration_s > 0.0 && traj.duration() + 1e-9 < cfg.duration_s)
            throw ConfigError("trajectory ends before the scenario duration");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (const auto& c : cfg.clients) {
        if (!(c.position.z > 0.0)) throw ConfigError("client height must be > 0");
        if (c.nlos && (c.nlos_penalty_db < 20.0 || c.nlos_penalty_db > 30.0))
            throw ConfigError("NLOS penalty must be within [20, 30] dB");
    }
    for (const auto& r : cfg.reflectors) {
        if (!(r.k > 1.0)) throw ConfigError("reflector ratio factor must be > 1");
        if (!(r.rho > -1.0 && r.rho < 0.0))
            throw ConfigError("reflector coefficient must be in (-1, 0)");
    }
}

const ArmSummary& ScenarioResult::arm(PolicyKind k) const {
    for (const auto& a : arms)
        if (a.kind == k) return a;
    throw std::out_of_range("arm not present: " + to_string(k));
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* rounds_out) {
    validate(cfg);

    ScenarioResult result;
    result.duration_s = cfg.duration_s;
    result.seed = cfg.seed;
    for (PolicyKind k : cfg.arms) {
        ArmSummary s;
        s.kind = k;
        s.per_client_mbps.assign(cfg.clients.size(), 0.0);
        result.arms.push_back(std::move(s));
    }
    if (cfg.duration_s == 0.0) return result;

    const Trajectory traj = build_trajectory(cfg);
    const std::vector<ClientSite> clients = build_clients(cfg);
    const double spacing =
        cfg.antenna_spacing_m > 0.0 ? cfg.antenna_spacing_m : cfg.radio.wavelength_m / 2.0;
    const AntennaArray array = AntennaArray::uniform_x(cfg.n_antennas, spacing);
    const RateTable table = cfg.table();
    const double f_b = cfg.broadcast_rate();

    SynthesisConfig synth;
    synth.f_s = cfg.f_s;
    synth.duration_s = cfg.duration_s;
    synth.snr_noise_db = cfg.snr_noise_db;
    synth.seed = mix_seed(cfg.seed, 1);
    synth.reflectors = cfg.reflectors;
    const auto series = synthesize_csi(traj, clients, array, cfg.radio, synth);

    const auto broadcasts = broadcast_stream(traj, f_b, cfg.broadcast_noise, mix_seed(cfg.seed, 2));

    // Forecasts per client per broadcast, from ground-truth relative state.
    std::vector<std::vector<FadingForecast>> forecasts(clients.size());
    for (std::size_t k = 0; k < clients.size(); ++k) {
        forecasts[k].reserve(broadcasts.size());
        for (const auto& b : broadcasts)
            forecasts[k].push_back(predict_fading_interval(b, clients[k], cfg.radio.wavelength_m,
                                                           clients[k].velocity_at(b.t)));
    }

    const bool wants_sensor =
        std::find(cfg.arms.begin(), cfg.arms.end(), PolicyKind::sensor_assisted) !=
        cfg.arms.end();

    std::vector<Predictor> predictors;
    for (std::size_t k = 0; k < clients.size(); ++k)
        predictors.emplace_back(cfg.n_antennas);

    std::mt19937_64 order_rng(mix_seed(cfg.seed, 3));
    std::mt19937_64 sample_rng(mix_seed(cfg.seed, 4));

    const long n_rounds = static_cast<long>(std::floor(cfg.duration_s / cfg.t_pkt_s));
    std::size_t next_reading = 0;
    std::size_t next_broadcast = 0;

    std::vector<ClientRoundInput> inputs(clients.size());
    std::vector<ErrStats> snr_err(cfg.arms.size());
    std::vector<ErrStats> dir_err(cfg.arms.size());
    std::vector<std::vector<double>> bits_acc(cfg.arms.size(),
                                              std::vector<double>(clients.size(), 0.0));

    if (rounds_out)
        *rounds_out << "round,t,arm,client,rate_mbps,power_scale_db,est_snr_proj_db,"
                       "true_snr_proj_db,p_bit,success_prob,packet_ok,expected_bits\n";

    for (long round = 0; round < n_rounds; ++round) {
        const double t = round * cfg.t_pkt_s;

        // Sensor broadcasts due by now refresh every client's forecast.
        while (next_broadcast < broadcasts.size() && broadcasts[next_broadcast].t <= t) {
            if (wants_sensor)
                for (std::size_t k = 0; k < clients.size(); ++k)
                    predictors[k].set_forecast(forecasts[k][next_broadcast]);
            ++next_broadcast;
        }
        // CSI readings due by now.
        while (true) {
            const double t_read = next_reading / cfg.f_r;
            if (t_read > t + 1e-12 || t_read > cfg.duration_s) break;
#ifdef AIRRATE_DEBUG_SNR
            if (t < 0.12) std::fprintf(stderr, "DELIVER t=%.4f t_read=%.4f k=%zu\n", t, t_read, next_reading);
#endif
            const std::size_t idx =
                std::min(static_cast<std::size_t>(std::lround(t_read * cfg.f_s)),
                         series[0].samples.size() - 1);
            for (std::size_t k = 0; k < clients.size(); ++k) {
                const ChannelSample& s = series[k].samples[idx];
                inputs[k].last_sample = s;
                if (wants_sensor) predictors[k].ingest(s);
            }
            ++next_reading;
        }

        const std::size_t true_idx = std::min(
            static_cast<std::size_t>(std::lround(t * cfg.f_s)), series[0].samples.size() - 1);
        for (std::size_t k = 0; k < clients.size(); ++k) {
            inputs[k].true_channel = series[k].samples[true_idx].h;
            if (wants_sensor && predictors[k].has_data())
                inputs[k].prediction = predictors[k].predict(t);
            else
                inputs[k].prediction.reset();
        }

        RoundContext ctx;
        ctx.inputs = &inputs;
        ctx.round_index = round;
        ctx.table = &table;
        ctx.bits = cfg.packet_bits;
        ctx.snr_scale = cfg.radio.snr_scale();
        ctx.max_streams = cfg.n_antennas;
        ctx.backoff_threshold_db = cfg.backoff_threshold_db;
        ctx.contention_floor_db = cfg.contention_floor_db;
        ctx.join_order.resize(clients.size());
        std::iota(ctx.join_order.begin(), ctx.join_order.end(), 0);
        std::shuffle(ctx.join_order.begin(), ctx.join_order.end(), order_rng);

        for (std::size_t a = 0; a < cfg.arms.size(); ++a) {
            const PolicyKind kind = cfg.arms[a];
            const RoundDecision decision = decide_round(kind, ctx);

            std::vector<SicClient> joined;
            std::vector<int> ids;
            for (int client : ctx.join_order) {
                const ClientDecision& c = decision.clients[client];
                if (!c.join) continue;
                joined.push_back({inputs[client].true_channel, c.power_scale_db, c.rate_index});
                ids.push_back(client);
            }
            const auto outcomes = sic_decode_outcomes(
                joined, table, cfg.packet_bits, ctx.snr_scale,
                cfg.sampled_outcomes ? &sample_rng : nullptr);

            for (std::size_t j = 0; j < joined.size(); ++j) {
                const int client = ids[j];
                const ClientDecision& c = decision.clients[client];
                const double expected_bits =
                    table[c.rate_index].mbps * outcomes[j].success_prob * cfg.t_pkt_s;
                bits_acc[a][client] += expected_bits;
                if (rounds_out) {
                    char line[256];
                    std::snprintf(line, sizeof line,
                                  "%ld,%.6f,%s,%d,%g,%.4f,%.4f,%.4f,%.6e,%.6e,%d,%.6f\n", round,
                                  t, to_string(cfg.arms[a]).c_str(), client,
                                  table[c.rate_index].mbps, c.power_scale_db, c.est_snr_proj_db,
                                  outcomes[j].snr_proj_db, outcomes[j].p_bit,
                                  outcomes[j].success_prob, outcomes[j].packet_ok ? 1 : 0,
                                  expected_bits);
                    *rounds_out << line;
                }
            }

            // Estimation quality, for the arms that estimate.
            if (kind == PolicyKind::sensor_assisted || kind == PolicyKind::stale_csi) {
                for (std::size_t k = 0; k < clients.size(); ++k) {
                    const ClientDecision& c = decision.clients[k];
                    if (!std::isfinite(c.est_snr_sum_db)) continue;
                    double norm2 = 0.0;
                    for (const auto& g : inputs[k].true_channel) norm2 += std::norm(g);
                    const double true_sum_db = 10.0 * std::log10(norm2 * ctx.snr_scale);
                    snr_err[a].add(c.est_snr_sum_db - c.power_scale_db - true_sum_db);
#ifdef AIRRATE_DEBUG_SNR
                    if (std::abs(c.est_snr_sum_db - c.power_scale_db - true_sum_db) > 10.0 &&
                        kind == PolicyKind::sensor_assisted)
                        std::fprintf(stderr,
                                     "BAD t=%.4f client=%zu est=%.2f true=%.2f fb=%d last=%.4f "
                                     "nbuf=%zu fade=%d stale_snr=%.2f\n",
                                     t, k, c.est_snr_sum_db - c.power_scale_db, true_sum_db,
                                     inputs[k].prediction ? inputs[k].prediction->fallback : -1,
                                     predictors[k].last_sample_time(), predictors[k].buffered(0),
                                     (int)predictors[k].in_fade(0),
                                     inputs[k].last_sample ? inputs[k].last_sample->snr_sum_db()
                                                           : -99.0),
                            std::fprintf(stderr, "     forecast T=%.4f axis=%d vp=%.3f dd=%.3f\n",
                                     predictors[k].forecast() ? predictors[k].forecast()->t_fading : -1,
                                     predictors[k].forecast() ? (int)predictors[k].forecast()->axis : -1,
                                     predictors[k].forecast() ? predictors[k].forecast()->v_prime : -1,
                                     predictors[k].forecast() ? predictors[k].forecast()->delta_d_d : -1);
#endif

                    if (!c.announced.components.empty()) {
                        const auto truth = ChannelDirection::from_gains(inputs[k].true_channel);
                        dir_err[a].add(
                            angle_error_deg(c.announced.components, truth.components));
                    }
                }
            }
        }
    }

    for (std::size_t a = 0; a < cfg.arms.size(); ++a) {
        ArmSummary& s = result.arms[a];
        s.rounds = n_rounds;
        double discount = 1.0;
        if (cfg.arms[a] != PolicyKind::single_user)
            discount *= 0.96;  // in-band channel-direction announcements
        if (cfg.arms[a] == PolicyKind::sensor_assisted)
            discount *= 1.0 - broadcast_airtime_fraction(f_b);
        double total = 0.0;
        for (std::size_t k = 0; k < clients.size(); ++k) {
            s.per_client_mbps[k] = discount * bits_acc[a][k] / cfg.duration_s;
            total += s.per_client_mbps[k];
        }
        s.mean_throughput_mbps = total;
        s.snr_rmse_db = snr_err[a].rmse();
        s.dir_rmse_deg = dir_err[a].rmse();
        if (cfg.arms[a] == PolicyKind::sensor_assisted)
            s.fade_interval_err_pct = fade_interval_error_pct(series, forecasts, cfg.f_s);
    }
    return result;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "velocity") return SweepAxis::velocity;
    if (name == "distance") return SweepAxis::distance;
    if (name == "csi_rate") return SweepAxis::csi_rate;
    if (name == "reflectors") return SweepAxis::reflectors;
    if (name == "client_motion") return SweepAxis::client_motion;
    throw ConfigError("unknown sweep axis: " + name);
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::velocity: return "velocity";
        case SweepAxis::distance: return "distance";
        case SweepAxis::csi_rate: return "csi_rate";
        case SweepAxis::reflectors: return "reflectors";
        case SweepAxis::client_motion: return "client_motion";
    }
    return "unknown";
}

namespace {

// Ping-pong the waypoint sequence until the path lasts at least `duration`.
void extend_by_bouncing(std::vector<Vec3>& wps, std::vector<double>& speeds, double duration) {
    auto total_time = [&] {
        double t = 0.0;
        for (std::size_t i = 0; i + 1 < wps.size(); ++i)
            t += distance(wps[i], wps[i + 1]) / speeds[i];
        return t;
    };
    const std::vector<Vec3> base_w = wps;
    const std::vector<double> base_s = speeds;
    bool forward = false;  // the first appended pass retraces backwards
    while (total_time() < duration && wps.size() < 200000) {
        if (forward) {
            for (std::size_t i = 1; i < base_w.size(); ++i) {
                wps.push_back(base_w[i]);
                speeds.push_back(base_s[i - 1]);
            }
        } else {
            for (std::size_t i = base_w.size() - 1; i-- > 0;) {
                wps.push_back(base_w[i]);
                speeds.push_back(base_s[i]);
            }
        }
        forward = !forward;
    }
}

Vec3 client_centroid(const ScenarioConfig& cfg) {
    Vec3 c;
    for (const auto& cl : cfg.clients) c += cl.position;
    return c / static_cast<double>(cfg.clients.size());
}

double mean_distance(const ScenarioConfig& cfg, double dz) {
    const Trajectory traj = Trajectory(cfg.waypoints, cfg.speeds);
    const Vec3 centroid = client_centroid(cfg);
    const double horizon = std::min(traj.duration(), cfg.duration_s);
    double acc = 0.0;
    int n = 0;
    for (double t = 0.0; t <= horizon; t += horizon / 200.0) {
        Vec3 p = traj.sample(std::min(t, traj.duration())).position;
        p.z += dz;
        acc += distance(p, centroid);
        ++n;
    }
    return acc / n;
}

} // namespace

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
    ScenarioConfig cfg = base;
    switch (axis) {
        case SweepAxis::velocity: {
            if (value <= 0.0) {
                // Hover at the midpoint of the configured path.
                Vec3 mid = cfg.waypoints[cfg.waypoints.size() / 2];
                const Trajectory h = Trajectory::hover(mid, cfg.duration_s + 1.0);
                cfg.waypoints = h.waypoints();
                cfg.speeds = h.speeds();
            } else {
                for (auto& s : cfg.speeds) s = value;
                extend_by_bouncing(cfg.waypoints, cfg.speeds, cfg.duration_s + 1e-6);
            }
            break;
        }
        case SweepAxis::distance: {
            // Shift the trajectory altitude until the time-mean link
            // distance hits the requested value.
            double lo = -Trajectory(cfg.waypoints, cfg.speeds).min_altitude() + 2.0;
            double hi = 120.0 - Trajectory(cfg.waypoints, cfg.speeds).max_altitude();
            for (int i = 0; i < 60; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (mean_distance(cfg, mid) < value)
                    lo = mid;
                else
                    hi = mid;
            }
            const double dz = 0.5 * (lo + hi);
            for (auto& w : cfg.waypoints) w.z += dz;
            break;
        }
        case SweepAxis::csi_rate:
            cfg.f_r = value;
            if (base.f_b <= 0.0) cfg.f_b = 0.0;  // keep following f_r
            break;
        case SweepAxis::reflectors:
            cfg.reflectors = {Reflector{value, -0.7}};
            break;
        case SweepAxis::client_motion:
            for (auto& c : cfg.clients) {
                c.moving = value > 0.0;
                c.walk_speed_mps = value;
            }
            break;
    }
    return cfg;
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis,
                            const std::vector<double>& values,
                            const std::vector<std::uint64_t>& seeds) {
    std::vector<SweepRow> rows;
    for (double value : values) {
        ScenarioConfig cfg = apply_axis(base, axis, value);
        double dn = std::numeric_limits<double>::quiet_NaN();
        if (axis == SweepAxis::reflectors)
            dn = mean_abs_n_ray_deviation_db(cfg.reflectors, cfg.radio);
        for (std::uint64_t seed : seeds) {
            cfg.seed = seed;
            const ScenarioResult res = run_scenario(cfg);
            for (const auto& arm : res.arms) {
                SweepRow row;
                row.scenario = cfg.name;
                row.axis = to_string(axis);
                row.value = value;
                row.seed = seed;
                row.summary = arm;
                row.dn_mean_abs_db = dn;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<SweepRow> rows_from_result(const ScenarioConfig& cfg, const ScenarioResult& res) {
    std::vector<SweepRow> rows;
    for (const auto& arm : res.arms) {
        SweepRow row;
        row.scenario = cfg.name;
        row.axis = "single";
        row.value = 0.0;
        row.seed = cfg.seed;
        row.summary = arm;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

const SweepRow* find_arm(const std::vector<SweepRow>& rows, const SweepRow& like,
                         PolicyKind kind) {
    for (const auto& r : rows)
        if (r.axis == like.axis && r.value == like.value && r.seed == like.seed &&
            r.scenario == like.scenario && r.summary.kind == kind)
            return &r;
    return nullptr;
}

} // namespace

void emit_summary_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "schema,scenario,axis,value,seed,arm,mean_throughput_mbps,per_client_mbps,"
          "snr_rmse_db,dir_rmse_deg,fade_interval_err_pct,gain_vs_stale_csi,"
          "gain_vs_single_user,ratio_to_oracle,dn_mean_abs_db\n";
    for (const auto& r : rows) {
        const SweepRow* stale = find_arm(rows, r, PolicyKind::stale_csi);
        const SweepRow* single = find_arm(rows, r, PolicyKind::single_user);
        const SweepRow* oracle = find_arm(rows, r, PolicyKind::oracle);
        auto ratio = [&](const SweepRow* denom) {
            if (!denom || denom->summary.mean_throughput_mbps <= 0.0)
                return std::numeric_limits<double>::quiet_NaN();
            return r.summary.mean_throughput_mbps / denom->summary.mean_throughput_mbps;
        };
        std::string per_client;
        for (std::size_t i = 0; i < r.summary.per_client_mbps.size(); ++i) {
            if (i) per_client += ';';
            per_client += fmt(r.summary.per_client_mbps[i]);
        }
        os << "sweep.v1," << r.scenario << ',' << r.axis << ',' << fmt(r.value) << ',' << r.seed
           << ',' << to_string(r.summary.kind) << ',' << fmt(r.summary.mean_throughput_mbps)
           << ',' << per_client << ',' << fmt(r.summary.snr_rmse_db) << ','
           << fmt(r.summary.dir_rmse_deg) << ',' << fmt(r.summary.fade_interval_err_pct) << ','
           << fmt(ratio(stale)) << ',' << fmt(ratio(single)) << ',' << fmt(ratio(oracle)) << ','
           << fmt(r.dn_mean_abs_db) << '\n';
    }
}

void emit_text_report(const std::vector<SweepRow>& rows, std::ostream& os) {
    // Keyed by (axis, value, arm); gains averaged over per-seed ratios.
    std::map<std::tuple<std::string, double, std::string>, std::vector<const SweepRow*>> groups;
    for (const auto& r : rows)
        groups[{r.axis, r.value, to_string(r.summary.kind)}].push_back(&r);

    os << "axis value arm n mean_mbps gain_vs_stale gain_vs_single ratio_to_oracle\n";
    for (const auto& [key, grp] : groups) {
        double mbps = 0.0, g_stale = 0.0, g_single = 0.0, g_oracle = 0.0;
        int n_stale = 0, n_single = 0, n_oracle = 0;
        for (const SweepRow* r : grp) {
            mbps += r->summary.mean_throughput_mbps;
            if (const SweepRow* s = find_arm(rows, *r, PolicyKind::stale_csi);
                s && s->summary.mean_throughput_mbps > 0) {
                g_stale += r->summary.mean_throughput_mbps / s->summary.mean_throughput_mbps;
                ++n_stale;
            }
            if (const SweepRow* s = find_arm(rows, *r, PolicyKind::single_user);
                s && s->summary.mean_throughput_mbps > 0) {
                g_single += r->summary.mean_throughput_mbps / s->summary.mean_throughput_mbps;
                ++n_single;
            }
            if (const SweepRow* s = find_arm(rows, *r, PolicyKind::oracle);
                s && s->summary.mean_throughput_mbps > 0) {
                g_oracle += r->summary.mean_throughput_mbps / s->summary.mean_throughput_mbps;
                ++n_oracle;
            }
        }
        char line[256];
        std::snprintf(line, sizeof line, "%s %g %s %zu %.4f %s %s %s\n",
                      std::get<0>(key).c_str(), std::get<1>(key), std::get<2>(key).c_str(),
                      grp.size(), mbps / grp.size(),
                      n_stale ? fmt(g_stale / n_stale).c_str() : "-",
                      n_single ? fmt(g_single / n_single).c_str() : "-",
                      n_oracle ? fmt(g_oracle / n_oracle).c_str() : "-");
        os << line;
    }
}

} // namespace airrate
