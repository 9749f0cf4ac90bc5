// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace airrate {

namespace {

double wrap_to_pi(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    return a - M_PI;
}

} // namespace

double ChannelSample::snr_sum_db() const {
    double lin = 0.0;
    for (double s : snr_db) lin += std::pow(10.0, s / 10.0);
    return 10.0 * std::log10(lin);
}

double ChannelSample::snr_max_db() const {
    return *std::max_element(snr_db.begin(), snr_db.end());
}

double required_synthesis_rate(double max_speed_mps, double wavelength_m) {
    // Keeps per-step phase-difference increments well under pi even through
    // the steep ramp around a deep fade.
    return 4.0 * max_speed_mps / wavelength_m;
}

std::vector<ClientChannelSeries> synthesize_csi(const Trajectory& traj,
                                                const std::vector<ClientSite>& clients,
                                                const AntennaArray& array,
                                                const RadioParams& params,
                                                const SynthesisConfig& cfg) {
    params.validate();
    array.validate(params.wavelength_m);
    if (clients.empty()) throw std::invalid_argument("no clients");
    if (!(cfg.f_s > 0.0)) throw std::invalid_argument("synthesis rate must be > 0");

    double v_max = traj.max_speed();
    for (const auto& c : clients)
        if (c.walk) v_max += c.walk->max_speed();
    const double f_req = required_synthesis_rate(v_max, params.wavelength_m);
    if (cfg.f_s < f_req) {
        std::ostringstream msg;
        msg << "synthesis rate " << cfg.f_s << " Hz below required " << f_req
            << " Hz for max relative speed " << v_max << " m/s";
        throw std::invalid_argument(msg.str());
    }

    const double duration = cfg.duration_s > 0.0 ? cfg.duration_s : traj.duration();
    if (duration > traj.duration() * (1.0 + 1e-9) + 1e-9)
        throw std::invalid_argument("requested duration exceeds trajectory duration");
    const std::size_t n_steps = static_cast<std::size_t>(std::floor(duration * cfg.f_s)) + 1;
    const int m = array.size();
    const double snr_gain = params.snr_scale();

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<ClientChannelSeries> out(clients.size());
    for (std::size_t k = 0; k < clients.size(); ++k) {
        out[k].client = static_cast<int>(k);
        out[k].samples.reserve(n_steps);
    }

    std::vector<double> prev_raw(clients.size() * m, 0.0);
    std::vector<double> prev_unwrapped(clients.size() * m, 0.0);

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = std::min(static_cast<double>(i) / cfg.f_s, traj.duration());
        const FlightState uav = traj.sample(t);

        for (std::size_t k = 0; k < clients.size(); ++k) {
            const ClientSite& site = clients[k];
            const Vec3 cpos = site.position_at(t);
            ChannelSample s;
            s.t = t;
            s.h.resize(m);
            s.snr_db.resize(m);
            s.delta_phi.assign(m, 0.0);

            const double nlos_scale =
                site.nlos ? std::pow(10.0, -site.nlos_penalty_db / 20.0) : 1.0;

            for (int a = 0; a < m; ++a) {
                const Vec3 apos = uav.position + array.offsets[a];
                const PathGeometry geo = geometry_paths(apos, cpos);
                std::complex<double> h =
                    cfg.reflectors.empty()
                        ? two_ray_gain(geo.d_d, geo.d_r, params)
                        : n_ray_gain(geo.d_d, geo.gamma, cfg.reflectors, params);
                h *= nlos_scale;
                s.h[a] = h;
                double snr = 10.0 * std::log10(std::norm(h) * snr_gain);
                if (cfg.snr_noise_db > 0.0) snr += cfg.snr_noise_db * gauss(rng);
                s.snr_db[a] = snr;
            }

            for (int a = 1; a < m; ++a) {
                const std::size_t idx = k * m + a;
                const double raw = std::arg(s.h[a]) - std::arg(s.h[0]);
                if (i == 0) {
                    prev_unwrapped[idx] = wrap_to_pi(raw);
                } else {
                    prev_unwrapped[idx] += wrap_to_pi(raw - prev_raw[idx]);
                }
                prev_raw[idx] = raw;
                s.delta_phi[a] = prev_unwrapped[idx];
            }

            out[k].samples.push_back(std::move(s));
        }
    }
    return out;
}

void write_trace(std::ostream& os, const std::vector<ClientChannelSeries>& series) {
    os << "t,client,antenna,re,im,snr_db\n";
    char line[160];
    for (const auto& cs : series) {
        for (const auto& s : cs.samples) {
            for (std::size_t a = 0; a < s.h.size(); ++a) {
                std::snprintf(line, sizeof line, "%.9f,%d,%zu,%.12e,%.12e,%.6f\n", s.t, cs.client,
                              a, s.h[a].real(), s.h[a].imag(), s.snr_db[a]);
                os << line;
            }
        }
    }
}

void write_trace_file(const std::string& path, const std::vector<ClientChannelSeries>& series) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw TraceError("cannot open trace file for writing: " + path);
    write_trace(f, series);
    if (!f) throw TraceError("write failure on trace file: " + path);
}

std::vector<ClientChannelSeries> read_trace(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw TraceError("empty trace");
    if (line.rfind("t,client,antenna", 0) != 0)
        throw TraceError("unrecognized trace header: " + line);

    std::vector<ClientChannelSeries> series;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        double t, re, im, snr;
        int client, antenna;
        if (std::sscanf(line.c_str(), "%lf,%d,%d,%lf,%lf,%lf", &t, &client, &antenna, &re, &im,
                        &snr) != 6)
            throw TraceError("malformed trace row at line " + std::to_string(line_no));
        if (client < 0 || antenna < 0)
            throw TraceError("negative id in trace at line " + std::to_string(line_no));
        if (static_cast<std::size_t>(client) >= series.size())
            series.resize(client + 1);
        auto& cs = series[client];
        cs.client = client;
        if (cs.samples.empty() || cs.samples.back().t != t) {
            ChannelSample s;
            s.t = t;
            cs.samples.push_back(std::move(s));
        }
        auto& s = cs.samples.back();
        if (static_cast<std::size_t>(antenna) >= s.h.size()) {
            s.h.resize(antenna + 1);
            s.snr_db.resize(antenna + 1);
            s.delta_phi.resize(antenna + 1, 0.0);
        }
        s.h[antenna] = {re, im};
        s.snr_db[antenna] = snr;
    }

    // Rebuild unwrapped phase differences from the raw gains.
    for (auto& cs : series) {
        std::vector<double> prev_raw, unwrapped;
        for (std::size_t i = 0; i < cs.samples.size(); ++i) {
            auto& s = cs.samples[i];
            if (prev_raw.empty()) {
                prev_raw.assign(s.h.size(), 0.0);
                unwrapped.assign(s.h.size(), 0.0);
            }
            for (std::size_t a = 1; a < s.h.size(); ++a) {
                const double raw = std::arg(s.h[a]) - std::arg(s.h[0]);
                if (i == 0)
                    unwrapped[a] = wrap_to_pi(raw);
                else
                    unwrapped[a] += wrap_to_pi(raw - prev_raw[a]);
                prev_raw[a] = raw;
                s.delta_phi[a] = unwrapped[a];
            }
        }
    }
    return series;
}

std::vector<ClientChannelSeries> read_trace_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw TraceError("cannot open trace file: " + path);
    return read_trace(f);
}

std::vector<std::size_t> extract_fade_minima(const std::vector<double>& snr_db,
                                             double prominence_db) {
    std::vector<std::size_t> minima;
    if (snr_db.size() < 3) return minima;

    std::vector<double> sorted = snr_db;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];

    // Running maxima between candidate minima give the flank heights.
    for (std::size_t i = 1; i + 1 < snr_db.size(); ++i) {
        if (!(snr_db[i] <= snr_db[i - 1] && snr_db[i] < snr_db[i + 1])) continue;
        if (snr_db[i] >= median) continue;
        double left = -1e300;
        for (std::size_t j = i; j-- > 0;) {
            left = std::max(left, snr_db[j]);
            if (left >= snr_db[i] + prominence_db) break;
            if (snr_db[j] < snr_db[i]) break;  // a deeper valley ends the flank
        }
        double right = -1e300;
        for (std::size_t j = i + 1; j < snr_db.size(); ++j) {
            right = std::max(right, snr_db[j]);
            if (right >= snr_db[i] + prominence_db) break;
            if (snr_db[j] < snr_db[i]) break;
        }
        if (left >= snr_db[i] + prominence_db && right >= snr_db[i] + prominence_db)
            minima.push_back(i);
    }
    return minima;
}

} // namespace airrate
