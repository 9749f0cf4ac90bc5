// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation
//
// End-to-end acceptance suite. Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails.

#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "airrate/config.hpp"
#include "airrate/harness.hpp"

using namespace airrate;

namespace {

int g_failures = 0;
std::string g_detail;

void check(bool ok, const std::string& name) {
    std::printf("%s  %s", ok ? "PASS" : "FAIL", name.c_str());
    if (!g_detail.empty()) std::printf("  [%s]", g_detail.c_str());
    std::printf("\n");
    std::fflush(stdout);
    if (!ok) ++g_failures;
    g_detail.clear();
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- 1
void projection_math() {
    const double d45 = project_snr(20.0, 0.5).delta_snr_db;
    const double d90 = project_snr(20.0, 0.0).delta_snr_db;
    g_detail = fmt("dSNR(45)=%.4f dB, dSNR(90)=%.17g dB", d45, d90);
    check(std::abs(d45 - 3.01) <= 0.01 && d90 == 0.0, "1 projection math");
}

// ---------------------------------------------------------------- 2
void phase_derivative_theory() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> du(4.0, 20.0);
    std::uniform_real_distribution<double> dd(6.0, 40.0);
    std::uniform_real_distribution<double> rho(-0.99, -0.5);
    const double lambda = 0.06;

    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const AxisGeometry g{rep % 2 ? FlightAxis::vertical : FlightAxis::horizontal, du(rng),
                             1.0};
        const double d = std::max(dd(rng), g.min_distance() + 1.0);
        const double r = rho(rng);
        const double h = 1e-5;
        const double fd =
            (two_ray_phase(g, d + h, lambda, r) - two_ray_phase(g, d - h, lambda, r)) / (2 * h);
        const double exact = two_ray_phase_derivative(g, d, lambda, r);
        worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
    }

    bool branches_ok = true;
    const AxisGeometry g{FlightAxis::horizontal, 10.0, 1.0};
    const double base = -2.0 * M_PI / lambda;
    const FadeSeries cons = fade_positions(g, lambda, 9.5, 30.0, true);
    const FadeSeries dest = fade_positions(g, lambda, 9.5, 30.0, false);
    for (const auto& pt : cons.points) {
        const double v = two_ray_phase_derivative(g, pt.d_d, lambda, -0.95);
        if (!(v > base && v < base * (1.0 - 1.0 / (g.fixed + 1.0)))) branches_ok = false;
    }
    for (const auto& pt : dest.points) {
        const double v = two_ray_phase_derivative(g, pt.d_d, lambda, -0.95);
        if (!(v < base)) branches_ok = false;
    }
    g_detail = fmt("max FD rel err = %.2e, branch ranges %s", worst,
                   branches_ok ? "hold" : "violated");
    check(worst < 1e-4 && branches_ok, "2 phase-derivative theory");
}

// ---------------------------------------------------------------- 3
void fade_positions_vs_brute_force() {
    RadioParams params;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> du(4.0, 18.0);
    std::uniform_real_distribution<double> dh(2.0, 12.0);
    std::uniform_real_distribution<double> dlo(6.0, 30.0);
    const double lambda = params.wavelength_m;

    int geoms = 0;
    double worst = 0.0;
    int matched = 0, expected = 0;
    while (geoms < 50) {
        const bool horiz = geoms % 3 != 2;
        AxisGeometry g;
        if (horiz)
            g = {FlightAxis::horizontal, du(rng), 1.0};
        else
            g = {FlightAxis::vertical, dh(rng), 1.0};
        const double lo = std::max(dlo(rng), g.min_distance() + 2.0);
        const double hi = lo + 3.0;
        const FadeSeries series = fade_positions(g, lambda, lo, hi);
        if (series.points.size() < 2) continue;
        ++geoms;

        const double step = 0.25e-3;
        std::vector<double> mags;
        mags.reserve(static_cast<std::size_t>((hi - lo) / step) + 2);
        for (double d = lo; d <= hi; d += step)
            mags.push_back(std::abs(two_ray_gain(d, g.path_ratio(d) * d, params)));

        for (const auto& pt : series.points) {
            if (pt.d_d < lo + 0.02 || pt.d_d > hi - 0.02) continue;
            ++expected;
            // Nearest scan minimum.
            double best = 1e9;
            for (std::size_t i = 1; i + 1 < mags.size(); ++i)
                if (mags[i] <= mags[i - 1] && mags[i] < mags[i + 1])
                    best = std::min(best, std::abs(lo + i * step - pt.d_d));
            worst = std::max(worst, best);
            if (best <= 1e-3) ++matched;
        }
    }
    g_detail = fmt("%d/%d roots within 1 mm over %d geometries, worst %.2e m", matched, expected,
                   geoms, worst);
    check(matched == expected && expected > 100, "3 fade positions vs brute force");
}

// ---------------------------------------------------------------- 4
struct FlightStats {
    double err_sum = 0.0;
    long n = 0;
    double t_sum = 0.0;
    long t_n = 0;
};

void fading_interval_prediction() {
    RadioParams params;
    const double lambda = params.wavelength_m;
    const double d_u = 10.0;

    auto run_flight = [&](double v, double d_from, double d_to, FlightStats& st,
                          std::vector<double>* per_band = nullptr,
                          const std::vector<double>* bands = nullptr) {
        const double x0 = std::sqrt(d_from * d_from - 81.0);
        const double x1 = std::sqrt(d_to * d_to - 81.0);
        const Trajectory traj({{x0, 0, d_u}, {x1, 0, d_u}}, {v});
        const std::vector<ClientSite> clients{{{0, 0, 1}}};
        SynthesisConfig synth;
        synth.snr_noise_db = 0.0;
        const auto series =
            synthesize_csi(traj, clients, AntennaArray::uniform_x(2, 0.03), params, synth);

        std::vector<double> snr(series[0].samples.size());
        for (std::size_t i = 0; i < snr.size(); ++i)
            snr[i] = 20.0 * std::log10(std::abs(series[0].samples[i].h[0]));
        const auto minima = extract_fade_minima(snr);

        const auto broadcasts = broadcast_stream(traj, 50.0, {}, 1);
        for (std::size_t j = 0; j + 1 < minima.size(); ++j) {
            const double t0 = minima[j] / synth.f_s;
            const double t1 = minima[j + 1] / synth.f_s;
            const double gt = t1 - t0;
            // Forecast at the first broadcast inside the interval.
            const double tb = std::ceil(t0 * 50.0) / 50.0;
            if (tb >= t1) continue;
            SensorBroadcast b;
            const FlightState fs = traj.sample(tb);
            b.t = tb;
            b.position = fs.position;
            b.velocity = fs.velocity;
            const FadingForecast f = predict_fading_interval(b, clients[0], lambda);
            if (!f.fading_expected()) continue;
            st.err_sum += std::abs(f.t_fading - gt) / gt;
            st.n += 1;
            st.t_sum += gt;
            st.t_n += 1;
            if (per_band && bands) {
                const double d_mid = relative_state(fs, clients[0].position).d_d;
                for (std::size_t bidx = 0; bidx + 1 < bands->size(); ++bidx)
                    if (d_mid >= (*bands)[bidx] && d_mid < (*bands)[bidx + 1])
                        per_band[bidx].push_back(gt);
            }
        }
    };

    // Velocity dependence at 10-20 m.
    std::vector<double> mean_T;
    double err_overall = 0.0;
    long n_overall = 0;
    for (double v : {1.0, 2.0, 3.0, 5.0}) {
        FlightStats st;
        run_flight(v, 20.0, 10.5, st);
        mean_T.push_back(st.t_sum / st.t_n);
        err_overall += st.err_sum;
        n_overall += st.n;
    }
    const double mean_err = err_overall / n_overall;
    bool v_monotone = true;
    for (std::size_t i = 0; i + 1 < mean_T.size(); ++i)
        if (!(mean_T[i] > mean_T[i + 1])) v_monotone = false;

    // Distance dependence at 2 m/s.
    const std::vector<double> bands{10.5, 15.0, 20.0, 25.0};
    std::vector<double> band_T[3];
    FlightStats st2;
    run_flight(2.0, 25.0, 10.5, st2, band_T, &bands);
    bool d_monotone = true;
    double band_mean[3];
    for (int b = 0; b < 3; ++b) {
        double s = 0;
        for (double x : band_T[b]) s += x;
        band_mean[b] = s / band_T[b].size();
    }
    if (!(band_mean[0] < band_mean[1] && band_mean[1] < band_mean[2])) d_monotone = false;

    g_detail = fmt("mean rel err %.2f%% (n=%ld), T(v)=%.3f/%.3f/%.3f/%.3f, T(d)=%.3f/%.3f/%.3f",
                   100.0 * mean_err, n_overall, mean_T[0], mean_T[1], mean_T[2], mean_T[3],
                   band_mean[0], band_mean[1], band_mean[2]);
    check(mean_err <= 0.15 && v_monotone && d_monotone, "4 fading-interval prediction");
}

// ---------------------------------------------------------------- 5
void error_propagation_identity() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> pe(1 + rep % 3);
        for (auto& p : pe) p = u(rng);
        worst = std::max(worst,
                         std::abs(error_propagation(pe) - error_propagation_product(pe)));
    }

    // Sampled mode against the analytic chain.
    const std::vector<double> pe{0.13, 0.07, 0.21};
    std::vector<double> expect(pe.size());
    for (std::size_t k = 0; k < pe.size(); ++k)
        expect[k] = error_propagation(std::span<const double>(pe).subspan(0, k + 1));

    const int trials = 100000;
    std::vector<long> hits(pe.size(), 0);
    std::mt19937_64 rng2(55);
    for (int i = 0; i < trials; ++i) {
        const auto ev = sample_error_chain(pe, rng2);
        for (std::size_t k = 0; k < pe.size(); ++k) hits[k] += ev[k];
    }
    bool sampled_ok = true;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < pe.size(); ++k) {
        const double p_hat = hits[k] / double(trials);
        const double sigma = std::sqrt(expect[k] * (1.0 - expect[k]) / trials);
        const double z = std::abs(p_hat - expect[k]) / sigma;
        worst_z = std::max(worst_z, z);
        if (z > 3.0) sampled_ok = false;
    }
    g_detail = fmt("identity worst diff %.2e, sampled worst z = %.2f", worst, worst_z);
    check(worst <= 1e-12 && sampled_ok, "5 error propagation");
}

// ---------------------------------------------------------------- 6
void rate_selection_oracle() {
    const RateTable table = RateTable::default_table();
    const double bits = 12000.0;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> snr(-5.0, 45.0);
    std::uniform_int_distribution<int> kk(1, 3);
    std::uniform_real_distribution<double> pk1(0.0, 3e-4);

    int agree = 0, prefactor_ok = 0;
    const int draws = 200;
    for (int rep = 0; rep < draws; ++rep) {
        const double s = snr(rng);
        const int k = kk(rng);
        const RateChoice c = select_rate(s, k, table, bits);

        // Exhaustive evaluation of the full objective, with and without the
        // decoded-earlier prefactor.
        const double prefactor = std::pow(1.0 - pk1(rng), bits);
        int best = 0, best_pref = 0;
        double best_val = -1.0, best_pref_val = -1.0;
        for (std::size_t i = 0; i < table.size(); ++i) {
            const double pe = ber(s, table[i]);
            const double q = std::pow(1.0 - pe, bits);
            double sum = 0.0;
            for (int a = 1; a <= k; ++a) {
                double prod = 1.0;
                for (int j = a; j <= k; ++j) prod *= q;
                sum += prod;
            }
            const double v = table[i].mbps * sum;
            if (v > best_val) {
                best_val = v;
                best = static_cast<int>(i);
            }
            if (prefactor * v > best_pref_val) {
                best_pref_val = prefactor * v;
                best_pref = static_cast<int>(i);
            }
        }
        if (best_val < 1e-9 ? c.starved && c.index == 0 : c.index == best) ++agree;
        if (best == best_pref) ++prefactor_ok;
    }
    g_detail = fmt("argmax agreement %d/%d, prefactor invariance %d/%d", agree, draws,
                   prefactor_ok, draws);
    check(agree == draws && prefactor_ok == draws, "6 rate-selection oracle");
}

// shared scenario for criteria 7 and 8
ScenarioConfig ordering_scenario(double speed, double duration) {
    ScenarioConfig cfg;
    cfg.name = "ordering";
    cfg.duration_s = duration;
    cfg.snr_noise_db = 0.0;
    cfg.clients = {ClientConfig{{-9, 0, 1}}, ClientConfig{{9, 0, 1}}};
    if (speed <= 0.0) {
        const Trajectory h = Trajectory::hover({0, 0.5, 10}, duration + 1.0);
        cfg.waypoints = h.waypoints();
        cfg.speeds = h.speeds();
    } else {
        std::vector<Vec3> wps{{-6, 0, 10}};
        std::vector<double> speeds;
        bool fwd = true;
        while (speeds.size() * (12.0 / speed) < duration + 1.0) {
            wps.push_back(fwd ? Vec3{6, 0, 10} : Vec3{-6, 0, 10});
            speeds.push_back(speed);
            fwd = !fwd;
        }
        cfg.waypoints = wps;
        cfg.speeds = speeds;
    }
    return cfg;
}

// ---------------------------------------------------------------- 7
void ordering_properties() {
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

    double sens = 0, stale = 0, oracle = 0;
    for (std::uint64_t seed : seeds) {
        ScenarioConfig cfg = ordering_scenario(5.0, 60.0);
        cfg.seed = seed;
        const ScenarioResult res = run_scenario(cfg);
        sens += res.arm(PolicyKind::sensor_assisted).mean_throughput_mbps;
        stale += res.arm(PolicyKind::stale_csi).mean_throughput_mbps;
        oracle += res.arm(PolicyKind::oracle).mean_throughput_mbps;
    }
    sens /= seeds.size();
    stale /= seeds.size();
    oracle /= seeds.size();
    const double gain = sens / stale;

    double v0_spread = 0.0;
    {
        ScenarioConfig cfg = ordering_scenario(0.0, 60.0);
        cfg.seed = 11;
        const ScenarioResult res = run_scenario(cfg);
        const double a = res.arm(PolicyKind::sensor_assisted).mean_throughput_mbps;
        const double b = res.arm(PolicyKind::stale_csi).mean_throughput_mbps;
        const double c = res.arm(PolicyKind::oracle).mean_throughput_mbps;
        const double hi = std::max({a, b, c});
        const double lo = std::min({a, b, c});
        v0_spread = (hi - lo) / hi;
    }

    g_detail = fmt("oracle %.2f >= sensor %.2f >= stale %.2f Mbps, gain %.3f, v0 spread %.3f%%",
                   oracle, sens, stale, gain, 100.0 * v0_spread);
    check(oracle >= sens && sens >= stale && gain > 1.05 && v0_spread <= 0.01,
          "7 ordering properties");
}

// ---------------------------------------------------------------- 8
void csi_rate_sweep_shape() {
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double gain_low = 0, gain_high = 0;
    for (double f_r : {25.0, 200.0}) {
        double sens = 0, stale = 0;
        for (std::uint64_t seed : seeds) {
            ScenarioConfig cfg = ordering_scenario(6.0, 60.0);
            cfg.f_r = f_r;
            cfg.seed = seed;
            const ScenarioResult res = run_scenario(cfg);
            sens += res.arm(PolicyKind::sensor_assisted).mean_throughput_mbps;
            stale += res.arm(PolicyKind::stale_csi).mean_throughput_mbps;
        }
        (f_r < 100 ? gain_low : gain_high) = sens / stale;
    }
    g_detail = fmt("gain at 25 Hz = %.3f, at 200 Hz = %.3f", gain_low, gain_high);
    check(gain_low > gain_high, "8 CSI-rate sweep shape");
}

// ---------------------------------------------------------------- 9
void environment_tolerance() {
    RadioParams params;
    auto mean_dn = [&](std::vector<Reflector> refl) {
        return mean_abs_n_ray_deviation_db(refl, params);
    };
    auto crossing = [&](std::function<double(double)> f) {
        double lo = 1.01, hi = 8.0;
        for (int i = 0; i < 40; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (f(mid) > 3.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    const double k2 = crossing([&](double k) { return mean_dn({{k, -0.7}}); });
    const double k3a = crossing([&](double k) { return mean_dn({{k, -0.7}, {2.4, -0.7}}); });
    const double k3b = crossing([&](double k) { return mean_dn({{1.5, -0.7}, {k, -0.7}}); });

    g_detail = fmt("N=2 crossing %.3f; N=3 pair (%.3f, %.3f)", k2, k3a, k3b);
    check(k2 >= 1.3 && k2 <= 1.5 && std::abs(k3a - 1.5) <= 0.15 && std::abs(k3b - 2.4) <= 0.15,
          "9 environment tolerance");
}

// ---------------------------------------------------------------- 10
void overhead_arithmetic() {
    const double us50 = broadcast_airtime_fraction(50.0) * 1e6;
    const double us100 = broadcast_airtime_fraction(100.0) * 1e6;
    g_detail = fmt("50 Hz: %.6f us/s, 100 Hz: %.6f us/s", us50, us100);
    check(std::abs(us50 - 6600.0) < 1e-6 && std::abs(us100 - 13200.0) < 1e-6,
          "10 overhead arithmetic");
}

// ---------------------------------------------------------------- 11
std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void determinism() {
#ifdef AIRRATE_CLI_PATH
    const std::string cli = AIRRATE_CLI_PATH;
#else
    const std::string cli = "./airrate";
#endif
    const std::string dir = "acceptance_tmp";
    if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0) {
        g_detail = "temp dir setup failed";
        check(false, "11 determinism");
        return;
    }

    const std::string run_cmd = cli +
                                " run --duration 4 --seed 42 --snr-noise 0.5 "
                                "--trajectory '-6,0,10;6,0,10@3' --clients '-9,0,1;9,0,1'";
    const std::string sweep_cmd =
        cli +
        " sweep --axis velocity --values 1,3 --seeds 1,2 --duration 2 --snr-noise 0.5 "
        "--trajectory '-6,0,10;6,0,10@3' --clients '-9,0,1;9,0,1'";

    int rc = 0;
    rc |= std::system((run_cmd + " -o " + dir + "/run_a.csv --rounds-out " + dir +
                       "/rounds_a.csv 2>/dev/null")
                          .c_str());
    rc |= std::system((run_cmd + " -o " + dir + "/run_b.csv --rounds-out " + dir +
                       "/rounds_b.csv 2>/dev/null")
                          .c_str());
    rc |= std::system((sweep_cmd + " -o " + dir + "/sweep_a.csv 2>/dev/null").c_str());
    rc |= std::system((sweep_cmd + " -o " + dir + "/sweep_b.csv 2>/dev/null").c_str());

    const bool run_same = slurp(dir + "/run_a.csv") == slurp(dir + "/run_b.csv") &&
                          !slurp(dir + "/run_a.csv").empty();
    const bool rounds_same = slurp(dir + "/rounds_a.csv") == slurp(dir + "/rounds_b.csv") &&
                             !slurp(dir + "/rounds_a.csv").empty();
    const bool sweep_same = slurp(dir + "/sweep_a.csv") == slurp(dir + "/sweep_b.csv") &&
                            !slurp(dir + "/sweep_a.csv").empty();
    g_detail = fmt("cli rc=%d, run %s, rounds %s, sweep %s", rc, run_same ? "same" : "DIFFER",
                   rounds_same ? "same" : "DIFFER", sweep_same ? "same" : "DIFFER");
    check(rc == 0 && run_same && rounds_same && sweep_same, "11 determinism");
    rc = std::system(("rm -rf " + dir).c_str());
    (void)rc;
}

} // namespace

int main() {
    projection_math();
    phase_derivative_theory();
    fade_positions_vs_brute_force();
    fading_interval_prediction();
    error_propagation_identity();
    rate_selection_oracle();
    ordering_properties();
    csi_rate_sweep_shape();
    environment_tolerance();
    overhead_arithmetic();
    determinism();

    if (g_failures) {
        std::printf("%d acceptance check(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance checks passed\n");
    return 0;
}
