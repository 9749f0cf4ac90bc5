// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airrate {

namespace {

double wrap_to_pi(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    return a - M_PI;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0;
    bool ok = false;
};

LineFit fit_line(std::span<const std::pair<double, double>> pts) {
    LineFit f;
    const double n = static_cast<double>(pts.size());
    if (pts.size() < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-12) return f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    f.ok = true;
    return f;
}

} // namespace

ChannelDirection ChannelDirection::from_gains(std::span<const std::complex<double>> h) {
    if (h.empty() || std::abs(h[0]) <= 0.0)
        throw std::invalid_argument("direction undefined for zero reference gain");
    ChannelDirection d;
    d.components.resize(h.size());
    d.components[0] = 1.0;
    for (std::size_t m = 1; m < h.size(); ++m) d.components[m] = h[m] / h[0];
    return d;
}

ChannelDirection ChannelDirection::from_snr_phase(std::span<const double> snr_db,
                                                  std::span<const double> delta_phi) {
    ChannelDirection d;
    d.components.resize(snr_db.size());
    d.components[0] = 1.0;
    for (std::size_t m = 1; m < snr_db.size(); ++m) {
        const double ratio = std::pow(10.0, (snr_db[m] - snr_db[0]) / 20.0);
        d.components[m] = std::polar(ratio, delta_phi[m]);
    }
    return d;
}

double ChannelPrediction::snr_sum_db() const {
    double lin = 0.0;
    for (double s : snr_orig_db) lin += std::pow(10.0, s / 10.0);
    return 10.0 * std::log10(lin);
}

double ChannelPrediction::snr_max_db() const {
    return *std::max_element(snr_orig_db.begin(), snr_orig_db.end());
}

ChannelDirection ChannelPrediction::direction() const {
    return ChannelDirection::from_snr_phase(snr_orig_db, delta_phi);
}

Predictor::Predictor(int n_antennas, PredictorConfig cfg) : cfg_(cfg) {
    if (n_antennas < 1) throw std::invalid_argument("predictor needs at least one antenna");
    antennas_.resize(n_antennas);
    if (n_antennas > 1) phases_.resize(n_antennas - 1);
}

double Predictor::AntennaState::threshold() const {
    if (ranges.size() >= 3) {
        std::vector<double> r(ranges.begin(), ranges.end());
        std::sort(r.begin(), r.end());
        return last_fade_min_val + r[r.size() / 2] / 2.0;
    }
    // Warm-up rule until enough fades have been seen.
    return 0.5 * (run_max + run_min);
}

double Predictor::last_sample_time() const {
    if (antennas_[0].buf.empty()) throw std::logic_error("predictor has no samples");
    return antennas_[0].buf.back().t;
}

void Predictor::set_forecast(const FadingForecast& f) {
    forecast_ = f;
    for (auto& a : antennas_)
        if (!a.buf.empty()) refit_snr(a);
}

void Predictor::update_fade_state(AntennaState& a, double t, double snr) {
    a.run_max = std::max(a.run_max, snr);
    a.run_min = std::min(a.run_min, snr);
    a.pre_fade_peak = std::max(a.pre_fade_peak, snr);

    const double thr = a.threshold();
    if (!a.in_fade) {
        if (snr < thr - cfg_.hysteresis_db) {
            a.in_fade = true;
            a.fade_min_val = snr;
            a.fade_min_t = t;
        }
    } else {
        if (snr < a.fade_min_val) {
            a.fade_min_val = snr;
            a.fade_min_t = t;
        }
        if (snr > thr + cfg_.hysteresis_db) {
            a.in_fade = false;
            ++a.fades_seen;
            a.ranges.push_back(a.pre_fade_peak - a.fade_min_val);
            while (static_cast<int>(a.ranges.size()) > cfg_.range_window) a.ranges.pop_front();
            a.last_fade_min_val = a.fade_min_val;
            a.t_last_min = a.fade_min_t;
            // Restart the polynomial window at the detected minimum.
            std::erase_if(a.buf, [&](const SnrPoint& p) { return p.t < a.fade_min_t; });
            a.pre_fade_peak = snr;
        }
    }
}

void Predictor::refit_snr(AntennaState& a) {
    a.fit = SnrFit{};

    // The polynomial window covers the hump between fades: in-fade samples
    // belong to the sharp dip and would drag the parabola off the hump.
    std::vector<std::pair<double, double>> window;
    window.reserve(a.buf.size());
    for (const auto& p : a.buf)
        if (!p.faded) window.emplace_back(p.t, p.snr);
    if (static_cast<int>(window.size()) < cfg_.min_quad_points) return;  // hold

    if (forecast_ && forecast_->fading_expected()) {
        const double anchor = a.t_last_min ? *a.t_last_min : window.front().first;
        const double t_axis = anchor + forecast_->t_fading / 2.0;
        const double span = window.back().first - window.front().first;
        // A far-away axis makes the constrained fit ill-conditioned; the
        // channel is locally linear there anyway.
        if (std::abs(t_axis - window.back().first) < 50.0 * std::max(span, 0.05)) {
            // Vertex-constrained least squares: y = a2 (t - t_axis)^2 + c.
            double s4 = 0, s2 = 0, s2y = 0, sy = 0;
            const double n = static_cast<double>(window.size());
            for (const auto& [ti, yi] : window) {
                const double x2 = (ti - t_axis) * (ti - t_axis);
                s4 += x2 * x2;
                s2 += x2;
                s2y += x2 * yi;
                sy += yi;
            }
            const double det = s4 * n - s2 * s2;
            if (std::abs(det) > 1e-9 * std::max(1.0, s4 * n)) {
                const double a2 = (s2y * n - s2 * sy) / det;
                const double c = (s4 * sy - s2 * s2y) / det;
                // A misplaced axis (irregular fade spacing, direction
                // reversals) leaves the constrained fit unable to describe
                // its own window; fall through to the line when it cannot.
                double rss = 0.0;
                for (const auto& [ti, yi] : window) {
                    const double x2 = (ti - t_axis) * (ti - t_axis);
                    const double r = a2 * x2 + c - yi;
                    rss += r * r;
                }
                if (std::sqrt(rss / n) < 2.5) {
                    a.fit.mode = FitMode::quad;
                    a.fit.t_axis = t_axis;
                    a.fit.a2 = a2;
                    a.fit.c = c;
                    return;
                }
            }
        }
    }

    // No usable axis: a plain line covers slow drift and degenerates to the
    // constant for flat signals.
    const LineFit f = fit_line(window);
    if (f.ok) {
        a.fit.mode = FitMode::line;
        a.fit.slope = f.slope;
        a.fit.intercept = f.intercept;
    }
}

void Predictor::refit_phase(PhaseState& p) {
    p.line_ok = false;
    if (!p.ramp_active) return;
    std::vector<std::pair<double, double>> window;
    for (const auto& s : p.buf)
        if (s.first >= p.ramp_start_t) window.push_back(s);
    const LineFit f = fit_line(window);
    if (f.ok) {
        p.line_ok = true;
        p.slope = f.slope;
        p.intercept = f.intercept;
    }
}

void Predictor::ingest(const ChannelSample& sample) {
    if (static_cast<int>(sample.snr_db.size()) != n_antennas())
        throw std::invalid_argument("sample antenna count mismatch");
    if (!antennas_[0].buf.empty() && sample.t < antennas_[0].buf.back().t)
        throw std::invalid_argument("samples must arrive in time order");

    for (int m = 0; m < n_antennas(); ++m) {
        AntennaState& a = antennas_[m];
        a.buf.push_back({sample.t, sample.snr_db[m], false});
        a.last_snr = sample.snr_db[m];
        update_fade_state(a, sample.t, sample.snr_db[m]);
        a.buf.back().faded = a.in_fade;
        refit_snr(a);
    }

    for (int m = 1; m < n_antennas(); ++m) {
        PhaseState& p = phases_[m - 1];
        const double raw = wrap_to_pi(sample.delta_phi[m]);
        double unwrapped;
        if (p.buf.empty())
            unwrapped = raw;
        else
            unwrapped = p.buf.back().second + wrap_to_pi(raw - p.prev_raw);
        p.prev_raw = raw;
        p.buf.emplace_back(sample.t, unwrapped);
        p.last_value = unwrapped;

        // The phase difference ramps only while exactly one of the pair is
        // fading; with both antennas in a fade it stays flat.
        const bool ramp = antennas_[m].in_fade != antennas_[0].in_fade;
        if (ramp && !p.ramp_active) p.ramp_start_t = sample.t;
        p.ramp_active = ramp;
        refit_phase(p);

        // Bounded history; fits only look back to the current ramp start.
        if (p.buf.size() > 4096) p.buf.erase(p.buf.begin(), p.buf.begin() + 2048);
    }
}

ChannelPrediction Predictor::predict(double t_target) const {
    if (antennas_[0].buf.empty()) throw std::logic_error("predict called before any measurement");
    if (t_target < antennas_[0].buf.back().t - 1e-12)
        throw std::invalid_argument("prediction target precedes last measurement");

    ChannelPrediction pred;
    pred.t_target = t_target;
    pred.snr_orig_db.resize(n_antennas());
    pred.delta_phi.assign(n_antennas(), 0.0);

    for (int m = 0; m < n_antennas(); ++m) {
        const AntennaState& a = antennas_[m];
        // Inside a fade the window still describes the hump that just ended.
        // The dip is locally symmetric about its minimum, so targets beyond
        // the observed minimum evaluate at the mirrored time.
        auto eval_time = [&](double t) {
            return (a.in_fade && t > a.fade_min_t) ? 2.0 * a.fade_min_t - t : t;
        };
        const double t_last = a.buf.back().t;
        double y;
        switch (a.fit.mode) {
            case FitMode::quad: {
                // The fitted curve forecasts the change from the newest
                // measurement; anchoring at the measurement removes the
                // fit's residual at short horizons.
                const double x1 = eval_time(t_target) - a.fit.t_axis;
                const double x0 = eval_time(t_last) - a.fit.t_axis;
                y = a.last_snr + a.fit.a2 * (x1 * x1 - x0 * x0);
                break;
            }
            case FitMode::line:
                y = a.last_snr + a.fit.slope * (eval_time(t_target) - eval_time(t_last));
                break;
            default:
                y = a.last_snr;
                pred.fallback = true;
        }
        if (!std::isfinite(y)) {
            y = a.last_snr;
            pred.fallback = true;
        }
        pred.snr_orig_db[m] = y;
    }

    for (int m = 1; m < n_antennas(); ++m) {
        const PhaseState& p = phases_[m - 1];
        double y = p.last_value;
        if (p.ramp_active && p.line_ok)
            y = p.last_value + p.slope * (t_target - p.buf.back().first);
        pred.delta_phi[m] = std::isfinite(y) ? y : p.last_value;
    }
    return pred;
}

} // namespace airrate
