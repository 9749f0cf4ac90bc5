// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "airrate/channel.hpp"
#include "airrate/fading.hpp"
#include "airrate/mumimo.hpp"

namespace airrate {

struct ChannelDirection {
    Cvec components;  // components[0] == 1

    static ChannelDirection from_gains(std::span<const std::complex<double>> h);
    static ChannelDirection from_snr_phase(std::span<const double> snr_db,
                                           std::span<const double> delta_phi);
};

struct ChannelPrediction {
    double t_target = 0.0;
    std::vector<double> snr_orig_db;  // per antenna
    std::vector<double> delta_phi;    // per antenna, [0] = 0
    bool fallback = false;            // held last values for lack of data

    double snr_sum_db() const;  // array SNR, linear sum across antennas
    double snr_max_db() const;  // aggregate used for power-control decisions
    ChannelDirection direction() const;
};

struct PredictorConfig {
    double hysteresis_db = 0.5;  // guard band on fade enter/exit
    int range_window = 3;        // fluctuation ranges kept for the threshold
    int min_quad_points = 3;
};

// Per-client channel predictor. SNR follows a vertex-constrained parabola
// whose symmetry axis comes from the fading forecast; the inter-antenna
// phase difference follows a line while exactly one antenna of the pair is
// in a fade and holds its last value otherwise. The polynomial window
// reinitializes at each detected fade minimum. Fits refresh on every
// ingested reading and on every forecast update.
class Predictor {
public:
    Predictor(int n_antennas, PredictorConfig cfg = {});

    void set_forecast(const FadingForecast& f);
    const std::optional<FadingForecast>& forecast() const { return forecast_; }

    // Feed one CSI reading; samples must arrive in time order.
    void ingest(const ChannelSample& sample);

    ChannelPrediction predict(double t_target) const;

    bool in_fade(int antenna) const { return antennas_[antenna].in_fade; }
    double fade_threshold(int antenna) const { return antennas_[antenna].threshold(); }
    int fades_seen(int antenna) const { return antennas_[antenna].fades_seen; }
    std::size_t buffered(int antenna) const { return antennas_[antenna].buf.size(); }
    int n_antennas() const { return static_cast<int>(antennas_.size()); }
    bool has_data() const { return !antennas_[0].buf.empty(); }
    double last_sample_time() const;

private:
    enum class FitMode { hold, line, quad };

    struct SnrFit {
        FitMode mode = FitMode::hold;
        double a2 = 0.0, c = 0.0, t_axis = 0.0;   // quad
        double slope = 0.0, intercept = 0.0;      // line
    };

    struct SnrPoint {
        double t = 0.0;
        double snr = 0.0;
        bool faded = false;  // sample arrived while the antenna was in a fade
    };

    struct AntennaState {
        std::vector<SnrPoint> buf;  // samples since the last fade minimum
        bool in_fade = false;
        int fades_seen = 0;
        double run_max = -1e300, run_min = 1e300;  // warm-up statistics
        double pre_fade_peak = -1e300;
        double fade_min_val = 1e300, fade_min_t = 0.0;
        double last_fade_min_val = 0.0;
        std::deque<double> ranges;  // recent fade fluctuation ranges
        std::optional<double> t_last_min;
        double last_snr = 0.0;
        SnrFit fit;

        double threshold() const;
    };

    struct PhaseState {
        std::vector<std::pair<double, double>> buf;  // (t, unwrapped delta-phi)
        double prev_raw = 0.0;
        bool ramp_active = false;
        double ramp_start_t = 0.0;
        double last_value = 0.0;
        bool line_ok = false;
        double slope = 0.0, intercept = 0.0;
    };

    void refit_snr(AntennaState& a);
    void refit_phase(PhaseState& p);
    void update_fade_state(AntennaState& a, double t, double snr);

    PredictorConfig cfg_;
    std::vector<AntennaState> antennas_;
    std::vector<PhaseState> phases_;  // index m >= 1; phases_[m-1]
    std::optional<FadingForecast> forecast_;
};

} // namespace airrate
