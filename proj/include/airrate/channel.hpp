// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "airrate/radio.hpp"
#include "airrate/trajectory.hpp"

namespace airrate {

struct ChannelSample {
    double t = 0.0;
    std::vector<std::complex<double>> h;  // per-antenna complex gain
    std::vector<double> snr_db;           // per-antenna SNR, possibly with measurement noise
    std::vector<double> delta_phi;        // unwrapped phase difference vs antenna 1; [0] = 0

    double snr_sum_db() const;  // array SNR: sum of per-antenna linear SNRs
    double snr_max_db() const;
};

struct ClientChannelSeries {
    int client = 0;
    std::vector<ChannelSample> samples;  // uniform grid at the synthesis rate
};

struct SynthesisConfig {
    double f_s = 1000.0;        // synthesis rate, Hz
    double duration_s = 0.0;    // 0 = full trajectory duration
    double snr_noise_db = 0.0;  // per-sample Gaussian SNR jitter (measurement noise)
    std::uint64_t seed = 0;     // jitter stream seed
    std::vector<Reflector> reflectors;  // extra rays beyond the ground bounce
};

// Two-ray (or N-ray) channel gains for every client/antenna along the
// flight. Phase differences are unwrapped in time; NLOS penalties scale the
// gains. Throws std::invalid_argument when f_s is too low for the
// trajectory's top speed (required rate included in the message).
std::vector<ClientChannelSeries> synthesize_csi(const Trajectory& traj,
                                                const std::vector<ClientSite>& clients,
                                                const AntennaArray& array,
                                                const RadioParams& params,
                                                const SynthesisConfig& cfg);

double required_synthesis_rate(double max_speed_mps, double wavelength_m);

// Delimited trace format, one row per (sample, client, antenna):
//   t,client,antenna,re,im,snr_db
void write_trace(std::ostream& os, const std::vector<ClientChannelSeries>& series);
void write_trace_file(const std::string& path, const std::vector<ClientChannelSeries>& series);
std::vector<ClientChannelSeries> read_trace(std::istream& is);
std::vector<ClientChannelSeries> read_trace_file(const std::string& path);

// Indices of deep-fade minima in an SNR series: local minima at least 3 dB
// below both flanking ridges and below the series median.
std::vector<std::size_t> extract_fade_minima(const std::vector<double>& snr_db,
                                             double prominence_db = 3.0);

struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace airrate
