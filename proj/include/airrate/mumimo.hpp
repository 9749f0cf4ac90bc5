// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <complex>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "airrate/rates.hpp"

namespace airrate {

using Cvec = std::vector<std::complex<double>>;

// Squared cosine of the angle between `dir` and the span of `subspace`.
// Invariant under nonzero complex scaling of any input. Throws
// std::invalid_argument on a zero direction or a rank-deficient subspace.
double cos_sq_theta(std::span<const std::complex<double>> dir,
                    std::span<const Cvec> subspace);

// Convenience overload for the single-interferer case.
double cos_sq_theta(std::span<const std::complex<double>> a,
                    std::span<const std::complex<double>> b);

struct ProjectedSnr {
    double snr_orig_db = 0.0;
    double cos2 = 0.0;
    double snr_proj_db = 0.0;    // -inf when fully aligned
    double delta_snr_db = 0.0;   // snr_orig - snr_proj, +inf when fully aligned

    bool fully_aligned() const { return cos2 >= 1.0; }
};

// Projection loss: SNR_proj = SNR_orig * (1 - cos^2 theta) in linear units.
ProjectedSnr project_snr(double snr_orig_db, double cos2);

constexpr double kBackoffThresholdDb = 26.0;   // midpoint of the 25-27 dB rule
constexpr double kContentionFloorDb = 4.0;

// Transmit power adjustment in dB (<= 0). The first joiner never backs off;
// later joiners cap their single-user SNR at the threshold.
double power_backoff_db(double predicted_snr_orig_db, int join_index,
                        double threshold_db = kBackoffThresholdDb);

// A contender may join only when its projected SNR supports rate selection.
bool contention_gate(double snr_proj_db, double floor_db = kContentionFloorDb);

struct SicClient {
    Cvec channel;            // true channel at transmission time (NLOS included)
    double power_scale_db = 0.0;
    int rate_index = 0;
};

struct SicOutcome {
    double snr_proj_db = 0.0;
    double p_e = 0.0;              // own-stream bit error rate
    double p_bit = 0.0;            // effective bit error rate after propagation
    double success_prob = 0.0;     // (1 - p_bit)^L
    bool packet_ok = true;         // sampled mode only; equals success_prob >= 1 otherwise
};

// ZF-SIC decode of concurrent streams listed in join order. Streams decode
// from the last joiner down to the first; stream k is projected orthogonal
// to the true directions of the earlier joiners, and decode failures
// propagate to the streams decoded after it. `snr_scale` is P/N0 at unit
// gain. When `rng` is set, packet outcomes are Bernoulli draws from the
// analytic success probabilities.
std::vector<SicOutcome> sic_decode_outcomes(std::span<const SicClient> clients,
                                            const RateTable& table, double bits,
                                            double snr_scale, std::mt19937_64* rng = nullptr);

// Projected SNRs (dB) of each joined stream against the earlier joiners'
// true directions, without rate evaluation.
std::vector<double> sic_projected_snrs_db(std::span<const SicClient> clients, double snr_scale);

} // namespace airrate
