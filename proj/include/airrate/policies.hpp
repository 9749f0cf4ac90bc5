// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <limits>
#include <optional>
#include <string>

#include "airrate/prediction.hpp"

namespace airrate {

enum class PolicyKind { sensor_assisted, stale_csi, single_user, oracle };

std::string to_string(PolicyKind k);
PolicyKind policy_from_string(const std::string& name);

// Everything a policy may look at for one client in one round. Which fields
// it actually uses is what distinguishes the arms.
struct ClientRoundInput {
    std::optional<ChannelPrediction> prediction;  // forecast-driven estimate
    std::optional<ChannelSample> last_sample;     // most recent measurement
    Cvec true_channel;                            // ground truth at round time
};

struct ClientDecision {
    bool join = false;
    int rate_index = 0;
    bool starved = false;
    double power_scale_db = 0.0;
    ChannelDirection announced;
    double est_snr_proj_db = std::numeric_limits<double>::quiet_NaN();
    double est_snr_sum_db = std::numeric_limits<double>::quiet_NaN();
};

struct RoundDecision {
    std::vector<ClientDecision> clients;  // indexed by client id
};

struct RoundContext {
    const std::vector<ClientRoundInput>* inputs = nullptr;
    std::vector<int> join_order;  // shared across arms within a round
    long round_index = 0;
    const RateTable* table = nullptr;
    double bits = 12000.0;
    double snr_scale = 1.0;  // P/N0 at unit gain
    int max_streams = 2;
    double backoff_threshold_db = kBackoffThresholdDb;
    double contention_floor_db = kContentionFloorDb;
};

RoundDecision decide_round(PolicyKind kind, const RoundContext& ctx);

// Expected per-client throughput (Mbps) of a decision, evaluated against the
// true channels with ZF-SIC error propagation.
std::vector<double> expected_throughputs(const RoundDecision& d, const RoundContext& ctx);

} // namespace airrate
