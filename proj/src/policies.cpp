// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/policies.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace airrate {

std::string to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::sensor_assisted: return "sensor_assisted";
        case PolicyKind::stale_csi: return "stale_csi";
        case PolicyKind::single_user: return "single_user";
        case PolicyKind::oracle: return "oracle";
    }
    return "unknown";
}

PolicyKind policy_from_string(const std::string& name) {
    if (name == "sensor_assisted") return PolicyKind::sensor_assisted;
    if (name == "stale_csi") return PolicyKind::stale_csi;
    if (name == "single_user") return PolicyKind::single_user;
    if (name == "oracle") return PolicyKind::oracle;
    throw std::invalid_argument("unknown policy: " + name);
}

namespace {

struct Estimate {
    std::vector<double> snr_db;
    std::vector<double> delta_phi;
    bool valid = false;
};

Estimate estimate_for(PolicyKind kind, const ClientRoundInput& in, double t [[maybe_unused]]) {
    Estimate e;
    if (kind == PolicyKind::sensor_assisted) {
        if (!in.prediction) return e;
        e.snr_db = in.prediction->snr_orig_db;
        e.delta_phi = in.prediction->delta_phi;
        e.valid = true;
    } else {  // stale measurement, zero-order hold
        if (!in.last_sample) return e;
        e.snr_db = in.last_sample->snr_db;
        e.delta_phi = in.last_sample->delta_phi;
        e.valid = true;
    }
    return e;
}

double sum_db(const std::vector<double>& snr_db) {
    double lin = 0.0;
    for (double s : snr_db) lin += std::pow(10.0, s / 10.0);
    return 10.0 * std::log10(lin);
}

double max_db(const std::vector<double>& snr_db) {
    double m = snr_db[0];
    for (double s : snr_db) m = std::max(m, s);
    return m;
}

// Shared contention walk for the estimate-driven MU arms: each contender in
// turn predicts its projected SNR against the directions announced so far,
// gates, backs off, and picks a rate.
RoundDecision mu_pipeline(PolicyKind kind, const RoundContext& ctx) {
    const auto& inputs = *ctx.inputs;
    RoundDecision d;
    d.clients.resize(inputs.size());

    std::vector<Cvec> announced;
    int joined = 0;
    for (int client : ctx.join_order) {
        if (joined >= ctx.max_streams) break;
        ClientDecision& c = d.clients[client];
        const Estimate est = estimate_for(kind, inputs[client], 0.0);
        if (!est.valid) continue;

        ChannelDirection dir = ChannelDirection::from_snr_phase(est.snr_db, est.delta_phi);
        double cos2 = 0.0;
        if (!announced.empty())
            cos2 = cos_sq_theta(dir.components, std::span<const Cvec>(announced));

        const int k = joined + 1;
        c.power_scale_db = power_backoff_db(max_db(est.snr_db), k, ctx.backoff_threshold_db);
        const double snr_sum = sum_db(est.snr_db) + c.power_scale_db;
        const ProjectedSnr proj = project_snr(snr_sum, cos2);
        c.est_snr_sum_db = snr_sum;
        c.est_snr_proj_db = proj.snr_proj_db;

        if (!contention_gate(proj.snr_proj_db, ctx.contention_floor_db)) continue;

        const RateChoice rc = select_rate(proj.snr_proj_db, k, *ctx.table, ctx.bits);
        c.join = true;
        c.rate_index = rc.index;
        c.starved = rc.starved;
        c.announced = dir;
        announced.push_back(dir.components);
        ++joined;
    }
    return d;
}

RoundDecision single_user(const RoundContext& ctx) {
    const auto& inputs = *ctx.inputs;
    RoundDecision d;
    d.clients.resize(inputs.size());

    const int client = static_cast<int>(ctx.round_index % static_cast<long>(inputs.size()));
    const auto& in = inputs[client];
    if (!in.last_sample) return d;

    ClientDecision& c = d.clients[client];
    const double snr = in.last_sample->snr_sum_db();
    const RateChoice rc = select_rate(snr, 1, *ctx.table, ctx.bits);
    c.join = true;
    c.rate_index = rc.index;
    c.starved = rc.starved;
    c.est_snr_sum_db = snr;
    c.est_snr_proj_db = snr;
    return d;
}

// Omniscient upper bound: full power, true directions, and a joint search
// over join subsets and rates. Within a subset the rates decompose into a
// forward pass of per-client argmaxes, since a client's success factor
// multiplies every earlier joiner's term.
RoundDecision oracle(const RoundContext& ctx) {
    const auto& inputs = *ctx.inputs;
    RoundDecision d;
    d.clients.resize(inputs.size());

    const int n = static_cast<int>(ctx.join_order.size());
    double best_total = 0.0;
    std::vector<std::pair<int, int>> best_choice;  // (client, rate)

    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) > ctx.max_streams) continue;
        std::vector<Cvec> earlier;
        double total = 0.0;
        std::vector<std::pair<int, int>> choice;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            const int client = ctx.join_order[i];
            const Cvec& h = inputs[client].true_channel;
            double cos2 = 0.0;
            if (!earlier.empty())
                cos2 = cos_sq_theta(std::span<const std::complex<double>>(h),
                                    std::span<const Cvec>(earlier));
            double norm2 = 0.0;
            for (const auto& g : h) norm2 += std::norm(g);
            const double snr_orig_db = 10.0 * std::log10(norm2 * ctx.snr_scale);
            const double snr_proj_db = project_snr(snr_orig_db, cos2).snr_proj_db;

            double best_step = -1.0;
            int best_rate = 0;
            for (std::size_t r = 0; r < ctx.table->size(); ++r) {
                const double q =
                    packet_success_prob(ber(snr_proj_db, (*ctx.table)[r]), ctx.bits);
                const double val = q * ((*ctx.table)[r].mbps + total);
                if (val > best_step) {
                    best_step = val;
                    best_rate = static_cast<int>(r);
                }
            }
            total = best_step;
            choice.emplace_back(client, best_rate);
            earlier.push_back(h);
        }
        if (total > best_total) {
            best_total = total;
            best_choice = choice;
        }
    }

    std::vector<Cvec> announced;
    for (const auto& [client, rate] : best_choice) {
        ClientDecision& c = d.clients[client];
        const Cvec& h = inputs[client].true_channel;
        double norm2 = 0.0;
        for (const auto& g : h) norm2 += std::norm(g);
        const double snr_orig_db = 10.0 * std::log10(norm2 * ctx.snr_scale);
        double cos2 = 0.0;
        if (!announced.empty())
            cos2 = cos_sq_theta(std::span<const std::complex<double>>(h),
                                std::span<const Cvec>(announced));
        c.join = true;
        c.rate_index = rate;
        c.est_snr_sum_db = snr_orig_db;
        c.est_snr_proj_db = project_snr(snr_orig_db, cos2).snr_proj_db;
        c.announced = ChannelDirection::from_gains(h);
        announced.push_back(h);
    }
    return d;
}

} // namespace

RoundDecision decide_round(PolicyKind kind, const RoundContext& ctx) {
    if (!ctx.inputs || !ctx.table) throw std::invalid_argument("round context incomplete");
    switch (kind) {
        case PolicyKind::sensor_assisted:
        case PolicyKind::stale_csi:
            return mu_pipeline(kind, ctx);
        case PolicyKind::single_user:
            return single_user(ctx);
        case PolicyKind::oracle:
            return oracle(ctx);
    }
    throw std::logic_error("unreachable policy kind");
}

std::vector<double> expected_throughputs(const RoundDecision& d, const RoundContext& ctx) {
    const auto& inputs = *ctx.inputs;
    std::vector<double> mbps(inputs.size(), 0.0);

    std::vector<SicClient> joined;
    std::vector<int> ids;
    for (int client : ctx.join_order) {
        const ClientDecision& c = d.clients[client];
        if (!c.join) continue;
        joined.push_back({inputs[client].true_channel, c.power_scale_db, c.rate_index});
        ids.push_back(client);
    }
    const auto outcomes =
        sic_decode_outcomes(joined, *ctx.table, ctx.bits, ctx.snr_scale, nullptr);
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        mbps[ids[i]] = (*ctx.table)[joined[i].rate_index].mbps * outcomes[i].success_prob;
    return mbps;
}

} // namespace airrate
