// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace airrate {

namespace {

using nlohmann::json;

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

} // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
    }

    ScenarioConfig cfg;
    try {
        check_keys(j, {"name", "duration_s", "seed", "t_pkt_s", "f_s", "f_r", "f_b", "v_max",
                       "radio", "snr_noise_db", "n_antennas", "antenna_spacing_m", "trajectory",
                       "clients", "reflectors", "arms", "rate_table", "packet_bits",
                       "backoff_threshold_db", "contention_floor_db", "broadcast_noise",
                       "sampled_outcomes"},
                   "scenario");

        cfg.name = j.value("name", cfg.name);
        cfg.duration_s = j.value("duration_s", cfg.duration_s);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.t_pkt_s = j.value("t_pkt_s", cfg.t_pkt_s);
        cfg.f_s = j.value("f_s", cfg.f_s);
        cfg.f_r = j.value("f_r", cfg.f_r);
        cfg.f_b = j.value("f_b", cfg.f_b);
        cfg.v_max = j.value("v_max", cfg.v_max);
        cfg.snr_noise_db = j.value("snr_noise_db", cfg.snr_noise_db);
        cfg.n_antennas = j.value("n_antennas", cfg.n_antennas);
        cfg.antenna_spacing_m = j.value("antenna_spacing_m", cfg.antenna_spacing_m);
        cfg.packet_bits = j.value("packet_bits", cfg.packet_bits);
        cfg.backoff_threshold_db = j.value("backoff_threshold_db", cfg.backoff_threshold_db);
        cfg.contention_floor_db = j.value("contention_floor_db", cfg.contention_floor_db);
        cfg.sampled_outcomes = j.value("sampled_outcomes", cfg.sampled_outcomes);

        if (j.contains("radio")) {
            const json& r = j["radio"];
            check_keys(r, {"wavelength_m", "ground_rho", "ref_snr_db_at_1m"}, "radio");
            cfg.radio.wavelength_m = r.value("wavelength_m", cfg.radio.wavelength_m);
            cfg.radio.ground_rho = r.value("ground_rho", cfg.radio.ground_rho);
            cfg.radio.ref_snr_db_at_1m = r.value("ref_snr_db_at_1m", cfg.radio.ref_snr_db_at_1m);
        }
        if (j.contains("broadcast_noise")) {
            const json& b = j["broadcast_noise"];
            check_keys(b, {"sigma_pos_m", "sigma_vel_mps"}, "broadcast_noise");
            cfg.broadcast_noise.sigma_pos_m = b.value("sigma_pos_m", 0.0);
            cfg.broadcast_noise.sigma_vel_mps = b.value("sigma_vel_mps", 0.0);
        }
        if (j.contains("trajectory")) {
            const json& t = j["trajectory"];
            check_keys(t, {"waypoints", "speeds"}, "trajectory");
            cfg.waypoints.clear();
            for (const auto& w : t.at("waypoints")) cfg.waypoints.push_back(vec3_from(w));
            cfg.speeds = t.at("speeds").get<std::vector<double>>();
        }
        if (j.contains("clients")) {
            cfg.clients.clear();
            for (const auto& c : j["clients"]) {
                check_keys(c, {"position", "nlos", "nlos_penalty_db", "moving",
                               "walk_speed_mps", "walk_box_m"},
                           "client");
                ClientConfig cc;
                cc.position = vec3_from(c.at("position"));
                cc.nlos = c.value("nlos", false);
                cc.nlos_penalty_db = c.value("nlos_penalty_db", cc.nlos_penalty_db);
                cc.moving = c.value("moving", false);
                cc.walk_speed_mps = c.value("walk_speed_mps", cc.walk_speed_mps);
                cc.walk_box_m = c.value("walk_box_m", cc.walk_box_m);
                cfg.clients.push_back(cc);
            }
        }
        if (j.contains("reflectors")) {
            cfg.reflectors.clear();
            for (const auto& r : j["reflectors"]) {
                check_keys(r, {"k", "rho"}, "reflector");
                Reflector rf;
                rf.k = r.at("k").get<double>();
                rf.rho = r.value("rho", rf.rho);
                cfg.reflectors.push_back(rf);
            }
        }
        if (j.contains("arms")) {
            cfg.arms.clear();
            for (const auto& a : j["arms"]) cfg.arms.push_back(policy_from_string(a));
        }
        if (j.contains("rate_table")) {
            cfg.rate_table.clear();
            for (const auto& r : j["rate_table"]) {
                check_keys(r, {"mbps", "snr50_db", "slope"}, "rate_table entry");
                RateEntry e;
                e.mbps = r.at("mbps").get<double>();
                e.snr50_db = r.at("snr50_db").get<double>();
                e.slope = r.value("slope", e.slope);
                cfg.rate_table.push_back(e);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario field error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["duration_s"] = cfg.duration_s;
    j["seed"] = cfg.seed;
    j["t_pkt_s"] = cfg.t_pkt_s;
    j["f_s"] = cfg.f_s;
    j["f_r"] = cfg.f_r;
    j["f_b"] = cfg.f_b;
    j["v_max"] = cfg.v_max;
    j["snr_noise_db"] = cfg.snr_noise_db;
    j["n_antennas"] = cfg.n_antennas;
    j["antenna_spacing_m"] = cfg.antenna_spacing_m;
    j["packet_bits"] = cfg.packet_bits;
    j["backoff_threshold_db"] = cfg.backoff_threshold_db;
    j["contention_floor_db"] = cfg.contention_floor_db;
    j["sampled_outcomes"] = cfg.sampled_outcomes;
    j["radio"] = {{"wavelength_m", cfg.radio.wavelength_m},
                  {"ground_rho", cfg.radio.ground_rho},
                  {"ref_snr_db_at_1m", cfg.radio.ref_snr_db_at_1m}};
    j["broadcast_noise"] = {{"sigma_pos_m", cfg.broadcast_noise.sigma_pos_m},
                            {"sigma_vel_mps", cfg.broadcast_noise.sigma_vel_mps}};
    j["trajectory"]["waypoints"] = json::array();
    for (const auto& w : cfg.waypoints) j["trajectory"]["waypoints"].push_back(vec3_to(w));
    j["trajectory"]["speeds"] = cfg.speeds;
    j["clients"] = json::array();
    for (const auto& c : cfg.clients)
        j["clients"].push_back({{"position", vec3_to(c.position)},
                                {"nlos", c.nlos},
                                {"nlos_penalty_db", c.nlos_penalty_db},
                                {"moving", c.moving},
                                {"walk_speed_mps", c.walk_speed_mps},
                                {"walk_box_m", c.walk_box_m}});
    j["reflectors"] = json::array();
    for (const auto& r : cfg.reflectors) j["reflectors"].push_back({{"k", r.k}, {"rho", r.rho}});
    j["arms"] = json::array();
    for (PolicyKind a : cfg.arms) j["arms"].push_back(to_string(a));
    if (!cfg.rate_table.empty()) {
        j["rate_table"] = json::array();
        for (const auto& e : cfg.rate_table)
            j["rate_table"].push_back(
                {{"mbps", e.mbps}, {"snr50_db", e.snr50_db}, {"slope", e.slope}});
    }
    return j.dump(2) + "\n";
}

} // namespace airrate
