#include "ngrid/core.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ngrid {

std::pair<int, int> slot_to_clock(const TimeSlot& slot) {
    return {slot.hour(), slot.minute()};
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::WithoutP2P: return "none";
        case Scheme::ConventionalP2P: return "conventional";
        case Scheme::ProposedP2P: return "proposed";
    }
    return "?";
}

std::string to_string(RpvClass c) {
    switch (c) {
        case RpvClass::RPV1: return "rpv1";
        case RpvClass::RPV2: return "rpv2";
        case RpvClass::Fixed: return "fixed";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "none" || s == "without" || s == "without_p2p") return Scheme::WithoutP2P;
    if (s == "conventional" || s == "conventional_p2p") return Scheme::ConventionalP2P;
    if (s == "proposed" || s == "proposed_p2p") return Scheme::ProposedP2P;
    throw ConfigError("scheme: unknown value '" + s + "' (expected none|conventional|proposed)");
}

RpvClass rpv_from_string(const std::string& s) {
    if (s == "rpv1" || s == "1") return RpvClass::RPV1;
    if (s == "rpv2" || s == "2") return RpvClass::RPV2;
    if (s == "fixed") return RpvClass::Fixed;
    throw ConfigError("rpv_class: unknown value '" + s + "' (expected rpv1|rpv2|fixed)");
}

void ThermalParams::validate() const {
    if (leak_coeff <= 0.0 || leak_coeff >= 1.0)
        throw ConfigError("thermal.leak_coeff: must be in (0,1)");
    if (cool_delta_c <= 0.0) throw ConfigError("thermal.cool_delta_c: must be > 0");
    if (heat_delta_c <= 0.0) throw ConfigError("thermal.heat_delta_c: must be > 0");
    if (deadband_c <= 0.0) throw ConfigError("thermal.deadband_c: must be > 0");
    if (fan_vent_coeff <= 0.0 || fan_vent_coeff >= 1.0)
        throw ConfigError("thermal.fan_vent_coeff: must be in (0,1)");
    if (occupant_co2_ppm_per_slot <= 0.0)
        throw ConfigError("thermal.occupant_co2_ppm_per_slot: must be > 0");
}

void EvParams::validate() const {
    if (capacity_kwh <= 0.0) throw ConfigError("ev.capacity_kwh: must be > 0");
    if (charge_rate_kw <= 0.0) throw ConfigError("ev.charge_rate_kw: must be > 0");
    if (efficiency <= 0.0 || efficiency > 1.0)
        throw ConfigError("ev.efficiency: must be in (0,1]");
    if (initial_soc < 0.0 || initial_soc >= 1.0)
        throw ConfigError("ev.initial_soc: must be in [0,1)");
}

void GaConfig::validate() const {
    if (population < 2) throw ConfigError("ga.population: must be >= 2");
    if (generations < 1) throw ConfigError("ga.generations: must be >= 1");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
        throw ConfigError("ga.crossover_prob: must be in [0,1]");
    if (mutation_prob < 0.0 || mutation_prob > 1.0)
        throw ConfigError("ga.mutation_prob: must be in [0,1]");
    if (w_cost <= 0.0 || w_grid <= 0.0 || w_delay <= 0.0)
        throw ConfigError("ga weights: must be > 0");
    if (penalty <= 0.0) throw ConfigError("ga.penalty: must be > 0");
}

void ScenarioConfig::validate() const {
    if (cluster_count < 1) throw ConfigError("cluster_count: must be >= 1");
    if (houses_per_cluster < 1) throw ConfigError("houses_per_cluster: must be >= 1");
    if (pw_max_kw <= 0.0) throw ConfigError("pw_max_kw: must be > 0");
    if (d_max_slots < 1) throw ConfigError("d_max_slots: must be >= 1");
    if (horizon_k < 1 || horizon_k > 3)
        throw ConfigError("horizon_k: must be in [1,3] (forecaster emits 3 future slots)");
    if (days < 1) throw ConfigError("days: must be >= 1");
    if (rpv_class == RpvClass::Fixed) {
        if (!fixed_peaks_kw)
            throw ConfigError("fixed_peaks_kw: required when rpv_class is fixed");
        if (static_cast<int>(fixed_peaks_kw->size()) != cluster_count)
            throw ConfigError("fixed_peaks_kw: needs exactly one entry per cluster");
        for (double p : *fixed_peaks_kw)
            if (p <= 0.0) throw ConfigError("fixed_peaks_kw: entries must be > 0");
    }
    if (smp_usd_per_kwh < 0.0) throw ConfigError("smp_usd_per_kwh: must be >= 0");
    thermal.validate();
    ev.validate();
    ga.validate();
}

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(key) + ": wrong type in configuration file");
    }
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("configuration root must be a JSON object");

    ScenarioConfig cfg;
    if (j.contains("scheme")) cfg.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    if (j.contains("rpv_class")) cfg.rpv_class = rpv_from_string(j.at("rpv_class").get<std::string>());
    read_field(j, "cluster_count", cfg.cluster_count);
    read_field(j, "houses_per_cluster", cfg.houses_per_cluster);
    read_field(j, "pw_max_kw", cfg.pw_max_kw);
    read_field(j, "d_max_slots", cfg.d_max_slots);
    read_field(j, "horizon_k", cfg.horizon_k);
    read_field(j, "seed", cfg.seed);
    read_field(j, "days", cfg.days);
    auto read_peaks = [&j](const char* key, std::optional<std::vector<double>>& out) {
        if (!j.contains(key)) return;
        std::vector<double> peaks;
        read_field(j, key, peaks);
        out = peaks;
    };
    read_peaks("fixed_peaks_kw", cfg.fixed_peaks_kw);
    read_peaks("fixed_peaks_rpv1_kw", cfg.fixed_peaks_rpv1_kw);
    read_peaks("fixed_peaks_rpv2_kw", cfg.fixed_peaks_rpv2_kw);
    if (j.contains("thermal")) {
        const json& t = j.at("thermal");
        read_field(t, "leak_coeff", cfg.thermal.leak_coeff);
        read_field(t, "cool_delta_c", cfg.thermal.cool_delta_c);
        read_field(t, "heat_delta_c", cfg.thermal.heat_delta_c);
        read_field(t, "deadband_c", cfg.thermal.deadband_c);
        read_field(t, "fan_vent_coeff", cfg.thermal.fan_vent_coeff);
        read_field(t, "occupant_co2_ppm_per_slot", cfg.thermal.occupant_co2_ppm_per_slot);
    }
    if (j.contains("ev")) {
        const json& e = j.at("ev");
        read_field(e, "capacity_kwh", cfg.ev.capacity_kwh);
        read_field(e, "charge_rate_kw", cfg.ev.charge_rate_kw);
        read_field(e, "efficiency", cfg.ev.efficiency);
        read_field(e, "initial_soc", cfg.ev.initial_soc);
    }
    if (j.contains("ga")) {
        const json& g = j.at("ga");
        read_field(g, "population", cfg.ga.population);
        read_field(g, "generations", cfg.ga.generations);
        read_field(g, "crossover_prob", cfg.ga.crossover_prob);
        read_field(g, "mutation_prob", cfg.ga.mutation_prob);
        read_field(g, "w_cost", cfg.ga.w_cost);
        read_field(g, "w_grid", cfg.ga.w_grid);
        read_field(g, "w_delay", cfg.ga.w_delay);
        read_field(g, "penalty", cfg.ga.penalty);
    }
    read_field(j, "weather_csv", cfg.weather_csv);
    read_field(j, "reference_curve_csv", cfg.reference_curve_csv);
    read_field(j, "emission_csv", cfg.emission_csv);
    read_field(j, "ev_arrival_csv", cfg.ev_arrival_csv);
    read_field(j, "smp_csv", cfg.smp_csv);
    read_field(j, "smp_usd_per_kwh", cfg.smp_usd_per_kwh);
    read_field(j, "average_horizon_amount", cfg.average_horizon_amount);
    read_field(j, "model_dir", cfg.model_dir);
    read_field(j, "allow_persistence_forecast", cfg.allow_persistence_forecast);
    read_field(j, "out_dir", cfg.out_dir);

    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str());
}

}  // namespace ngrid
