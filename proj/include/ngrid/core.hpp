#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngrid {

// One slot is 10 minutes; a day is 144 slots.
constexpr int kSlotsPerDay = 144;
constexpr int kSlotsPerHour = 6;
constexpr double kSlotHours = 1.0 / 6.0;

/// Error raised when a configuration file cannot be parsed or violates an
/// invariant. The message names the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TimeSlot {
    int day = 0;          // non-negative
    int slot_of_day = 0;  // in [0, 144)

    int absolute() const { return day * kSlotsPerDay + slot_of_day; }
    int hour() const { return slot_of_day / kSlotsPerHour; }
    int minute() const { return (slot_of_day % kSlotsPerHour) * 10; }

    static TimeSlot from_absolute(int abs_slot) {
        return TimeSlot{abs_slot / kSlotsPerDay, abs_slot % kSlotsPerDay};
    }

    TimeSlot next() const { return from_absolute(absolute() + 1); }
};

/// (hour, minute) of a slot; hour in [0,24), minute in {0,10,...,50}.
std::pair<int, int> slot_to_clock(const TimeSlot& slot);

/// Energy (kWh) consumed by drawing `power_kw` for one 10-minute slot.
inline double slot_energy_kwh(double power_kw) { return power_kw / 6.0; }

enum class Scheme { WithoutP2P, ConventionalP2P, ProposedP2P };
enum class RpvClass { RPV1, RPV2, Fixed };

std::string to_string(Scheme s);
std::string to_string(RpvClass c);
Scheme scheme_from_string(const std::string& s);
RpvClass rpv_from_string(const std::string& s);

/// Thermal/air-quality model coefficients, overridable per scenario.
struct ThermalParams {
    double leak_coeff = 0.1;              // per-slot coupling to outdoor temperature
    double cool_delta_c = 0.5;            // degC removed per slot of air-conditioner action
    double heat_delta_c = 0.5;            // degC added per slot of heater action
    double deadband_c = 0.5;              // thermostat deadband around the target
    double fan_vent_coeff = 0.3;          // per-slot CO2 pull toward outdoor level
    double occupant_co2_ppm_per_slot = 15.0;

    void validate() const;
};

struct EvParams {
    double capacity_kwh = 15.0;
    double charge_rate_kw = 3.0;
    double efficiency = 0.9;
    double initial_soc = 0.2;

    void validate() const;
};

struct GaConfig {
    int population = 100;
    int generations = 100;
    double crossover_prob = 0.8;
    double mutation_prob = 0.01;
    double w_cost = 1.0;
    double w_grid = 0.05;
    double w_delay = 0.01;
    double penalty = 1e3;  // per kW of grid-limit violation

    void validate() const;
};

struct ScenarioConfig {
    Scheme scheme = Scheme::WithoutP2P;
    int cluster_count = 6;
    int houses_per_cluster = 3;
    double pw_max_kw = 9.0;
    int d_max_slots = 72;
    int horizon_k = 3;
    RpvClass rpv_class = RpvClass::RPV1;
    std::optional<std::vector<double>> fixed_peaks_kw;
    // Per-class peak overrides consumed by the scenario matrix runner.
    std::optional<std::vector<double>> fixed_peaks_rpv1_kw;
    std::optional<std::vector<double>> fixed_peaks_rpv2_kw;
    std::uint64_t seed = 1;
    int days = 1;

    ThermalParams thermal;
    EvParams ev;
    GaConfig ga;

    // Optional data-file overrides; empty string means built-in default.
    std::string weather_csv;
    std::string reference_curve_csv;
    std::string emission_csv;
    std::string ev_arrival_csv;
    std::string smp_csv;
    double smp_usd_per_kwh = 0.10;  // constant SMP when no curve file is given

    // When set, the horizon-sum trade amounts of the forecast-aware rule are
    // divided by (K+1) before posting.
    bool average_horizon_amount = false;

    // Directory of per-cluster forecaster model files (proposed scheme).
    std::string model_dir;
    // Allow the proposed scheme to fall back to the persistence forecaster
    // when no model files are given.
    bool allow_persistence_forecast = false;

    std::string out_dir = "out";

    void validate() const;
};

/// Parses a JSON scenario file, fills defaults, and validates invariants.
/// Throws ConfigError naming the offending field on failure.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario_json(const std::string& text);

}  // namespace ngrid
