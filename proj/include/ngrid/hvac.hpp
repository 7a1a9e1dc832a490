#pragma once

#include "ngrid/core.hpp"

namespace ngrid {

// Table-1 HVAC appliance ratings, installed in every room.
constexpr double kAirConditionerKw = 1.2;
constexpr double kHeaterKw = 1.16;
constexpr double kVentFanKw = 0.06;

constexpr double kOccupiedTargetC = 23.0;
constexpr double kUnoccupiedTargetC = 25.0;
constexpr double kTargetCo2Ppm = 500.0;

struct RoomState {
    double temp_c = 23.0;
    double co2_ppm = 550.0;
};

struct HvacCommand {
    bool cool_on = false;
    bool heat_on = false;
    bool fan_on = false;

    double power_kw() const {
        return kAirConditionerKw * cool_on + kHeaterKw * heat_on + kVentFanKw * fan_on;
    }
};

/// Thermostat + air-quality rule for one room. Cooling and heating are
/// mutually exclusive by construction of the deadband.
HvacCommand hvac_control(const RoomState& state, bool occupied, const ThermalParams& params);

/// First-order temperature update for one slot.
RoomState step_thermal(const RoomState& state, const HvacCommand& cmd, double t_out_c,
                       const ThermalParams& params);

/// First-order CO2 update for one slot; returns the new concentration.
double step_co2(const RoomState& state, bool fan_on, bool occupied, double outdoor_ppm,
                const ThermalParams& params);

}  // namespace ngrid
