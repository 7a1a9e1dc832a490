#include "ngrid/hvac.hpp"

namespace ngrid {

HvacCommand hvac_control(const RoomState& state, bool occupied, const ThermalParams& params) {
    const double target = occupied ? kOccupiedTargetC : kUnoccupiedTargetC;
    HvacCommand cmd;
    cmd.cool_on = state.temp_c > target + params.deadband_c;
    cmd.heat_on = state.temp_c < target - params.deadband_c;
    cmd.fan_on = state.co2_ppm > kTargetCo2Ppm;
    return cmd;
}

RoomState step_thermal(const RoomState& state, const HvacCommand& cmd, double t_out_c,
                       const ThermalParams& params) {
    RoomState next = state;
    next.temp_c = state.temp_c + params.leak_coeff * (t_out_c - state.temp_c) -
                  params.cool_delta_c * cmd.cool_on + params.heat_delta_c * cmd.heat_on;
    return next;
}

double step_co2(const RoomState& state, bool fan_on, bool occupied, double outdoor_ppm,
                const ThermalParams& params) {
    return state.co2_ppm + params.occupant_co2_ppm_per_slot * occupied +
           params.fan_vent_coeff * (outdoor_ppm - state.co2_ppm) * fan_on;
}

}  // namespace ngrid
