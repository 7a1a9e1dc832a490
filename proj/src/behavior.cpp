#include "ngrid/behavior.hpp"

#include <algorithm>
#include <cmath>

#include "ngrid/csv.hpp"

namespace ngrid {

bool ApplianceSpec::in_room(int room) const {
    return std::find(rooms.begin(), rooms.end(), room) != rooms.end();
}

const std::vector<ApplianceSpec>& default_catalog() {
    static const std::vector<ApplianceSpec> catalog = {
        {1, "air_conditioner", ApplianceKind::HvacNonFlexible, 1.2, {1, 2, 3, 4}, 1},
        {2, "electric_fan", ApplianceKind::HvacNonFlexible, 0.06, {1, 2, 3, 4}, 1},
        {3, "heater", ApplianceKind::HvacNonFlexible, 1.16, {1, 2, 3, 4}, 1},
        {4, "computer", ApplianceKind::NonFlexible, 0.255, {3}, 6},
        {5, "tv", ApplianceKind::NonFlexible, 0.130, {1}, 6},
        {6, "audio", ApplianceKind::Flexible, 0.050, {3}, 3},
        {7, "washing_machine", ApplianceKind::Flexible, 0.242, {2}, 6},
        {8, "vacuum_cleaner", ApplianceKind::Flexible, 1.07, {3}, 1},
        {9, "iron", ApplianceKind::Flexible, 1.23, {1}, 1},
        {10, "microwave_oven", ApplianceKind::Flexible, 1.04, {4}, 1},
        {11, "rice_cooker", ApplianceKind::Flexible, 1.03, {4}, 1},
        {12, "hair_dryer", ApplianceKind::Flexible, 1.00, {2}, 1},
    };
    return catalog;
}

MobilityModel MobilityModel::default_model() {
    MobilityModel m;
    // room 1: uniform over all four rooms
    m.transition[0] = {0.25, 0.25, 0.25, 0.25};
    // rooms 2-4: stay, go to room 1, or move clockwise (2->3, 3->4, 4->2)
    const double third = 1.0 / 3.0;
    m.transition[1] = {third, third, third, 0.0};
    m.transition[2] = {third, 0.0, third, third};
    m.transition[3] = {third, third, 0.0, third};
    return m;
}

void MobilityModel::validate() const {
    for (int i = 0; i < kRoomCount; ++i) {
        double sum = 0.0;
        for (int j = 0; j < kRoomCount; ++j) {
            if (transition[i][j] < 0.0)
                throw ConfigError("mobility: negative transition probability");
            sum += transition[i][j];
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ConfigError("mobility: row " + std::to_string(i + 1) + " does not sum to 1");
    }
}

int step_resident(int room, const MobilityModel& model, RngStream& rng) {
    const auto& row = model.transition[room - 1];
    const double u = rng.uniform01();
    double acc = 0.0;
    for (int j = 0; j < kRoomCount; ++j) {
        acc += row[j];
        if (u < acc) return j + 1;
    }
    return kRoomCount;  // numeric guard when the row sums to slightly below 1
}

EmissionProfile::EmissionProfile() : prob_(kApplianceCount) {
    for (auto& row : prob_) row.fill(0.0);
}

double EmissionProfile::probability(int appliance_index, int slot_of_day) const {
    return prob_[appliance_index - 1][slot_of_day];
}

void EmissionProfile::set(int appliance_index, int slot_of_day, double p) {
    if (p < 0.0 || p > 1.0) throw ConfigError("emission probability must be in [0,1]");
    prob_[appliance_index - 1][slot_of_day] = p;
}

namespace {
void fill_window(EmissionProfile& e, int appliance, double from_hour, double to_hour, double p) {
    const int a = static_cast<int>(from_hour * kSlotsPerHour);
    const int b = static_cast<int>(to_hour * kSlotsPerHour);
    for (int s = a; s < b; ++s) e.set(appliance, s, p);
}
}  // namespace

EmissionProfile EmissionProfile::default_profile() {
    EmissionProfile e;
    // computer: evening sessions with light daytime use
    fill_window(e, 4, 9, 18, 0.01);
    fill_window(e, 4, 18, 23, 0.05);
    // tv: evening peak plus lunch-time viewing
    fill_window(e, 5, 12, 14, 0.02);
    fill_window(e, 5, 18, 23, 0.06);
    // audio: early evening
    fill_window(e, 6, 17, 22, 0.03);
    // washing machine: evening peak, small morning shoulder
    fill_window(e, 7, 8, 10, 0.02);
    fill_window(e, 7, 18, 22, 0.05);
    // vacuum cleaner: late morning
    fill_window(e, 8, 9, 12, 0.04);
    // iron: morning
    fill_window(e, 9, 7, 9, 0.04);
    // microwave: meal times
    fill_window(e, 10, 7, 9, 0.06);
    fill_window(e, 10, 12, 13.5, 0.06);
    fill_window(e, 10, 18, 20, 0.06);
    // rice cooker: morning and evening meals
    fill_window(e, 11, 6, 8, 0.07);
    fill_window(e, 11, 17, 19, 0.07);
    // hair dryer: morning peak, evening shoulder
    fill_window(e, 12, 7, 9, 0.05);
    fill_window(e, 12, 20, 22, 0.03);
    return e;
}

EmissionProfile EmissionProfile::from_csv(const std::string& path) {
    EmissionProfile e;
    for (const auto& row : csv::read_file(path)) {
        if (row.size() != 3)
            throw ConfigError("emission: expected 'appliance_index,slot,probability' rows");
        int a = csv::to_int(row[0], "emission.appliance_index");
        int s = csv::to_int(row[1], "emission.slot");
        if (a < 1 || a > kApplianceCount) throw ConfigError("emission.appliance_index: out of range");
        if (s < 0 || s >= kSlotsPerDay) throw ConfigError("emission.slot: out of range");
        e.set(a, s, csv::to_double(row[2], "emission.probability"));
    }
    return e;
}

EvModel EvModel::default_model() {
    EvModel ev;
    ev.arrival_prob = {0.01, 0.01, 0.01, 0.01, 0.01, 0.02, 0.03, 0.05,
                       0.08, 0.10, 0.08, 0.06, 0.05, 0.04, 0.03, 0.03,
                       0.04, 0.06, 0.07, 0.06, 0.04, 0.03, 0.02, 0.01};
    return ev;
}

std::array<double, 24> EvModel::arrival_from_csv(const std::string& path) {
    std::array<double, 24> prob{};
    for (const auto& row : csv::read_file(path)) {
        if (row.size() != 2) throw ConfigError("ev_arrival: expected 'hour,probability' rows");
        int h = csv::to_int(row[0], "ev_arrival.hour");
        if (h < 0 || h >= 24) throw ConfigError("ev_arrival.hour: out of range");
        double p = csv::to_double(row[1], "ev_arrival.probability");
        if (p < 0.0 || p > 1.0) throw ConfigError("ev_arrival.probability: must be in [0,1]");
        prob[h] = p;
    }
    return prob;
}

std::vector<LoadRequest> sample_requests(const TimeSlot& slot, int room,
                                         const EmissionProfile& profiles,
                                         const std::vector<ApplianceSpec>& catalog,
                                         int house, RngStream& rng) {
    std::vector<LoadRequest> requests;
    for (const auto& spec : catalog) {
        if (spec.kind == ApplianceKind::HvacNonFlexible) continue;
        if (!spec.in_room(room)) continue;
        // one draw per in-room candidate, regardless of what happens downstream
        if (!rng.bernoulli(profiles.probability(spec.index, slot.slot_of_day))) continue;
        LoadRequest req;
        req.appliance_index = spec.index;
        req.house = house;
        req.issued_slot = slot;
        req.remaining_slots = spec.duration_slots;
        req.power_kw = spec.power_kw;
        requests.push_back(req);
    }
    return requests;
}

bool sample_ev_arrival(int hour, const EvModel& ev, bool already_charging, RngStream& rng) {
    const bool drawn = rng.bernoulli(ev.arrival_prob[hour]);
    return drawn && !already_charging;
}

int ev_required_slots(const EvModel& ev) {
    const double missing_kwh = (1.0 - ev.params.initial_soc) * ev.params.capacity_kwh;
    const double stored_per_slot = ev.params.charge_rate_kw * ev.params.efficiency / 6.0;
    return static_cast<int>(std::ceil(missing_kwh / stored_per_slot - 1e-9));
}

double ev_charge_power_kw(const EvModel& ev, double missing_stored_kwh) {
    const double full_rate_kw = ev.params.charge_rate_kw;
    const double needed_kw = missing_stored_kwh / ev.params.efficiency * 6.0;
    return std::min(full_rate_kw, needed_kw);
}

}  // namespace ngrid
