#pragma once

#include <array>
#include <string>
#include <vector>

#include "ngrid/core.hpp"
#include "ngrid/rng.hpp"

namespace ngrid {

constexpr int kRoomCount = 4;
constexpr int kApplianceCount = 12;
constexpr int kEvApplianceIndex = 13;  // pseudo-index for EV charging sessions

enum class ApplianceKind { HvacNonFlexible, NonFlexible, Flexible };

struct ApplianceSpec {
    int index = 0;  // 1..12 per the default catalog
    std::string name;
    ApplianceKind kind = ApplianceKind::NonFlexible;
    double power_kw = 0.0;
    std::vector<int> rooms;  // room indices 1..4 where the appliance exists
    int duration_slots = 1;

    bool in_room(int room) const;
};

/// The default 12-appliance catalog with Table-style ratings: three HVAC
/// units per room plus nine room-bound appliances.
const std::vector<ApplianceSpec>& default_catalog();

/// Markov-chain resident mobility over 4 rooms; row = current room.
struct MobilityModel {
    std::array<std::array<double, kRoomCount>, kRoomCount> transition{};

    /// Room 1 moves uniformly over all rooms; rooms 2-4 stay, return to
    /// room 1, or move clockwise (2->3, 3->4, 4->2), each with probability 1/3.
    static MobilityModel default_model();
    void validate() const;  // rows must be probability distributions
};

/// Returns the next room (1..4) drawn from the transition row of `room`.
int step_resident(int room, const MobilityModel& model, RngStream& rng);

/// Per-appliance request probability for each slot of the day.
class EmissionProfile {
public:
    EmissionProfile();  // all zeros
    static EmissionProfile default_profile();
    static EmissionProfile from_csv(const std::string& path);

    double probability(int appliance_index, int slot_of_day) const;
    void set(int appliance_index, int slot_of_day, double p);

private:
    // row = appliance index - 1, 12 rows x 144 slots
    std::vector<std::array<double, kSlotsPerDay>> prob_;
};

struct EvModel {
    EvParams params;
    std::array<double, 24> arrival_prob{};  // probability of initiating a charge per hour

    static EvModel default_model();
    static std::array<double, 24> arrival_from_csv(const std::string& path);
};

/// A pending flexible demand (appliance run or EV charging session).
struct LoadRequest {
    int appliance_index = 0;     // 1..12, or kEvApplianceIndex for EVs
    int house = 0;
    TimeSlot issued_slot;
    int remaining_slots = 1;
    int accumulated_delay_slots = 0;
    double power_kw = 0.0;
    bool started = false;        // appliances become non-preemptible once started
};

/// Draws one request per catalog appliance located in the resident's current
/// room, using the emission probability of this slot. HVAC appliances never
/// emit. A draw is consumed for every candidate so the stream advances the
/// same way regardless of downstream scheduling.
std::vector<LoadRequest> sample_requests(const TimeSlot& slot, int room,
                                         const EmissionProfile& profiles,
                                         const std::vector<ApplianceSpec>& catalog,
                                         int house, RngStream& rng);

/// Hourly EV arrival draw; always consumes one uniform draw, and reports
/// false while a charge is in progress.
bool sample_ev_arrival(int hour, const EvModel& ev, bool already_charging, RngStream& rng);

/// Number of charging slots needed to fill the battery from initial_soc.
int ev_required_slots(const EvModel& ev);

/// Grid+PV power drawn while charging this slot, given the stored energy
/// still missing; the last slot tapers so the battery lands exactly full.
double ev_charge_power_kw(const EvModel& ev, double missing_stored_kwh);

}  // namespace ngrid
