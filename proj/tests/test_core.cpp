#include "doctest.h"
#include "ngrid/core.hpp"

using namespace ngrid;

TEST_CASE("slot_to_clock maps slot indices to wall-clock times") {
    CHECK(slot_to_clock(TimeSlot{0, 0}) == std::pair<int, int>(0, 0));
    // 78 / 6 = 13 exactly
    CHECK(slot_to_clock(TimeSlot{0, 78}) == std::pair<int, int>(13, 0));
    // 143 = 23*6 + 5
    CHECK(slot_to_clock(TimeSlot{0, 143}) == std::pair<int, int>(23, 50));
}

TEST_CASE("slot_to_clock is a bijection over the 144 slots") {
    for (int s = 0; s < kSlotsPerDay; ++s) {
        const auto [h, m] = slot_to_clock(TimeSlot{0, s});
        CHECK(h >= 0);
        CHECK(h < 24);
        CHECK(m % 10 == 0);
        CHECK(h * 6 + m / 10 == s);  // round-trip recovers the slot
    }
}

TEST_CASE("slot_energy_kwh converts slot power to energy") {
    CHECK(slot_energy_kwh(6.0) == doctest::Approx(1.0));
    CHECK(slot_energy_kwh(0.0) == 0.0);
    CHECK(slot_energy_kwh(3.0) == doctest::Approx(0.5));
}

TEST_CASE("slot_energy_kwh is linear") {
    const double grid[] = {0.0, 0.5, 1.0, 2.75, 9.0, 13.5};
    for (double a : grid)
        for (double b : grid)
            CHECK(slot_energy_kwh(a + b) ==
                  doctest::Approx(slot_energy_kwh(a) + slot_energy_kwh(b)).epsilon(1e-12));
}

TEST_CASE("TimeSlot absolute round-trip across days") {
    const TimeSlot t{3, 97};
    CHECK(TimeSlot::from_absolute(t.absolute()).day == 3);
    CHECK(TimeSlot::from_absolute(t.absolute()).slot_of_day == 97);
    CHECK(TimeSlot{0, 143}.next().day == 1);
    CHECK(TimeSlot{0, 143}.next().slot_of_day == 0);
}

TEST_CASE("minimal scenario file gets documented defaults") {
    const auto cfg = parse_scenario_json(R"({"scheme": "none"})");
    CHECK(cfg.cluster_count == 6);
    CHECK(cfg.houses_per_cluster == 3);
    CHECK(cfg.pw_max_kw == doctest::Approx(9.0));
    CHECK(cfg.d_max_slots == 72);
    CHECK(cfg.horizon_k == 3);
    CHECK(cfg.days == 1);
}

TEST_CASE("scenario validation rejects bad fields by name") {
    CHECK_THROWS_WITH_AS(parse_scenario_json(R"({"d_max_slots": 0})"),
                         doctest::Contains("d_max_slots"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_json(R"({"pw_max_kw": -1})"),
                         doctest::Contains("pw_max_kw"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_json(R"({"rpv_class": "fixed"})"),
                         doctest::Contains("fixed_peaks_kw"), ConfigError);
    CHECK_THROWS_AS(parse_scenario_json("not json at all"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_json(R"({"scheme": "bogus"})"),
                         doctest::Contains("scheme"), ConfigError);
}

TEST_CASE("fixed peaks pass through verbatim") {
    const auto cfg = parse_scenario_json(
        R"({"rpv_class": "fixed",
            "fixed_peaks_kw": [2.23, 5.87, 8.1, 10.34, 13.97, 16.0]})");
    REQUIRE(cfg.fixed_peaks_kw.has_value());
    CHECK(cfg.fixed_peaks_kw->size() == 6);
    CHECK((*cfg.fixed_peaks_kw)[0] == doctest::Approx(2.23));
    CHECK((*cfg.fixed_peaks_kw)[5] == doctest::Approx(16.0));
}
