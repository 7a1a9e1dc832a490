#include <cmath>

#include "doctest.h"
#include "ngrid/environment.hpp"

using namespace ngrid;

TEST_CASE("pv_reference hits its anchor points") {
    CHECK(pv_reference(TimeSlot{0, 78}) == doctest::Approx(2.0));   // 13:00 peak
    CHECK(pv_reference(TimeSlot{0, 30}) == 0.0);                    // 05:00, before sunrise
    CHECK(pv_reference(TimeSlot{0, 126}) == 0.0);                   // 21:00, after sunset
    // half-sine at 09:30: 2 sin(pi * 21/84)
    CHECK(pv_reference(TimeSlot{0, 57}) == doctest::Approx(2.0 * std::sin(M_PI * 21.0 / 84.0)));
    CHECK(pv_reference(TimeSlot{0, 57}) == doctest::Approx(1.4142).epsilon(1e-4));
}

TEST_CASE("pv_production scales the reference curve") {
    CHECK(pv_production(TimeSlot{0, 78}, 6.0) == doctest::Approx(6.0));
    CHECK(pv_production(TimeSlot{0, 30}, 6.0) == 0.0);
    CHECK(pv_production(TimeSlot{0, 57}, 16.0) == doctest::Approx(11.3137).epsilon(1e-4));
}

TEST_CASE("pv_production is nonnegative, nocturnal-zero, and linear in peak") {
    for (int s = 0; s < kSlotsPerDay; ++s) {
        const TimeSlot t{0, s};
        const double p1 = pv_production(t, 7.3);
        CHECK(p1 >= 0.0);
        if (s < 36 || s > 120) CHECK(p1 == 0.0);
        CHECK(pv_production(t, 2.5 * 7.3) == doctest::Approx(2.5 * p1).epsilon(1e-12));
    }
}

TEST_CASE("daily maximum sits at the peak slot and equals the peak power") {
    const double peak = 10.34;
    double best = -1.0;
    int best_slot = -1;
    for (int s = 0; s < kSlotsPerDay; ++s) {
        const double v = pv_production(TimeSlot{0, s}, peak);
        if (v > best) {
            best = v;
            best_slot = s;
        }
    }
    CHECK(best_slot == 78);
    CHECK(best == doctest::Approx(peak).epsilon(1e-9));
}

TEST_CASE("draw_cluster_peaks stays in range, sorted, with the right mean") {
    RngStream rng(123);
    double sum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n / 10; ++i) {
        const auto peaks = draw_cluster_peaks(RpvClass::RPV1, 10, rng);
        REQUIRE(peaks.size() == 10);
        for (size_t k = 0; k < peaks.size(); ++k) {
            CHECK(peaks[k] >= 3.0);
            CHECK(peaks[k] <= 16.0);
            if (k > 0) CHECK(peaks[k] >= peaks[k - 1]);
            sum += peaks[k];
        }
    }
    CHECK(sum / n == doctest::Approx(9.5).epsilon(0.025));  // uniform(3,16) mean

    const auto p2 = draw_cluster_peaks(RpvClass::RPV2, 6, rng);
    for (double p : p2) {
        CHECK(p >= 2.0);
        CHECK(p <= 11.0);
    }
}

TEST_CASE("default weather profile anchors and hot zone") {
    const WeatherProfile w = WeatherProfile::default_profile();
    CHECK(outdoor_temperature(TimeSlot{0, 84}, w) == doctest::Approx(33.0));  // 14:00
    CHECK(outdoor_temperature(TimeSlot{0, 24}, w) == doctest::Approx(23.0));  // 04:00
    for (int s = 60; s <= 102; ++s)  // 10:00-17:00
        CHECK(outdoor_temperature(TimeSlot{0, s}, w) > 25.0);
    for (int s = 0; s < kSlotsPerDay; ++s) {
        CHECK(w.outdoor_temp_c[s] >= 23.0 - 1e-9);
        CHECK(w.outdoor_temp_c[s] <= 33.0 + 1e-9);
    }
}

TEST_CASE("weather csv override replaces slots") {
    const std::string path = "test_weather.csv";
    {
        FILE* f = fopen(path.c_str(), "w");
        fputs("slot,temp_c\n0,20.5\n143,21.5\n", f);
        fclose(f);
    }
    const WeatherProfile w = WeatherProfile::from_csv(path);
    CHECK(w.outdoor_temp_c[0] == doctest::Approx(20.5));
    CHECK(w.outdoor_temp_c[143] == doctest::Approx(21.5));
    remove(path.c_str());
}
