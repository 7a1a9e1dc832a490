#pragma once

#include <vector>

#include "ngrid/core.hpp"
#include "ngrid/rng.hpp"

namespace ngrid {

/// Parameters of the daylight production window. The reference curve is a
/// half-sine over [sunrise, sunset] peaking at peak_slot.
struct PvSystemSpec {
    double peak_kw = 2.0;
    int sunrise_slot = 36;  // 06:00
    int sunset_slot = 120;  // 20:00
    int peak_slot = 78;     // 13:00

    void validate() const;
};

struct WeatherProfile {
    std::vector<double> outdoor_temp_c;  // 144 entries
    double outdoor_co2_ppm = 550.0;

    /// Synthetic default: minimum 23 C at 04:00, maximum 33 C at 14:00,
    /// piecewise-cosine between the two anchors.
    static WeatherProfile default_profile();
    static WeatherProfile sinusoid(double min_c, double max_c,
                                   int min_slot = 24, int max_slot = 84);
    static WeatherProfile from_csv(const std::string& path);
};

/// Reference PV curve (2 kW peak) in kW at `slot`.
double pv_reference(const TimeSlot& slot, const PvSystemSpec& spec = PvSystemSpec{});

/// Production of a system with the given peak, scaled from the reference.
double pv_production(const TimeSlot& slot, double peak_kw,
                     const PvSystemSpec& spec = PvSystemSpec{});

/// Tabulated replacement for the analytic reference curve.
class PvCurve {
public:
    PvCurve() = default;                       // analytic half-sine reference
    explicit PvCurve(std::vector<double> kw);  // 144 tabulated reference values
    static PvCurve from_csv(const std::string& path);

    double production(const TimeSlot& slot, double peak_kw) const;

private:
    std::vector<double> table_;  // empty = analytic
};

/// Random per-cluster peak capacities, sorted ascending so that a larger
/// cluster index means more PV capacity.
std::vector<double> draw_cluster_peaks(RpvClass cls, int count, RngStream& rng);

double rpv_lower_bound(RpvClass cls);
double rpv_upper_bound(RpvClass cls);

double outdoor_temperature(const TimeSlot& slot, const WeatherProfile& profile);

}  // namespace ngrid
