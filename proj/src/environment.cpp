#include "ngrid/environment.hpp"

#include <algorithm>
#include <cmath>

#include "ngrid/csv.hpp"

namespace ngrid {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void PvSystemSpec::validate() const {
    if (peak_kw <= 0.0) throw ConfigError("pv.peak_kw: must be > 0");
    if (!(sunrise_slot < peak_slot && peak_slot < sunset_slot))
        throw ConfigError("pv: requires sunrise < peak < sunset");
}

double pv_reference(const TimeSlot& slot, const PvSystemSpec& spec) {
    const int s = slot.slot_of_day;
    if (s < spec.sunrise_slot || s > spec.sunset_slot) return 0.0;
    const double span = static_cast<double>(spec.sunset_slot - spec.sunrise_slot);
    return 2.0 * std::sin(kPi * static_cast<double>(s - spec.sunrise_slot) / span);
}

double pv_production(const TimeSlot& slot, double peak_kw, const PvSystemSpec& spec) {
    return (peak_kw / 2.0) * pv_reference(slot, spec);
}

PvCurve::PvCurve(std::vector<double> kw) : table_(std::move(kw)) {
    if (table_.size() != static_cast<size_t>(kSlotsPerDay))
        throw ConfigError("reference_curve: needs exactly 144 rows");
}

PvCurve PvCurve::from_csv(const std::string& path) {
    std::vector<double> table(kSlotsPerDay, 0.0);
    for (const auto& row : csv::read_file(path)) {
        if (row.size() != 2) throw ConfigError("reference_curve: expected 'slot,kw' rows");
        int s = csv::to_int(row[0], "reference_curve.slot");
        if (s < 0 || s >= kSlotsPerDay) throw ConfigError("reference_curve.slot: out of range");
        table[s] = csv::to_double(row[1], "reference_curve.kw");
    }
    return PvCurve(std::move(table));
}

double PvCurve::production(const TimeSlot& slot, double peak_kw) const {
    if (table_.empty()) return pv_production(slot, peak_kw);
    return (peak_kw / 2.0) * table_[slot.slot_of_day];
}

double rpv_lower_bound(RpvClass cls) { return cls == RpvClass::RPV1 ? 3.0 : 2.0; }
double rpv_upper_bound(RpvClass cls) { return cls == RpvClass::RPV1 ? 16.0 : 11.0; }

std::vector<double> draw_cluster_peaks(RpvClass cls, int count, RngStream& rng) {
    const double lo = rpv_lower_bound(cls);
    const double hi = rpv_upper_bound(cls);
    std::vector<double> peaks(count);
    for (double& p : peaks) p = rng.uniform(lo, hi);
    std::sort(peaks.begin(), peaks.end());
    return peaks;
}

WeatherProfile WeatherProfile::sinusoid(double min_c, double max_c, int min_slot, int max_slot) {
    WeatherProfile w;
    w.outdoor_temp_c.resize(kSlotsPerDay);
    const double mid = 0.5 * (min_c + max_c);
    const double amp = 0.5 * (max_c - min_c);
    const int rise = max_slot - min_slot;          // min -> max
    const int fall = kSlotsPerDay - rise;          // max -> next-day min
    for (int s = 0; s < kSlotsPerDay; ++s) {
        double t;
        if (s >= min_slot && s <= max_slot) {
            t = mid - amp * std::cos(kPi * static_cast<double>(s - min_slot) / rise);
        } else {
            const int u = (s - max_slot + kSlotsPerDay) % kSlotsPerDay;
            t = mid + amp * std::cos(kPi * static_cast<double>(u) / fall);
        }
        w.outdoor_temp_c[s] = t;
    }
    return w;
}

WeatherProfile WeatherProfile::default_profile() { return sinusoid(23.0, 33.0); }

WeatherProfile WeatherProfile::from_csv(const std::string& path) {
    WeatherProfile w = default_profile();
    for (const auto& row : csv::read_file(path)) {
        if (row.size() != 2) throw ConfigError("weather: expected 'slot,temp_c' rows");
        int s = csv::to_int(row[0], "weather.slot");
        if (s < 0 || s >= kSlotsPerDay) throw ConfigError("weather.slot: out of range");
        w.outdoor_temp_c[s] = csv::to_double(row[1], "weather.temp_c");
    }
    return w;
}

double outdoor_temperature(const TimeSlot& slot, const WeatherProfile& profile) {
    return profile.outdoor_temp_c[slot.slot_of_day];
}

}  // namespace ngrid
