#include "ngrid/accounting.hpp"

#include <algorithm>
#include <sstream>

#include "ngrid/csv.hpp"

namespace ngrid {

double dr_rate(const TimeSlot& slot, const Tariff& tariff) {
    const int h = slot.hour();
    if (h >= 23 || h < 9) return tariff.offpeak;
    if ((h >= 10 && h < 12) || (h >= 13 && h < 17)) return tariff.peak;
    return tariff.midpeak;  // 09-10, 12-13, 17-23
}

SmpCurve::SmpCurve(double constant_rate) : per_slot_(kSlotsPerDay, constant_rate) {
    if (constant_rate < 0.0) throw ConfigError("smp_usd_per_kwh: must be >= 0");
}

SmpCurve SmpCurve::from_csv(const std::string& path) {
    SmpCurve curve(0.0);
    std::vector<bool> seen(kSlotsPerDay, false);
    for (const auto& row : csv::read_file(path)) {
        if (row.size() != 2) throw ConfigError("smp: expected 'slot,usd_per_kwh' rows");
        int s = csv::to_int(row[0], "smp.slot");
        if (s < 0 || s >= kSlotsPerDay) throw ConfigError("smp.slot: out of range");
        double r = csv::to_double(row[1], "smp.usd_per_kwh");
        if (r < 0.0) throw ConfigError("smp.usd_per_kwh: must be >= 0");
        curve.per_slot_[s] = r;
        seen[s] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw ConfigError("smp: file must cover all 144 slots");
    return curve;
}

std::pair<double, double> interval_cost(double grid_kw, double traded_kw_signed,
                                        const TimeSlot& slot, const Tariff& tariff,
                                        const SmpCurve& smp) {
    const double grid_usd = slot_energy_kwh(grid_kw) * dr_rate(slot, tariff);
    const double trade_usd = slot_energy_kwh(traded_kw_signed) * smp.rate(slot);
    return {grid_usd, trade_usd};
}

double CostLedger::cluster_total_usd(int cluster) const {
    double total = 0.0;
    for (const auto& e : entries_)
        if (e.cluster == cluster) total += e.grid_cost_usd + e.trade_settlement_usd;
    return total;
}

double CostLedger::grand_total_usd() const {
    double total = 0.0;
    for (const auto& e : entries_) total += e.grid_cost_usd + e.trade_settlement_usd;
    return total;
}

int CostLedger::max_day() const {
    int d = -1;
    for (const auto& e : entries_) d = std::max(d, e.day);
    return d;
}

DailyReport daily_report(const CostLedger& ledger, int cluster_count, int expected_days,
                         const std::string& scheme, const std::string& rpv_class) {
    DailyReport rep;
    rep.scheme = scheme;
    rep.rpv_class = rpv_class;
    rep.per_cluster_usd.assign(cluster_count, 0.0);
    for (const auto& e : ledger.entries()) {
        if (e.cluster >= 0 && e.cluster < cluster_count)
            rep.per_cluster_usd[e.cluster] += e.grid_cost_usd + e.trade_settlement_usd;
    }
    for (double c : rep.per_cluster_usd) rep.total_usd += c;
    rep.average_usd = cluster_count > 0 ? rep.total_usd / cluster_count : 0.0;
    const long expected_entries =
        static_cast<long>(expected_days) * kSlotsPerDay * cluster_count;
    rep.partial_data = static_cast<long>(ledger.entries().size()) < expected_entries;
    return rep;
}

std::string DailyReport::to_text() const {
    std::ostringstream os;
    if (partial_data) os << "WARNING: ledger covers only part of the requested days\n";
    os << "scheme=" << scheme << " rpv=" << rpv_class << "\n";
    for (size_t i = 0; i < per_cluster_usd.size(); ++i)
        os << "  cluster " << (i + 1) << ": $" << csv::format_double(per_cluster_usd[i]) << "\n";
    os << "  average per cluster: $" << csv::format_double(average_usd) << "\n";
    os << "  total (" << per_cluster_usd.size() << " clusters): $"
       << csv::format_double(total_usd) << "\n";
    return os.str();
}

}  // namespace ngrid
