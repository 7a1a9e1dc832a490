#pragma once

#include <string>
#include <vector>

#include "ngrid/core.hpp"

namespace ngrid {

/// Three-tier demand-response grid tariff, $/kWh by clock time.
struct Tariff {
    double offpeak = 0.05;   // 23:00 - 09:00
    double midpeak = 0.10;   // 09:00-10:00, 12:00-13:00, 17:00-23:00
    double peak = 0.18;      // 10:00-12:00, 13:00-17:00
};

double dr_rate(const TimeSlot& slot, const Tariff& tariff = Tariff{});

/// Per-slot price of traded PV energy, $/kWh.
class SmpCurve {
public:
    explicit SmpCurve(double constant_rate = 0.10);
    static SmpCurve from_csv(const std::string& path);

    double rate(const TimeSlot& slot) const { return per_slot_[slot.slot_of_day]; }

private:
    std::vector<double> per_slot_;
};

struct LedgerEntry {
    int day = 0;
    int slot = 0;
    int cluster = 0;
    double grid_cost_usd = 0.0;
    double trade_settlement_usd = 0.0;
};

/// Append-only record of per-slot costs; totals are derived on demand.
class CostLedger {
public:
    void add(const LedgerEntry& e) { entries_.push_back(e); }
    const std::vector<LedgerEntry>& entries() const { return entries_; }

    double cluster_total_usd(int cluster) const;
    double grand_total_usd() const;
    int max_day() const;

private:
    std::vector<LedgerEntry> entries_;
};

struct DailyReport {
    std::string scheme;
    std::string rpv_class;
    std::vector<double> per_cluster_usd;  // index = cluster
    double average_usd = 0.0;
    double total_usd = 0.0;
    bool partial_data = false;  // set when the ledger does not cover whole days

    std::string to_text() const;
};

/// Grid cost and trade settlement for one slot. Self-supplied PV is free and
/// contributes nothing. `traded_kw_signed` is + for power bought, - for sold.
std::pair<double, double> interval_cost(double grid_kw, double traded_kw_signed,
                                        const TimeSlot& slot, const Tariff& tariff,
                                        const SmpCurve& smp);

DailyReport daily_report(const CostLedger& ledger, int cluster_count, int expected_days,
                         const std::string& scheme, const std::string& rpv_class);

}  // namespace ngrid
