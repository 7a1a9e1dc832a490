#pragma once

#include <vector>

#include "ngrid/core.hpp"

namespace ngrid {

enum class TradeSide { Idle, Buy, Sell };

/// Per-cluster trading decision for one slot. `amount_kw` is strictly
/// positive for Buy/Sell; zero-amount decisions collapse to Idle.
struct TradeRole {
    TradeSide side = TradeSide::Idle;
    double amount_kw = 0.0;

    static TradeRole idle() { return {}; }
    static TradeRole buy(double kw) {
        return kw > 0.0 ? TradeRole{TradeSide::Buy, kw} : TradeRole{};
    }
    static TradeRole sell(double kw) {
        return kw > 0.0 ? TradeRole{TradeSide::Sell, kw} : TradeRole{};
    }

    /// Switching-function value: +1 buy, -1 sell, 0 idle.
    int direction() const {
        return side == TradeSide::Buy ? 1 : (side == TradeSide::Sell ? -1 : 0);
    }
};

const char* to_string(TradeSide side);

struct OrderBook {
    struct Entry {
        int cluster = 0;
        double kw = 0.0;  // > 0
    };
    std::vector<Entry> offers;    // producers
    std::vector<Entry> requests;  // consumers

    void post(int cluster, const TradeRole& role);
};

/// Result of clearing one slot: per-cluster signed quantity
/// (+ received, - delivered) and the total matched volume.
struct Allocation {
    std::vector<double> traded_kw;  // indexed by cluster id
    double total_traded_kw = 0.0;
};

/// Emergency rule on the instantaneous state: buy when the deficit exceeds
/// the grid limit, sell any PV surplus otherwise.
TradeRole role_conventional(double pw_load_kw, double pw_pv_kw, double pw_max_kw);

/// Forecast-aware rule over the current pair plus `forecasts` future pairs
/// (load, pv). The horizon sums are posted as the trade amount; when
/// `average_horizon_amount` is set they are divided by the number of terms.
TradeRole role_proposed(double load_now_kw, double pv_now_kw,
                        const std::vector<std::pair<double, double>>& forecasts,
                        double pw_max_kw, bool average_horizon_amount = false);

/// Proportional cooperative clearing: the matched volume is
/// min(total offers, total requests) and every participant gets a share
/// proportional to its posted quantity.
Allocation clear_market(const OrderBook& book, int cluster_count);

/// Settlement of a traded quantity at the system marginal price: buyers pay
/// (+), sellers earn (-), following the sign of `traded_kw`.
double settle(double traded_kw, double smp_usd_per_kwh);

}  // namespace ngrid
