#include "ngrid/trading.hpp"

#include <stdexcept>

namespace ngrid {

const char* to_string(TradeSide side) {
    switch (side) {
        case TradeSide::Idle: return "idle";
        case TradeSide::Buy: return "buy";
        case TradeSide::Sell: return "sell";
    }
    return "?";
}

void OrderBook::post(int cluster, const TradeRole& role) {
    if (role.side == TradeSide::Buy)
        requests.push_back({cluster, role.amount_kw});
    else if (role.side == TradeSide::Sell)
        offers.push_back({cluster, role.amount_kw});
}

TradeRole role_conventional(double pw_load_kw, double pw_pv_kw, double pw_max_kw) {
    const double diff = pw_load_kw - pw_pv_kw;
    if (diff > pw_max_kw) return TradeRole::buy(diff - pw_max_kw);
    if (diff < pw_max_kw && pw_pv_kw > 0.0) return TradeRole::sell(pw_pv_kw - pw_load_kw);
    return TradeRole::idle();  // exact equality maps to no trade
}

TradeRole role_proposed(double load_now_kw, double pv_now_kw,
                        const std::vector<std::pair<double, double>>& forecasts,
                        double pw_max_kw, bool average_horizon_amount) {
    const int terms = 1 + static_cast<int>(forecasts.size());
    double deficit_sum = load_now_kw - pv_now_kw;
    for (const auto& [load, pv] : forecasts) deficit_sum += load - pv;

    const double threshold = terms * pw_max_kw;
    const double divisor = average_horizon_amount ? terms : 1.0;
    if (deficit_sum > threshold) return TradeRole::buy((deficit_sum - threshold) / divisor);
    if (deficit_sum < threshold && pv_now_kw > 0.0)
        return TradeRole::sell(-deficit_sum / divisor);
    return TradeRole::idle();
}

Allocation clear_market(const OrderBook& book, int cluster_count) {
    Allocation alloc;
    alloc.traded_kw.assign(cluster_count, 0.0);

    double supply = 0.0, demand = 0.0;
    for (const auto& o : book.offers) supply += o.kw;
    for (const auto& r : book.requests) demand += r.kw;

    const double matched = std::min(supply, demand);
    alloc.total_traded_kw = matched;
    if (matched <= 0.0) return alloc;

    for (const auto& o : book.offers) alloc.traded_kw[o.cluster] = -matched * o.kw / supply;
    for (const auto& r : book.requests) alloc.traded_kw[r.cluster] = matched * r.kw / demand;
    return alloc;
}

double settle(double traded_kw, double smp_usd_per_kwh) {
    return slot_energy_kwh(traded_kw) * smp_usd_per_kwh;
}

}  // namespace ngrid
