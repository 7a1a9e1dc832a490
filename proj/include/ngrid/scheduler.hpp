#pragma once

#include <vector>

#include "ngrid/behavior.hpp"
#include "ngrid/core.hpp"
#include "ngrid/rng.hpp"

namespace ngrid {

/// How a cluster's demand is covered this slot. Self PV feeds non-flexible
/// loads first, then flexible ones; traded PV follows; the grid takes the
/// remainder. `feasible` is false when the grid share reaches the limit.
struct PowerSplit {
    double pv_self_kw = 0.0;
    double pv_traded_kw = 0.0;
    double grid_kw = 0.0;
    bool feasible = true;

    double total() const { return pv_self_kw + pv_traded_kw + grid_kw; }
};

PowerSplit allocate_power(double nonflex_kw, double flex_kw, double pv_self_avail_kw,
                          double pv_traded_avail_kw, double pw_max_kw);

struct ObjectiveVector {
    double cost_usd = 0.0;
    double grid_dependency_kw = 0.0;
    double total_delay_slots = 0.0;
    double violation = 0.0;  // grid-limit excess used by the penalty term
};

/// Everything the per-slot optimization needs besides the genes.
struct SlotContext {
    double nonflex_kw = 0.0;        // HVAC + immediate + running loads
    double pv_self_avail_kw = 0.0;  // production minus power delivered to the market
    double pv_traded_avail_kw = 0.0;
    double pw_max_kw = 9.0;
    double ec_rate = 0.0;           // grid $/kWh this slot
    double smp_rate = 0.0;          // traded $/kWh this slot
    double traded_kw_signed = 0.0;  // cleared quantity, + bought / - sold
    std::vector<const LoadRequest*> pending;  // one gene per entry
    std::vector<char> forced;                 // genes pinned to 1 (deadline reached)
};

using DecisionVector = std::vector<char>;

ObjectiveVector evaluate_objectives(const DecisionVector& genes, const SlotContext& ctx);

double scalarize(const ObjectiveVector& obj, const GaConfig& params);

/// Generational GA: tournament-2 selection, uniform crossover, bit-flip
/// mutation, elitism of one. Deterministic for a fixed stream state. When
/// `best_per_generation` is given it receives the best-so-far fitness trace.
DecisionVector ga_optimize(const SlotContext& ctx, const GaConfig& params, RngStream& rng,
                           std::vector<double>* best_per_generation = nullptr);

/// Brute-force reference optimizer for small instances (<= ~20 genes).
DecisionVector exhaustive_best(const SlotContext& ctx, const GaConfig& params);

/// Applies forced-gene pinning to a candidate before evaluation.
void apply_forced(DecisionVector& genes, const std::vector<char>& forced);

}  // namespace ngrid
