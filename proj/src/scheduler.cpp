#include "ngrid/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ngrid {

PowerSplit allocate_power(double nonflex_kw, double flex_kw, double pv_self_avail_kw,
                          double pv_traded_avail_kw, double pw_max_kw) {
    PowerSplit split;
    double nonflex_rest = nonflex_kw;
    double flex_rest = flex_kw;

    // self PV: non-flexible loads first, remainder to flexible ones
    double take = std::min(pv_self_avail_kw, nonflex_rest);
    split.pv_self_kw += take;
    nonflex_rest -= take;
    take = std::min(pv_self_avail_kw - split.pv_self_kw, flex_rest);
    split.pv_self_kw += take;
    flex_rest -= take;

    // traded PV next, same precedence
    take = std::min(pv_traded_avail_kw, nonflex_rest);
    split.pv_traded_kw += take;
    nonflex_rest -= take;
    take = std::min(pv_traded_avail_kw - split.pv_traded_kw, flex_rest);
    split.pv_traded_kw += take;
    flex_rest -= take;

    split.grid_kw = nonflex_rest + flex_rest;
    split.feasible = split.grid_kw < pw_max_kw;
    return split;
}

ObjectiveVector evaluate_objectives(const DecisionVector& genes, const SlotContext& ctx) {
    assert(genes.size() == ctx.pending.size());

    double flex_kw = 0.0;
    double delay = 0.0;
    for (size_t i = 0; i < genes.size(); ++i) {
        if (genes[i]) {
            flex_kw += ctx.pending[i]->power_kw;
        } else {
            delay += ctx.pending[i]->accumulated_delay_slots + 1;
        }
    }

    const PowerSplit split = allocate_power(ctx.nonflex_kw, flex_kw, ctx.pv_self_avail_kw,
                                            ctx.pv_traded_avail_kw, ctx.pw_max_kw);

    ObjectiveVector obj;
    obj.cost_usd = (split.grid_kw * ctx.ec_rate + ctx.traded_kw_signed * ctx.smp_rate) / 6.0;
    obj.grid_dependency_kw = split.grid_kw - split.pv_self_kw - split.pv_traded_kw;
    obj.total_delay_slots = delay;
    if (!split.feasible) {
        // finite penalty so the GA can still rank infeasible candidates
        obj.violation = std::max(0.0, split.grid_kw - ctx.pw_max_kw) + 1.0;
    }
    return obj;
}

double scalarize(const ObjectiveVector& obj, const GaConfig& params) {
    return params.w_cost * obj.cost_usd + params.w_grid * obj.grid_dependency_kw +
           params.w_delay * obj.total_delay_slots + params.penalty * obj.violation;
}

void apply_forced(DecisionVector& genes, const std::vector<char>& forced) {
    for (size_t i = 0; i < genes.size(); ++i)
        if (forced[i]) genes[i] = 1;
}

namespace {

double fitness_of(DecisionVector& genes, const SlotContext& ctx, const GaConfig& params) {
    apply_forced(genes, ctx.forced);
    return scalarize(evaluate_objectives(genes, ctx), params);
}

}  // namespace

DecisionVector exhaustive_best(const SlotContext& ctx, const GaConfig& params) {
    const size_t n = ctx.pending.size();
    assert(n <= 20);
    DecisionVector best(n, 1);
    double best_fit = fitness_of(best, ctx, params);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        DecisionVector cand(n);
        for (size_t i = 0; i < n; ++i) cand[i] = static_cast<char>((mask >> i) & 1);
        const double fit = fitness_of(cand, ctx, params);
        if (fit < best_fit) {
            best_fit = fit;
            best = cand;
        }
    }
    return best;
}

DecisionVector ga_optimize(const SlotContext& ctx, const GaConfig& params, RngStream& rng,
                           std::vector<double>* best_per_generation) {
    const size_t n = ctx.pending.size();
    if (n == 0) return {};

    const int pop_size = params.population;
    std::vector<DecisionVector> pop(pop_size, DecisionVector(n, 0));
    std::vector<double> fit(pop_size);

    // seed with structured candidates: all-run, all-defer, and a
    // cheapest-first greedy fill; the rest random
    for (auto& g : pop[0]) g = 1;
    if (pop_size > 2) {
        DecisionVector& greedy = pop[2];
        double room_kw = std::max(0.0, ctx.pv_self_avail_kw + ctx.pv_traded_avail_kw +
                                           ctx.pw_max_kw - ctx.nonflex_kw);
        for (size_t i = 0; i < n; ++i) {
            if (ctx.pending[i]->power_kw <= room_kw) {
                greedy[i] = 1;
                room_kw -= ctx.pending[i]->power_kw;
            }
        }
    }
    for (int p = 3; p < pop_size; ++p)
        for (auto& g : pop[p]) g = static_cast<char>(rng.bernoulli(0.5));

    for (int p = 0; p < pop_size; ++p) fit[p] = fitness_of(pop[p], ctx, params);

    int best_idx = static_cast<int>(std::min_element(fit.begin(), fit.end()) - fit.begin());
    DecisionVector best = pop[best_idx];
    double best_fit = fit[best_idx];
    if (best_per_generation) best_per_generation->push_back(best_fit);

    std::vector<DecisionVector> next(pop_size, DecisionVector(n, 0));
    for (int gen = 0; gen < params.generations; ++gen) {
        // elitism: slot 0 carries the best-so-far individual
        next[0] = best;
        for (int p = 1; p < pop_size; p += 2) {
            auto tournament = [&]() -> const DecisionVector& {
                const int a = static_cast<int>(rng.uniform_int(pop_size));
                const int b = static_cast<int>(rng.uniform_int(pop_size));
                return fit[a] <= fit[b] ? pop[a] : pop[b];
            };
            const DecisionVector& pa = tournament();
            const DecisionVector& pb = tournament();
            DecisionVector ca = pa, cb = pb;
            if (rng.bernoulli(params.crossover_prob)) {
                for (size_t i = 0; i < n; ++i)
                    if (rng.bernoulli(0.5)) std::swap(ca[i], cb[i]);
            }
            for (size_t i = 0; i < n; ++i) {
                if (rng.bernoulli(params.mutation_prob)) ca[i] = !ca[i];
                if (rng.bernoulli(params.mutation_prob)) cb[i] = !cb[i];
            }
            next[p] = std::move(ca);
            if (p + 1 < pop_size) next[p + 1] = std::move(cb);
        }
        std::swap(pop, next);
        for (int p = 0; p < pop_size; ++p) {
            fit[p] = fitness_of(pop[p], ctx, params);
            if (fit[p] < best_fit) {
                best_fit = fit[p];
                best = pop[p];
            }
        }
        if (best_per_generation) best_per_generation->push_back(best_fit);
    }

    apply_forced(best, ctx.forced);
    return best;
}

}  // namespace ngrid
