#include "ngrid/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "ngrid/csv.hpp"

namespace ngrid {

namespace fs = std::filesystem;

const char* to_string(ScheduleAction a) {
    switch (a) {
        case ScheduleAction::Run: return "run";
        case ScheduleAction::Defer: return "defer";
        case ScheduleAction::Force: return "force";
    }
    return "?";
}

std::string artifact_version() { return "0.1.0"; }

void ForecasterStore::put(int cluster, ForecastModel model) {
    models_.insert_or_assign(cluster, std::move(model));
}

const ForecastModel* ForecasterStore::get(int cluster) const {
    auto it = models_.find(cluster);
    return it == models_.end() ? nullptr : &it->second;
}

ForecasterStore ForecasterStore::load_dir(const std::string& dir, int cluster_count) {
    ForecasterStore store;
    for (int c = 0; c < cluster_count; ++c) {
        const std::string path = dir + "/cluster_" + std::to_string(c + 1) + ".json";
        if (!fs::exists(path))
            throw ConfigError("model_dir: missing forecaster model file " + path +
                              "; run 'simctl train-forecaster' first or enable "
                              "allow_persistence_forecast");
        store.put(c, ForecastModel::load(path));
    }
    return store;
}

namespace {

struct RunningLoad {
    int appliance_index = 0;
    double power_kw = 0.0;
    int remaining_slots = 0;
};

struct HouseState {
    int room = 1;
    std::array<RoomState, kRoomCount> rooms;
    RngStream mobility;
    RngStream appliance;
    RngStream ev_arrival;
    // EV arrivals are gated on a fixed d_max window after each arrival so the
    // arrival stream is identical across trading schemes.
    long ev_block_until_abs = -1;
    double ev_missing_stored_kwh = 0.0;
    bool ev_session_active = false;

    HouseState(RngStream m, RngStream a, RngStream e)
        : mobility(m), appliance(a), ev_arrival(e) {}
};

struct ClusterState {
    std::vector<HouseState> houses;
    std::vector<LoadRequest> pending;  // flexible requests incl. EV sessions
    std::vector<RunningLoad> running;  // non-preemptible loads in progress
    std::deque<std::pair<double, double>> history;  // (basis load, pv) pairs
    RngStream ga_rng;
    double peak_kw = 0.0;

    explicit ClusterState(RngStream ga) : ga_rng(ga) {}
};

long ev_deadline_abs(const LoadRequest& req, int d_max_slots) {
    return static_cast<long>(req.issued_slot.absolute()) + d_max_slots;
}

}  // namespace

RunResult simulate(const ScenarioConfig& config, const ForecasterStore* models) {
    config.validate();
    if (config.scheme == Scheme::ProposedP2P && models == nullptr &&
        !config.allow_persistence_forecast && config.model_dir.empty()) {
        throw ConfigError(
            "scheme=proposed needs forecaster models: set model_dir, pass a model store, "
            "or set allow_persistence_forecast");
    }
    ForecasterStore owned_store;
    if (config.scheme == Scheme::ProposedP2P && models == nullptr && !config.model_dir.empty()) {
        owned_store = ForecasterStore::load_dir(config.model_dir, config.cluster_count);
        models = &owned_store;
    }

    RunResult result;
    result.config = config;

    const auto& catalog = default_catalog();
    const MobilityModel mobility = MobilityModel::default_model();
    mobility.validate();
    const EmissionProfile emissions = config.emission_csv.empty()
                                          ? EmissionProfile::default_profile()
                                          : EmissionProfile::from_csv(config.emission_csv);
    EvModel ev = EvModel::default_model();
    ev.params = config.ev;
    if (!config.ev_arrival_csv.empty())
        ev.arrival_prob = EvModel::arrival_from_csv(config.ev_arrival_csv);
    const WeatherProfile weather = config.weather_csv.empty()
                                       ? WeatherProfile::default_profile()
                                       : WeatherProfile::from_csv(config.weather_csv);
    const PvCurve pv_curve = config.reference_curve_csv.empty()
                                 ? PvCurve()
                                 : PvCurve::from_csv(config.reference_curve_csv);
    const Tariff tariff;
    const SmpCurve smp = config.smp_csv.empty() ? SmpCurve(config.smp_usd_per_kwh)
                                                : SmpCurve::from_csv(config.smp_csv);

    // cluster peaks: explicit override or a seeded draw shared across schemes
    if (config.rpv_class == RpvClass::Fixed) {
        result.peaks_kw = *config.fixed_peaks_kw;
    } else {
        RngStream peak_rng = RngStream::keyed(config.seed, 0xffff, 0xffff,
                                              StreamPurpose::ClusterPeaks);
        result.peaks_kw = draw_cluster_peaks(config.rpv_class, config.cluster_count, peak_rng);
    }

    std::vector<ClusterState> clusters;
    clusters.reserve(config.cluster_count);
    for (int c = 0; c < config.cluster_count; ++c) {
        ClusterState cs(RngStream::keyed(config.seed, c, 0xffff, StreamPurpose::Ga));
        cs.peak_kw = result.peaks_kw[c];
        const double t0 = weather.outdoor_temp_c[0];
        for (int h = 0; h < config.houses_per_cluster; ++h) {
            HouseState hs(RngStream::keyed(config.seed, c, h, StreamPurpose::Mobility),
                          RngStream::keyed(config.seed, c, h, StreamPurpose::Appliance),
                          RngStream::keyed(config.seed, c, h, StreamPurpose::EvArrival));
            for (auto& room : hs.rooms) room = RoomState{t0, weather.outdoor_co2_ppm};
            cs.houses.push_back(std::move(hs));
        }
        clusters.push_back(std::move(cs));
    }

    const long total_slots = static_cast<long>(config.days) * kSlotsPerDay;
    const int ev_required = ev_required_slots(ev);

    for (long abs = 0; abs < total_slots; ++abs) {
        const TimeSlot slot = TimeSlot::from_absolute(static_cast<int>(abs));
        const double t_out = outdoor_temperature(slot, weather);
        const double ec_rate = dr_rate(slot, tariff);
        const double smp_rate = smp.rate(slot);

        struct SlotScratch {
            double hvac_kw = 0.0;
            double immediate_kw = 0.0;
            double basis_kw = 0.0;
            double pv_kw = 0.0;
            std::vector<std::array<HvacCommand, kRoomCount>> commands;  // per house
            TradeRole role;
            double posted_kw = 0.0;
        };
        std::vector<SlotScratch> scratch(config.cluster_count);

        // 1) behavior: resident moves, appliance and EV requests, HVAC commands
        for (int c = 0; c < config.cluster_count; ++c) {
            ClusterState& cs = clusters[c];
            SlotScratch& sc = scratch[c];
            sc.commands.resize(cs.houses.size());
            for (size_t h = 0; h < cs.houses.size(); ++h) {
                HouseState& hs = cs.houses[h];
                hs.room = step_resident(hs.room, mobility, hs.mobility);

                for (const LoadRequest& req :
                     sample_requests(slot, hs.room, emissions, catalog,
                                     static_cast<int>(h), hs.appliance)) {
                    const ApplianceSpec& spec = catalog[req.appliance_index - 1];
                    if (spec.kind == ApplianceKind::Flexible) {
                        cs.pending.push_back(req);
                    } else {
                        // non-flexible: runs now; only one instance per appliance
                        bool duplicate = false;
                        for (const RunningLoad& r : cs.running)
                            if (r.appliance_index == req.appliance_index) duplicate = true;
                        if (!duplicate) {
                            sc.immediate_kw += req.power_kw;
                            if (spec.duration_slots > 1)
                                cs.running.push_back(
                                    {req.appliance_index, req.power_kw, spec.duration_slots - 1});
                        }
                    }
                }

                if (slot.slot_of_day % kSlotsPerHour == 0) {
                    const bool gated = abs < hs.ev_block_until_abs;
                    if (sample_ev_arrival(slot.hour(), ev, gated, hs.ev_arrival)) {
                        LoadRequest req;
                        req.appliance_index = kEvApplianceIndex;
                        req.house = static_cast<int>(h);
                        req.issued_slot = slot;
                        req.remaining_slots = ev_required;
                        req.power_kw = ev.params.charge_rate_kw;
                        cs.pending.push_back(req);
                        hs.ev_session_active = true;
                        hs.ev_missing_stored_kwh =
                            (1.0 - ev.params.initial_soc) * ev.params.capacity_kwh;
                        hs.ev_block_until_abs = abs + config.d_max_slots;
                        result.ev_log.push_back({slot.day, slot.slot_of_day, c,
                                                 static_cast<int>(h), EvEvent::Arrive,
                                                 ev.params.initial_soc});
                    }
                }

                for (int r = 0; r < kRoomCount; ++r) {
                    const bool occupied = hs.room == r + 1;
                    sc.commands[h][r] = hvac_control(hs.rooms[r], occupied, config.thermal);
                    sc.hvac_kw += sc.commands[h][r].power_kw();
                }
            }

            // refresh EV request power/remaining from the battery state
            for (LoadRequest& req : cs.pending) {
                if (req.appliance_index != kEvApplianceIndex) continue;
                HouseState& hs = cs.houses[req.house];
                req.power_kw = ev_charge_power_kw(ev, hs.ev_missing_stored_kwh);
                const double stored_per_slot =
                    ev.params.charge_rate_kw * ev.params.efficiency / 6.0;
                req.remaining_slots = static_cast<int>(
                    std::ceil(hs.ev_missing_stored_kwh / stored_per_slot - 1e-9));
            }

            double running_kw = 0.0;
            for (const RunningLoad& r : cs.running) running_kw += r.power_kw;
            double pending_kw = 0.0;
            for (const LoadRequest& r : cs.pending) pending_kw += r.power_kw;

            sc.basis_kw = sc.hvac_kw + sc.immediate_kw + running_kw + pending_kw;
            sc.pv_kw = pv_curve.production(slot, cs.peak_kw);
            cs.history.emplace_back(sc.basis_kw, sc.pv_kw);
            if (cs.history.size() > 6) cs.history.pop_front();
        }

        // 2) trading roles and market clearing
        OrderBook book;
        if (config.scheme != Scheme::WithoutP2P) {
            for (int c = 0; c < config.cluster_count; ++c) {
                ClusterState& cs = clusters[c];
                SlotScratch& sc = scratch[c];
                if (config.scheme == Scheme::ConventionalP2P) {
                    sc.role = role_conventional(sc.basis_kw, sc.pv_kw, config.pw_max_kw);
                } else {
                    std::vector<std::pair<double, double>> fc;
                    const ForecastModel* model =
                        models != nullptr ? models->get(c) : nullptr;
                    if (model != nullptr && cs.history.size() >= 6) {
                        HistoryWindow hist(6, 2);
                        for (int t = 0; t < 6; ++t) {
                            hist(t, 0) = cs.history[t].first;
                            hist(t, 1) = cs.history[t].second;
                        }
                        const ForecastWindow f = forecast(*model, hist);
                        for (int k = 0; k < config.horizon_k; ++k)
                            fc.emplace_back(f(k, 0), f(k, 1));
                    } else {
                        for (int k = 0; k < config.horizon_k; ++k)
                            fc.emplace_back(sc.basis_kw, sc.pv_kw);
                    }
                    sc.role = role_proposed(sc.basis_kw, sc.pv_kw, fc, config.pw_max_kw,
                                            config.average_horizon_amount);
                }
                // sellers can only export power they physically have this slot
                if (sc.role.side == TradeSide::Sell) {
                    const double surplus = std::max(0.0, sc.pv_kw - sc.basis_kw);
                    sc.role = TradeRole::sell(std::min(sc.role.amount_kw, surplus));
                }
                sc.posted_kw = sc.role.amount_kw;
                book.post(c, sc.role);
            }
        }
        const Allocation alloc = clear_market(book, config.cluster_count);

        // 3) per-cluster scheduling, application, and accounting
        for (int c = 0; c < config.cluster_count; ++c) {
            ClusterState& cs = clusters[c];
            SlotScratch& sc = scratch[c];
            const double cleared = alloc.traded_kw[c];
            const double delivered_kw = std::max(0.0, -cleared);
            const double received_kw = std::max(0.0, cleared);

            SlotContext ctx;
            ctx.nonflex_kw = sc.basis_kw;  // minus pending flex, added below
            double pending_kw = 0.0;
            for (const LoadRequest& r : cs.pending) pending_kw += r.power_kw;
            ctx.nonflex_kw -= pending_kw;
            ctx.pv_self_avail_kw = sc.pv_kw - delivered_kw;
            ctx.pv_traded_avail_kw = received_kw;
            ctx.pw_max_kw = config.pw_max_kw;
            ctx.ec_rate = ec_rate;
            ctx.smp_rate = smp_rate;
            ctx.traded_kw_signed = cleared;
            ctx.pending.reserve(cs.pending.size());
            ctx.forced.reserve(cs.pending.size());
            for (const LoadRequest& r : cs.pending) {
                ctx.pending.push_back(&r);
                bool force;
                if (r.appliance_index == kEvApplianceIndex) {
                    force = ev_deadline_abs(r, config.d_max_slots) - abs <= r.remaining_slots;
                } else {
                    force = r.accumulated_delay_slots >= config.d_max_slots;
                }
                ctx.forced.push_back(force ? 1 : 0);
            }

            DecisionVector genes;
            if (!cs.pending.empty()) genes = ga_optimize(ctx, config.ga, cs.ga_rng);

            double flex_kw = 0.0;
            double ev_kw = 0.0;
            for (size_t i = 0; i < cs.pending.size(); ++i) {
                if (!genes[i]) continue;
                flex_kw += cs.pending[i].power_kw;
                if (cs.pending[i].appliance_index == kEvApplianceIndex)
                    ev_kw += cs.pending[i].power_kw;
            }

            const PowerSplit split =
                allocate_power(ctx.nonflex_kw, flex_kw, ctx.pv_self_avail_kw,
                               ctx.pv_traded_avail_kw, config.pw_max_kw);
            const double applied_kw = ctx.nonflex_kw + flex_kw;

            // advance pending requests
            std::vector<LoadRequest> still_pending;
            long delay_sum = 0;
            for (size_t i = 0; i < cs.pending.size(); ++i) {
                LoadRequest& req = cs.pending[i];
                const bool run_now = genes[i] != 0;
                const ScheduleAction action =
                    run_now ? (ctx.forced[i] ? ScheduleAction::Force : ScheduleAction::Run)
                            : ScheduleAction::Defer;
                result.schedule_log.push_back({slot.day, slot.slot_of_day, c,
                                               req.appliance_index, action,
                                               req.accumulated_delay_slots});
                if (!run_now) {
                    req.accumulated_delay_slots += 1;
                    if (req.accumulated_delay_slots > config.d_max_slots)
                        result.audit.delay_violations += 1;
                    delay_sum += req.accumulated_delay_slots;
                    still_pending.push_back(req);
                    continue;
                }
                if (req.appliance_index == kEvApplianceIndex) {
                    HouseState& hs = cs.houses[req.house];
                    const double stored = req.power_kw * ev.params.efficiency / 6.0;
                    hs.ev_missing_stored_kwh =
                        std::max(0.0, hs.ev_missing_stored_kwh - stored);
                    if (hs.ev_missing_stored_kwh <= 1e-12) {
                        hs.ev_session_active = false;
                        hs.ev_missing_stored_kwh = 0.0;
                        result.ev_log.push_back({slot.day, slot.slot_of_day, c, req.house,
                                                 EvEvent::Complete, 1.0});
                        if (abs > ev_deadline_abs(req, config.d_max_slots))
                            result.audit.ev_deadline_violations += 1;
                    } else {
                        req.remaining_slots -= 1;
                        delay_sum += req.accumulated_delay_slots;
                        still_pending.push_back(req);
                    }
                } else {
                    req.started = true;
                    req.remaining_slots -= 1;
                    if (req.remaining_slots > 0)
                        cs.running.push_back(
                            {req.appliance_index, req.power_kw, req.remaining_slots});
                    // completed single-slot runs leave the system
                }
            }
            cs.pending = std::move(still_pending);

            // running loads tick down after consuming this slot's power
            std::vector<RunningLoad> still_running;
            for (RunningLoad& r : cs.running) {
                r.remaining_slots -= 1;
                if (r.remaining_slots > 0) still_running.push_back(r);
            }
            cs.running = std::move(still_running);

            // room dynamics
            for (size_t h = 0; h < cs.houses.size(); ++h) {
                HouseState& hs = cs.houses[h];
                for (int r = 0; r < kRoomCount; ++r) {
                    const bool occupied = hs.room == r + 1;
                    const HvacCommand& cmd = sc.commands[h][r];
                    RoomState next = step_thermal(hs.rooms[r], cmd, t_out, config.thermal);
                    next.co2_ppm = step_co2(hs.rooms[r], cmd.fan_on, occupied,
                                            weather.outdoor_co2_ppm, config.thermal);
                    hs.rooms[r] = next;
                }
            }

            // accounting + logs + audit
            const auto [grid_usd, trade_usd] =
                interval_cost(split.grid_kw, cleared, slot, tariff, smp);
            result.ledger.add({slot.day, slot.slot_of_day, c, grid_usd, trade_usd});

            if (sc.role.side != TradeSide::Idle) {
                result.trade_log.push_back({slot.day, slot.slot_of_day, c, sc.role.side,
                                            sc.posted_kw, cleared, smp_rate,
                                            settle(cleared, smp_rate)});
            }

            PowerLogRow row;
            row.day = slot.day;
            row.slot = slot.slot_of_day;
            row.cluster = c;
            row.pw_load_kw = applied_kw;
            row.pv_self_used_kw = split.pv_self_kw;
            row.pv_traded_kw = split.pv_traded_kw;
            row.grid_kw = split.grid_kw;
            row.hvac_kw = sc.hvac_kw;
            row.ev_kw = ev_kw;
            row.basis_load_kw = sc.basis_kw;
            row.pv_production_kw = sc.pv_kw;
            row.total_delay_slots = delay_sum;
            result.power_log.push_back(row);

            if (split.grid_kw >= config.pw_max_kw) result.audit.grid_limit_violations += 1;
            const double balance_err = std::abs(applied_kw - split.total());
            result.audit.max_balance_error_kw =
                std::max(result.audit.max_balance_error_kw, balance_err);
            if (balance_err > 1e-9) result.audit.balance_violations += 1;
        }
    }

    // EVs whose completion deadline fell inside the run must have finished
    for (int c = 0; c < config.cluster_count; ++c) {
        for (const LoadRequest& req : clusters[c].pending) {
            if (req.appliance_index != kEvApplianceIndex) continue;
            if (ev_deadline_abs(req, config.d_max_slots) < total_slots)
                result.audit.ev_deadline_violations += 1;
        }
    }
    return result;
}

namespace {

std::string scheme_dir_name(const ScenarioConfig& cfg) {
    return to_string(cfg.scheme) + "_" + to_string(cfg.rpv_class) + "_seed" +
           std::to_string(cfg.seed);
}

}  // namespace

RunOutputs write_outputs(const RunResult& result, const std::string& dir) {
    fs::create_directories(dir);
    RunOutputs out;
    out.out_dir = dir;
    out.trade_log_path = dir + "/trade_log.csv";
    out.schedule_log_path = dir + "/schedule_log.csv";
    out.power_log_path = dir + "/power_log.csv";
    out.ev_log_path = dir + "/ev_log.csv";
    out.cost_ledger_path = dir + "/cost_ledger.csv";
    out.cost_report_path = dir + "/cost_report.csv";
    out.meta_path = dir + "/run_meta.json";

    const std::vector<std::string> created = {
        out.trade_log_path, out.schedule_log_path, out.power_log_path, out.ev_log_path,
        out.cost_ledger_path, out.cost_report_path, out.meta_path};
    try {
        {
            csv::Writer w(out.trade_log_path,
                          "day,slot,cluster,role,posted_kw,cleared_kw,smp,settlement_usd");
            for (const auto& r : result.trade_log) {
                w.field(r.day);
                w.field(r.slot);
                w.field(r.cluster + 1);
                w.field(std::string(to_string(r.role)));
                w.field(r.posted_kw);
                w.field(r.cleared_kw);
                w.field(r.smp);
                w.field(r.settlement_usd);
                w.end_row();
            }
            w.close();
        }
        {
            csv::Writer w(out.schedule_log_path,
                          "day,slot,cluster,appliance_index,action,accumulated_delay");
            for (const auto& r : result.schedule_log) {
                w.field(r.day);
                w.field(r.slot);
                w.field(r.cluster + 1);
                w.field(r.appliance_index);
                w.field(std::string(to_string(r.action)));
                w.field(r.accumulated_delay);
                w.end_row();
            }
            w.close();
        }
        {
            csv::Writer w(out.power_log_path,
                          "day,slot,cluster,pw_load_kw,pv_self_used_kw,pv_traded_kw,grid_kw,"
                          "hvac_kw,ev_kw,basis_load_kw,pv_production_kw,total_delay_slots");
            for (const auto& r : result.power_log) {
                w.field(r.day);
                w.field(r.slot);
                w.field(r.cluster + 1);
                w.field(r.pw_load_kw);
                w.field(r.pv_self_used_kw);
                w.field(r.pv_traded_kw);
                w.field(r.grid_kw);
                w.field(r.hvac_kw);
                w.field(r.ev_kw);
                w.field(r.basis_load_kw);
                w.field(r.pv_production_kw);
                w.field(static_cast<long long>(r.total_delay_slots));
                w.end_row();
            }
            w.close();
        }
        {
            csv::Writer w(out.ev_log_path, "day,slot,cluster,house,event,soc");
            for (const auto& r : result.ev_log) {
                w.field(r.day);
                w.field(r.slot);
                w.field(r.cluster + 1);
                w.field(r.house + 1);
                w.field(std::string(r.event == EvEvent::Arrive ? "arrive" : "complete"));
                w.field(r.soc);
                w.end_row();
            }
            w.close();
        }
        {
            csv::Writer w(out.cost_ledger_path,
                          "day,slot,cluster,grid_cost_usd,trade_settlement_usd");
            for (const auto& e : result.ledger.entries()) {
                w.field(e.day);
                w.field(e.slot);
                w.field(e.cluster + 1);
                w.field(e.grid_cost_usd);
                w.field(e.trade_settlement_usd);
                w.end_row();
            }
            w.close();
        }
        {
            const DailyReport rep =
                daily_report(result.ledger, result.config.cluster_count, result.config.days,
                             to_string(result.config.scheme), to_string(result.config.rpv_class));
            csv::Writer w(out.cost_report_path, "scheme,rpv_class,cluster,daily_cost_usd");
            for (size_t i = 0; i < rep.per_cluster_usd.size(); ++i) {
                w.field(rep.scheme);
                w.field(rep.rpv_class);
                w.field(std::to_string(i + 1));
                w.field(rep.per_cluster_usd[i]);
                w.end_row();
            }
            w.field(rep.scheme);
            w.field(rep.rpv_class);
            w.field(std::string("avg"));
            w.field(rep.average_usd);
            w.end_row();
            w.field(rep.scheme);
            w.field(rep.rpv_class);
            w.field(std::string("total"));
            w.field(rep.total_usd);
            w.end_row();
            w.close();
        }
        {
            nlohmann::json meta;
            meta["version"] = artifact_version();
            meta["scheme"] = to_string(result.config.scheme);
            meta["rpv_class"] = to_string(result.config.rpv_class);
            meta["seed"] = result.config.seed;
            meta["days"] = result.config.days;
            meta["cluster_peaks_kw"] = result.peaks_kw;
            meta["audit"] = {{"grid_limit_violations", result.audit.grid_limit_violations},
                             {"delay_violations", result.audit.delay_violations},
                             {"balance_violations", result.audit.balance_violations},
                             {"ev_deadline_violations", result.audit.ev_deadline_violations},
                             {"max_balance_error_kw", result.audit.max_balance_error_kw}};
            meta["files"] = created;
            std::ofstream m(out.meta_path, std::ios::trunc);
            if (!m) throw std::runtime_error("cannot write " + out.meta_path);
            m << meta.dump(2) << "\n";
            m.close();
            if (m.fail()) throw std::runtime_error("failed to write " + out.meta_path);
        }
    } catch (...) {
        for (const auto& f : created) {
            std::error_code ec;
            fs::remove(f, ec);
        }
        throw;
    }
    return out;
}

RunOutputs run(const ScenarioConfig& config, const ForecasterStore* models) {
    const RunResult result = simulate(config, models);
    return write_outputs(result, config.out_dir + "/" + scheme_dir_name(config));
}

std::vector<MatrixEntry> run_matrix(const ScenarioConfig& base,
                                    const std::vector<std::uint64_t>& seeds,
                                    const ForecasterStore* models_rpv1,
                                    const ForecasterStore* models_rpv2) {
    std::vector<MatrixEntry> entries;
    for (const RpvClass rpv : {RpvClass::RPV1, RpvClass::RPV2}) {
        const ForecasterStore* models = rpv == RpvClass::RPV1 ? models_rpv1 : models_rpv2;
        for (const Scheme scheme :
             {Scheme::WithoutP2P, Scheme::ConventionalP2P, Scheme::ProposedP2P}) {
            for (std::uint64_t seed : seeds) {
                ScenarioConfig cfg = base;
                cfg.scheme = scheme;
                cfg.seed = seed;
                const auto& override_peaks = rpv == RpvClass::RPV1
                                                 ? base.fixed_peaks_rpv1_kw
                                                 : base.fixed_peaks_rpv2_kw;
                if (override_peaks) {
                    cfg.rpv_class = RpvClass::Fixed;
                    cfg.fixed_peaks_kw = override_peaks;
                } else {
                    cfg.rpv_class = rpv;
                    cfg.fixed_peaks_kw.reset();
                }
                if (scheme == Scheme::ProposedP2P && models == nullptr)
                    cfg.allow_persistence_forecast = true;
                entries.push_back({scheme, rpv, seed, run(cfg, models)});
            }
        }
    }
    return entries;
}

std::vector<Series> gen_dataset(const ScenarioConfig& config, int days) {
    if (days < 1) throw ConfigError("gen_dataset: days must be >= 1");
    ScenarioConfig cfg = config;
    cfg.scheme = Scheme::WithoutP2P;
    cfg.days = days;
    const RunResult result = simulate(cfg, nullptr);

    std::vector<Series> data(cfg.cluster_count);
    for (auto& s : data) s.reserve(static_cast<size_t>(days) * kSlotsPerDay);
    for (const auto& row : result.power_log)
        data[row.cluster].push_back({row.basis_load_kw, row.pv_production_kw});
    return data;
}

std::vector<std::string> write_dataset(const std::vector<Series>& data, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<std::string> paths;
    for (size_t c = 0; c < data.size(); ++c) {
        const std::string path = dir + "/cluster_" + std::to_string(c + 1) + ".csv";
        csv::Writer w(path, "slot_abs,load_kw,pv_kw");
        for (size_t i = 0; i < data[c].size(); ++i) {
            w.field(static_cast<long long>(i));
            w.field(data[c][i][0]);
            w.field(data[c][i][1]);
            w.end_row();
        }
        w.close();
        paths.push_back(path);
    }
    return paths;
}

}  // namespace ngrid
