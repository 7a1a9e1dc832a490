#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ngrid/accounting.hpp"
#include "ngrid/behavior.hpp"
#include "ngrid/core.hpp"
#include "ngrid/environment.hpp"
#include "ngrid/forecaster.hpp"
#include "ngrid/hvac.hpp"
#include "ngrid/scheduler.hpp"
#include "ngrid/trading.hpp"

namespace ngrid {

struct TradeLogRow {
    int day = 0, slot = 0, cluster = 0;
    TradeSide role = TradeSide::Idle;
    double posted_kw = 0.0, cleared_kw = 0.0, smp = 0.0, settlement_usd = 0.0;
};

enum class ScheduleAction { Run, Defer, Force };
const char* to_string(ScheduleAction a);

struct ScheduleLogRow {
    int day = 0, slot = 0, cluster = 0, appliance_index = 0;
    ScheduleAction action = ScheduleAction::Defer;
    int accumulated_delay = 0;
};

struct PowerLogRow {
    int day = 0, slot = 0, cluster = 0;
    double pw_load_kw = 0.0;       // applied demand this slot
    double pv_self_used_kw = 0.0;
    double pv_traded_kw = 0.0;
    double grid_kw = 0.0;
    double hvac_kw = 0.0;
    double ev_kw = 0.0;
    double basis_load_kw = 0.0;    // unscheduled demand used by the trading rule
    double pv_production_kw = 0.0;
    long total_delay_slots = 0;
};

enum class EvEvent { Arrive, Complete };

struct EvLogRow {
    int day = 0, slot = 0, cluster = 0, house = 0;
    EvEvent event = EvEvent::Arrive;
    double soc = 0.0;
};

/// Post-run constraint audit over every cluster-slot record.
struct AuditResult {
    long grid_limit_violations = 0;   // grid_kw >= pw_max
    long delay_violations = 0;        // accumulated delay > d_max
    long balance_violations = 0;      // |load - (self+traded+grid)| > 1e-9
    long ev_deadline_violations = 0;  // EV not full within d_max of arrival
    double max_balance_error_kw = 0.0;

    bool ok() const {
        return grid_limit_violations == 0 && delay_violations == 0 &&
               balance_violations == 0 && ev_deadline_violations == 0;
    }
};

struct RunResult {
    ScenarioConfig config;
    std::vector<double> peaks_kw;
    CostLedger ledger;
    std::vector<TradeLogRow> trade_log;
    std::vector<ScheduleLogRow> schedule_log;
    std::vector<PowerLogRow> power_log;
    std::vector<EvLogRow> ev_log;
    AuditResult audit;

    double total_cost_usd() const { return ledger.grand_total_usd(); }
    double cluster_cost_usd(int cluster) const { return ledger.cluster_total_usd(cluster); }
};

struct RunOutputs {
    std::string out_dir;
    std::string trade_log_path;
    std::string schedule_log_path;
    std::string power_log_path;
    std::string ev_log_path;
    std::string cost_ledger_path;
    std::string cost_report_path;
    std::string meta_path;
};

/// Per-cluster forecaster models for the proposed scheme. An empty store
/// means the persistence baseline is used for every cluster.
class ForecasterStore {
public:
    void put(int cluster, ForecastModel model);
    const ForecastModel* get(int cluster) const;
    bool empty() const { return models_.empty(); }

    /// Loads cluster_<i>.json files (1-based) from a directory.
    static ForecasterStore load_dir(const std::string& dir, int cluster_count);

private:
    std::map<int, ForecastModel> models_;
};

/// Executes the per-slot loop for config.days whole days and returns all
/// in-memory records. Deterministic for a fixed (config, seed).
RunResult simulate(const ScenarioConfig& config, const ForecasterStore* models = nullptr);

/// Writes the CSV artifacts of a finished run under `dir`. Partial files are
/// removed when any write fails.
RunOutputs write_outputs(const RunResult& result, const std::string& dir);

/// simulate + write_outputs with the config's out_dir.
RunOutputs run(const ScenarioConfig& config, const ForecasterStore* models = nullptr);

struct MatrixEntry {
    Scheme scheme;
    RpvClass rpv;
    std::uint64_t seed;
    RunOutputs outputs;
};

/// Runs {without, conventional, proposed} x {RPV1, RPV2} with common seeds.
/// Models are picked per RPV class; either store may be null when the
/// proposed runs are allowed to fall back to persistence.
std::vector<MatrixEntry> run_matrix(const ScenarioConfig& base,
                                    const std::vector<std::uint64_t>& seeds,
                                    const ForecasterStore* models_rpv1,
                                    const ForecasterStore* models_rpv2);

/// One year-style dataset per cluster: the unscheduled load basis and PV
/// production per slot from a WithoutP2P run.
std::vector<Series> gen_dataset(const ScenarioConfig& config, int days);

/// Writes gen_dataset output as cluster_<i>.csv files under `dir`.
std::vector<std::string> write_dataset(const std::vector<Series>& data, const std::string& dir);

std::string artifact_version();

}  // namespace ngrid
