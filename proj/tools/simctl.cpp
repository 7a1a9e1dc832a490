// Command-line front end for the nanogrid cluster trading simulator.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ngrid/csv.hpp"
#include "ngrid/simulation.hpp"

using namespace ngrid;

namespace {

ScenarioConfig load_or_default(const std::string& config_path) {
    return config_path.empty() ? ScenarioConfig{} : load_scenario(config_path);
}

void apply_overrides(ScenarioConfig& cfg, const std::string& scheme, int rpv, long seed,
                     int days, const std::string& out_dir, const std::string& model_dir,
                     bool persistence) {
    if (!scheme.empty()) cfg.scheme = scheme_from_string(scheme);
    if (rpv == 1) cfg.rpv_class = RpvClass::RPV1;
    if (rpv == 2) cfg.rpv_class = RpvClass::RPV2;
    if (rpv != 0) cfg.fixed_peaks_kw.reset();
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (days > 0) cfg.days = days;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!model_dir.empty()) cfg.model_dir = model_dir;
    if (persistence) cfg.allow_persistence_forecast = true;
    cfg.validate();
}

int cmd_run(const std::string& config_path, const std::string& scheme, int rpv, long seed,
            int days, const std::string& out_dir, const std::string& model_dir,
            bool persistence) {
    ScenarioConfig cfg = load_or_default(config_path);
    apply_overrides(cfg, scheme, rpv, seed, days, out_dir, model_dir, persistence);
    const RunResult result = simulate(cfg);
    const RunOutputs out = write_outputs(
        result, cfg.out_dir + "/" + to_string(cfg.scheme) + "_" + to_string(cfg.rpv_class) +
                    "_seed" + std::to_string(cfg.seed));
    std::cout << "wrote " << out.out_dir << "\n";
    const DailyReport rep = daily_report(result.ledger, cfg.cluster_count, cfg.days,
                                         to_string(cfg.scheme), to_string(cfg.rpv_class));
    std::cout << rep.to_text();
    if (!result.audit.ok()) {
        std::cerr << "constraint audit FAILED: grid=" << result.audit.grid_limit_violations
                  << " delay=" << result.audit.delay_violations
                  << " balance=" << result.audit.balance_violations
                  << " ev=" << result.audit.ev_deadline_violations << "\n";
        return 2;
    }
    return 0;
}

int cmd_run_matrix(const std::string& config_path, std::vector<long> seeds,
                   const std::string& models_rpv1, const std::string& models_rpv2,
                   const std::string& out_dir) {
    ScenarioConfig base = load_or_default(config_path);
    if (!out_dir.empty()) base.out_dir = out_dir;
    if (seeds.empty()) seeds = {static_cast<long>(base.seed)};
    std::vector<std::uint64_t> useeds(seeds.begin(), seeds.end());

    ForecasterStore store1, store2;
    const ForecasterStore* p1 = nullptr;
    const ForecasterStore* p2 = nullptr;
    if (!models_rpv1.empty()) {
        store1 = ForecasterStore::load_dir(models_rpv1, base.cluster_count);
        p1 = &store1;
    }
    if (!models_rpv2.empty()) {
        store2 = ForecasterStore::load_dir(models_rpv2, base.cluster_count);
        p2 = &store2;
    }
    const auto entries = run_matrix(base, useeds, p1, p2);
    for (const auto& e : entries) std::cout << e.outputs.out_dir << "\n";
    std::cout << entries.size() << " runs completed\n";
    return 0;
}

int cmd_gen_dataset(const std::string& config_path, int days, const std::string& out_dir) {
    ScenarioConfig cfg = load_or_default(config_path);
    const auto data = gen_dataset(cfg, days);
    const auto paths = write_dataset(data, out_dir);
    for (const auto& p : paths) std::cout << p << "\n";
    return 0;
}

int cmd_train(const std::string& dataset, const std::string& out, int epochs, int hidden,
              int gru_layers, long seed) {
    const Series series = series_from_csv(dataset);
    TrainConfig cfg;
    if (epochs > 0) cfg.epochs = epochs;
    ModelArch arch;
    if (hidden > 0) arch.hidden_size = hidden;
    if (gru_layers > 0) arch.gru_layers = gru_layers;
    RngStream rng(RngStream::mix(static_cast<std::uint64_t>(seed),
                                 static_cast<std::uint64_t>(StreamPurpose::TrainInit)));
    const TrainResult result = train(series, cfg, arch, rng);
    result.model.save(out);
    std::printf("model saved to %s\n", out.c_str());
    std::printf("validation RMSE: load %.4f kW (%.2f%% of range), pv %.4f kW (%.2f%% of range)\n",
                result.val_rmse_abs[0], 100.0 * result.val_rmse_frac[0], result.val_rmse_abs[1],
                100.0 * result.val_rmse_frac[1]);
    return 0;
}

int cmd_report(const std::string& run_dir) {
    const auto rows = csv::read_file(run_dir + "/cost_ledger.csv");
    CostLedger ledger;
    int clusters = 0;
    int max_day = 0;
    for (const auto& r : rows) {
        if (r.size() != 5) throw std::runtime_error("cost_ledger.csv: unexpected column count");
        LedgerEntry e;
        e.day = csv::to_int(r[0], "day");
        e.slot = csv::to_int(r[1], "slot");
        e.cluster = csv::to_int(r[2], "cluster") - 1;
        e.grid_cost_usd = csv::to_double(r[3], "grid_cost_usd");
        e.trade_settlement_usd = csv::to_double(r[4], "trade_settlement_usd");
        ledger.add(e);
        clusters = std::max(clusters, e.cluster + 1);
        max_day = std::max(max_day, e.day);
    }
    const DailyReport rep = daily_report(ledger, clusters, max_day + 1, "-", "-");
    std::cout << rep.to_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nanogrid cluster P2P trading simulator"};
    app.require_subcommand(1);

    std::string config_path, scheme, out_dir, model_dir, dataset, model_out, run_dir;
    std::string models_rpv1, models_rpv2;
    int rpv = 0, days = 0, epochs = 0, hidden = 0, gru_layers = 0;
    long seed = -1;
    bool persistence = false;
    std::vector<long> seeds;

    auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
    run_cmd->add_option("--config", config_path, "scenario JSON file");
    run_cmd->add_option("--scheme", scheme, "none|conventional|proposed");
    run_cmd->add_option("--rpv", rpv, "PV capacity class (1 or 2)")->check(CLI::Range(1, 2));
    run_cmd->add_option("--seed", seed, "random seed");
    run_cmd->add_option("--days", days, "number of simulated days");
    run_cmd->add_option("--out-dir", out_dir, "output directory");
    run_cmd->add_option("--models", model_dir, "directory of per-cluster forecaster models");
    run_cmd->add_flag("--persistence-forecast", persistence,
                      "let the proposed scheme fall back to the persistence forecaster");

    auto* matrix_cmd = app.add_subcommand("run-matrix", "run all schemes x PV classes");
    matrix_cmd->add_option("--config", config_path, "scenario JSON file");
    matrix_cmd->add_option("--seeds", seeds, "seeds for repeated runs");
    matrix_cmd->add_option("--models-rpv1", models_rpv1, "forecaster models for RPV #1 runs");
    matrix_cmd->add_option("--models-rpv2", models_rpv2, "forecaster models for RPV #2 runs");
    matrix_cmd->add_option("--out-dir", out_dir, "output directory");

    auto* dataset_cmd = app.add_subcommand("gen-dataset", "generate forecaster training data");
    dataset_cmd->add_option("--config", config_path, "scenario JSON file");
    dataset_cmd->add_option("--days", days, "days to simulate")->required();
    dataset_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* train_cmd = app.add_subcommand("train-forecaster", "train a cluster forecaster");
    train_cmd->add_option("--dataset", dataset, "dataset CSV (slot_abs,load_kw,pv_kw)")
        ->required();
    train_cmd->add_option("--out", model_out, "model file to write")->required();
    train_cmd->add_option("--epochs", epochs, "training epochs (default 1000)");
    train_cmd->add_option("--hidden", hidden, "GRU hidden width (default 32)");
    train_cmd->add_option("--gru-layers", gru_layers, "GRU layer count (default 6)");
    train_cmd->add_option("--seed", seed, "training seed");

    auto* report_cmd = app.add_subcommand("report", "summarize a finished run");
    report_cmd->add_option("--run-dir", run_dir, "run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(config_path, scheme, rpv, seed, days, out_dir, model_dir,
                           persistence);
        if (matrix_cmd->parsed())
            return cmd_run_matrix(config_path, seeds, models_rpv1, models_rpv2, out_dir);
        if (dataset_cmd->parsed()) return cmd_gen_dataset(config_path, days, out_dir);
        if (train_cmd->parsed())
            return cmd_train(dataset, model_out, epochs, hidden, gru_layers,
                             seed < 0 ? 1 : seed);
        if (report_cmd->parsed()) return cmd_report(run_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
