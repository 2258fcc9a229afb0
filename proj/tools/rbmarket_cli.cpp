// Command-line front end for the RB market simulator.
//
//   rbmarket run --config day.cfg --out run.csv
//   rbmarket compare --config day.cfg --out-dir results/
//   rbmarket oracle-check --samples 2000
//
// Exit codes: 0 success, 1 runtime failure (training fault, oracle
// divergence), 2 bad usage or configuration.

#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbmarket/scenario.hpp"

namespace {

using namespace rbmarket;

void print_summary(const std::string& name, const SummaryMetrics& m) {
    std::printf("scheme=%s epochs=%lld\n", name.c_str(),
                static_cast<long long>(m.epochs));
    std::printf("  mean_reward=%.6g first_window=%.6g final_window=%.6g\n",
                m.mean_reward, m.first_window_reward, m.final_window_reward);
    std::printf("  mean_abs_mismatch=%.6g final_window_abs_mismatch=%.6g\n",
                m.mean_abs_mismatch, m.final_window_abs_mismatch);
    std::printf("  revenue=%.6g target=%.6g profit_above_target=%.6g\n",
                m.revenue_total, m.target_total, m.profit_above_target);
    std::printf("  total_disutility=%.6g served_rbs=%.6g bits_per_price_unit=%.6g\n",
                m.total_disutility, m.served_rbs, m.bits_per_price_unit);
    std::printf("  messages=%lld mean_price=%.6g\n",
                static_cast<long long>(m.messages), m.mean_price);
}

ScenarioConfig load_config(const std::string& path) {
    if (path.empty()) return ScenarioConfig::defaults();
    return ScenarioConfig::from_file(path);
}

int cmd_run(const std::string& config_path, long long seed, long long epochs,
            const std::string& scheme, const std::string& out,
            const std::string& checkpoint_in, const std::string& checkpoint_out,
            bool no_train) {
    ScenarioConfig cfg = load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (epochs > 0) cfg.hour_epochs = epochs;
    if (!scheme.empty()) cfg.scheme = scheme_from_name(scheme);
    if (!checkpoint_in.empty()) cfg.checkpoint_in = checkpoint_in;
    if (!checkpoint_out.empty()) cfg.checkpoint_out = checkpoint_out;
    if (no_train) cfg.train = false;

    ScenarioResult res = run_scenario(cfg);
    if (!out.empty()) write_csv(out, res.records);
    print_summary(scheme_name(cfg.scheme), res.summary);
    return 0;
}

int cmd_compare(const std::string& config_path, long long seed,
                const std::string& out_dir, const std::string& schemes_csv) {
    ScenarioConfig cfg = load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    std::vector<Scheme> schemes;
    if (schemes_csv.empty()) {
        schemes = all_schemes();
    } else {
        std::string item;
        std::istringstream is(schemes_csv);
        while (std::getline(is, item, ',')) {
            if (!item.empty()) schemes.push_back(scheme_from_name(item));
        }
    }

    const auto results = compare_schemes(cfg, schemes, out_dir);
    for (Scheme s : schemes) print_summary(scheme_name(s), results.at(s));
    std::printf("wrote %s/summary.csv\n", out_dir.c_str());
    return 0;
}

// Closed-form tenant requests against the grid-search minimizer, over random
// loads and prices for every catalog profile plus a general-regime one.
int cmd_oracle_check(long long samples, long long seed) {
    std::vector<TenantProfile> profiles = standard_profiles();
    TenantProfile general;
    general.regime = TenantRegime::General;
    general.factor = 2.0e5;
    general.gamma_d = 2.5;
    general.gamma_p = 1.7;
    general.label = "general";
    profiles.push_back(general);

    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> load_dist(0.0, 4000.0);
    std::uniform_real_distribution<double> price_dist(0.0, 2500.0);
    constexpr int kGrid = 4000;

    double worst = 0.0;
    for (long long k = 0; k < samples; ++k) {
        const TenantProfile& t = profiles[static_cast<std::size_t>(k) % profiles.size()];
        const double d = load_dist(rng);
        const double p = price_dist(rng);
        const double closed = optimal_request(d, p, t);
        const double brute = brute_force_request(d, p, t, kGrid);
        const double tol = d / kGrid + 1e-6 * d + 1e-9;
        const double err = std::abs(closed - brute);
        worst = std::max(worst, err - tol);
        if (err > tol) {
            std::fprintf(stderr,
                         "oracle divergence: profile=%s d=%.9g p=%.9g closed=%.9g "
                         "grid=%.9g err=%.3g tol=%.3g\n",
                         t.label.c_str(), d, p, closed, brute, err, tol);
            return 1;
        }
    }
    std::printf("oracle-check ok: %lld samples, worst margin %.3g\n", samples,
                worst);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resource-block market simulator"};
    app.require_subcommand(1);

    std::string config_path, out, out_dir, scheme, schemes_csv;
    std::string checkpoint_in, checkpoint_out;
    long long seed = -1, epochs = -1, samples = 2000, oracle_seed = 7;
    bool no_train = false;

    auto* run = app.add_subcommand("run", "Run one scenario and print its summary");
    run->add_option("--config", config_path, "key=value scenario file");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--epochs", epochs, "override hour-run length");
    run->add_option("--scheme", scheme, "override the pricing scheme");
    run->add_option("--out", out, "write the per-epoch CSV here");
    run->add_option("--checkpoint-in", checkpoint_in, "load agent state first");
    run->add_option("--checkpoint-out", checkpoint_out, "save agent state here");
    run->add_flag("--no-train", no_train, "freeze the agent (no exploration/updates)");

    auto* compare = app.add_subcommand("compare", "Run several schemes on shared seeds");
    compare->add_option("--config", config_path, "key=value scenario file");
    compare->add_option("--seed", seed, "override the scenario seed");
    compare->add_option("--out-dir", out_dir, "output directory")->required();
    compare->add_option("--schemes", schemes_csv, "comma-separated subset");

    auto* oracle = app.add_subcommand("oracle-check",
                                      "Check closed-form tenant requests against grid search");
    oracle->add_option("--samples", samples, "number of random instances");
    oracle->add_option("--seed", oracle_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path, seed, epochs, scheme, out, checkpoint_in,
                           checkpoint_out, no_train);
        }
        if (compare->parsed()) {
            return cmd_compare(config_path, seed, out_dir, schemes_csv);
        }
        if (oracle->parsed()) {
            return cmd_oracle_check(samples, oracle_seed);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
