#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rbmarket/baselines.hpp"
#include "rbmarket/config.hpp"
#include "rbmarket/ddpg.hpp"
#include "rbmarket/environment.hpp"
#include "rbmarket/linpg.hpp"

namespace rbmarket {

enum class Scheme {
    Ddpg,
    LinPg,
    StaticLow,
    StaticMediumLow,
    StaticMediumHigh,
    StaticHigh,
    Myopic,
    Dnrp,
    Drp,
    Proportional,
};

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
const std::vector<Scheme>& all_schemes();

enum class RunKind { Hour, FullDay, TwoDay };

// A fully resolved run: who prices, for how long, on what day pattern, with
// which seed. Built from a flat key=value file; every key has a default, so
// an empty file is a valid scenario (trained pricer, congested hour).
struct ScenarioConfig {
    Scheme scheme = Scheme::Ddpg;
    RunKind kind = RunKind::Hour;
    int hour = 15;                       // Hour runs: which row of the day
    std::int64_t hour_epochs = 20000;    // Hour runs: length
    std::int64_t epochs_per_period = 2500;  // day runs: compressed hour length
    std::uint64_t seed = 1;

    std::vector<std::string> tenant_labels = {"best_effort", "price_driven",
                                              "demand_driven", "medium_qos"};
    DailyProfile profile;                // standard() plus per-hour overrides
    RewardConfig reward;

    double static_price_override = -1.0;  // < 0: use the level's own price
    double kappa = -1.0;                  // < 0: default step size
    MyopicConfig myopic;

    DdpgConfig ddpg;
    LinPgConfig linpg;
    bool train = true;                    // exploration + updates for learners

    std::string checkpoint_in;
    std::string checkpoint_out;

    static ScenarioConfig defaults();
    static ScenarioConfig from_file(const std::string& path);
    static ScenarioConfig from_kv(const KeyValueFile& kv);

    int tenant_count() const { return static_cast<int>(tenant_labels.size()); }
    std::int64_t total_epochs() const;
    std::int64_t start_epoch() const;
    std::int64_t clock_epochs_per_period() const;
    std::vector<TenantProfile> tenant_profiles() const;
};

// Aggregates over a run (or any slice of one). Monetary columns are
// normalized by the maximum possible revenue, p_max * sum of RBs on sale.
struct SummaryMetrics {
    std::int64_t epochs = 0;
    double mean_reward = 0.0;
    double mean_abs_mismatch = 0.0;      // |n - sum nu| / n, averaged
    double revenue_total = 0.0;
    double target_total = 0.0;
    double normalized_revenue = 0.0;
    double profit_above_target = 0.0;    // (revenue - target) / (p_max * sum n)
    double total_disutility = 0.0;
    double served_rbs = 0.0;
    double served_bits = 0.0;
    double bits_per_price_unit = 0.0;    // allocated RBs * bits-per-RB / revenue
    std::int64_t messages = 0;
    double first_window_reward = 0.0;    // mean over the first 10% of epochs
    double final_window_reward = 0.0;    // mean over the final 10%
    double final_window_abs_mismatch = 0.0;
    double mean_price = 0.0;
};

SummaryMetrics summarize(const std::vector<StepResult>& records,
                         const PriceBounds& bounds);

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<StepResult> records;
    SummaryMetrics summary;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

// One row per epoch:
//   t,hour,price,n,reward,mismatch,revenue,target,
//   load_i...,request_i...,alloc_i...,served_i...,disutil_i...,arrival_i...
// Numbers are printed with %.9g, so identical runs are byte-identical.
void write_csv(const std::string& path, const std::vector<StepResult>& records);
void write_summary_csv(const std::string& path,
                       const std::vector<std::pair<std::string, SummaryMetrics>>& rows);

// Run several schemes against the same seed (identical arrival streams),
// writing <dir>/<scheme>.csv, <dir>/summary.csv and <dir>/hourly.csv.
std::map<Scheme, SummaryMetrics> compare_schemes(const ScenarioConfig& base,
                                                 const std::vector<Scheme>& schemes,
                                                 const std::string& out_dir);

}  // namespace rbmarket
