#include "rbmarket/scenario.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace rbmarket {

namespace {

struct SchemeName {
    Scheme scheme;
    const char* name;
};

constexpr SchemeName kSchemeNames[] = {
    {Scheme::Ddpg, "ddpg"},
    {Scheme::LinPg, "linpg"},
    {Scheme::StaticLow, "static_low"},
    {Scheme::StaticMediumLow, "static_medium_low"},
    {Scheme::StaticMediumHigh, "static_medium_high"},
    {Scheme::StaticHigh, "static_high"},
    {Scheme::Myopic, "myopic"},
    {Scheme::Dnrp, "dnrp"},
    {Scheme::Drp, "drp"},
    {Scheme::Proportional, "proportional"},
};

}  // namespace

const char* scheme_name(Scheme s) {
    for (const auto& e : kSchemeNames) {
        if (e.scheme == s) return e.name;
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    for (const auto& e : kSchemeNames) {
        if (name == e.name) return e.scheme;
    }
    throw ConfigError("unknown scheme: `" + name + "`");
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> all = [] {
        std::vector<Scheme> v;
        for (const auto& e : kSchemeNames) v.push_back(e.scheme);
        return v;
    }();
    return all;
}

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig c;
    c.profile = DailyProfile::standard(c.tenant_count());
    // Desk-scale networks; full-scale sizes stay available through the config
    // file. Decay 0 means "auto": 75% of the planned run.
    c.ddpg.actor_hidden = {64, 64};
    c.ddpg.critic_hidden = {64, 64};
    // Exploration keeps a floor: decaying the noise all the way to zero lets
    // critic overestimation drift uncorrected once the policy stops sampling
    // around itself, and day-cycle runs were observed to ratchet into the
    // price ceiling an entire day after the reward had converged. A modest
    // floor plus a faster target track and a shorter bootstrap horizon hold
    // the learned policy in place.
    c.ddpg.noise.sigma = 60.0;
    c.ddpg.noise.sigma_final = 40.0;
    c.ddpg.noise.decay_steps = 0;
    c.ddpg.tau = 0.005;
    c.ddpg.discount = 0.95;
    c.ddpg.warmup = 2000;
    c.ddpg.scales = FeatureScales{0.0, 0.0, 0.0};
    c.linpg.decay_steps = 0;
    c.linpg.scales = FeatureScales{0.0, 0.0, 0.0};
    return c;
}

std::int64_t ScenarioConfig::total_epochs() const {
    switch (kind) {
        case RunKind::Hour: return hour_epochs;
        case RunKind::FullDay: return profile.periods() * epochs_per_period;
        case RunKind::TwoDay: return 2 * profile.periods() * epochs_per_period;
    }
    return hour_epochs;
}

std::int64_t ScenarioConfig::clock_epochs_per_period() const {
    return kind == RunKind::Hour ? hour_epochs : epochs_per_period;
}

std::int64_t ScenarioConfig::start_epoch() const {
    return kind == RunKind::Hour ? hour * hour_epochs : 0;
}

std::vector<TenantProfile> ScenarioConfig::tenant_profiles() const {
    std::vector<TenantProfile> out;
    out.reserve(tenant_labels.size());
    for (const auto& label : tenant_labels) out.push_back(profile_by_label(label));
    return out;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    return from_kv(KeyValueFile::parse_file(path));
}

ScenarioConfig ScenarioConfig::from_kv(const KeyValueFile& kv) {
    ScenarioConfig c = defaults();

    std::set<std::string> known = {
        "scheme", "kind", "hour", "hour_epochs", "epochs_per_period", "seed",
        "tenants", "load_std_frac",
        "price_min", "price_max", "rb_cost", "sigma", "delta",
        "static_price", "kappa",
        "myopic_scan", "myopic_golden", "myopic_inner", "myopic_polish",
        "actor_hidden", "critic_hidden", "actor_lr", "critic_lr", "tau",
        "discount", "batch_size", "buffer_capacity", "warmup",
        "noise_theta", "noise_sigma", "noise_sigma_final", "noise_decay",
        "linpg_actor_lr", "linpg_critic_lr", "linpg_sigma", "linpg_sigma_final",
        "linpg_decay",
        "request_scale", "load_scale", "rb_scale",
        "train", "checkpoint_in", "checkpoint_out",
    };
    for (int h = 0; h < 24; ++h) {
        known.insert("hour_" + std::to_string(h) + "_aggregate");
        known.insert("hour_" + std::to_string(h) + "_mhz");
    }
    for (const auto& [key, value] : kv.entries()) {
        (void)value;
        if (!known.count(key)) {
            throw ConfigError(kv.origin() + ": unknown key `" + key + "`");
        }
    }

    c.scheme = scheme_from_name(kv.get_or("scheme", "ddpg"));

    const std::string kind = kv.get_or("kind", "hour");
    if (kind == "hour") c.kind = RunKind::Hour;
    else if (kind == "full_day") c.kind = RunKind::FullDay;
    else if (kind == "two_day") c.kind = RunKind::TwoDay;
    else throw ConfigError(kv.origin() + ": unknown kind `" + kind + "`");

    const std::string hour = kv.get_or("hour", "congested");
    if (hour == "congested") c.hour = 15;
    else if (hour == "uncongested") c.hour = 8;
    else if (hour == "high_load") c.hour = 11;
    else {
        try {
            c.hour = std::stoi(hour);
        } catch (const std::exception&) {
            throw ConfigError(kv.origin() + ": bad hour `" + hour + "`");
        }
    }
    if (c.hour < 0 || c.hour > 23) {
        throw ConfigError(kv.origin() + ": hour out of range");
    }

    c.hour_epochs = kv.get_int_or("hour_epochs", c.hour_epochs);
    c.epochs_per_period = kv.get_int_or("epochs_per_period", c.epochs_per_period);
    c.seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 1));
    if (c.hour_epochs <= 0 || c.epochs_per_period <= 0) {
        throw ConfigError(kv.origin() + ": epoch counts must be positive");
    }

    c.tenant_labels = kv.get_strings_or("tenants", c.tenant_labels);
    if (c.tenant_labels.empty()) {
        throw ConfigError(kv.origin() + ": tenant list is empty");
    }

    c.reward.price.min = kv.get_double_or("price_min", 0.0);
    c.reward.price.max = kv.get_double_or("price_max", 2500.0);
    if (!(c.reward.price.min < c.reward.price.max)) {
        throw ConfigError(kv.origin() + ": price_min must be below price_max");
    }
    c.reward.rb_cost = kv.get_double_or("rb_cost", 850.0);
    c.reward.sigma = kv.get_double_or("sigma", 1.0);
    c.reward.delta = kv.get_double_or("delta", 1.0);

    c.static_price_override = kv.get_double_or("static_price", -1.0);
    c.kappa = kv.get_double_or("kappa", -1.0);

    c.myopic.scan_points = static_cast<int>(kv.get_int_or("myopic_scan", c.myopic.scan_points));
    c.myopic.golden_iters = static_cast<int>(kv.get_int_or("myopic_golden", c.myopic.golden_iters));
    c.myopic.inner_iters = static_cast<int>(kv.get_int_or("myopic_inner", c.myopic.inner_iters));
    c.myopic.polish_sweeps = static_cast<int>(kv.get_int_or("myopic_polish", c.myopic.polish_sweeps));

    auto to_hidden = [&kv](const char* key, std::vector<int> fallback) {
        std::vector<double> def(fallback.begin(), fallback.end());
        std::vector<int> out;
        for (double v : kv.get_doubles_or(key, def)) {
            if (v < 1) throw ConfigError(std::string("bad layer width for ") + key);
            out.push_back(static_cast<int>(v));
        }
        return out;
    };
    c.ddpg.actor_hidden = to_hidden("actor_hidden", c.ddpg.actor_hidden);
    c.ddpg.critic_hidden = to_hidden("critic_hidden", c.ddpg.critic_hidden);
    c.ddpg.actor_lr = kv.get_double_or("actor_lr", c.ddpg.actor_lr);
    c.ddpg.critic_lr = kv.get_double_or("critic_lr", c.ddpg.critic_lr);
    c.ddpg.tau = kv.get_double_or("tau", c.ddpg.tau);
    c.ddpg.discount = kv.get_double_or("discount", c.ddpg.discount);
    c.ddpg.batch_size = static_cast<int>(kv.get_int_or("batch_size", c.ddpg.batch_size));
    c.ddpg.buffer_capacity = static_cast<std::size_t>(
        kv.get_int_or("buffer_capacity", static_cast<std::int64_t>(c.ddpg.buffer_capacity)));
    c.ddpg.warmup = static_cast<int>(kv.get_int_or("warmup", c.ddpg.warmup));
    c.ddpg.noise.theta = kv.get_double_or("noise_theta", c.ddpg.noise.theta);
    c.ddpg.noise.sigma = kv.get_double_or("noise_sigma", c.ddpg.noise.sigma);
    c.ddpg.noise.sigma_final = kv.get_double_or("noise_sigma_final", c.ddpg.noise.sigma_final);
    c.ddpg.noise.decay_steps = kv.get_int_or("noise_decay", c.ddpg.noise.decay_steps);

    c.linpg.actor_lr = kv.get_double_or("linpg_actor_lr", c.linpg.actor_lr);
    c.linpg.critic_lr = kv.get_double_or("linpg_critic_lr", c.linpg.critic_lr);
    c.linpg.sigma = kv.get_double_or("linpg_sigma", c.linpg.sigma);
    c.linpg.sigma_final = kv.get_double_or("linpg_sigma_final", c.linpg.sigma_final);
    c.linpg.decay_steps = kv.get_int_or("linpg_decay", c.linpg.decay_steps);
    c.linpg.discount = c.ddpg.discount;

    c.ddpg.scales.request_scale = kv.get_double_or("request_scale", 0.0);
    c.ddpg.scales.load_scale = kv.get_double_or("load_scale", 0.0);
    c.ddpg.scales.rb_scale = kv.get_double_or("rb_scale", 0.0);
    c.linpg.scales = c.ddpg.scales;

    c.train = kv.get_bool_or("train", true);
    c.checkpoint_in = kv.get_or("checkpoint_in", "");
    c.checkpoint_out = kv.get_or("checkpoint_out", "");

    // Day-pattern overrides: per-hour aggregate arrival rate (split evenly
    // across tenants) and per-hour spectrum.
    c.profile = DailyProfile::standard(c.tenant_count());
    const double std_frac = kv.get_double_or("load_std_frac", 0.08);
    for (int h = 0; h < c.profile.periods(); ++h) {
        HourProfile& row = c.profile.hours[h];
        const std::string base = "hour_" + std::to_string(h);
        const double agg = kv.get_double_or(base + "_aggregate", -1.0);
        if (agg >= 0.0) {
            const double mean = agg / c.tenant_count();
            row.mean.assign(c.tenant_count(), mean);
        }
        for (std::size_t i = 0; i < row.mean.size(); ++i) {
            row.stddev[i] = std_frac * row.mean[i];
        }
        row.mhz = kv.get_double_or(base + "_mhz", row.mhz);
    }

    return c;
}

SummaryMetrics summarize(const std::vector<StepResult>& records,
                         const PriceBounds& bounds) {
    SummaryMetrics m;
    m.epochs = static_cast<std::int64_t>(records.size());
    if (records.empty()) return m;

    double max_revenue = 0.0;
    double allocated = 0.0;
    for (const auto& r : records) {
        m.mean_reward += r.reward;
        m.mean_abs_mismatch += std::abs(r.mismatch);
        m.revenue_total += r.revenue;
        m.target_total += r.target;
        m.total_disutility += std::accumulate(r.disutility.begin(), r.disutility.end(), 0.0);
        m.served_rbs += std::accumulate(r.served.begin(), r.served.end(), 0.0);
        allocated += r.alloc.total;
        m.messages += r.messages.total();
        m.mean_price += r.price;
        max_revenue += bounds.max * static_cast<double>(r.available);
    }
    const double n = static_cast<double>(records.size());
    m.mean_reward /= n;
    m.mean_abs_mismatch /= n;
    m.mean_price /= n;
    m.served_bits = m.served_rbs * kBitsPerRb;
    if (max_revenue > 0.0) {
        m.normalized_revenue = m.revenue_total / max_revenue;
        m.profit_above_target = (m.revenue_total - m.target_total) / max_revenue;
    }
    if (m.revenue_total > 0.0) {
        m.bits_per_price_unit = allocated * kBitsPerRb / m.revenue_total;
    }

    const std::size_t w = std::max<std::size_t>(1, records.size() / 10);
    for (std::size_t i = 0; i < w; ++i) m.first_window_reward += records[i].reward;
    m.first_window_reward /= static_cast<double>(w);
    for (std::size_t i = records.size() - w; i < records.size(); ++i) {
        m.final_window_reward += records[i].reward;
        m.final_window_abs_mismatch += std::abs(records[i].mismatch);
    }
    m.final_window_reward /= static_cast<double>(w);
    m.final_window_abs_mismatch /= static_cast<double>(w);
    return m;
}

namespace {

FeatureScales resolve_scales(const FeatureScales& configured, const DailyProfile& profile) {
    double max_rbs = 0.0;
    for (const auto& row : profile.hours) {
        max_rbs = std::max(max_rbs, static_cast<double>(row.rbs()));
    }
    FeatureScales out = FeatureScales::for_inventory(std::max(1.0, max_rbs));
    if (configured.request_scale > 0.0) out.request_scale = configured.request_scale;
    if (configured.load_scale > 0.0) out.load_scale = configured.load_scale;
    if (configured.rb_scale > 0.0) out.rb_scale = configured.rb_scale;
    return out;
}

std::uint64_t agent_seed(std::uint64_t env_seed) {
    // Separate stream from the environment's; the arrival sequence must not
    // depend on which agent is running.
    return env_seed ^ 0x9e3779b97f4a7c15ULL;
}

// Rounding the solver's real-valued requests to whole RBs can push the total
// past the pool or drop the booked revenue a fraction of an RB under the
// floor. Trim the overshoot (largest rounding excess first), then top up the
// revenue (largest rounding deficit first) while the pool has room.
void align_requests(std::vector<std::int64_t>& req, const std::vector<double>& nu,
                    double price, double target, std::int64_t available, bool feasible) {
    const std::size_t n = req.size();
    std::int64_t sum = std::accumulate(req.begin(), req.end(), std::int64_t{0});

    while (sum > available) {
        std::size_t k = n;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (req[i] <= 0) continue;
            const double over = static_cast<double>(req[i]) - nu[i];
            if (k == n || over > worst) { worst = over; k = i; }
        }
        if (k == n) break;
        --req[k];
        --sum;
    }
    if (!feasible || price <= 0.0) return;
    while (static_cast<double>(sum) * price < target && sum < available) {
        std::size_t k = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double under = nu[i] - static_cast<double>(req[i]);
            if (under > best) { best = under; k = i; }
        }
        ++req[k];
        ++sum;
    }
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg_in) {
    ScenarioConfig cfg = cfg_in;
    const std::int64_t total = cfg.total_epochs();

    cfg.ddpg.price = cfg.reward.price;
    cfg.linpg.price = cfg.reward.price;
    cfg.myopic.price = cfg.reward.price;
    cfg.ddpg.scales = resolve_scales(cfg.ddpg.scales, cfg.profile);
    cfg.linpg.scales = cfg.ddpg.scales;
    if (cfg.ddpg.noise.decay_steps <= 0) cfg.ddpg.noise.decay_steps = (3 * total) / 4;
    if (cfg.linpg.decay_steps <= 0) cfg.linpg.decay_steps = (3 * total) / 4;

    MarketConfig mc;
    mc.profile = cfg.profile;
    mc.tenants = cfg.tenant_profiles();
    mc.reward = cfg.reward;
    mc.epochs_per_period = cfg.clock_epochs_per_period();
    mc.start_epoch = cfg.start_epoch();
    mc.seed = cfg.seed;
    Market market(mc);

    const int N = market.tenants();
    ScenarioResult out;
    out.records.reserve(static_cast<std::size_t>(total));

    const std::int64_t day_epochs = cfg.profile.periods() * cfg.epochs_per_period;

    switch (cfg.scheme) {
        case Scheme::Ddpg: {
            DdpgAgent agent(N, cfg.ddpg, agent_seed(cfg.seed));
            if (!cfg.checkpoint_in.empty()) agent.load_file(cfg.checkpoint_in);
            for (std::int64_t t = 0; t < total; ++t) {
                const MarketState x = market.state();
                const double price = agent.act(x, cfg.train);
                StepResult r = market.step(price);
                if (cfg.train) {
                    agent.observe(x, price, r.reward, market.state());
                    agent.train_step();
                }
                out.records.push_back(std::move(r));
                if (cfg.kind == RunKind::TwoDay && !cfg.checkpoint_out.empty() &&
                    t + 1 == day_epochs) {
                    agent.save_file(cfg.checkpoint_out);
                }
            }
            if (!cfg.checkpoint_out.empty()) agent.save_file(cfg.checkpoint_out);
            break;
        }
        case Scheme::LinPg: {
            LinPgAgent agent = LinPgAgent::for_market(N, cfg.linpg, agent_seed(cfg.seed));
            for (std::int64_t t = 0; t < total; ++t) {
                const MarketState x = market.state();
                const double price = agent.act(x, cfg.train);
                StepResult r = market.step(price);
                if (cfg.train) agent.update(x, price, r.reward, market.state());
                out.records.push_back(std::move(r));
            }
            break;
        }
        case Scheme::StaticLow:
        case Scheme::StaticMediumLow:
        case Scheme::StaticMediumHigh:
        case Scheme::StaticHigh: {
            StaticLevel level = StaticLevel::Low;
            if (cfg.scheme == Scheme::StaticMediumLow) level = StaticLevel::MediumLow;
            if (cfg.scheme == Scheme::StaticMediumHigh) level = StaticLevel::MediumHigh;
            if (cfg.scheme == Scheme::StaticHigh) level = StaticLevel::High;
            const double price = cfg.static_price_override >= 0.0
                                     ? cfg.static_price_override
                                     : static_price(level, cfg.reward.price);
            for (std::int64_t t = 0; t < total; ++t) {
                out.records.push_back(market.step(price));
            }
            break;
        }
        case Scheme::Myopic: {
            const auto profiles = cfg.tenant_profiles();
            std::vector<std::int64_t> req(N);
            std::vector<double> warm;
            for (std::int64_t t = 0; t < total; ++t) {
                const MarketState& x = market.state();
                const double target = cfg.reward.target(x.available);
                const MyopicSolution sol =
                    myopic_solve(x.loads, profiles, x.available, target, cfg.myopic,
                                 warm.empty() ? nullptr : &warm);
                warm = sol.requests;
                for (int i = 0; i < N; ++i) req[i] = std::llround(sol.requests[i]);
                align_requests(req, sol.requests, sol.price, target, x.available,
                               sol.feasible);
                out.records.push_back(market.step_with_requests(sol.price, req));
            }
            break;
        }
        case Scheme::Dnrp:
        case Scheme::Drp: {
            DistributedPricerConfig pc;
            pc.price = cfg.reward.price;
            pc.reserve = cfg.scheme == Scheme::Drp ? cfg.reward.rb_cost : 0.0;
            pc.initial = pc.reserve;
            pc.kappa = cfg.kappa > 0.0 ? cfg.kappa
                                       : default_kappa(cfg.reward.price,
                                                       market.state().available);
            DistributedPricer pricer(pc);
            for (std::int64_t t = 0; t < total; ++t) {
                StepResult r = market.step(pricer.price());
                const double demand = static_cast<double>(std::accumulate(
                    r.requests.begin(), r.requests.end(), std::int64_t{0}));
                pricer.update(demand, r.available);
                out.records.push_back(std::move(r));
            }
            break;
        }
        case Scheme::Proportional: {
            for (std::int64_t t = 0; t < total; ++t) {
                out.records.push_back(market.step_proportional());
            }
            break;
        }
    }

    out.summary = summarize(out.records, cfg.reward.price);
    out.config = cfg;
    return out;
}

namespace {

void append_number(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    line += buf;
}

void append_number(std::string& line, std::int64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%" PRId64, v);
    line += buf;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<StepResult>& records) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write CSV: " + path);

    const int N = records.empty() ? 0 : static_cast<int>(records.front().loads.size());
    std::string header = "t,hour,price,n,reward,mismatch,revenue,target";
    auto cols = [&header, N](const char* stem) {
        for (int i = 1; i <= N; ++i) {
            header += ',';
            header += stem;
            header += '_';
            header += std::to_string(i);
        }
    };
    cols("load");
    cols("request");
    cols("alloc");
    cols("served");
    cols("disutil");
    cols("arrival");
    os << header << '\n';

    std::string line;
    for (const auto& r : records) {
        line.clear();
        append_number(line, r.epoch);
        line += ',';
        append_number(line, r.hour);
        line += ',';
        append_number(line, r.price);
        line += ',';
        append_number(line, r.available);
        line += ',';
        append_number(line, r.reward);
        line += ',';
        append_number(line, r.mismatch);
        line += ',';
        append_number(line, r.revenue);
        line += ',';
        append_number(line, r.target);
        for (double v : r.loads) { line += ','; append_number(line, v); }
        for (std::int64_t v : r.requests) { line += ','; append_number(line, v); }
        for (double v : r.alloc.granted) { line += ','; append_number(line, v); }
        for (double v : r.served) { line += ','; append_number(line, v); }
        for (double v : r.disutility) { line += ','; append_number(line, v); }
        for (double v : r.arrivals) { line += ','; append_number(line, v); }
        line += '\n';
        os << line;
    }
}

void write_summary_csv(const std::string& path,
                       const std::vector<std::pair<std::string, SummaryMetrics>>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write CSV: " + path);
    os << "scheme,epochs,mean_reward,mean_abs_mismatch,revenue,target,"
          "normalized_revenue,profit_above_target,total_disutility,served_rbs,"
          "served_bits,bits_per_price_unit,messages,first_window_reward,"
          "final_window_reward,final_window_abs_mismatch,mean_price\n";
    std::string line;
    for (const auto& [name, m] : rows) {
        line = name;
        line += ',';
        append_number(line, m.epochs);
        for (double v : {m.mean_reward, m.mean_abs_mismatch, m.revenue_total,
                         m.target_total, m.normalized_revenue, m.profit_above_target,
                         m.total_disutility, m.served_rbs, m.served_bits,
                         m.bits_per_price_unit}) {
            line += ',';
            append_number(line, v);
        }
        line += ',';
        append_number(line, m.messages);
        for (double v : {m.first_window_reward, m.final_window_reward,
                         m.final_window_abs_mismatch, m.mean_price}) {
            line += ',';
            append_number(line, v);
        }
        line += '\n';
        os << line;
    }
}

std::map<Scheme, SummaryMetrics> compare_schemes(const ScenarioConfig& base,
                                                 const std::vector<Scheme>& schemes,
                                                 const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::map<Scheme, SummaryMetrics> results;
    std::vector<std::pair<std::string, SummaryMetrics>> summary_rows;

    std::ofstream hourly(out_dir + "/hourly.csv", std::ios::binary);
    if (!hourly) throw std::runtime_error("cannot write CSV: " + out_dir + "/hourly.csv");
    hourly << "scheme,hour,epochs,mean_reward,mean_abs_mismatch,revenue,target,"
              "total_disutility,served_rbs,mean_price\n";

    for (Scheme s : schemes) {
        ScenarioConfig cfg = base;
        cfg.scheme = s;
        ScenarioResult res = run_scenario(cfg);
        write_csv(out_dir + "/" + scheme_name(s) + ".csv", res.records);
        results[s] = res.summary;
        summary_rows.emplace_back(scheme_name(s), res.summary);

        std::map<std::int64_t, std::vector<const StepResult*>> by_hour;
        for (const auto& r : res.records) by_hour[r.hour].push_back(&r);
        for (const auto& [h, rows] : by_hour) {
            double reward_sum = 0, mm = 0, rev = 0, tgt = 0, dis = 0, served = 0, price = 0;
            for (const auto* r : rows) {
                reward_sum += r->reward;
                mm += std::abs(r->mismatch);
                rev += r->revenue;
                tgt += r->target;
                dis += std::accumulate(r->disutility.begin(), r->disutility.end(), 0.0);
                served += std::accumulate(r->served.begin(), r->served.end(), 0.0);
                price += r->price;
            }
            const double k = static_cast<double>(rows.size());
            std::string line = scheme_name(s);
            line += ',';
            append_number(line, h);
            line += ',';
            append_number(line, static_cast<std::int64_t>(rows.size()));
            for (double v : {reward_sum / k, mm / k, rev, tgt, dis, served, price / k}) {
                line += ',';
                append_number(line, v);
            }
            hourly << line << '\n';
        }
    }
    write_summary_csv(out_dir + "/summary.csv", summary_rows);
    return results;
}

}  // namespace rbmarket
