#include "cfmimo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cfmimo/assignment.hpp"
#include "cfmimo/parallel.hpp"
#include "cfmimo/rates.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/solver.hpp"

namespace cfmimo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ExperimentKeys {
    int budget = 200;
    std::vector<double> km_list{5, 10, 15, 20, 25, 30, 35, 40};
    Policy policy = Policy::alg1;
    BackhaulCase case_id = BackhaulCase::case2;
};

std::vector<double> parse_list(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ';'))
        out.push_back(parse_int(key, item));
    if (out.empty())
        throw std::invalid_argument("empty list for key '" + key + "'");
    return out;
}

/// Splits overrides into experiment keys and SystemConfig settings, rejecting anything else.
ExperimentKeys split_overrides(const std::vector<Setting>& overrides, std::vector<Setting>& config_settings)
{
    ExperimentKeys keys;
    for (const auto& [key, value] : overrides) {
        if (key == "budget") {
            keys.budget = parse_int(key, value);
            if (keys.budget < 1)
                throw std::invalid_argument("invalid value '" + value + "' for key 'budget'");
        } else if (key == "km_list") {
            keys.km_list = parse_list(key, value);
        } else if (key == "policy") {
            if (value == "alg1")
                keys.policy = Policy::alg1;
            else if (value == "baseline")
                keys.policy = Policy::baseline;
            else if (value == "full")
                keys.policy = Policy::full_power;
            else
                throw std::invalid_argument("invalid value '" + value + "' for key 'policy'");
        } else if (key == "case") {
            if (value == "1")
                keys.case_id = BackhaulCase::case1;
            else if (value == "2")
                keys.case_id = BackhaulCase::case2;
            else
                throw std::invalid_argument("invalid value '" + value + "' for key 'case'");
        } else if (is_config_key(key)) {
            config_settings.emplace_back(key, value);
        } else {
            throw std::invalid_argument("unknown setting '" + key + "'");
        }
    }
    return keys;
}

std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Eigen::VectorXd solve_sinr(const Arm& arm, const RateIngredients& ing, const PilotBook& pilots)
{
    const SolverOptions opts = solver_options(arm.config);
    switch (arm.policy) {
    case Policy::alg1:
        return maxmin_solve(ing, pilots, opts).sinr;
    case Policy::baseline:
        return baseline_solve(ing, pilots, opts).sinr;
    case Policy::full_power:
        break;
    }
    const int M = ing.aps();
    const int K = ing.users();
    return sinr_with_weights(uniform_weights(M, K), PowerVector::Constant(K, arm.config.pmax), ing, pilots, opts.N,
                             opts.rho);
}

}  // namespace

Preset parse_preset(const std::string& name)
{
    static const std::map<std::string, Preset> names = {{"fig1", Preset::fig1},
                                                        {"fig2", Preset::fig2},
                                                        {"fig3", Preset::fig3},
                                                        {"fig4", Preset::fig4},
                                                        {"custom", Preset::custom}};
    const auto it = names.find(name);
    if (it == names.end())
        throw std::invalid_argument("unknown preset '" + name + "'");
    return it->second;
}

std::string preset_name(Preset preset)
{
    switch (preset) {
    case Preset::fig1:
        return "fig1";
    case Preset::fig2:
        return "fig2";
    case Preset::fig3:
        return "fig3";
    case Preset::fig4:
        return "fig4";
    case Preset::custom:
        break;
    }
    return "custom";
}

std::vector<Arm> preset_arms(const ExperimentSpec& spec)
{
    if (spec.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    std::vector<Setting> settings;
    const ExperimentKeys keys = split_overrides(spec.overrides, settings);

    std::vector<Arm> arms;
    auto add = [&](std::string id, SystemConfig c, BackhaulCase cs, Policy p, std::string sweep_name,
                   std::vector<double> sweep) {
        apply_settings(c, settings);
        arms.push_back({std::move(id), c, cs, p, std::move(sweep_name), std::move(sweep), keys.budget});
    };

    switch (spec.preset) {
    case Preset::fig1: {
        std::vector<double> alphas(20);
        std::iota(alphas.begin(), alphas.end(), 1.0);
        alphas.push_back(kInf);
        for (auto [N, M] : {std::pair{2, 140}, {4, 70}, {10, 28}}) {
            SystemConfig c;
            c.N = N;
            c.M = M;
            c.K = 40;
            c.tau = 40;
            c.pilot_mode = PilotMode::orthogonal;
            c.D = 1000.0;
            add("fig1/N" + std::to_string(N) + "_M" + std::to_string(M), c, BackhaulCase::case2, Policy::baseline,
                "alpha", alphas);
        }
        break;
    }
    case Preset::fig2: {
        for (const bool random : {true, false}) {
            SystemConfig c;
            c.M = 100;
            c.N = 2;
            c.K = 40;
            c.alpha2 = 5;
            c.D = 1000.0;
            c.tau = random ? 20 : 40;
            c.pilot_mode = random ? PilotMode::random : PilotMode::orthogonal;
            const std::string base = random ? "fig2/random_tau20" : "fig2/orthogonal";
            SystemConfig probe = c;
            apply_settings(probe, settings);
            const std::vector<double> alpha{static_cast<double>(probe.alpha2)};
            add(base + "/alg1", c, BackhaulCase::case2, Policy::alg1, "alpha", alpha);
            add(base + "/baseline", c, BackhaulCase::case2, Policy::baseline, "alpha", alpha);
        }
        break;
    }
    case Preset::fig3: {
        for (const double D : {1000.0, 2000.0}) {
            for (const bool random : {true, false}) {
                SystemConfig c;
                c.M = 100;
                c.N = 2;
                c.K = 40;
                c.D = D;
                c.tau = random ? 30 : 40;
                c.pilot_mode = random ? PilotMode::random : PilotMode::orthogonal;
                SystemConfig probe = c;
                apply_settings(probe, settings);
                std::vector<double> km;
                for (double v : keys.km_list)
                    if (v >= 1 && v <= probe.K && v <= keys.budget)
                        km.push_back(v);
                if (km.empty())
                    throw std::invalid_argument("km_list has no value in [1, min(K, budget)]");
                const std::string id = "fig3/D" + std::to_string(static_cast<int>(D)) +
                                       (random ? "_tau30" : "_orthogonal");
                add(id, c, BackhaulCase::case2, Policy::alg1, "K_m", km);
            }
        }
        break;
    }
    case Preset::fig4: {
        struct Setup {
            int N, K, alpha1, alpha2;
            double w_g, w_y, w_z;
        };
        for (const Setup s : {Setup{4, 20, 9, 2, 3.0, 80.0, 3.0}, Setup{20, 40, 8, 5, 3.5, 70.0, 3.0}}) {
            SystemConfig c;
            c.M = 100;
            c.N = s.N;
            c.K = s.K;
            c.tau = s.K;
            c.tau_c = 200;
            c.pilot_mode = PilotMode::orthogonal;
            c.D = 1000.0;
            c.alpha1 = s.alpha1;
            c.alpha2 = s.alpha2;
            c.w_g = s.w_g;
            c.w_y = s.w_y;
            c.w_z = s.w_z;
            SystemConfig probe = c;
            apply_settings(probe, settings);
            const std::string base = "fig4/N" + std::to_string(s.N) + "_K" + std::to_string(s.K);
            add(base + "/case1", c, BackhaulCase::case1, Policy::baseline, "alpha",
                {static_cast<double>(probe.alpha1)});
            add(base + "/case2", c, BackhaulCase::case2, Policy::baseline, "alpha",
                {static_cast<double>(probe.alpha2)});
        }
        break;
    }
    case Preset::custom: {
        SystemConfig probe;
        apply_settings(probe, settings);
        const int alpha = keys.case_id == BackhaulCase::case1 ? probe.alpha1 : probe.alpha2;
        add("custom", SystemConfig{}, keys.case_id, keys.policy, "alpha", {static_cast<double>(alpha)});
        break;
    }
    }
    for (const Arm& a : arms)
        a.config.validate();
    return arms;
}

Drop draw_drop(const SystemConfig& config, std::uint64_t seed, int trial)
{
    const auto t = static_cast<std::uint64_t>(trial);
    Drop d;
    const Topology topo = drop_topology(config, derive_seed(seed, t, Stream::topology));
    d.beta = large_scale(topo, config.path_loss, derive_seed(seed, t, Stream::shadowing));
    d.pilots = make_pilots(config.K, config.tau, config.pilot_mode, derive_seed(seed, t, Stream::pilots));
    d.stats = estimation_stats(d.beta, d.pilots, config.p_p(), config.tau);
    return d;
}

std::vector<double> evaluate_arm(const Arm& arm, const Drop& drop, double sweep_value)
{
    const SystemConfig& c = arm.config;
    GammaMatrix gamma = drop.stats.gamma;
    double levels = 0.0;
    if (arm.sweep_name == "K_m") {
        const int km = static_cast<int>(sweep_value);
        const int alpha = arm.budget / km;
        gamma = masked_stats(gamma, build_active_sets(drop.beta, km, alpha));
        levels = levels_from_bits(alpha);
    } else if (arm.sweep_name == "alpha") {
        levels = std::isinf(sweep_value) ? kInf : levels_from_bits(static_cast<int>(sweep_value));
    } else {
        throw std::invalid_argument("unknown sweep '" + arm.sweep_name + "'");
    }
    const Eigen::VectorXd per_ap = Eigen::VectorXd::Constant(c.M, levels);

    RateIngredients ing;
    if (arm.case_id == BackhaulCase::case1) {
        const double ct = std::isinf(levels) ? 0.0 : c_tot(c.w_y, c.w_g, levels);
        ing = case1_ingredients(drop.beta, gamma, Eigen::VectorXd::Constant(c.M, ct));
    } else {
        ing = rate_ingredients(drop.beta, gamma, c.w_z, per_ap);
    }
    const Eigen::VectorXd sinr = solve_sinr(arm, ing, drop.pilots);
    const double scale = c.rate_overhead ? static_cast<double>(c.tau_f()) / c.tau_c : 1.0;
    std::vector<double> rates(static_cast<std::size_t>(sinr.size()));
    for (Eigen::Index k = 0; k < sinr.size(); ++k)
        rates[static_cast<std::size_t>(k)] = scale * rate_from_sinr(std::max(sinr(k), 0.0));
    return rates;
}

std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec)
{
    const std::vector<Arm> arms = preset_arms(spec);
    const auto trials = static_cast<std::size_t>(spec.trials);

    // slots[a][trial][sweep index]
    std::vector<std::vector<std::vector<ResultRecord>>> slots(arms.size());
    for (auto& s : slots)
        s.resize(trials);
    const unsigned workers = spec.workers == 0 ? default_workers() : spec.workers;

    parallel_for(arms.size() * trials, workers, [&](std::size_t unit) {
        const std::size_t a = unit / trials;
        const int trial = static_cast<int>(unit % trials);
        const Arm& arm = arms[a];
        const Drop drop = draw_drop(arm.config, spec.seed, trial);
        auto& out = slots[a][static_cast<std::size_t>(trial)];
        for (const double v : arm.sweep) {
            ResultRecord r;
            r.experiment_id = arm.id;
            r.trial_id = trial;
            r.sweep_name = arm.sweep_name;
            r.sweep_value = v;
            r.user_rates = evaluate_arm(arm, drop, v);
            r.min_rate = *std::min_element(r.user_rates.begin(), r.user_rates.end());
            r.avg_rate = std::accumulate(r.user_rates.begin(), r.user_rates.end(), 0.0) /
                         static_cast<double>(r.user_rates.size());
            out.push_back(std::move(r));
        }
    });

    std::vector<ResultRecord> records;
    for (std::size_t a = 0; a < arms.size(); ++a)
        for (std::size_t s = 0; s < arms[a].sweep.size(); ++s)
            for (std::size_t t = 0; t < trials; ++t)
                records.push_back(std::move(slots[a][t][s]));
    return records;
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records)
{
    out << "experiment_id,trial_id,sweep_name,sweep_value,user_rates,min_rate,avg_rate\n";
    for (const ResultRecord& r : records) {
        out << r.experiment_id << ',' << r.trial_id << ',' << r.sweep_name << ',' << format_double(r.sweep_value)
            << ',';
        for (std::size_t k = 0; k < r.user_rates.size(); ++k)
            out << (k ? ";" : "") << format_double(r.user_rates[k]);
        out << ',' << format_double(r.min_rate) << ',' << format_double(r.avg_rate) << '\n';
    }
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records)
{
    std::vector<SummaryRow> rows;
    std::vector<std::vector<double>> mins;
    std::map<std::pair<std::string, double>, std::size_t> index;
    for (const ResultRecord& r : records) {
        const auto key = std::make_pair(r.experiment_id, r.sweep_value);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, rows.size()).first;
            rows.push_back({r.experiment_id, r.sweep_name, r.sweep_value, 0, 0.0, 0.0, 0.0});
            mins.emplace_back();
        }
        SummaryRow& row = rows[it->second];
        ++row.trials;
        row.mean_min_rate += r.min_rate;
        row.mean_avg_rate += r.avg_rate;
        mins[it->second].push_back(r.min_rate);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].mean_min_rate /= rows[i].trials;
        rows[i].mean_avg_rate /= rows[i].trials;
        rows[i].median_min_rate = median(mins[i]);
    }
    return rows;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << std::left << std::setw(28) << "experiment" << std::setw(8) << "sweep" << std::right << std::setw(8)
        << "value" << std::setw(8) << "trials" << std::setw(12) << "mean_min" << std::setw(12) << "median_min"
        << std::setw(12) << "mean_avg" << '\n';
    out << std::fixed << std::setprecision(4);
    for (const SummaryRow& r : rows)
        out << std::left << std::setw(28) << r.experiment_id << std::setw(8) << r.sweep_name << std::right
            << std::setw(8) << format_double(r.sweep_value) << std::setw(8) << r.trials << std::setw(12)
            << r.mean_min_rate << std::setw(12) << r.median_min_rate << std::setw(12) << r.mean_avg_rate << '\n';

    const std::string suffix = "/alg1";
    for (const SummaryRow& a : rows) {
        if (a.experiment_id.size() <= suffix.size() ||
            a.experiment_id.compare(a.experiment_id.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        const std::string base = a.experiment_id.substr(0, a.experiment_id.size() - suffix.size());
        for (const SummaryRow& b : rows)
            if (b.experiment_id == base + "/baseline" && b.sweep_value == a.sweep_value)
                out << "median min-rate ratio " << base << ": " << a.median_min_rate / b.median_min_rate << '\n';
    }
    out.unsetf(std::ios::floatfield);
}

std::vector<std::pair<double, double>> cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("cdf: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i])
            continue;
        out.emplace_back(samples[i], static_cast<double>(i + 1) / n);
    }
    return out;
}

double median(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("median: no samples");
    const std::size_t n = samples.size();
    std::sort(samples.begin(), samples.end());
    return n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

}  // namespace cfmimo
