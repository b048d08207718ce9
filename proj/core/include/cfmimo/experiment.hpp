#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cfmimo/config_io.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/quantization.hpp"
#include "cfmimo/scenario.hpp"

namespace cfmimo {

enum class Preset { fig1, fig2, fig3, fig4, custom };

Preset parse_preset(const std::string& name);
std::string preset_name(Preset preset);

/// Overrides are SystemConfig keys (see config_io.hpp) plus the experiment
/// keys `budget` and `km_list` (fig3, e.g. "10;20;40") and `policy`
/// (alg1|baseline|full) and `case` (1|2) for custom runs. Overrides are
/// applied on top of every configuration a preset defines.
struct ExperimentSpec {
    Preset preset = Preset::custom;
    std::vector<Setting> overrides;
    int trials = 100;
    std::uint64_t seed = 42;
    std::string output;
    unsigned workers = 0;  ///< 0 picks the hardware concurrency
};

struct ResultRecord {
    std::string experiment_id;
    int trial_id = 0;
    std::string sweep_name;
    double sweep_value = 0.0;
    std::vector<double> user_rates;
    double min_rate = 0.0;
    double avg_rate = 0.0;
};

enum class Policy { alg1, baseline, full_power };

/// One curve of a preset: a configuration, how it is solved, and what is swept.
/// sweep "alpha" sets the bit width of `case_id` (infinity removes quantization);
/// sweep "K_m" sets the active users per AP with alpha = floor(budget / K_m).
struct Arm {
    std::string id;
    SystemConfig config;
    BackhaulCase case_id = BackhaulCase::case2;
    Policy policy = Policy::alg1;
    std::string sweep_name = "alpha";
    std::vector<double> sweep;
    int budget = 200;
};

/// Resolves a spec into its arms with overrides applied and validated.
std::vector<Arm> preset_arms(const ExperimentSpec& spec);

/// Large-scale state of one topology drop.
struct Drop {
    BetaMatrix beta;
    PilotBook pilots;
    EstimationStats stats;
};

Drop draw_drop(const SystemConfig& config, std::uint64_t seed, int trial);

/// Per-user rates of `arm` on `drop` at one sweep point.
std::vector<double> evaluate_arm(const Arm& arm, const Drop& drop, double sweep_value);

/// Records ordered by arm, sweep point, then trial. Independent of `workers`.
std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec);

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);

struct SummaryRow {
    std::string experiment_id;
    std::string sweep_name;
    double sweep_value = 0.0;
    int trials = 0;
    double mean_min_rate = 0.0;
    double median_min_rate = 0.0;
    double mean_avg_rate = 0.0;
};

/// Groups records by (experiment, sweep value) in order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

/// Table of summary rows, followed by median min-rate ratios for every
/// ".../alg1" arm that has a ".../baseline" sibling.
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Sorted (value, cumulative fraction) pairs with one step per distinct value.
std::vector<std::pair<double, double>> cdf(std::vector<double> samples);

double median(std::vector<double> samples);

}  // namespace cfmimo
