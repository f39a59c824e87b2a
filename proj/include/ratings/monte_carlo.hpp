#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ratings/model.hpp"
#include "ratings/rng.hpp"

namespace ratings {

enum class Metric {
    death_probability,
    mean_final_rating,
    mean_bias,
    survival_conditional_rating,
};

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

// Inclusive arithmetic grid axis: start, start+step, ... while <= stop
// (with a small relative tolerance so 0:0.01:1 yields exactly 101 values).
struct AxisSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::size_t count() const;
    std::vector<double> values() const;
};

// Defaults mirror the reference experiment: alpha 0:0.01:1, rho
// 0.500001:0.01:1, 1000 trials, horizon 1000, everyone reads.
struct GridSpec {
    AxisSpec alpha{0.0, 1.0, 0.01};
    AxisSpec rho{0.500001, 1.0, 0.01};
    std::int64_t trials = 1000;
    std::int64_t horizon = 1000;
    double reader_fraction = 1.0;
    double init_rating = 0.5;
    double init_weight = 0.0;
    Metric metric = Metric::death_probability;

    GameParams cell_params(double alpha_value, double rho_value) const;
    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
    std::int64_t trials = 0;
    std::int64_t survivors = 0;  // trials with a surviving business
};

// Sample mean and standard error of `metric` over independent trials. Trial
// t runs on the stream derived from (seed, labels + [t]), so estimates are
// reproducible and independent across cells. Throws EmptyConditionError for
// survival_conditional_rating when every trial ends dead.
Estimate estimate_metric(const GameParams& params, std::int64_t trials, Metric metric,
                         SeedSpec seed, std::span<const std::uint64_t> labels = {});

struct CellError {
    std::size_t alpha_index;
    std::size_t rho_index;
    std::string message;
};

struct GridResult {
    GridSpec spec;
    std::uint64_t master_seed = 0;
    std::vector<double> alpha_values;
    std::vector<double> rho_values;
    // Indexed [alpha_index][rho_index]. Degenerate cells hold NaN and are
    // described in `errors`.
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> std_errs;
    std::vector<CellError> errors;
};

// Fill the grid cell by cell via estimate_metric with labels [i, j]. Cells
// are pure functions of (spec, seed, indices): any worker count produces the
// identical matrix. workers <= 0 means one per hardware thread.
GridResult sweep(const GridSpec& spec, SeedSpec seed, int workers = 1);

struct TrajectoryResult {
    std::vector<std::int64_t> checkpoints;
    std::int64_t trials = 0;
    std::int64_t survivors = 0;
    std::vector<double> mean_rating;           // over all trials, per checkpoint
    std::vector<double> survivor_mean_rating;  // over surviving trials; NaN when none survive
    // Per-trial ratings [trial][checkpoint]; filled only on request.
    std::vector<std::vector<double>> per_trial;
};

// Rating at each checkpoint, per trial and averaged, for Figure-1-style
// curves. Checkpoints must be sorted, within [1, horizon].
TrajectoryResult trajectory(const GameParams& params, std::int64_t trials,
                            std::span<const std::int64_t> checkpoints, SeedSpec seed,
                            bool keep_per_trial = false);

}  // namespace ratings
