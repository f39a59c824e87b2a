#include "ratings/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace ratings {

std::string to_string(Metric metric) {
    switch (metric) {
        case Metric::death_probability: return "death_probability";
        case Metric::mean_final_rating: return "mean_final_rating";
        case Metric::mean_bias: return "mean_bias";
        case Metric::survival_conditional_rating: return "survival_conditional_rating";
    }
    throw ParamError("unknown metric");
}

Metric metric_from_string(const std::string& name) {
    if (name == "death_probability") return Metric::death_probability;
    if (name == "mean_final_rating") return Metric::mean_final_rating;
    if (name == "mean_bias") return Metric::mean_bias;
    if (name == "survival_conditional_rating") return Metric::survival_conditional_rating;
    throw ParamError("unknown metric '" + name + "'");
}

std::size_t AxisSpec::count() const {
    if (step <= 0.0) {
        if (stop == start) return 1;
        throw ParamError("axis step must be positive");
    }
    if (stop < start) throw ParamError("axis stop must not precede start");
    const double span = (stop - start) / step;
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    if (n > 1000000) throw ParamError("axis would have more than 1e6 values");
    return n;
}

std::vector<double> AxisSpec::values() const {
    const std::size_t n = count();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

GameParams GridSpec::cell_params(double alpha_value, double rho_value) const {
    GameParams params;
    params.alpha = alpha_value;
    params.rho = rho_value;
    params.horizon = horizon;
    params.reader_fraction = reader_fraction;
    params.init_rating = init_rating;
    params.init_weight = init_weight;
    return params;
}

void GridSpec::validate() const {
    if (trials < 1) throw ParamError("trials must be at least 1");
    for (double a : alpha.values()) {
        if (a < 0.0 || a > 1.0) throw ParamError("alpha axis leaves [0, 1]");
    }
    for (double r : rho.values()) {
        if (!(r > 0.5 && r <= 1.0)) throw ParamError("rho axis leaves (0.5, 1]");
    }
    cell_params(alpha.start, rho.start).validate();
}

Estimate estimate_metric(const GameParams& params, std::int64_t trials, Metric metric,
                         SeedSpec seed, std::span<const std::uint64_t> labels) {
    params.validate();
    if (trials < 1) throw ParamError("trials must be at least 1");
    if (labels.size() > 3) throw ParamError("estimate_metric accepts at most 3 labels");

    std::uint64_t trial_labels[4];
    std::copy(labels.begin(), labels.end(), trial_labels);

    const bool conditional = metric == Metric::survival_conditional_rating;
    double sum = 0.0, sum_sq = 0.0;
    std::int64_t included = 0, survivors = 0;

    for (std::int64_t t = 0; t < trials; ++t) {
        trial_labels[labels.size()] = static_cast<std::uint64_t>(t);
        Stream stream = derive_stream(
            seed, std::span<const std::uint64_t>(trial_labels, labels.size() + 1));
        const SimSummary run = run_game(params, stream, false);
        if (!run.dead) ++survivors;

        double sample;
        switch (metric) {
            case Metric::death_probability: sample = run.dead ? 1.0 : 0.0; break;
            case Metric::mean_final_rating: sample = run.final_rating; break;
            case Metric::mean_bias: sample = run.final_rating - params.alpha; break;
            case Metric::survival_conditional_rating:
            default:
                if (run.dead) continue;
                sample = run.final_rating;
                break;
        }
        sum += sample;
        sum_sq += sample * sample;
        ++included;
    }

    if (conditional && included == 0) {
        throw EmptyConditionError("survival-conditional rating: no surviving trials", 0, trials);
    }

    Estimate est;
    est.trials = trials;
    est.survivors = survivors;
    est.value = sum / static_cast<double>(included);
    const double variance =
        std::max(0.0, sum_sq / static_cast<double>(included) - est.value * est.value);
    est.std_err = std::sqrt(variance / static_cast<double>(included));
    return est;
}

GridResult sweep(const GridSpec& spec, SeedSpec seed, int workers) {
    spec.validate();

    GridResult result;
    result.spec = spec;
    result.master_seed = seed.master_seed;
    result.alpha_values = spec.alpha.values();
    result.rho_values = spec.rho.values();

    const std::size_t n_alpha = result.alpha_values.size();
    const std::size_t n_rho = result.rho_values.size();
    result.values.assign(n_alpha, std::vector<double>(n_rho, 0.0));
    result.std_errs.assign(n_alpha, std::vector<double>(n_rho, 0.0));

    const std::size_t total = n_alpha * n_rho;
    std::atomic<std::size_t> cursor{0};
    std::mutex error_mutex;

    auto work = [&]() {
        for (std::size_t cell = cursor.fetch_add(1); cell < total; cell = cursor.fetch_add(1)) {
            const std::size_t i = cell / n_rho;
            const std::size_t j = cell % n_rho;
            const GameParams params =
                spec.cell_params(result.alpha_values[i], result.rho_values[j]);
            const std::uint64_t labels[2] = {static_cast<std::uint64_t>(i),
                                             static_cast<std::uint64_t>(j)};
            try {
                const Estimate est = estimate_metric(params, spec.trials, spec.metric, seed,
                                                     std::span<const std::uint64_t>(labels, 2));
                result.values[i][j] = est.value;
                result.std_errs[i][j] = est.std_err;
            } catch (const EmptyConditionError& e) {
                result.values[i][j] = std::numeric_limits<double>::quiet_NaN();
                result.std_errs[i][j] = std::numeric_limits<double>::quiet_NaN();
                std::lock_guard<std::mutex> lock(error_mutex);
                result.errors.push_back({i, j, e.what()});
            }
        }
    };

    std::size_t n_workers = workers > 0 ? static_cast<std::size_t>(workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, total);
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::sort(result.errors.begin(), result.errors.end(), [](const CellError& a, const CellError& b) {
        return a.alpha_index != b.alpha_index ? a.alpha_index < b.alpha_index
                                              : a.rho_index < b.rho_index;
    });
    return result;
}

TrajectoryResult trajectory(const GameParams& params, std::int64_t trials,
                            std::span<const std::int64_t> checkpoints, SeedSpec seed,
                            bool keep_per_trial) {
    params.validate();
    if (trials < 1) throw ParamError("trials must be at least 1");
    if (checkpoints.empty()) throw ParamError("at least one checkpoint is required");
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        if (checkpoints[c] < 1 || checkpoints[c] > params.horizon) {
            throw ParamError("checkpoints must lie in [1, horizon]");
        }
        if (c > 0 && checkpoints[c] <= checkpoints[c - 1]) {
            throw ParamError("checkpoints must be strictly increasing");
        }
    }

    TrajectoryResult result;
    result.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    result.trials = trials;
    result.mean_rating.assign(checkpoints.size(), 0.0);
    result.survivor_mean_rating.assign(checkpoints.size(), 0.0);
    if (keep_per_trial) result.per_trial.reserve(static_cast<std::size_t>(trials));

    std::vector<double> survivor_sum(checkpoints.size(), 0.0);

    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t labels[1] = {static_cast<std::uint64_t>(t)};
        Stream stream = derive_stream(seed, std::span<const std::uint64_t>(labels, 1));
        const SimSummary run = run_game(params, stream, true);

        std::vector<double> at_checkpoints(checkpoints.size());
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            at_checkpoints[c] = run.trace[static_cast<std::size_t>(checkpoints[c] - 1)].rating_after;
            result.mean_rating[c] += at_checkpoints[c];
        }
        if (!run.dead) {
            ++result.survivors;
            for (std::size_t c = 0; c < checkpoints.size(); ++c) {
                survivor_sum[c] += at_checkpoints[c];
            }
        }
        if (keep_per_trial) result.per_trial.push_back(std::move(at_checkpoints));
    }

    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        result.mean_rating[c] /= static_cast<double>(trials);
        result.survivor_mean_rating[c] =
            result.survivors > 0 ? survivor_sum[c] / static_cast<double>(result.survivors)
                                 : std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace ratings
