#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ratings/model.hpp"

namespace ratings {

// Largest DP horizon accepted unless a caller raises the cap (the CLI reads
// RATING_DP_CAP). The state space is O(horizon^2), so this guards memory and
// time, not correctness.
inline constexpr std::int64_t kDefaultDpHorizonCap = 2000;

// Exact probability mass over (visits, likes) tallies after `horizon()`
// consumers. States are keyed by integers; the rating is a derived rational,
// so no floating-point keys exist and the regime classification matches the
// simulator's bit for bit.
class StateDistribution {
public:
    static StateDistribution initial(const GameParams& params);

    const GameParams& params() const { return params_; }
    std::int64_t horizon() const { return steps_; }

    double mass_at(std::int64_t visits, std::int64_t likes) const;
    // Kahan-compensated; |total_mass() - 1| stays below 1e-12 at any horizon.
    double total_mass() const;
    // Total mass on states whose rating is at or below the death threshold.
    double dead_mass() const;
    // E[rating]; optionally renormalized over surviving states. States with
    // no visits contribute the initialization rating. Throws
    // EmptyConditionError when conditioning on survival with zero surviving
    // mass.
    double expected_rating(bool conditional_on_survival) const;

    void for_each_state(
        const std::function<void(std::int64_t visits, std::int64_t likes, double mass)>& fn) const;

private:
    StateDistribution(GameParams params, std::int64_t steps, std::vector<double> mass)
        : params_(std::move(params)), steps_(steps), mass_(std::move(mass)) {}

    friend StateDistribution step_distribution(const StateDistribution& dist);

    GameParams params_;
    std::int64_t steps_;
    std::vector<double> mass_;  // triangular layout: index(n, k) = n(n+1)/2 + k, k <= n <= steps_
};

// One exact expectation of a run_game step: per state, split the mass over
// (attend & like), (attend & dislike) and (stay) according to the reader and
// non-reader branch probabilities for the state's rating regime.
StateDistribution step_distribution(const StateDistribution& dist);

// step_distribution applied `horizon` times from the initial state.
StateDistribution evolve_distribution(const GameParams& params, std::int64_t horizon,
                                      std::int64_t horizon_cap = kDefaultDpHorizonCap);

double exact_death_probability(const GameParams& params, std::int64_t horizon,
                               std::int64_t horizon_cap = kDefaultDpHorizonCap);

double exact_expected_rating(const GameParams& params, std::int64_t horizon,
                             bool conditional_on_survival,
                             std::int64_t horizon_cap = kDefaultDpHorizonCap);

// Value the rating approaches when the business survives:
//   alpha              when alpha > rho
//   min(alpha*rho / (alpha*rho + (1-alpha)(1-rho)), rho)
//                      when 1-rho <= alpha <= rho
//   nullopt            when alpha < 1-rho (no stable survival regime)
std::optional<double> limit_rating(double alpha, double rho);

// Systematic error of the rating as an estimator of quality.
inline double rating_bias(double final_rating, double alpha) { return final_rating - alpha; }

}  // namespace ratings
