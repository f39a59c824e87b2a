#include "ratings/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ratings {

namespace {

std::size_t tri_index(std::int64_t visits, std::int64_t likes) {
    return static_cast<std::size_t>(visits * (visits + 1) / 2 + likes);
}

std::size_t tri_size(std::int64_t max_visits) {
    return tri_index(max_visits + 1, 0);
}

double kahan_total(const std::vector<double>& values) {
    double sum = 0.0, carry = 0.0;
    for (double v : values) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

StateDistribution StateDistribution::initial(const GameParams& params) {
    params.validate();
    std::vector<double> mass(1, 1.0);
    return StateDistribution(params, 0, std::move(mass));
}

double StateDistribution::mass_at(std::int64_t visits, std::int64_t likes) const {
    if (visits < 0 || likes < 0 || likes > visits || visits > steps_) return 0.0;
    return mass_[tri_index(visits, likes)];
}

double StateDistribution::total_mass() const { return kahan_total(mass_); }

double StateDistribution::dead_mass() const {
    double sum = 0.0, carry = 0.0;
    for_each_state([&](std::int64_t visits, std::int64_t likes, double m) {
        const double r = rating_value(visits, likes, params_);
        if (classify_rating(r, params_.rho) != RatingRegime::dead) return;
        const double y = m - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    });
    return sum;
}

double StateDistribution::expected_rating(bool conditional_on_survival) const {
    double value = 0.0;
    double kept_mass = 0.0;
    for_each_state([&](std::int64_t visits, std::int64_t likes, double m) {
        const double r = rating_value(visits, likes, params_);
        if (conditional_on_survival && classify_rating(r, params_.rho) == RatingRegime::dead) {
            return;
        }
        value += m * r;
        kept_mass += m;
    });
    if (!conditional_on_survival) return value;
    if (kept_mass <= 0.0) {
        throw EmptyConditionError("expected rating conditional on survival: no surviving mass", 0,
                                  0);
    }
    return value / kept_mass;
}

void StateDistribution::for_each_state(
    const std::function<void(std::int64_t, std::int64_t, double)>& fn) const {
    for (std::int64_t n = 0; n <= steps_; ++n) {
        const std::size_t row = tri_index(n, 0);
        for (std::int64_t k = 0; k <= n; ++k) {
            const double m = mass_[row + static_cast<std::size_t>(k)];
            if (m != 0.0) fn(n, k, m);
        }
    }
}

StateDistribution step_distribution(const StateDistribution& dist) {
    const GameParams& p = dist.params_;
    const std::int64_t steps = dist.steps_;

    // Signal followers (readers in the selective regime, and all
    // non-readers) attend iff x = 1.
    const double follow_like = p.alpha * p.rho;
    const double follow_dislike = (1.0 - p.alpha) * (1.0 - p.rho);
    const double nonreader = 1.0 - p.reader_fraction;

    std::vector<double> next(tri_size(steps + 1), 0.0);

    for (std::int64_t n = 0; n <= steps; ++n) {
        const std::size_t row = tri_index(n, 0);
        const std::size_t row_out = tri_index(n + 1, 0);
        for (std::int64_t k = 0; k <= n; ++k) {
            const double m = dist.mass_[row + static_cast<std::size_t>(k)];
            if (m == 0.0) continue;

            const double r = rating_value(n, k, p);
            double p_like, p_dislike;
            switch (classify_rating(r, p.rho)) {
                case RatingRegime::dead:
                    p_like = nonreader * follow_like;
                    p_dislike = nonreader * follow_dislike;
                    break;
                case RatingRegime::selective:
                    p_like = follow_like;
                    p_dislike = follow_dislike;
                    break;
                case RatingRegime::mass_appeal:
                default:
                    p_like = p.reader_fraction * p.alpha + nonreader * follow_like;
                    p_dislike = p.reader_fraction * (1.0 - p.alpha) + nonreader * follow_dislike;
                    break;
            }

            if (p_like == 0.0 && p_dislike == 0.0) {
                // Frozen state (dead with readers only): mass stays put.
                next[row + static_cast<std::size_t>(k)] += m;
                continue;
            }

            // Compute the stay flow as the exact complement so each split
            // conserves mass to the last ulp.
            const double to_like = m * p_like;
            const double to_dislike = m * p_dislike;
            const double stay = m - to_like - to_dislike;
            next[row_out + static_cast<std::size_t>(k + 1)] += to_like;
            next[row_out + static_cast<std::size_t>(k)] += to_dislike;
            next[row + static_cast<std::size_t>(k)] += stay;
        }
    }

    return StateDistribution(p, steps + 1, std::move(next));
}

StateDistribution evolve_distribution(const GameParams& params, std::int64_t horizon,
                                      std::int64_t horizon_cap) {
    if (horizon < 0) throw ParamError("horizon must be nonnegative");
    if (horizon > horizon_cap) {
        throw ResourceError("DP horizon " + std::to_string(horizon) +
                            " exceeds the cap of " + std::to_string(horizon_cap) +
                            " (raise RATING_DP_CAP to override)");
    }
    StateDistribution dist = StateDistribution::initial(params);
    for (std::int64_t i = 0; i < horizon; ++i) dist = step_distribution(dist);
    return dist;
}

double exact_death_probability(const GameParams& params, std::int64_t horizon,
                               std::int64_t horizon_cap) {
    return evolve_distribution(params, horizon, horizon_cap).dead_mass();
}

double exact_expected_rating(const GameParams& params, std::int64_t horizon,
                             bool conditional_on_survival, std::int64_t horizon_cap) {
    return evolve_distribution(params, horizon, horizon_cap)
        .expected_rating(conditional_on_survival);
}

std::optional<double> limit_rating(double alpha, double rho) {
    if (!(rho > 0.5 && rho <= 1.0)) throw ParamError("rho must lie in (0.5, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParamError("alpha must lie in [0, 1]");
    if (alpha < 1.0 - rho) return std::nullopt;
    if (alpha > rho) return alpha;
    const double self_selected = alpha * rho / (alpha * rho + (1.0 - alpha) * (1.0 - rho));
    return std::min(self_selected, rho);
}

}  // namespace ratings
