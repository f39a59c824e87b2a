#include "ratings/model.hpp"

#include <string>

namespace ratings {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ParamError(message);
}

}  // namespace

void GameParams::validate() const {
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
    require(rho > 0.5 && rho <= 1.0, "rho must lie in (0.5, 1]");
    require(horizon >= 1, "horizon must be at least 1");
    require(reader_fraction >= 0.0 && reader_fraction <= 1.0,
            "reader-fraction must lie in [0, 1]");
    require(init_rating >= 0.0 && init_rating <= 1.0, "init-rating must lie in [0, 1]");
    require(init_weight >= 0.0, "init-weight must be nonnegative");
}

double rating_value(std::int64_t visits, std::int64_t likes, const GameParams& params) {
    if (params.init_weight == 0.0 && visits == 0) return params.init_rating;
    return (params.init_weight * params.init_rating + static_cast<double>(likes)) /
           (params.init_weight + static_cast<double>(visits));
}

double expected_utility(int a, int x, double alpha_est, double rho) {
    if (a == 0) return 0.0;
    // u(1,1) = 1, u(1,0) = -1, weighted by P(v=q) * P(x | v=q).
    const double p_x_given_like = x == 1 ? rho : 1.0 - rho;
    const double p_x_given_dislike = x == 1 ? 1.0 - rho : rho;
    return alpha_est * p_x_given_like - (1.0 - alpha_est) * p_x_given_dislike;
}

int optimal_action_bayes(int x, double alpha_est, double rho) {
    // Same tie tolerance as the closed-form rule: the utility gap at the
    // threshold is exactly alpha_est - (1-rho) (or alpha_est - rho), so the
    // two sides agree everywhere.
    return expected_utility(1, x, alpha_est, rho) > kThresholdEps ? 1 : 0;
}

ConsumerDraw sample_consumer(const GameParams& params, Stream& stream) {
    ConsumerDraw draw;
    draw.is_reader =
        params.reader_fraction < 1.0 ? stream.bernoulli(params.reader_fraction) : 1;
    draw.v = stream.bernoulli(params.alpha);
    draw.x = stream.bernoulli(params.rho * draw.v + (1.0 - params.rho) * (1 - draw.v));
    return draw;
}

SimSummary run_game(const GameParams& params, Stream& stream, bool keep_trace) {
    params.validate();

    RatingState state;
    double rate = rating(state, params);
    const bool all_readers = params.reader_fraction >= 1.0;

    SimSummary summary;
    if (keep_trace) summary.trace.reserve(static_cast<std::size_t>(params.horizon));

    for (std::int64_t i = 1; i <= params.horizon; ++i) {
        const ConsumerDraw draw = sample_consumer(params, stream);

        int attended = 0;
        if (draw.is_reader) {
            if (!is_dead(rate, params.rho)) attended = decide_reader(draw.x, rate, params.rho);
        } else {
            attended = decide_nonreader(draw.x);
        }

        if (attended) {
            state = update_rating(state, draw.v);
            rate = rating(state, params);
            ++summary.attendance;
        }

        const bool dead_now = is_dead(rate, params.rho);
        if (dead_now && !summary.death_index) summary.death_index = i;

        if (keep_trace) {
            summary.trace.push_back({i, draw.is_reader, draw.x, attended,
                                     attended ? draw.v : -1, state.visits, state.likes, rate});
        }

        // With readers only, death is absorbing: no one attends again and the
        // rating is frozen, so the remaining consumers cannot change the
        // summary. Skipping them is an optimization, not a semantic change.
        if (dead_now && all_readers && !keep_trace) break;
    }

    summary.final_rating = rate;
    summary.dead = is_dead(rate, params.rho);
    return summary;
}

}  // namespace ratings
