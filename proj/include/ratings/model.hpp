#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ratings/errors.hpp"
#include "ratings/rng.hpp"

namespace ratings {

// Tolerance for comparing a rating against the decision thresholds rho and
// 1-rho. Ratings are small rationals (likes/visits) and the thresholds are
// decimals; without a tolerance, 0.2 vs 1-0.8 would compare unequal in
// binary floating point and the tie-break rule (ties do not attend) would
// silently flip. Every threshold comparison in the simulator and in the
// exact DP goes through exceeds_threshold() so the two always agree.
inline constexpr double kThresholdEps = 1e-12;

inline bool exceeds_threshold(double value, double threshold) {
    return value > threshold + kThresholdEps;
}

// All knobs of one game instance.
struct GameParams {
    double alpha = 0.5;             // true quality: fraction of the population that likes the business
    double rho = 0.8;               // private-signal accuracy, common knowledge
    std::int64_t horizon = 1000;    // number of consumers
    double reader_fraction = 1.0;   // share of consumers who consult the rating
    double init_rating = 0.5;       // placeholder rating before the first review
    double init_weight = 0.0;       // pseudo-count weight of the initialization

    // Throws ParamError on violation. rho == 0.5 is rejected: the initial
    // rating 0.5 would not be strictly above 1-rho and the game would die
    // degenerately at consumer 1.
    void validate() const;
};

// Integer review tallies; the rating is derived, never stored.
struct RatingState {
    std::int64_t visits = 0;
    std::int64_t likes = 0;
};

double rating_value(std::int64_t visits, std::int64_t likes, const GameParams& params);

inline double rating(const RatingState& state, const GameParams& params) {
    return rating_value(state.visits, state.likes, params);
}

inline RatingState update_rating(RatingState state, int v) {
    return RatingState{state.visits + 1, state.likes + v};
}

// Where a rating sits relative to the decision thresholds.
//   dead:        rating <= 1-rho; no reader attends regardless of signal
//   selective:   1-rho < rating <= rho; readers attend iff their signal is positive
//   mass_appeal: rating > rho; readers attend regardless of signal
enum class RatingRegime { dead, selective, mass_appeal };

inline RatingRegime classify_rating(double rating, double rho) {
    if (!exceeds_threshold(rating, 1.0 - rho)) return RatingRegime::dead;
    if (!exceeds_threshold(rating, rho)) return RatingRegime::selective;
    return RatingRegime::mass_appeal;
}

// Closed-form optimal action for a reader. Ties (rating exactly at a
// threshold) resolve to not attending.
inline int decide_reader(int x, double rating, double rho) {
    return x == 1 ? (exceeds_threshold(rating, 1.0 - rho) ? 1 : 0)
                  : (exceeds_threshold(rating, rho) ? 1 : 0);
}

// Non-readers follow their private signal only.
inline int decide_nonreader(int x) { return x; }

inline bool is_dead(double rating, double rho) {
    return classify_rating(rating, rho) == RatingRegime::dead;
}

// Unnormalized posterior expected payoff of action a given signal x, when
// the consumer estimates the quality as alpha_est. Sufficient for the
// argmax; a=0 always scores 0.
double expected_utility(int a, int x, double alpha_est, double rho);

// argmax over actions of expected_utility, ties to 0. Must equal
// decide_reader(x, alpha_est, rho) everywhere; the unit and acceptance
// suites check that on a full grid.
int optimal_action_bayes(int x, double alpha_est, double rho);

struct ConsumerDraw {
    int is_reader;
    int v;  // type: would this consumer like the business
    int x;  // private signal, accurate with probability rho
};

// Fixed draw order per consumer: is_reader (only when reader_fraction < 1),
// then v, then x. Exactly 2 draws when reader_fraction == 1, else exactly 3,
// regardless of whether the consumer ends up attending, so the stream
// position is a pure function of the consumer index.
ConsumerDraw sample_consumer(const GameParams& params, Stream& stream);

struct ConsumerRecord {
    std::int64_t index;   // 1-based
    int is_reader;
    int x;
    int attended;
    int v;                // -1 when not attended: the consumer never learns it
    std::int64_t visits;  // tallies after this consumer's move
    std::int64_t likes;
    double rating_after;
};

struct SimSummary {
    double final_rating = 0.0;
    bool dead = false;
    std::optional<std::int64_t> death_index;  // first index after whose move the rating was dead
    std::int64_t attendance = 0;
    std::vector<ConsumerRecord> trace;        // empty unless keep_trace
};

// Simulate consumers 1..horizon in order. With reader_fraction == 1 death is
// absorbing and the loop may stop early when no trace is kept; the summary
// is identical to running to the horizon.
SimSummary run_game(const GameParams& params, Stream& stream, bool keep_trace = false);

}  // namespace ratings
