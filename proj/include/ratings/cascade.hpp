#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ratings/rng.hpp"

namespace ratings {

// Common-value variant: every consumer shares v = v_true, observes the
// *actions* of all predecessors instead of a rating, and still holds a
// private signal of accuracy rho.
struct CascadeParams {
    double rho = 0.8;
    int v_true = 1;
    std::int64_t horizon = 1000;

    void validate() const;
};

enum class CascadeKind { correct, incorrect, none };

struct CascadeSummary {
    std::optional<std::int64_t> onset_index;  // first consumer from whom on actions ignore signals
    CascadeKind kind = CascadeKind::none;
    std::vector<int> actions;
    std::vector<int> signals;
};

// Replay the Bayes-rational action sequence for a fixed signal sequence.
// Each consumer decodes the signals revealed by informative predecessors
// (those whose equilibrium action depended on their own signal), tallies the
// net count d, and attends iff d plus their own signal tips the posterior
// above one half. Indifferent consumers follow their own signal; under that
// convention an up- or down-cascade starts exactly when |d| reaches 2.
CascadeSummary cascade_from_signals(const std::vector<int>& signals, int v_true);

CascadeSummary run_cascade(const CascadeParams& params, Stream& stream);

// Closed-form probability that consumer 3 already sits in a correct /
// incorrect cascade, given v_true = 1: (rho^2, (1-rho)^2).
std::pair<double, double> cascade_onset_probabilities(double rho);

}  // namespace ratings
