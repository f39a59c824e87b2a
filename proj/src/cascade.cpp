#include "ratings/cascade.hpp"

#include "ratings/errors.hpp"

namespace ratings {

void CascadeParams::validate() const {
    if (!(rho > 0.5 && rho <= 1.0)) throw ParamError("rho must lie in (0.5, 1]");
    if (v_true != 0 && v_true != 1) throw ParamError("v-true must be 0 or 1");
    if (horizon < 1) throw ParamError("horizon must be at least 1");
}

namespace {

// Action given the decoded net signal count d and own signal x. The prior
// over v is uniform and signals have symmetric accuracy, so only the sign of
// d + (own contribution) matters; ties follow the own signal.
int cascade_action(std::int64_t d, int x) {
    const std::int64_t net = d + (x == 1 ? 1 : -1);
    if (net > 0) return 1;
    if (net < 0) return 0;
    return x;
}

}  // namespace

CascadeSummary cascade_from_signals(const std::vector<int>& signals, int v_true) {
    CascadeSummary summary;
    summary.signals = signals;
    summary.actions.reserve(signals.size());

    std::int64_t d = 0;
    for (std::size_t i = 0; i < signals.size(); ++i) {
        // |d| >= 2 makes both hypothetical actions coincide: the consumer is
        // cascading, reveals nothing, and d is frozen from here on.
        if (!summary.onset_index && (d >= 2 || d <= -2)) {
            summary.onset_index = static_cast<std::int64_t>(i + 1);
            summary.kind = (d >= 2 ? 1 : 0) == v_true ? CascadeKind::correct
                                                      : CascadeKind::incorrect;
        }
        const int x = signals[i];
        const int action = cascade_action(d, x);
        summary.actions.push_back(action);
        if (!summary.onset_index) d += x == 1 ? 1 : -1;
    }
    return summary;
}

CascadeSummary run_cascade(const CascadeParams& params, Stream& stream) {
    params.validate();
    std::vector<int> signals;
    signals.reserve(static_cast<std::size_t>(params.horizon));
    const double p_positive =
        params.rho * params.v_true + (1.0 - params.rho) * (1 - params.v_true);
    for (std::int64_t i = 0; i < params.horizon; ++i) {
        signals.push_back(stream.bernoulli(p_positive));
    }
    return cascade_from_signals(signals, params.v_true);
}

std::pair<double, double> cascade_onset_probabilities(double rho) {
    if (!(rho > 0.5 && rho <= 1.0)) throw ParamError("rho must lie in (0.5, 1]");
    return {rho * rho, (1.0 - rho) * (1.0 - rho)};
}

}  // namespace ratings
