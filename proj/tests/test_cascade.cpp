#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "ratings/cascade.hpp"
#include "ratings/errors.hpp"

using namespace ratings;

TEST_CASE("two matching positive signals start a correct cascade at consumer 3") {
    const CascadeSummary s = cascade_from_signals({1, 1, 0, 0, 1, 0}, 1);
    REQUIRE(s.onset_index.has_value());
    CHECK(*s.onset_index == 3);
    CHECK(s.kind == CascadeKind::correct);
    for (std::size_t i = 2; i < s.actions.size(); ++i) CHECK(s.actions[i] == 1);
}

TEST_CASE("two matching negative signals start an incorrect cascade at consumer 3") {
    const CascadeSummary s = cascade_from_signals({0, 0, 1, 1, 1, 1}, 1);
    REQUIRE(s.onset_index.has_value());
    CHECK(*s.onset_index == 3);
    CHECK(s.kind == CascadeKind::incorrect);
    for (std::size_t i = 2; i < s.actions.size(); ++i) CHECK(s.actions[i] == 0);
}

TEST_CASE("disagreeing first signals leave consumer 3 on their own signal") {
    const CascadeSummary up = cascade_from_signals({1, 0, 1}, 1);
    CHECK((!up.onset_index || *up.onset_index > 3));
    CHECK(up.actions[2] == 1);
    const CascadeSummary down = cascade_from_signals({1, 0, 0}, 1);
    CHECK(down.actions[2] == 0);
}

TEST_CASE("closed-form onset probabilities") {
    const auto p08 = cascade_onset_probabilities(0.8);
    CHECK(p08.first == doctest::Approx(0.64).epsilon(1e-15));
    CHECK(p08.second == doctest::Approx(0.04).epsilon(1e-15));
    const auto p1 = cascade_onset_probabilities(1.0);
    CHECK(p1.first == 1.0);
    CHECK(p1.second == 0.0);
    CHECK_THROWS_AS(cascade_onset_probabilities(0.5), ParamError);
}

TEST_CASE("empirical onset frequencies match the closed form") {
    CascadeParams params;
    params.rho = 0.8;
    params.v_true = 1;
    params.horizon = 12;
    std::int64_t correct = 0, incorrect = 0, none_by3 = 0;
    const std::int64_t runs = 100000;
    for (std::int64_t t = 0; t < runs; ++t) {
        Stream stream = derive_stream(SeedSpec{21}, {static_cast<std::uint64_t>(t)});
        const CascadeSummary s = run_cascade(params, stream);
        if (s.onset_index && *s.onset_index == 3) {
            if (s.kind == CascadeKind::correct) ++correct;
            if (s.kind == CascadeKind::incorrect) ++incorrect;
        } else {
            ++none_by3;
        }
    }
    const double f_correct = static_cast<double>(correct) / static_cast<double>(runs);
    const double f_incorrect = static_cast<double>(incorrect) / static_cast<double>(runs);
    const double f_none = static_cast<double>(none_by3) / static_cast<double>(runs);
    CHECK(std::abs(f_correct - 0.64) < 0.01);
    CHECK(std::abs(f_incorrect - 0.04) < 0.01);
    // Remaining mass is the no-onset-by-3 case, 2*rho*(1-rho).
    const double expect_none = 2.0 * 0.8 * 0.2;
    const double sigma = std::sqrt(expect_none * (1.0 - expect_none) / static_cast<double>(runs));
    CHECK(std::abs(f_none - expect_none) <= 3.0 * sigma);
    CHECK(correct + incorrect + none_by3 == runs);
}

TEST_CASE("post-onset signal flips never change any action") {
    CascadeParams params;
    params.rho = 0.75;
    params.v_true = 1;
    params.horizon = 15;
    for (std::uint64_t t = 0; t < 300; ++t) {
        Stream stream = derive_stream(SeedSpec{22}, {t});
        const CascadeSummary base = run_cascade(params, stream);
        if (!base.onset_index) continue;
        for (std::size_t j = static_cast<std::size_t>(*base.onset_index - 1);
             j < base.signals.size(); ++j) {
            std::vector<int> flipped = base.signals;
            flipped[j] = 1 - flipped[j];
            const CascadeSummary replay = cascade_from_signals(flipped, params.v_true);
            REQUIRE(replay.actions == base.actions);
        }
    }
}

TEST_CASE("actions are constant from the onset on") {
    CascadeParams params;
    params.rho = 0.7;
    params.v_true = 0;
    params.horizon = 20;
    for (std::uint64_t t = 0; t < 200; ++t) {
        Stream stream = derive_stream(SeedSpec{23}, {t});
        const CascadeSummary s = run_cascade(params, stream);
        if (!s.onset_index) continue;
        const int fixed = s.actions[static_cast<std::size_t>(*s.onset_index - 1)];
        for (std::size_t i = static_cast<std::size_t>(*s.onset_index - 1); i < s.actions.size();
             ++i) {
            REQUIRE(s.actions[i] == fixed);
        }
        CHECK((s.kind == CascadeKind::correct) == (fixed == params.v_true));
    }
}

TEST_CASE("cascade parameter validation") {
    CascadeParams params;
    params.rho = 0.5;
    CHECK_THROWS_AS(params.validate(), ParamError);
    params.rho = 0.8;
    params.v_true = 2;
    CHECK_THROWS_AS(params.validate(), ParamError);
    params.v_true = 1;
    params.horizon = 0;
    CHECK_THROWS_AS(params.validate(), ParamError);
}
