#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "ratings/monte_carlo.hpp"
#include "ratings/oracle.hpp"

using namespace ratings;

namespace {

GameParams make_params(double alpha, double rho, std::int64_t horizon = 1000,
                       double reader_fraction = 1.0) {
    GameParams p;
    p.alpha = alpha;
    p.rho = rho;
    p.horizon = horizon;
    p.reader_fraction = reader_fraction;
    return p;
}

}  // namespace

TEST_CASE("axis generation") {
    CHECK(AxisSpec{0.0, 1.0, 0.01}.count() == 101);
    CHECK(AxisSpec{0.500001, 1.0, 0.01}.count() == 50);
    CHECK(AxisSpec{1.0, 1.0, 1.0}.count() == 1);
    CHECK(AxisSpec{0.2, 0.4, 0.1}.count() == 3);
    CHECK_THROWS_AS(AxisSpec{0.4, 0.2, 0.1}.count(), ParamError);
    CHECK_THROWS_AS((AxisSpec{0.0, 1.0, 0.0}.count()), ParamError);

    const auto rho = AxisSpec{0.500001, 1.0, 0.01}.values();
    CHECK(rho.front() == doctest::Approx(0.500001).epsilon(1e-12));
    CHECK(rho.back() == doctest::Approx(0.990001).epsilon(1e-12));
}

TEST_CASE("default grid matches the reference experiment shape") {
    const GridSpec spec;
    CHECK(spec.alpha.count() == 101);
    CHECK(spec.rho.count() == 50);
    CHECK(spec.trials == 1000);
    CHECK(spec.horizon == 1000);
    CHECK(spec.alpha.count() * spec.rho.count() == 5050);
}

TEST_CASE("estimate_metric: perfect quality never dies") {
    const Estimate est =
        estimate_metric(make_params(1.0, 0.8, 200), 500, Metric::death_probability, SeedSpec{1});
    CHECK(est.value == 0.0);
    CHECK(est.std_err == 0.0);
    CHECK(est.survivors == 500);
}

TEST_CASE("estimate_metric: identical seeds give identical estimates") {
    const GameParams p = make_params(0.55, 0.75, 100, 0.8);
    const Estimate a = estimate_metric(p, 2000, Metric::mean_bias, SeedSpec{9}, {4, 2});
    const Estimate b = estimate_metric(p, 2000, Metric::mean_bias, SeedSpec{9}, {4, 2});
    CHECK(a.value == b.value);
    CHECK(a.std_err == b.std_err);
}

TEST_CASE("estimate_metric agrees with the exact oracle") {
    const GameParams p = make_params(0.6, 0.8, 30);
    const double exact = exact_death_probability(p, 30);
    const Estimate est = estimate_metric(p, 100000, Metric::death_probability, SeedSpec{3});
    CHECK(std::abs(est.value - exact) <= 3.0 * est.std_err);
}

TEST_CASE("estimate_metric: empty survival condition raises") {
    CHECK_THROWS_AS(estimate_metric(make_params(0.0, 0.8, 200), 50,
                                    Metric::survival_conditional_rating, SeedSpec{4}),
                    EmptyConditionError);
}

TEST_CASE("sweep: single cell with perfect quality") {
    GridSpec spec;
    spec.alpha = {1.0, 1.0, 1.0};
    spec.rho = {0.8, 0.8, 1.0};
    spec.trials = 200;
    spec.horizon = 100;
    const GridResult grid = sweep(spec, SeedSpec{5});
    REQUIRE(grid.values.size() == 1);
    REQUIRE(grid.values[0].size() == 1);
    CHECK(grid.values[0][0] == 0.0);
    CHECK(grid.errors.empty());
}

TEST_CASE("sweep: worker count does not change the matrix") {
    GridSpec spec;
    spec.alpha = {0.2, 0.8, 0.3};
    spec.rho = {0.55, 0.95, 0.2};
    spec.trials = 100;
    spec.horizon = 80;
    const GridResult serial = sweep(spec, SeedSpec{6}, 1);
    const GridResult parallel = sweep(spec, SeedSpec{6}, 4);
    REQUIRE(serial.values.size() == parallel.values.size());
    for (std::size_t i = 0; i < serial.values.size(); ++i) {
        for (std::size_t j = 0; j < serial.values[i].size(); ++j) {
            REQUIRE(serial.values[i][j] == parallel.values[i][j]);
            REQUIRE(serial.std_errs[i][j] == parallel.std_errs[i][j]);
        }
    }
}

TEST_CASE("sweep: estimates stay in range with bounded standard errors") {
    GridSpec spec;
    spec.alpha = {0.1, 0.9, 0.2};
    spec.rho = {0.6, 0.9, 0.15};
    spec.trials = 150;
    spec.horizon = 60;
    const GridResult grid = sweep(spec, SeedSpec{7});
    const double bound = 0.5 / std::sqrt(static_cast<double>(spec.trials));
    for (const auto& row : grid.values) {
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    for (const auto& row : grid.std_errs) {
        for (double se : row) CHECK(se <= bound + 1e-12);
    }
}

TEST_CASE("sweep: degenerate cells are flagged, not fatal") {
    GridSpec spec;
    spec.alpha = {0.0, 1.0, 1.0};  // alpha 0 leaves no survivors at this horizon
    spec.rho = {0.8, 0.8, 1.0};
    spec.trials = 60;
    spec.horizon = 300;
    spec.metric = Metric::survival_conditional_rating;
    const GridResult grid = sweep(spec, SeedSpec{8});
    REQUIRE(grid.errors.size() == 1);
    CHECK(grid.errors[0].alpha_index == 0);
    CHECK(std::isnan(grid.values[0][0]));
    CHECK_FALSE(std::isnan(grid.values[1][0]));
}

TEST_CASE("near-useless signals: death transition spans alpha above one half") {
    // With rho barely above 0.5 the attendee pool is nearly unfiltered, so
    // the likes process is close to a Bernoulli(alpha) walk. Quality below
    // one half dies almost surely; quality above one half still dies with
    // the walk's dip probability, which the exact DP pins down.
    const double rho = 0.500001;
    const Estimate low = estimate_metric(make_params(0.2, rho, 400), 300,
                                         Metric::death_probability, SeedSpec{10}, {0});
    CHECK(low.value >= 0.99);

    const Estimate mid = estimate_metric(make_params(0.7, rho, 400), 400,
                                         Metric::death_probability, SeedSpec{10}, {1});
    const double exact = exact_death_probability(make_params(0.7, rho, 400), 400);
    CHECK(std::abs(mid.value - exact) <= 3.0 * std::sqrt(exact * (1.0 - exact) / 400.0));
    // Far from zero: the transition at this rho is gradual in alpha.
    CHECK(mid.value > 0.3);
}

TEST_CASE("perfect signals: any positive quality survives") {
    for (double alpha : {0.1, 0.5}) {
        const Estimate est = estimate_metric(make_params(alpha, 1.0, 300), 200,
                                             Metric::death_probability, SeedSpec{11});
        CHECK(est.value == 0.0);
    }
}

TEST_CASE("death probability is nonincreasing in alpha along a rho row") {
    GridSpec spec;
    spec.alpha = {0.0, 1.0, 0.1};
    spec.rho = {0.8, 0.8, 1.0};
    spec.trials = 300;
    spec.horizon = 300;
    const GridResult grid = sweep(spec, SeedSpec{12});
    for (std::size_t i = 0; i + 1 < grid.values.size(); ++i) {
        const double slack = 3.0 * std::sqrt(grid.std_errs[i][0] * grid.std_errs[i][0] +
                                             grid.std_errs[i + 1][0] * grid.std_errs[i + 1][0]);
        CHECK(grid.values[i + 1][0] <= grid.values[i][0] + slack);
    }
}

TEST_CASE("death estimate is stable between horizon 1000 and 2000") {
    const Estimate h1000 = estimate_metric(make_params(0.6, 0.8, 1000), 500,
                                           Metric::death_probability, SeedSpec{13}, {0});
    const Estimate h2000 = estimate_metric(make_params(0.6, 0.8, 2000), 500,
                                           Metric::death_probability, SeedSpec{13}, {1});
    const double slack =
        3.0 * std::sqrt(h1000.std_err * h1000.std_err + h2000.std_err * h2000.std_err);
    CHECK(std::abs(h1000.value - h2000.value) <= slack);
}

TEST_CASE("half readers do not worsen the bias in the low-rho regime") {
    for (const auto& cell : {std::pair{0.4, 0.65}, std::pair{0.3, 0.55}}) {
        GameParams all_readers = make_params(cell.first, cell.second, 300, 1.0);
        GameParams half_readers = make_params(cell.first, cell.second, 300, 0.5);
        const Estimate bias_all =
            estimate_metric(all_readers, 400, Metric::mean_bias, SeedSpec{14}, {0});
        const Estimate bias_half =
            estimate_metric(half_readers, 400, Metric::mean_bias, SeedSpec{14}, {1});
        const double slack = 3.0 * std::sqrt(bias_all.std_err * bias_all.std_err +
                                             bias_half.std_err * bias_half.std_err);
        CHECK(std::abs(bias_half.value) <= std::abs(bias_all.value) + slack);
    }
}

TEST_CASE("trajectory checkpoints and survivor means") {
    const std::int64_t checkpoints[] = {10, 100, 1000};
    const TrajectoryResult high = trajectory(make_params(0.9, 0.8, 1000), 200, checkpoints,
                                             SeedSpec{15}, true);
    REQUIRE(high.per_trial.size() == 200);
    CHECK(std::abs(high.mean_rating[2] - 0.9) < 0.03);

    const TrajectoryResult mid =
        trajectory(make_params(0.6, 0.8, 1000), 200, checkpoints, SeedSpec{16});
    CHECK(mid.per_trial.empty());
    CHECK(std::abs(mid.survivor_mean_rating[2] - 0.8) < 0.03);

    const TrajectoryResult low =
        trajectory(make_params(0.4, 0.8, 1000), 200, checkpoints, SeedSpec{17});
    CHECK(std::abs(low.survivor_mean_rating[2] - 8.0 / 11.0) < 0.03);
}

TEST_CASE("trajectory validates its checkpoints") {
    const GameParams p = make_params(0.6, 0.8, 100);
    const std::int64_t beyond[] = {10, 200};
    CHECK_THROWS_AS(trajectory(p, 10, beyond, SeedSpec{1}), ParamError);
    const std::int64_t unsorted[] = {50, 10};
    CHECK_THROWS_AS(trajectory(p, 10, unsorted, SeedSpec{1}), ParamError);
    CHECK_THROWS_AS(trajectory(p, 10, {}, SeedSpec{1}), ParamError);
}
