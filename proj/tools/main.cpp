#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratings/cascade.hpp"
#include "ratings/io.hpp"
#include "ratings/model.hpp"
#include "ratings/monte_carlo.hpp"
#include "ratings/oracle.hpp"
#include "ratings/rng.hpp"

namespace {

using namespace ratings;

std::int64_t dp_horizon_cap() {
    const char* env = std::getenv("RATING_DP_CAP");
    if (env == nullptr || *env == '\0') return kDefaultDpHorizonCap;
    std::int64_t cap = 0;
    const char* end = env + std::string_view(env).size();
    const auto res = std::from_chars(env, end, cap);
    if (res.ec != std::errc() || res.ptr != end || cap < 1) {
        throw ParamError("RATING_DP_CAP must be a positive integer");
    }
    return cap;
}

AxisSpec axis_from_flag(const std::vector<double>& values, const char* flag) {
    if (values.size() == 1) return {values[0], values[0], 1.0};
    if (values.size() == 3) return {values[0], values[1], values[2]};
    throw ParamError(std::string(flag) + " takes one value or start stop step");
}

struct CommonFlags {
    double alpha = 0.5;
    double rho = 0.8;
    std::int64_t horizon = 1000;
    double reader_fraction = 1.0;
    double init_rating = 0.5;
    double init_weight = 0.0;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out = "-";

    GameParams params() const {
        GameParams p;
        p.alpha = alpha;
        p.rho = rho;
        p.horizon = horizon;
        p.reader_fraction = reader_fraction;
        p.init_rating = init_rating;
        p.init_weight = init_weight;
        return p;
    }
};

void add_game_flags(CLI::App* cmd, CommonFlags& f, bool require_point) {
    auto* alpha = cmd->add_option("--alpha", f.alpha, "true quality in [0, 1]");
    auto* rho = cmd->add_option("--rho", f.rho, "signal accuracy in (0.5, 1]");
    if (require_point) {
        alpha->required();
        rho->required();
    }
    cmd->add_option("--horizon", f.horizon, "number of consumers")->capture_default_str();
    cmd->add_option("--reader-fraction", f.reader_fraction,
                    "share of consumers who consult the rating")
        ->capture_default_str();
    cmd->add_option("--init-rating", f.init_rating, "placeholder rating before the first review")
        ->capture_default_str();
    cmd->add_option("--init-weight", f.init_weight, "pseudo-count weight of the initialization")
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
    cmd->add_option("--format", f.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", f.out, "output path, - for stdout")->capture_default_str();
}

void emit_json(const nlohmann::json& j, const std::string& path) {
    OutputFile out(path);
    out.stream() << j.dump(2) << '\n';
    out.finish();
}

// ---- run ------------------------------------------------------------------

void cmd_run(const CommonFlags& f) {
    const GameParams params = f.params();
    params.validate();
    Stream stream = derive_stream(SeedSpec{f.seed}, {});
    const SimSummary summary = run_game(params, stream, true);
    const nlohmann::json summary_json = summary_to_json(summary, f.seed);

    if (f.format == "json") {
        nlohmann::json j;
        j["summary"] = summary_json;
        nlohmann::json trace = nlohmann::json::array();
        for (const ConsumerRecord& r : summary.trace) {
            nlohmann::json rec;
            rec["i"] = r.index;
            rec["is_reader"] = r.is_reader;
            rec["x"] = r.x;
            rec["attended"] = r.attended;
            rec["v"] = r.attended ? nlohmann::json(r.v) : nlohmann::json(nullptr);
            rec["visits"] = r.visits;
            rec["likes"] = r.likes;
            rec["rating"] = r.rating_after;
            trace.push_back(std::move(rec));
        }
        j["trace"] = std::move(trace);
        emit_json(j, f.out);
        return;
    }

    OutputFile out(f.out);
    write_trace_csv(out.stream(), summary.trace);
    out.finish();
    if (f.out != "-") {
        emit_json(summary_json, f.out + ".summary.json");
    } else {
        std::cerr << summary_json.dump() << '\n';
    }
}

// ---- sweep ----------------------------------------------------------------

void cmd_sweep(const CommonFlags& f, const std::vector<double>& alpha_axis,
               const std::vector<double>& rho_axis, std::int64_t trials,
               const std::string& metric, int workers) {
    GridSpec spec;
    spec.alpha = axis_from_flag(alpha_axis, "--alpha");
    spec.rho = axis_from_flag(rho_axis, "--rho");
    spec.trials = trials;
    spec.horizon = f.horizon;
    spec.reader_fraction = f.reader_fraction;
    spec.init_rating = f.init_rating;
    spec.init_weight = f.init_weight;
    spec.metric = metric_from_string(metric);

    const GridResult grid = sweep(spec, SeedSpec{f.seed}, workers);

    if (f.format == "json") {
        emit_json(grid_to_json(grid), f.out);
        return;
    }
    OutputFile out(f.out);
    write_grid_csv(out.stream(), grid);
    out.finish();
    if (!grid.errors.empty()) {
        nlohmann::json errors = grid_to_json(grid)["errors"];
        if (f.out != "-") {
            emit_json(errors, f.out + ".errors.json");
        } else {
            std::cerr << errors.dump() << '\n';
        }
    }
}

// ---- trajectory -----------------------------------------------------------

void cmd_trajectory(const CommonFlags& f, std::int64_t trials,
                    std::vector<std::int64_t> checkpoints, bool per_trial) {
    const GameParams params = f.params();
    if (checkpoints.empty()) checkpoints.push_back(params.horizon);
    const TrajectoryResult result =
        trajectory(params, trials, checkpoints, SeedSpec{f.seed}, per_trial);
    if (f.format == "json") {
        emit_json(trajectory_to_json(result, f.seed), f.out);
        return;
    }
    OutputFile out(f.out);
    write_trajectory_csv(out.stream(), result);
    out.finish();
}

// ---- cascade ---------------------------------------------------------------

void cmd_cascade(const CommonFlags& f, int v_true, std::int64_t trials) {
    CascadeParams params;
    params.rho = f.rho;
    params.v_true = v_true;
    params.horizon = f.horizon;
    params.validate();
    if (trials < 1) throw ParamError("trials must be at least 1");

    CascadeExperiment experiment;
    experiment.params = params;
    experiment.seed = f.seed;
    experiment.runs = trials;
    const bool keep_runs = f.format == "csv";
    for (std::int64_t t = 0; t < trials; ++t) {
        Stream stream = derive_stream(SeedSpec{f.seed}, {static_cast<std::uint64_t>(t)});
        CascadeSummary s = run_cascade(params, stream);
        if (s.onset_index && *s.onset_index == 3) {
            if (s.kind == CascadeKind::correct) ++experiment.correct_by3;
            if (s.kind == CascadeKind::incorrect) ++experiment.incorrect_by3;
        }
        if (keep_runs) experiment.summaries.push_back(std::move(s));
    }

    if (f.format == "json") {
        emit_json(cascade_to_json(experiment), f.out);
        return;
    }
    OutputFile out(f.out);
    write_cascade_csv(out.stream(), experiment);
    out.finish();
}

// ---- oracle ----------------------------------------------------------------

void cmd_oracle(const CommonFlags& f) {
    const GameParams params = f.params();
    params.validate();
    const std::int64_t cap = dp_horizon_cap();
    const StateDistribution dist = evolve_distribution(params, f.horizon, cap);

    nlohmann::json j;
    j["params"] = {{"alpha", params.alpha},
                   {"rho", params.rho},
                   {"horizon", f.horizon},
                   {"reader_fraction", params.reader_fraction},
                   {"init_rating", params.init_rating},
                   {"init_weight", params.init_weight}};
    j["dp_cap"] = cap;
    j["exact_death_probability"] = dist.dead_mass();
    j["exact_expected_rating"]["unconditional"] = dist.expected_rating(false);
    try {
        j["exact_expected_rating"]["conditional_on_survival"] = dist.expected_rating(true);
    } catch (const EmptyConditionError& e) {
        j["exact_expected_rating"]["conditional_on_survival"] = nullptr;
        j["exact_expected_rating"]["conditional_error"] = e.what();
    }
    const auto limit = limit_rating(params.alpha, params.rho);
    j["limit_rating"] = limit ? nlohmann::json(*limit) : nlohmann::json(nullptr);
    j["limit_is_death"] = !limit.has_value();
    j["mass_checksum"] = std::abs(dist.total_mass() - 1.0);
    emit_json(j, f.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential rating-game simulator and exact analyzer"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "simulate one business and write its trace");
    add_game_flags(run_cmd, run_flags, true);
    add_output_flags(run_cmd, run_flags);
    run_cmd->callback([&]() { cmd_run(run_flags); });

    CommonFlags sweep_flags;
    std::vector<double> sweep_alpha = {0.0, 1.0, 0.01};
    std::vector<double> sweep_rho = {0.500001, 1.0, 0.01};
    std::int64_t sweep_trials = 1000;
    std::string sweep_metric = "death_probability";
    int sweep_workers = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "estimate a metric over an (alpha, rho) grid");
    sweep_cmd->add_option("--alpha", sweep_alpha, "alpha value or start stop step")
        ->expected(1, 3);
    sweep_cmd->add_option("--rho", sweep_rho, "rho value or start stop step")->expected(1, 3);
    sweep_cmd->add_option("--trials", sweep_trials, "trials per cell")->capture_default_str();
    sweep_cmd->add_option("--horizon", sweep_flags.horizon, "number of consumers")
        ->capture_default_str();
    sweep_cmd
        ->add_option("--reader-fraction", sweep_flags.reader_fraction,
                     "share of consumers who consult the rating")
        ->capture_default_str();
    sweep_cmd->add_option("--init-rating", sweep_flags.init_rating, "initial placeholder rating")
        ->capture_default_str();
    sweep_cmd->add_option("--init-weight", sweep_flags.init_weight, "initialization pseudo-count")
        ->capture_default_str();
    sweep_cmd
        ->add_option("--metric", sweep_metric,
                     "death_probability | mean_final_rating | mean_bias | "
                     "survival_conditional_rating")
        ->check(CLI::IsMember({"death_probability", "mean_final_rating", "mean_bias",
                               "survival_conditional_rating"}))
        ->capture_default_str();
    sweep_cmd->add_option("--workers", sweep_workers, "worker threads, 0 = all cores")
        ->capture_default_str();
    add_output_flags(sweep_cmd, sweep_flags);
    sweep_cmd->callback([&]() {
        cmd_sweep(sweep_flags, sweep_alpha, sweep_rho, sweep_trials, sweep_metric, sweep_workers);
    });

    CommonFlags traj_flags;
    std::int64_t traj_trials = 1000;
    std::vector<std::int64_t> traj_checkpoints;
    bool traj_per_trial = false;
    auto* traj_cmd =
        app.add_subcommand("trajectory", "rating at checkpoints, per trial and averaged");
    add_game_flags(traj_cmd, traj_flags, true);
    traj_cmd->add_option("--trials", traj_trials, "number of trials")->capture_default_str();
    traj_cmd->add_option("--checkpoints", traj_checkpoints,
                         "consumer indices to report (default: horizon)")
        ->delimiter(',');
    traj_cmd->add_flag("--per-trial", traj_per_trial, "include per-trial ratings (json only)");
    add_output_flags(traj_cmd, traj_flags);
    traj_cmd->callback(
        [&]() { cmd_trajectory(traj_flags, traj_trials, traj_checkpoints, traj_per_trial); });

    CommonFlags casc_flags;
    int casc_v_true = 1;
    std::int64_t casc_trials = 1000;
    auto* casc_cmd =
        app.add_subcommand("cascade", "observed-actions cascade model for comparison");
    casc_cmd->add_option("--rho", casc_flags.rho, "signal accuracy in (0.5, 1]")->required();
    casc_cmd->add_option("--v-true", casc_v_true, "realized common value")->capture_default_str();
    casc_cmd->add_option("--horizon", casc_flags.horizon, "number of consumers")
        ->capture_default_str();
    casc_cmd->add_option("--trials", casc_trials, "number of runs")->capture_default_str();
    add_output_flags(casc_cmd, casc_flags);
    casc_cmd->callback([&]() { cmd_cascade(casc_flags, casc_v_true, casc_trials); });

    CommonFlags oracle_flags;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "exact DP death probability, expected rating and limit");
    add_game_flags(oracle_cmd, oracle_flags, true);
    oracle_cmd->add_option("--out", oracle_flags.out, "output path, - for stdout")
        ->capture_default_str();
    oracle_cmd->callback([&]() { cmd_oracle(oracle_flags); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
