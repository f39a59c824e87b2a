#include "ratings/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "ratings/errors.hpp"

namespace ratings {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ParamError("not a number: '" + text + "'");
    }
    return value;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::int64_t parse_int(const std::string& text) {
    std::int64_t value = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ParamError("not an integer: '" + text + "'");
    }
    return value;
}

nlohmann::json double_or_null(double value) {
    // nlohmann serializes NaN as null already; make the intent explicit.
    if (std::isnan(value)) return nullptr;
    return value;
}

double json_double(const nlohmann::json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

const char* kind_name(CascadeKind kind) {
    switch (kind) {
        case CascadeKind::correct: return "correct";
        case CascadeKind::incorrect: return "incorrect";
        case CascadeKind::none: return "none";
    }
    return "none";
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<ConsumerRecord>& trace) {
    out << "i,is_reader,x,attended,v,visits,likes,rating\n";
    for (const ConsumerRecord& r : trace) {
        out << r.index << ',' << r.is_reader << ',' << r.x << ',' << r.attended << ',';
        if (r.attended) out << r.v;
        out << ',' << r.visits << ',' << r.likes << ',' << format_double(r.rating_after) << '\n';
    }
}

std::vector<ConsumerRecord> parse_trace_csv(std::istream& in) {
    std::vector<ConsumerRecord> trace;
    std::string line;
    if (!std::getline(in, line) || line != "i,is_reader,x,attended,v,visits,likes,rating") {
        throw ParamError("trace CSV header mismatch");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw ParamError("trace CSV row must have 8 fields");
        ConsumerRecord r;
        r.index = parse_int(f[0]);
        r.is_reader = static_cast<int>(parse_int(f[1]));
        r.x = static_cast<int>(parse_int(f[2]));
        r.attended = static_cast<int>(parse_int(f[3]));
        r.v = f[4].empty() ? -1 : static_cast<int>(parse_int(f[4]));
        r.visits = parse_int(f[5]);
        r.likes = parse_int(f[6]);
        r.rating_after = parse_double(f[7]);
        trace.push_back(r);
    }
    return trace;
}

nlohmann::json summary_to_json(const SimSummary& summary, std::uint64_t seed) {
    nlohmann::json j;
    j["final_rating"] = summary.final_rating;
    j["dead"] = summary.dead;
    j["death_index"] =
        summary.death_index ? nlohmann::json(*summary.death_index) : nlohmann::json(nullptr);
    j["attendance"] = summary.attendance;
    j["seed"] = seed;
    return j;
}

void write_grid_csv(std::ostream& out, const GridResult& grid) {
    out << "alpha,rho,value,stderr\n";
    for (std::size_t i = 0; i < grid.alpha_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.rho_values.size(); ++j) {
            out << format_double(grid.alpha_values[i]) << ',' << format_double(grid.rho_values[j])
                << ',' << format_double(grid.values[i][j]) << ','
                << format_double(grid.std_errs[i][j]) << '\n';
        }
    }
}

namespace {

nlohmann::json matrix_to_json(const std::vector<std::vector<double>>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : m) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row) r.push_back(double_or_null(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<std::vector<double>> matrix_from_json(const nlohmann::json& j) {
    std::vector<std::vector<double>> m;
    for (const auto& row : j) {
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& v : row) r.push_back(json_double(v));
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

nlohmann::json grid_to_json(const GridResult& grid) {
    nlohmann::json spec;
    spec["alpha_start"] = grid.spec.alpha.start;
    spec["alpha_stop"] = grid.spec.alpha.stop;
    spec["alpha_step"] = grid.spec.alpha.step;
    spec["rho_start"] = grid.spec.rho.start;
    spec["rho_stop"] = grid.spec.rho.stop;
    spec["rho_step"] = grid.spec.rho.step;
    spec["trials"] = grid.spec.trials;
    spec["horizon"] = grid.spec.horizon;
    spec["reader_fraction"] = grid.spec.reader_fraction;
    spec["init_rating"] = grid.spec.init_rating;
    spec["init_weight"] = grid.spec.init_weight;
    spec["metric"] = to_string(grid.spec.metric);

    nlohmann::json errors = nlohmann::json::array();
    for (const CellError& e : grid.errors) {
        errors.push_back({{"alpha_index", e.alpha_index},
                          {"rho_index", e.rho_index},
                          {"message", e.message}});
    }

    nlohmann::json j;
    j["spec"] = std::move(spec);
    j["seed"] = grid.master_seed;
    j["matrix"] = matrix_to_json(grid.values);
    j["stderr"] = matrix_to_json(grid.std_errs);
    j["errors"] = std::move(errors);
    return j;
}

GridResult grid_from_json(const nlohmann::json& j) {
    GridResult grid;
    const auto& spec = j.at("spec");
    grid.spec.alpha = {spec.at("alpha_start").get<double>(), spec.at("alpha_stop").get<double>(),
                       spec.at("alpha_step").get<double>()};
    grid.spec.rho = {spec.at("rho_start").get<double>(), spec.at("rho_stop").get<double>(),
                     spec.at("rho_step").get<double>()};
    grid.spec.trials = spec.at("trials").get<std::int64_t>();
    grid.spec.horizon = spec.at("horizon").get<std::int64_t>();
    grid.spec.reader_fraction = spec.at("reader_fraction").get<double>();
    grid.spec.init_rating = spec.at("init_rating").get<double>();
    grid.spec.init_weight = spec.at("init_weight").get<double>();
    grid.spec.metric = metric_from_string(spec.at("metric").get<std::string>());
    grid.master_seed = j.at("seed").get<std::uint64_t>();
    grid.alpha_values = grid.spec.alpha.values();
    grid.rho_values = grid.spec.rho.values();
    grid.values = matrix_from_json(j.at("matrix"));
    grid.std_errs = matrix_from_json(j.at("stderr"));
    for (const auto& e : j.at("errors")) {
        grid.errors.push_back({e.at("alpha_index").get<std::size_t>(),
                               e.at("rho_index").get<std::size_t>(),
                               e.at("message").get<std::string>()});
    }
    return grid;
}

namespace {

bool matrix_equal(const std::vector<std::vector<double>>& a,
                  const std::vector<std::vector<double>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            const bool same = a[i][j] == b[i][j] || (std::isnan(a[i][j]) && std::isnan(b[i][j]));
            if (!same) return false;
        }
    }
    return true;
}

}  // namespace

bool grid_equal(const GridResult& a, const GridResult& b) {
    if (a.master_seed != b.master_seed) return false;
    if (a.spec.alpha.start != b.spec.alpha.start || a.spec.alpha.stop != b.spec.alpha.stop ||
        a.spec.alpha.step != b.spec.alpha.step || a.spec.rho.start != b.spec.rho.start ||
        a.spec.rho.stop != b.spec.rho.stop || a.spec.rho.step != b.spec.rho.step) {
        return false;
    }
    if (a.spec.trials != b.spec.trials || a.spec.horizon != b.spec.horizon ||
        a.spec.reader_fraction != b.spec.reader_fraction ||
        a.spec.init_rating != b.spec.init_rating || a.spec.init_weight != b.spec.init_weight ||
        a.spec.metric != b.spec.metric) {
        return false;
    }
    if (a.errors.size() != b.errors.size()) return false;
    for (std::size_t i = 0; i < a.errors.size(); ++i) {
        if (a.errors[i].alpha_index != b.errors[i].alpha_index ||
            a.errors[i].rho_index != b.errors[i].rho_index ||
            a.errors[i].message != b.errors[i].message) {
            return false;
        }
    }
    return matrix_equal(a.values, b.values) && matrix_equal(a.std_errs, b.std_errs);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryResult& result) {
    out << "checkpoint,mean_rating,survivor_mean_rating,survivors,trials\n";
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
        out << result.checkpoints[c] << ',' << format_double(result.mean_rating[c]) << ','
            << format_double(result.survivor_mean_rating[c]) << ',' << result.survivors << ','
            << result.trials << '\n';
    }
}

nlohmann::json trajectory_to_json(const TrajectoryResult& result, std::uint64_t seed) {
    nlohmann::json j;
    j["checkpoints"] = result.checkpoints;
    j["trials"] = result.trials;
    j["survivors"] = result.survivors;
    j["seed"] = seed;
    nlohmann::json means = nlohmann::json::array();
    nlohmann::json survivor_means = nlohmann::json::array();
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
        means.push_back(double_or_null(result.mean_rating[c]));
        survivor_means.push_back(double_or_null(result.survivor_mean_rating[c]));
    }
    j["mean_rating"] = std::move(means);
    j["survivor_mean_rating"] = std::move(survivor_means);
    if (!result.per_trial.empty()) j["per_trial"] = matrix_to_json(result.per_trial);
    return j;
}

void write_cascade_csv(std::ostream& out, const CascadeExperiment& experiment) {
    out << "trial,onset_index,kind\n";
    for (std::size_t t = 0; t < experiment.summaries.size(); ++t) {
        const CascadeSummary& s = experiment.summaries[t];
        out << t << ',';
        if (s.onset_index) out << *s.onset_index;
        out << ',' << kind_name(s.kind) << '\n';
    }
}

nlohmann::json cascade_to_json(const CascadeExperiment& experiment) {
    const auto closed_form = cascade_onset_probabilities(experiment.params.rho);
    const double runs = static_cast<double>(experiment.runs);
    nlohmann::json j;
    j["rho"] = experiment.params.rho;
    j["v_true"] = experiment.params.v_true;
    j["horizon"] = experiment.params.horizon;
    j["runs"] = experiment.runs;
    j["seed"] = experiment.seed;
    j["onset_by_3"] = {
        {"correct", static_cast<double>(experiment.correct_by3) / runs},
        {"incorrect", static_cast<double>(experiment.incorrect_by3) / runs},
        {"none",
         static_cast<double>(experiment.runs - experiment.correct_by3 - experiment.incorrect_by3) /
             runs},
    };
    j["closed_form_by_3"] = {{"correct", closed_form.first}, {"incorrect", closed_form.second}};
    return j;
}

OutputFile::OutputFile(const std::string& path) : path_(path) {
    if (path == "-") {
        out_ = &std::cout;
        return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw IoError(path, "cannot open for writing");
    out_ = file_.get();
}

OutputFile::~OutputFile() = default;

std::ostream& OutputFile::stream() { return *out_; }

void OutputFile::finish() {
    if (finished_) return;
    finished_ = true;
    out_->flush();
    if (file_) {
        file_->close();
        if (!*file_) throw IoError(path_, "write failed");
    } else if (!*out_) {
        throw IoError(path_, "write failed");
    }
}

}  // namespace ratings
