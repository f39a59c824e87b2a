#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratings/cascade.hpp"
#include "ratings/model.hpp"
#include "ratings/monte_carlo.hpp"

namespace ratings {

// Shortest decimal that round-trips the double exactly ("nan" for NaN).
std::string format_double(double value);
double parse_double(const std::string& text);

// Trace CSV, columns exactly: i,is_reader,x,attended,v,visits,likes,rating.
// The v column is empty when the consumer did not attend.
void write_trace_csv(std::ostream& out, const std::vector<ConsumerRecord>& trace);
std::vector<ConsumerRecord> parse_trace_csv(std::istream& in);

nlohmann::json summary_to_json(const SimSummary& summary, std::uint64_t seed);

// Long-form grid CSV: alpha,rho,value,stderr sorted by (alpha, rho).
void write_grid_csv(std::ostream& out, const GridResult& grid);

nlohmann::json grid_to_json(const GridResult& grid);
GridResult grid_from_json(const nlohmann::json& j);

// Exact equality including NaN == NaN, for round-trip checks.
bool grid_equal(const GridResult& a, const GridResult& b);

void write_trajectory_csv(std::ostream& out, const TrajectoryResult& result);
nlohmann::json trajectory_to_json(const TrajectoryResult& result, std::uint64_t seed);

struct CascadeExperiment {
    CascadeParams params;
    std::uint64_t seed = 0;
    std::int64_t runs = 0;
    std::int64_t correct_by3 = 0;
    std::int64_t incorrect_by3 = 0;
    std::vector<CascadeSummary> summaries;  // kept only when per-run output is wanted
};

void write_cascade_csv(std::ostream& out, const CascadeExperiment& experiment);
nlohmann::json cascade_to_json(const CascadeExperiment& experiment);

// Opens for writing, throws IoError on failure. "-" means stdout.
class OutputFile {
public:
    explicit OutputFile(const std::string& path);
    ~OutputFile();
    std::ostream& stream();
    // Flush and verify; throws IoError if the stream went bad.
    void finish();

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;  // null when writing to stdout
    std::ostream* out_;
    bool finished_ = false;
};

}  // namespace ratings
