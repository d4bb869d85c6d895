#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "herm/errors.hpp"
#include "herm/noise.hpp"
#include "herm/spectral.hpp"

namespace herm {

// Flat key = value configuration with dotted sections (rule.kappa, lambda.max
// and so on), one experiment per file. Values are kept as strings so a parsed
// config serializes back to the identical byte sequence modulo ordering and
// whitespace; typed access parses on demand.
struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    // ConfigError when the key is present but unparsable; fallback when absent.
    double get_real(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
};

// Lines of `key = value`; blank lines and # comments skipped. ConfigError on
// malformed lines, duplicate keys, or a missing/unknown experiment name.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path); // IoError when unreadable

// experiment first, remaining keys sorted; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

const std::vector<std::string>& experiment_names();

// One CSV line of evidence. `params` is a semicolon-joined key=value string
// (no commas, so the CSV never needs quoting); `predicted` is absent when
// there is no theoretical value to compare against; re-running the row's
// parameter tuple with its seed reproduces `measured` bitwise.
struct ReportRow {
    std::string experiment;
    std::string params;
    double measured = 0.0;
    std::optional<double> predicted;
    bool pass = false;
    std::uint64_t seed = 0;
};

struct RunResult {
    std::vector<ReportRow> rows;
    bool all_pass = true;
    std::map<std::string, double> metrics; // headline numbers for the summary
};

// Builds the coefficient rule / noise law described by the rule.* and law.*
// keys (defaults: power-law kappa 0.5, gaussian). The dyadic-block rule takes
// its gamma from the configured dimension.
CoefficientRule rule_from_config(const ExperimentConfig& config, int d);
RandomLaw law_from_config(const ExperimentConfig& config);

// Runs the configured experiment. ConfigError on unknown keys or invalid
// ranges; BudgetExceeded bubbles up from the library.
RunResult run_experiment(const ExperimentConfig& config);

// header `experiment,params,measured,predicted,pass,seed`; %.17g numbers,
// NaN as the literal `nan` with the pass flag forced to 0, empty cell for an
// absent prediction. Content is a pure function of the rows (no timestamp).
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);
std::string report_csv_text(const std::vector<ReportRow>& rows);

// Machine-readable run summary (JSON): config echo, row count, pass flag,
// headline metrics, and the only timestamp in the output set.
void write_summary_json(const std::string& path, const ExperimentConfig& config,
                        const RunResult& result);

} // namespace herm
