#include "herm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "herm/fit.hpp"
#include "herm/lp_rates.hpp"
#include "herm/sampling.hpp"

namespace herm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "inf" || v == "+inf" || v == "infinity") return kInf;
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse real '" + raw + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    try {
        std::size_t used = 0;
        const std::int64_t out = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse integer '" + raw + "'");
    }
}

} // namespace

double ExperimentConfig::get_real(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : parse_real(key, it->second);
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : parse_int(key, it->second);
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "spectral-bound", "lp-rates",  "alpha-star", "square-function",
        "salem-zygmund",  "continuity", "modulus",   "bernstein-probe",
    };
    return names;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (key == "experiment") {
            if (!config.experiment.empty()) throw ConfigError("duplicate key 'experiment'");
            config.experiment = value;
        } else if (!config.values.emplace(key, value).second) {
            throw ConfigError("duplicate key '" + key + "'");
        }
    }
    if (config.experiment.empty()) throw ConfigError("config is missing 'experiment ='");
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), config.experiment) == names.end()) {
        throw ConfigError("unknown experiment '" + config.experiment + "'");
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    std::string out = "experiment = " + config.experiment + "\n";
    for (const auto& [key, value] : config.values) out += key + " = " + value + "\n";
    return out;
}

CoefficientRule rule_from_config(const ExperimentConfig& config, int d) {
    const std::string kind = config.get_string("rule.kind", "power-law");
    const double amplitude = config.get_real("rule.amplitude", 1.0);
    if (kind == "power-law") {
        return power_law_rule(config.get_real("rule.kappa", 0.5),
                              config.get_real("rule.c0", 1.0), amplitude);
    }
    if (kind == "bucket-power") {
        return bucket_power_rule(config.get_real("rule.power", 0.0),
                                 config.get_real("rule.log_power", 0.0), amplitude);
    }
    if (kind == "dyadic-block") {
        return dyadic_block_rule(config.get_real("rule.mu", 0.5),
                                 config.get_real("rule.nu", 0.0), make_layout(d).gamma);
    }
    if (kind == "explicit") {
        std::vector<double> values;
        std::istringstream in(config.get_string("rule.values", ""));
        std::string item;
        while (std::getline(in, item, ',')) values.push_back(parse_real("rule.values", item));
        return explicit_rule(std::move(values));
    }
    throw ConfigError("unknown rule.kind '" + kind + "'");
}

RandomLaw law_from_config(const ExperimentConfig& config) {
    const std::string kind = config.get_string("law.kind", "gaussian");
    if (kind == "gaussian") return gaussian_law();
    if (kind == "rademacher") return rademacher_law();
    if (kind == "uniform") return bounded_uniform_law(config.get_real("law.a", 1.0));
    throw ConfigError("unknown law.kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// report output

std::string report_csv_text(const std::vector<ReportRow>& rows) {
    std::string out = "experiment,params,measured,predicted,pass,seed\n";
    for (const ReportRow& row : rows) {
        const bool pass = row.pass && !std::isnan(row.measured);
        out += row.experiment + ',' + row.params + ',' + fmt17(row.measured) + ',';
        if (row.predicted) out += fmt17(*row.predicted);
        out += ',';
        out += pass ? '1' : '0';
        out += ',' + std::to_string(row.seed) + '\n';
    }
    return out;
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << report_csv_text(rows);
    if (!out) throw IoError("write failed for " + path);
}

void write_summary_json(const std::string& path, const ExperimentConfig& config,
                        const RunResult& result) {
    nlohmann::json summary;
    summary["experiment"] = config.experiment;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [key, value] : config.values) cfg[key] = value;
    summary["config"] = cfg;
    summary["row_count"] = result.rows.size();
    summary["all_pass"] = result.all_pass;
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [key, value] : result.metrics) {
        if (std::isnan(value)) {
            metrics[key] = "nan";
        } else if (std::isinf(value)) {
            metrics[key] = value > 0 ? "inf" : "-inf";
        } else {
            metrics[key] = value;
        }
    }
    summary["metrics"] = metrics;
    char stamp[32];
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    summary["timestamp"] = stamp;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << summary.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

// ---------------------------------------------------------------------------
// shared experiment plumbing

namespace {

struct RowBuilder {
    std::string experiment;
    std::uint64_t seed = 0;
    std::vector<ReportRow>* rows = nullptr;
    bool* all_pass = nullptr;

    void add(const std::string& params, double measured, std::optional<double> predicted,
             bool pass, std::optional<std::uint64_t> row_seed = {}) {
        ReportRow row;
        row.experiment = experiment;
        row.params = params;
        row.measured = measured;
        row.predicted = predicted;
        row.pass = pass && !std::isnan(measured);
        row.seed = row_seed.value_or(seed);
        if (!row.pass) *all_pass = false;
        rows->push_back(std::move(row));
    }
    void info(const std::string& params, double measured,
              std::optional<double> predicted = {},
              std::optional<std::uint64_t> row_seed = {}) {
        add(params, measured, predicted, true, row_seed);
    }
};

std::vector<std::int64_t> geometric_ints(std::int64_t lo, std::int64_t hi, std::int64_t count) {
    std::set<std::int64_t> picks;
    if (count < 2) count = 2;
    for (std::int64_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        const double v = static_cast<double>(lo) *
                         std::pow(static_cast<double>(hi) / static_cast<double>(lo), t);
        picks.insert(std::clamp(static_cast<std::int64_t>(std::llround(v)), lo, hi));
    }
    return {picks.begin(), picks.end()};
}

std::vector<double> geometric_reals(double lo, double hi, std::int64_t count) {
    std::vector<double> out;
    if (count < 2) count = 2;
    for (std::int64_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(lo * std::pow(hi / lo, t));
    }
    out.back() = hi;
    return out;
}

void check_keys(const ExperimentConfig& config, std::set<std::string> allowed) {
    for (const char* common : {"seed", "out", "trials", "threads", "budget.modes"}) {
        allowed.insert(common);
    }
    for (const auto& [key, value] : config.values) {
        if (!allowed.count(key)) {
            throw ConfigError("experiment '" + config.experiment + "': unknown key '" + key + "'");
        }
    }
}

const std::set<std::string> kRuleKeys = {"rule.kind",      "rule.kappa", "rule.c0",
                                         "rule.amplitude", "rule.power", "rule.log_power",
                                         "rule.mu",        "rule.nu",    "rule.values"};
const std::set<std::string> kLawKeys = {"law.kind", "law.a"};

void merge_keys(std::set<std::string>& into, const std::set<std::string>& extra) {
    into.insert(extra.begin(), extra.end());
}

// ---------------------------------------------------------------------------
// spectral-bound: Karadzhov-type sup bound on the bucket spectral function,
// plus the 1-D sup decay exponent -1/12

RunResult run_spectral_bound(const ExperimentConfig& config) {
    check_keys(config, {"d", "j.min", "j.max", "points", "band.max", "grid.factor",
                        "grid.exponent", "sup.n.min", "sup.n.max", "slope.tol"});
    const int d = static_cast<int>(config.get_int("d", 1));
    const std::int64_t j_min = config.get_int("j.min", d == 1 ? 100 : 5);
    const std::int64_t j_max = config.get_int("j.max", d == 1 ? 2000 : 40);
    const std::int64_t points = config.get_int("points", 16);
    const double band_max = config.get_real("band.max", 5.0);
    const double factor = config.get_real("grid.factor", 0.05);
    const double exponent = config.get_real("grid.exponent", 0.5);
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
    if (j_min < 1 || j_max < j_min) throw ConfigError("spectral-bound: need 1 <= j.min <= j.max");

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    const double gamma = make_layout(d).gamma;

    double band_lo = kInf;
    double band_hi = 0.0;
    if (d == 1) {
        const std::int64_t n_lo = config.get_int("sup.n.min", 100);
        const std::int64_t n_hi = config.get_int("sup.n.max", 5000);
        const double slope_tol = config.get_real("slope.tol", 0.02);
        const auto n_top = static_cast<int>(std::max(j_max, n_hi));
        const std::vector<double> sups = hermite_sup_sweep(n_top, factor, exponent);

        for (std::int64_t j = j_min; j <= j_max; ++j) {
            const double ratio =
                sups[static_cast<std::size_t>(j)] * sups[static_cast<std::size_t>(j)] /
                std::pow(static_cast<double>(j), gamma);
            band_lo = std::min(band_lo, ratio);
            band_hi = std::max(band_hi, ratio);
        }
        for (std::int64_t j : geometric_ints(j_min, j_max, points)) {
            const double ratio =
                sups[static_cast<std::size_t>(j)] * sups[static_cast<std::size_t>(j)] /
                std::pow(static_cast<double>(j), gamma);
            rb.add("d=1;j=" + std::to_string(j), ratio, {}, std::isfinite(ratio) && ratio > 0.0);
        }

        std::vector<std::pair<double, double>> pairs;
        for (std::int64_t n = 1; n <= n_top; ++n) {
            pairs.emplace_back(static_cast<double>(n), sups[static_cast<std::size_t>(n)]);
        }
        const RateFit fit = fit_rate(std::span<const std::pair<double, double>>(pairs),
                                     static_cast<double>(n_lo), static_cast<double>(n_hi));
        rb.add("d=1;metric=sup-slope", fit.slope, -1.0 / 12.0,
               std::fabs(fit.slope + 1.0 / 12.0) <= slope_tol);
        result.metrics["sup_slope"] = fit.slope;
    } else {
        std::vector<std::int64_t> js;
        if (j_max - j_min + 1 <= 64) {
            for (std::int64_t j = j_min; j <= j_max; ++j) js.push_back(j);
        } else {
            js = geometric_ints(j_min, j_max, points);
        }
        for (std::int64_t j : js) {
            const double ratio = karadzhov_ratio(j, d, factor, exponent);
            band_lo = std::min(band_lo, ratio);
            band_hi = std::max(band_hi, ratio);
            rb.add("d=" + std::to_string(d) + ";j=" + std::to_string(j), ratio, {},
                   std::isfinite(ratio) && ratio > 0.0);
        }
    }

    const double band = band_hi / band_lo;
    rb.add("d=" + std::to_string(d) + ";metric=band", band, {}, band < band_max);
    result.metrics["band"] = band;
    return result;
}

// ---------------------------------------------------------------------------
// lp-rates: scaling exponent of ||psi_n||_p against the regime prediction

RunResult run_lp_rates(const ExperimentConfig& config) {
    check_keys(config, {"d", "p", "n.min", "n.max", "points", "grid.ppw", "slope.tol",
                        "band.max"});
    const int d = static_cast<int>(config.get_int("d", 3));
    const double p = config.get_real("p", kInf);
    const auto n_min = config.get_int("n.min", 200);
    const auto n_max = config.get_int("n.max", 2000);
    const std::int64_t points = config.get_int("points", 16);
    const double ppw = config.get_real("grid.ppw", 30.0);
    const double band_max = config.get_real("band.max", 3.0);
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
    if (n_min < 1 || n_max <= n_min) throw ConfigError("lp-rates: need 1 <= n.min < n.max");

    const LpRatePrediction pred = lp_rate_prediction(d, p);
    const double slope_tol =
        config.get_real("slope.tol", pred.regime == LpRegime::above_critical ? 0.03 : 0.05);

    const std::vector<double> norms = lp_norms_sweep(d, static_cast<int>(n_max), p, ppw);

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    const std::string base = "d=" + std::to_string(d) + ";p=" + fmt17(p);
    for (std::int64_t n : geometric_ints(n_min, n_max, points)) {
        rb.info(base + ";n=" + std::to_string(n), norms[static_cast<std::size_t>(n)]);
    }

    // divide out the known ln^{1/p} factor at the critical p before fitting
    std::vector<std::pair<double, double>> pairs;
    for (std::int64_t n = n_min; n <= n_max; ++n) {
        double v = norms[static_cast<std::size_t>(n)];
        if (pred.log_correction) {
            v /= std::pow(std::log(static_cast<double>(n)), pred.log_exponent);
        }
        if (v > 0.0) pairs.emplace_back(static_cast<double>(n), v);
    }
    const RateFit fit = fit_rate(std::span<const std::pair<double, double>>(pairs),
                                 static_cast<double>(n_min), static_cast<double>(n_max));
    const bool slope_ok = pred.two_sided ? std::fabs(fit.slope - pred.exponent) <= slope_tol
                                         : fit.slope <= pred.exponent + slope_tol;
    rb.add(base + ";metric=slope", fit.slope, pred.exponent, slope_ok);
    result.metrics["slope"] = fit.slope;
    result.metrics["exponent"] = pred.exponent;

    if (pred.two_sided) {
        double lo = kInf;
        double hi = 0.0;
        for (std::int64_t n = n_min; n <= n_max; ++n) {
            const double q = norms[static_cast<std::size_t>(n)] /
                             std::pow(static_cast<double>(n), pred.exponent);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        rb.add(base + ";metric=band", hi / lo, {}, hi / lo < band_max);
        result.metrics["band"] = hi / lo;
    }
    return result;
}

// ---------------------------------------------------------------------------
// alpha-star: growth exponent of S_N and the critical L^p threshold

RunResult run_alpha_star(const ExperimentConfig& config) {
    std::set<std::string> allowed = {"d", "n.max", "rel.tol"};
    merge_keys(allowed, kRuleKeys);
    check_keys(config, allowed);
    const int d = static_cast<int>(config.get_int("d", 4));
    const std::int64_t n_max = config.get_int("n.max", 1000000);
    const double rel_tol = config.get_real("rel.tol", 0.1);
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
    const CoefficientRule rule = rule_from_config(config, d);

    const AlphaStarDetail detail = alpha_star_detail(rule, d, n_max);

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    const std::string base = "d=" + std::to_string(d);
    const std::size_t stride = std::max<std::size_t>(1, detail.fit.pairs.size() / 20);
    for (std::size_t i = 0; i < detail.fit.pairs.size(); i += stride) {
        rb.info(base + ";N=" + fmt17(std::exp(detail.fit.pairs[i].first)),
                std::exp(detail.fit.pairs[i].second));
    }

    // the power-law family has a closed-form answer to compare against
    std::optional<double> predicted_slope;
    std::optional<double> predicted_critical;
    if (rule.kind == CoefficientRule::Kind::power_law) {
        const double kappa = rule.kappa;
        if (kappa < 0.25 * d) {
            predicted_slope = 0.5 * d - 2.0 * kappa;
            predicted_critical = 2.0 * d / (d - 4.0 * kappa);
        } else {
            predicted_slope = 0.0;
            predicted_critical = kInf;
        }
    }

    rb.add(base + ";metric=slope", detail.slope, predicted_slope,
           !predicted_slope || std::fabs(detail.slope - *predicted_slope) <=
                                   rel_tol * std::max(1.0, *predicted_slope));
    bool critical_ok = true;
    if (predicted_critical) {
        if (std::isinf(*predicted_critical) || std::isinf(detail.critical_p)) {
            critical_ok = std::isinf(*predicted_critical) == std::isinf(detail.critical_p);
        } else {
            critical_ok =
                std::fabs(detail.critical_p - *predicted_critical) <= rel_tol * *predicted_critical;
        }
    }
    rb.add(base + ";metric=critical-p", detail.critical_p, predicted_critical, critical_ok);
    result.metrics["slope"] = detail.slope;
    result.metrics["critical_p"] = detail.critical_p;
    return result;
}

// ---------------------------------------------------------------------------
// square-function: stabilization below the critical p, divergence above

RunResult run_square_function(const ExperimentConfig& config) {
    std::set<std::string> allowed = {"d",          "p.stable",   "p.diverge", "lambda.min",
                                     "lambda.max", "grid.ppw",   "points",    "slope.threshold"};
    merge_keys(allowed, kRuleKeys);
    check_keys(config, allowed);
    const int d = static_cast<int>(config.get_int("d", 4));
    const double lambda_min = config.get_real("lambda.min", 16.0);
    const double lambda_max = config.get_real("lambda.max", 4096.0);
    const double ppw = config.get_real("grid.ppw", 30.0);
    const double threshold = config.get_real("slope.threshold", 0.05);
    const std::int64_t points = config.get_int("points", 25);
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
    const CoefficientRule rule = rule_from_config(config, d);
    if (!(lambda_min >= d) || !(lambda_max > 2.0 * lambda_min)) {
        throw ConfigError("square-function: need d <= lambda.min < lambda.max / 2");
    }

    // default p straddles the predicted critical exponent of the rule
    double p_stable = config.get_real("p.stable", 0.0);
    double p_diverge = config.get_real("p.diverge", 0.0);
    std::optional<double> critical;
    if (rule.kind == CoefficientRule::Kind::power_law && rule.kappa < 0.25 * d) {
        critical = 2.0 * d / (d - 4.0 * rule.kappa);
    }
    if (p_stable == 0.0) {
        if (!critical) throw ConfigError("square-function: p.stable required for this rule");
        p_stable = *critical - 1.0;
    }
    if (p_diverge == 0.0) {
        if (!critical) throw ConfigError("square-function: p.diverge required for this rule");
        p_diverge = *critical + 2.0;
    }

    const std::vector<double> lambdas = geometric_reals(lambda_min, lambda_max, points);

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    const auto run_side = [&](double p, bool expect_diverge, const char* tag) {
        const std::vector<double> qs =
            square_function_sweep(rule, d, p, std::span<const double>(lambdas), ppw);
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            rb.info("d=" + std::to_string(d) + ";p=" + fmt17(p) + ";lambda=" + fmt17(lambdas[i]),
                    qs[i]);
            if (qs[i] > 0.0) pairs.emplace_back(lambdas[i], qs[i]);
        }
        const RateFit fit = fit_rate(std::span<const std::pair<double, double>>(pairs),
                                     lambda_max / 10.0, lambda_max);

        // asymptotic slope of the truncated norm for the power-law family:
        // (d - 4 kappa)/4 - d/(2p) past the critical p, flat below it
        std::optional<double> predicted;
        if (rule.kind == CoefficientRule::Kind::power_law && rule.kappa < 0.25 * d) {
            predicted = std::max(0.0, 0.25 * (d - 4.0 * rule.kappa) - 0.5 * d / p);
        }
        const bool pass = expect_diverge ? fit.slope > threshold : fit.slope < threshold;
        rb.add("d=" + std::to_string(d) + ";p=" + fmt17(p) + ";metric=" + tag, fit.slope,
               predicted, pass);
        result.metrics[std::string("slope_") + tag] = fit.slope;

        // informational Cauchy increment over the last decade
        double q_start = qs.back();
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (lambdas[i] >= lambda_max / 10.0) {
                q_start = qs[i];
                break;
            }
        }
        const double cauchy = qs.back() > 0.0 ? (qs.back() - q_start) / qs.back() : 0.0;
        rb.info("d=" + std::to_string(d) + ";p=" + fmt17(p) + ";metric=cauchy", cauchy);
    };
    run_side(p_stable, false, "stable");
    run_side(p_diverge, true, "diverge");
    return result;
}

// ---------------------------------------------------------------------------
// salem-zygmund: sup-norm quantiles against the sqrt(ln lambda rho) scale

RunResult run_salem_zygmund(const ExperimentConfig& config) {
    std::set<std::string> allowed = {"d", "lambda.min", "lambda.max", "grid.factor", "ratio.max"};
    merge_keys(allowed, kRuleKeys);
    merge_keys(allowed, kLawKeys);
    check_keys(config, allowed);
    const int d = static_cast<int>(config.get_int("d", 1));
    const double lambda_min = config.get_real("lambda.min", 32.0);
    const double lambda_max = config.get_real("lambda.max", 1024.0);
    const int trials = static_cast<int>(config.get_int("trials", 512));
    const double grid_factor = config.get_real("grid.factor", 0.05);
    const double ratio_max = config.get_real("ratio.max", 4.0);
    const int threads = static_cast<int>(config.get_int("threads", 1));
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));

    const SeriesMode mode = d == 1 ? SeriesMode::one_d : SeriesMode::radial;
    const double gamma = make_layout(d).gamma;
    CoefficientRule rule = rule_from_config(config, d);
    if (!config.has("rule.kind")) rule = bucket_power_rule(-1.3 - gamma); // summable default

    std::vector<double> lambdas;
    for (double lambda = lambda_min; lambda <= lambda_max * 1.0001; lambda *= 2.0) {
        lambdas.push_back(lambda);
    }
    const RandomLaw law = law_from_config(config);
    const SalemZygmundReport report = salem_zygmund_experiment(
        rule, law, d, std::span<const double>(lambdas), trials, seed, mode, threads, grid_factor);

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    double ratio_lo = kInf;
    double ratio_hi = 0.0;
    for (std::size_t i = 0; i < report.lambdas.size(); ++i) {
        const std::string base = "d=" + std::to_string(d) + ";lambda=" + fmt17(report.lambdas[i]);
        rb.info(base + ";metric=rho", report.rho[i]);
        rb.info(base + ";metric=rho-full", report.rho_full[i]);
        rb.info(base + ";metric=q50", report.sup_quantiles[i][0]);
        rb.info(base + ";metric=q90", report.sup_quantiles[i][1]);
        rb.info(base + ";metric=q99", report.sup_quantiles[i][2]);
        const double ratio = report.normalized_ratio[i][2];
        rb.add(base + ";metric=ratio99", ratio, {}, std::isfinite(ratio) && ratio > 0.0);
        ratio_lo = std::min(ratio_lo, ratio);
        ratio_hi = std::max(ratio_hi, ratio);
    }
    const double band = ratio_hi / ratio_lo;
    rb.add("d=" + std::to_string(d) + ";metric=ratio-band", band, {}, band < ratio_max);
    result.metrics["ratio_band"] = band;
    return result;
}

// ---------------------------------------------------------------------------
// continuity: summability of dyadic-block sup norms along one sample path

RunResult run_continuity(const ExperimentConfig& config) {
    std::set<std::string> allowed = {"d", "k.max", "seeds", "grid.factor", "tail.max"};
    merge_keys(allowed, kRuleKeys);
    merge_keys(allowed, kLawKeys);
    check_keys(config, allowed);
    const int d = static_cast<int>(config.get_int("d", 1));
    const int k_max = static_cast<int>(config.get_int("k.max", 10));
    const int seeds = static_cast<int>(config.get_int("seeds", 16));
    const double grid_factor = config.get_real("grid.factor", 0.25);
    const double tail_max = config.get_real("tail.max", 0.01);
    const int threads = static_cast<int>(config.get_int("threads", 1));
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));

    const SeriesMode mode = d == 1 ? SeriesMode::one_d : SeriesMode::radial;
    const double gamma = make_layout(d).gamma;
    CoefficientRule rule = rule_from_config(config, d);
    if (!config.has("rule.kind")) {
        // log-weighted bucket sums sum_j j^gamma (ln j)^2 max^2 converge with
        // room to spare, the setting where uniform convergence is expected
        rule = bucket_power_rule(-gamma - 1.0, -8.0);
    }
    const RandomLaw law = law_from_config(config);

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    int pass_count = 0;
    double worst = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t stream = mix_seed(seed, static_cast<std::uint64_t>(s));
        const std::vector<double> sups =
            block_sup_norms(rule, law, d, k_max, stream, mode, grid_factor, threads);
        double total = 0.0;
        for (std::size_t k = 0; k < sups.size(); ++k) {
            total += sups[k];
            rb.info("seed.index=" + std::to_string(s) + ";K=" + std::to_string(k), sups[k], {},
                    stream);
        }
        const double fraction = total > 0.0 ? sups.back() / total : 0.0;
        const bool ok = fraction < tail_max;
        if (ok) ++pass_count;
        worst = std::max(worst, fraction);
        rb.add("seed.index=" + std::to_string(s) + ";metric=tail-fraction", fraction, {}, ok,
               stream);
    }
    rb.add("metric=pass-count", pass_count, static_cast<double>(seeds), pass_count == seeds);
    result.metrics["pass_count"] = pass_count;
    result.metrics["worst_fraction"] = worst;
    return result;
}

// ---------------------------------------------------------------------------
// modulus: Hoelder exponent of the modulus of continuity against mu

RunResult run_modulus(const ExperimentConfig& config) {
    std::set<std::string> allowed = {"d",     "modulus.mu", "modulus.nu", "lambda", "h.min",
                                     "h.max", "window",     "seeds",      "slope.tol"};
    merge_keys(allowed, kRuleKeys);
    merge_keys(allowed, kLawKeys);
    check_keys(config, allowed);
    const int d = static_cast<int>(config.get_int("d", 1));
    if (d != 1) throw ConfigError("modulus: only d = 1 is supported");
    const double mu = config.get_real("modulus.mu", 0.5);
    const double nu = config.get_real("modulus.nu", 0.0);
    // The smallest h in the default window only sees field structure once
    // lambda^{-1/2} drops below it, so the default cutoff is much larger
    // than in the other experiments and the spatial window much smaller
    // (cost scales as modes x window / h.min). See README for the scaling
    // regime this does and does not reach.
    const double lambda = config.get_real("lambda", 1048576.0);
    const double h_min = config.get_real("h.min", std::exp2(-12));
    const double h_max = config.get_real("h.max", std::exp2(-4));
    const double window = config.get_real("window", 0.25);
    const int seeds = static_cast<int>(config.get_int("seeds", 16));
    const double slope_tol = config.get_real("slope.tol", 0.1);
    const int threads = static_cast<int>(config.get_int("threads", 1));
    const auto budget = config.get_int("budget.modes", 1000000);
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
    if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("modulus: need 0 <= modulus.mu <= 1");
    if (!(h_min > 0.0 && h_max > 2.0 * h_min)) throw ConfigError("modulus: bad h range");

    CoefficientRule rule = config.has("rule.kind") ? rule_from_config(config, d)
                                                   : dyadic_block_rule(mu, nu, make_layout(d).gamma);
    const RandomLaw law = law_from_config(config);

    // theta from the case table of the modulus law
    double theta = 0.5 + nu;
    if (mu == 0.0) theta = 1.0 + nu;
    if (mu == 1.0) theta = nu >= -0.5 ? 1.0 + nu : 0.5;

    std::vector<double> h_list;
    for (double h = h_min; h <= h_max * 1.0001; h *= 2.0) h_list.push_back(h);

    // One-sided window [0, window]: increments are distribution-invariant
    // under reflection, so the second half would only double the cost.
    const double spacing = h_min / 2.0;
    const auto count = static_cast<std::int64_t>(std::llround(window / spacing));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count + 1));
    for (std::int64_t i = 0; i <= count; ++i) grid.push_back(spacing * static_cast<double>(i));

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    int pass_count = 0;
    double slope_sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t stream = mix_seed(seed, static_cast<std::uint64_t>(s));
        const FieldSample sample =
            sample_partial_sum(rule, law, lambda, 1, SeriesMode::one_d,
                               std::span<const double>(grid), stream, threads, budget);
        if (sup_norm(sample) == 0.0) {
            rb.info("seed.index=" + std::to_string(s) + ";metric=degenerate", 1.0, {}, stream);
            ++pass_count;
            continue;
        }
        const std::vector<double> m =
            modulus_of_continuity(sample, std::span<const double>(h_list));
        std::vector<std::pair<double, double>> pairs;
        std::vector<std::pair<double, double>> drift_pairs;
        for (std::size_t i = 0; i < h_list.size(); ++i) {
            rb.info("seed.index=" + std::to_string(s) + ";h=" + fmt17(h_list[i]), m[i], {},
                    stream);
            if (m[i] > 0.0) {
                pairs.emplace_back(h_list[i], m[i]);
                drift_pairs.emplace_back(-std::log(h_list[i]),
                                         m[i] * std::pow(h_list[i], -mu));
            }
        }
        const RateFit fit =
            fit_rate(std::span<const std::pair<double, double>>(pairs), h_min, h_max);
        const bool ok = std::fabs(fit.slope - mu) <= slope_tol;
        if (ok) ++pass_count;
        slope_sum += fit.slope;
        rb.add("seed.index=" + std::to_string(s) + ";metric=h-slope", fit.slope, mu, ok, stream);

        // drift of m(h) h^{-mu} against ln(1/h), the theorem's log exponent
        const RateFit drift = fit_rate(std::span<const std::pair<double, double>>(drift_pairs),
                                       -std::log(h_max), -std::log(h_min));
        rb.info("seed.index=" + std::to_string(s) + ";metric=log-drift", drift.slope, theta,
                stream);
    }
    rb.add("metric=pass-count", pass_count, static_cast<double>(seeds), pass_count == seeds);
    result.metrics["pass_count"] = pass_count;
    result.metrics["mean_slope"] = slope_sum / seeds;
    return result;
}

// ---------------------------------------------------------------------------
// bernstein-probe: gradient-to-sup growth, calibrating grid densities

RunResult run_bernstein_probe(const ExperimentConfig& config) {
    check_keys(config, {"d", "lambda.min", "lambda.max", "points", "slope.tol"});
    const int d = static_cast<int>(config.get_int("d", 1));
    const double lambda_min = config.get_real("lambda.min", 64.0);
    const double lambda_max = config.get_real("lambda.max", 2048.0);
    const std::int64_t points = config.get_int("points", 8);
    const int trials = static_cast<int>(config.get_int("trials", 4));
    const double slope_tol = config.get_real("slope.tol", 0.1);
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
    if (!(lambda_min >= 8.0) || !(lambda_max > lambda_min)) {
        throw ConfigError("bernstein-probe: need 8 <= lambda.min < lambda.max");
    }

    const std::vector<double> lambdas = geometric_reals(lambda_min, lambda_max, points);
    const RateFit probe = bernstein_probe(d, std::span<const double>(lambdas), trials, seed);

    RunResult result;
    RowBuilder rb{config.experiment, seed, &result.rows, &result.all_pass};
    for (std::size_t i = 0; i < probe.pairs.size(); ++i) {
        const double lambda = probe.pairs.size() == lambdas.size()
                                  ? lambdas[i]
                                  : std::exp(probe.pairs[i].first);
        rb.info("d=" + std::to_string(d) + ";lambda=" + fmt17(lambda),
                std::exp(probe.pairs[i].second));
    }
    rb.add("d=" + std::to_string(d) + ";metric=slope", probe.slope, 0.5,
           std::fabs(probe.slope - 0.5) <= slope_tol);
    result.metrics["slope"] = probe.slope;
    return result;
}

} // namespace

RunResult run_experiment(const ExperimentConfig& config) {
    if (config.experiment == "spectral-bound") return run_spectral_bound(config);
    if (config.experiment == "lp-rates") return run_lp_rates(config);
    if (config.experiment == "alpha-star") return run_alpha_star(config);
    if (config.experiment == "square-function") return run_square_function(config);
    if (config.experiment == "salem-zygmund") return run_salem_zygmund(config);
    if (config.experiment == "continuity") return run_continuity(config);
    if (config.experiment == "modulus") return run_modulus(config);
    if (config.experiment == "bernstein-probe") return run_bernstein_probe(config);
    throw ConfigError("unknown experiment '" + config.experiment + "'");
}

} // namespace herm
