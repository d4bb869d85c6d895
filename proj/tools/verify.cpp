// Command line driver: runs one experiment and writes <out>/<name>.csv plus
// <out>/<name>.summary.json. Exit codes: 0 all rows pass, 1 some row failed,
// 2 configuration problem, 3 work budget exceeded.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "herm/errors.hpp"
#include "herm/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"run one verification experiment and write a CSV report"};
    app.get_formatter()->column_width(30);

    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    std::int64_t trials = -1;
    std::int64_t budget_modes = -1;
    std::int64_t threads = -1;

    app.add_option("experiment", experiment, "experiment name (see --list)");
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "override the noise seed");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--trials", trials, "override the Monte-Carlo trial count");
    app.add_option("--budget-modes", budget_modes, "cap on modes per partial sum");
    app.add_option("--threads", threads, "worker threads (results stay identical)");
    bool list = false;
    app.add_flag("--list", list, "print the experiment names and exit");

    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const std::string& name : herm::experiment_names()) std::puts(name.c_str());
        return 0;
    }

    try {
        herm::ExperimentConfig config;
        if (!config_path.empty()) {
            config = herm::load_config(config_path);
            if (!experiment.empty() && experiment != config.experiment) {
                throw herm::ConfigError("config file is for experiment '" + config.experiment +
                                        "', not '" + experiment + "'");
            }
        } else if (!experiment.empty()) {
            config.experiment = experiment;
        } else {
            throw herm::ConfigError("need an experiment name or --config");
        }
        const auto& names = herm::experiment_names();
        if (std::find(names.begin(), names.end(), config.experiment) == names.end()) {
            throw herm::ConfigError("unknown experiment '" + config.experiment + "'");
        }

        // precedence: command line, then VERIFY_SEED, then the config file
        if (const char* env = std::getenv("VERIFY_SEED"); env && seed < 0) {
            seed = std::strtoll(env, nullptr, 10);
        }
        if (seed >= 0) config.values["seed"] = std::to_string(seed);
        if (trials >= 0) config.values["trials"] = std::to_string(trials);
        if (budget_modes >= 0) config.values["budget.modes"] = std::to_string(budget_modes);
        if (threads >= 0) config.values["threads"] = std::to_string(threads);
        if (!out_dir.empty()) config.values["out"] = out_dir;

        const std::string out = config.get_string("out", "out");
        std::filesystem::create_directories(out);

        const herm::RunResult result = herm::run_experiment(config);

        const std::string stem = out + "/" + config.experiment;
        herm::write_report_csv(stem + ".csv", result.rows);
        herm::write_summary_json(stem + ".summary.json", config, result);

        std::size_t passed = 0;
        for (const herm::ReportRow& row : result.rows) passed += row.pass ? 1 : 0;
        std::printf("%s: %zu/%zu rows pass -> %s\n", config.experiment.c_str(), passed,
                    result.rows.size(), result.all_pass ? "ok" : "FAIL");
        return result.all_pass ? 0 : 1;
    } catch (const herm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const herm::BudgetExceeded& e) {
        std::fprintf(stderr, "budget exceeded: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
