// normflow: runs imaginary-time NLSE experiments described by a config file.
//
//   normflow run experiment.conf --out-dir results --alpha 0.25
//
// Exit codes: 0 success, 1 configuration or usage error, 2 a run diverged,
// 3 output could not be written.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "normflow/config.hpp"
#include "normflow/experiment.hpp"

namespace {

constexpr int kExitParse = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitIo = 3;

std::string flag_names(std::string_view key) {
    std::string names = "--" + std::string(key);
    if (key.find('_') != std::string_view::npos) {
        std::string dashed(key);
        for (char& c : dashed) {
            if (c == '_') c = '-';
        }
        names += ",--" + dashed;
    }
    return names;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Imaginary-time NLSE solver with feedback norm stabilization"};
    app.require_subcommand(1);

    CLI::App* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
    std::string config_path;
    run_cmd->add_option("config", config_path, "key = value configuration file")->required();

    std::map<std::string, std::optional<std::string>, std::less<>> overrides;
    for (const std::string_view key : normflow::config_keys()) {
        auto& slot = overrides[std::string(key)];
        run_cmd->add_option(flag_names(key), slot, "override '" + std::string(key) + "'");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    normflow::ConfigOverrides given;
    for (const auto& [key, value] : overrides) {
        if (value) given.emplace_back(key, *value);
    }

    normflow::ExperimentSpec spec;
    try {
        spec = normflow::load_config(config_path, given);
        if (!spec.out_dir) throw normflow::ParseError("out_dir", "not set in the config; pass --out-dir");
    } catch (const normflow::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitParse;
    }

    normflow::ExperimentOutcome outcome;
    try {
        outcome = normflow::run_experiment(spec);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kExitIo;
    }

    for (const auto& r : outcome.runs) {
        const auto row = normflow::summarize(r.alpha, r.result);
        std::cout << r.label << ": " << normflow::to_string(row.termination) << " after " << row.steps
                  << " steps, norm_sq=" << normflow::format_real(row.final_norm_sq)
                  << " l2_error=" << normflow::format_real(row.final_l2_error) << '\n';
    }
    for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';

    return outcome.any_diverged() ? kExitDiverged : EXIT_SUCCESS;
}
