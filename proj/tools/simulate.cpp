#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfmimo/config_io.hpp"
#include "cfmimo/experiment.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Cell-free massive MIMO uplink simulator with limited-capacity backhaul"};
    std::string preset = "custom";
    std::string config_file;
    std::vector<std::string> sets;
    cfmimo::ExperimentSpec spec;

    app.add_option("--preset", preset, "fig1|fig2|fig3|fig4|custom")->capture_default_str();
    app.add_option("--trials", spec.trials, "Topology drops per sweep point")->capture_default_str();
    app.add_option("--seed", spec.seed, "Master seed")->capture_default_str();
    app.add_option("--out", spec.output, "CSV output path (stdout when omitted)");
    app.add_option("--config", config_file, "key = value file; --set entries override it");
    app.add_option("--set", sets, "key=value override, repeatable");
    app.add_option("--workers", spec.workers, "Worker threads (0 = all cores)")->capture_default_str();
    bool quiet = false;
    app.add_flag("--quiet", quiet, "Do not print the summary table");
    CLI11_PARSE(app, argc, argv);

    try {
        spec.preset = cfmimo::parse_preset(preset);
        if (!config_file.empty())
            spec.overrides = cfmimo::read_settings_file(config_file);
        for (const auto& s : sets)
            spec.overrides.push_back(cfmimo::split_setting(s));

        const auto records = cfmimo::run_experiment(spec);
        if (spec.output.empty()) {
            cfmimo::write_csv(std::cout, records);
        } else {
            std::ofstream out(spec.output, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write '" << spec.output << "'\n";
                return 1;
            }
            cfmimo::write_csv(out, records);
        }
        if (!quiet)
            cfmimo::write_summary(spec.output.empty() ? std::cerr : std::cout, cfmimo::summarize(records));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
