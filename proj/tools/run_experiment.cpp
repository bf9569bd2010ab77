#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "catsim/config.hpp"

namespace {

struct SubcommandInfo {
    const char* name;
    const char* description;
};

const std::vector<SubcommandInfo>& subcommands() {
    static const std::vector<SubcommandInfo> subs = {
        {"ramsey", "Qubit fringe with the cavity detector engaged"},
        {"delayed-choice", "Fringes conditioned on finding the detector empty or filled"},
        {"eraser", "Fringes conditioned on cavity photon parity"},
        {"eraser-after-on", "Parity-conditioned fringes after selecting the filled detector"},
        {"which-path", "Field discrimination after selecting the filled detector"},
        {"wigner", "Phase-space map and reconstruction of the prepared cavity state"},
        {"cat-prep", "Cavity superposition preparation fidelity and success probability"},
    };
    return subs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator of a dispersively coupled qubit-cavity interferometer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::string mode_override;
    int jobs = 1;

    for (const auto& info : subcommands()) {
        CLI::App* sub = app.add_subcommand(info.name, info.description);
        sub->add_option("-c,--config", config_path,
                        "Flat key = value config file; omit for the built-in defaults")
            ->check(CLI::ExistingFile);
        sub->add_option("-o,--output", output_dir,
                        "Output directory (default: config output_dir, then "
                        "$CATSIM_OUTPUT_DIR, then '.')");
        sub->add_option("-m,--mode", mode_override, "Override the evolution mode")
            ->check(CLI::IsMember({"ideal", "noisy"}));
        sub->add_option("-j,--jobs", jobs,
                        "Worker budget accepted for compatibility; runs are serial")
            ->check(CLI::Range(1, 1024));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string experiment = app.get_subcommands().front()->get_name();
    try {
        catsim::RunConfig cfg;
        if (!config_path.empty()) cfg = catsim::load_config(config_path);
        if (cfg.experiment.empty()) cfg.experiment = experiment;
        else if (cfg.experiment != experiment)
            throw std::runtime_error("config file requests experiment '" + cfg.experiment +
                                     "' but the subcommand is '" + experiment + "'");
        if (!mode_override.empty()) cfg.mode = mode_override;

        std::string out = output_dir;
        if (out.empty()) out = cfg.output_dir;
        if (out.empty()) {
            const char* env = std::getenv("CATSIM_OUTPUT_DIR");
            if (env && *env) out = env;
        }
        if (out.empty()) out = ".";

        return catsim::run_experiment(cfg, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
