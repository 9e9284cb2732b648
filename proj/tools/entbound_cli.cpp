// entbound: spectra, energy function, entropy bounds and verification suites.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entbound/cli.hpp"

namespace {

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

const FlagSpec kFlags[] = {
    {"--kind", "kind", "model: u1, virasoro or custom"},
    {"--file", "file", "spectrum file for kind = custom"},
    {"--power", "power", "tensor power of the model"},
    {"--n-max", "n_max", "largest N for `model`"},
    {"--alpha", "alpha", "decay exponent of the energy function, in (0,1)"},
    {"--delta", "delta", "comma-separated delta list"},
    {"--E", "E", "comma-separated energy cutoffs"},
    {"--beta", "beta", "comma-separated inverse temperatures"},
    {"--p", "p", "comma-separated exponents in (0,1]"},
    {"--kappa", "kappa", "growth exponent for the dimension fit"},
    {"--fit-n-max", "fit_n_max", "range of the growth fit"},
    {"--oracle-limit", "oracle_limit", "largest truncated dimension for the exact oracle"},
    {"--t-max", "t_max", "quadrature range T0 of the energy function"},
    {"--grid-step", "grid_step", "certification grid step"},
    {"--tolerance", "tolerance", "quadrature tolerance"},
    {"--panels", "panels", "quadrature panels per oscillation"},
    {"--t-from", "t_from", "first t for `energy-function`"},
    {"--t-to", "t_to", "last t for `energy-function`"},
    {"--t-step", "t_step", "t step for `energy-function`"},
    {"--only", "only", "verify suites to run (comma-separated)"},
    {"--distance", "distance", "add distance-regularized rows to `bounds` (0/1)"},
};

}  // namespace

int main(int argc, char** argv) {
    namespace ec = entbound::cli;
    CLI::App app{"Entropy bounds for chiral spectra"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::vector<std::string> seeds;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--seed", seeds, "seed (repeatable)")->take_all();
    std::vector<std::string> values(std::size(kFlags));
    std::vector<CLI::Option*> options;
    for (std::size_t i = 0; i < std::size(kFlags); ++i)
        options.push_back(app.add_option(kFlags[i].flag, values[i], kFlags[i].help));

    const std::vector<std::pair<std::string, int (*)(const ec::RunConfig&, std::ostream&)>> commands{
        {"model", ec::cmd_model},         {"energy-function", ec::cmd_energy_function},
        {"bounds", ec::cmd_bounds},       {"trace", ec::cmd_trace},
        {"verify", ec::cmd_verify}};
    for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ec::kUsage;
    }

    try {
        ec::Settings settings;
        if (!config_path.empty()) settings = ec::read_config_file(config_path);
        for (std::size_t i = 0; i < std::size(kFlags); ++i)
            if (options[i]->count() > 0) settings[kFlags[i].key] = values[i];
        if (!seeds.empty()) {
            std::string joined;
            for (const auto& s : seeds) joined += (joined.empty() ? "" : ",") + s;
            settings["seed"] = joined;
        }
        if (!out_path.empty()) settings["out"] = out_path;
        const ec::RunConfig cfg = ec::make_run_config(settings);

        int (*fn)(const ec::RunConfig&, std::ostream&) = nullptr;
        for (const auto& [name, f] : commands)
            if (app.got_subcommand(name)) fn = f;

        std::ostringstream buffer;
        buffer.imbue(std::locale::classic());
        const int code = fn(cfg, buffer);
        if (cfg.out.empty()) {
            std::cout << buffer.str();
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file) throw entbound::ParseError("cannot open output file '" + cfg.out + "'");
            file << buffer.str();
        }
        return code;
    } catch (const entbound::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << '\n';
        return ec::kDivergence;
    } catch (const entbound::ConstructionError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return ec::kDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ec::kUsage;
    }
}
