#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "boundform/config.hpp"
#include "boundform/errors.hpp"
#include "boundform/scenario.hpp"

namespace {

struct Args {
    std::string config_path;
    std::string manifest_path;
    std::string out_dir;
    std::string prefix;
    int threads = 0;
    bool quiet = false;
};

// Returns the config text and, for manifests, the recorded subcommand.
std::string read_source(const Args& args, std::string& recorded_subcommand)
{
    const std::string& path = args.manifest_path.empty() ? args.config_path : args.manifest_path;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw boundform::ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (args.manifest_path.empty())
        return buf.str();
    const auto meta = nlohmann::json::parse(buf.str(), nullptr, false);
    if (meta.is_discarded() || !meta.contains("config") || !meta.contains("subcommand"))
        throw boundform::ConfigError("'" + path + "' is not a run manifest");
    recorded_subcommand = meta["subcommand"].get<std::string>();
    return meta["config"].get<std::string>();
}

int run(const std::string& name, const Args& args)
{
    std::string recorded;
    boundform::RunConfig cfg;
    try {
        cfg = boundform::parse_config(read_source(args, recorded));
    } catch (const boundform::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return boundform::kExitConfigError;
    }
    if (!recorded.empty() && recorded != name) {
        std::cerr << "error: manifest was written by '" << recorded << "', not '" << name << "'\n";
        return boundform::kExitConfigError;
    }
    if (!args.out_dir.empty())
        cfg.output.directory = args.out_dir;
    if (!args.prefix.empty())
        cfg.output.prefix = args.prefix;
    if (args.threads > 0)
        cfg.threads = args.threads;

    std::ostringstream sink;
    std::ostream& log = args.quiet ? static_cast<std::ostream&>(sink) : std::cerr;
    const auto outcome = boundform::run_scenario(cfg, *boundform::parse_subcommand(name), log);
    if (outcome.exit_code != boundform::kExitOk) {
        std::cerr << "error: " << outcome.error << '\n';
        return outcome.exit_code;
    }
    for (const auto& path : outcome.artifacts)
        std::cout << path << '\n';
    return boundform::kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bound-state formation in a driven well-in-a-box"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(boundform::kVersion));

    Args args;
    const char* help[] = {
        "Solve the stationary problem and write the basis table",
        "Evolve one schedule and write trajectory, distribution and summary tables",
        "Average stochastic realizations and write the ensemble table",
        "First-order amplitudes and the perturbative validity table",
        "Uncertainty-product and peak tables over the scan grid",
    };
    int k = 0;
    for (const auto sub : {boundform::Subcommand::eigen, boundform::Subcommand::evolve,
                           boundform::Subcommand::ensemble, boundform::Subcommand::perturb,
                           boundform::Subcommand::report}) {
        auto* cmd = app.add_subcommand(std::string(boundform::to_string(sub)), help[k++]);
        auto* cfg_opt = cmd->add_option("-c,--config", args.config_path, "Run configuration (INI)");
        auto* man_opt = cmd->add_option("-m,--manifest", args.manifest_path, "Re-run from a manifest");
        cfg_opt->excludes(man_opt);
        cmd->add_option("-o,--out", args.out_dir, "Output directory (overrides [output] directory)");
        cmd->add_option("-p,--prefix", args.prefix, "File prefix (overrides [output] prefix)");
        cmd->add_option("-j,--threads", args.threads, "Concurrent ensemble members")->check(CLI::PositiveNumber);
        cmd->add_flag("-q,--quiet", args.quiet, "No progress output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : boundform::kExitConfigError;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    if (args.config_path.empty() && args.manifest_path.empty()) {
        std::cerr << "error: one of --config or --manifest is required\n";
        return boundform::kExitConfigError;
    }
    return run(name, args);
}
