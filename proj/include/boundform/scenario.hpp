#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "boundform/config.hpp"
#include "boundform/observables.hpp"

namespace boundform {

inline constexpr std::string_view kVersion = "1.0.0";

enum class Subcommand { eigen, evolve, ensemble, perturb, report };

[[nodiscard]] std::string_view to_string(Subcommand s);
[[nodiscard]] std::optional<Subcommand> parse_subcommand(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

struct ScenarioOutcome {
    int exit_code = kExitOk;
    std::string error;                 // module error text, verbatim
    std::vector<std::string> artifacts;
};

/// One single-pulse run of an uncertainty scan.
struct UncertaintyRow {
    double V = 0.0;
    double sigma_t = 0.0;
    double sigma_x = 0.0;
    double center = 0.0;
    double t_end = 0.0;
    DistributionSummary summary;
    std::vector<Peak> peaks;
};

/// Single isolated pulses over the scan grid, each timed by
/// single_pulse_timing and followed by `settle_margin` fm of checked quiet
/// evolution before the final distribution is taken.
[[nodiscard]] std::vector<UncertaintyRow> uncertainty_scan(const SpectralBasis& basis, const ValidityScan& scan,
                                                           const EvolveOptions& opts, double settle_margin,
                                                           bool include_initial);

/// Runs one subcommand, writing CSV artifacts and a JSON manifest under
/// config.output.directory. Errors are reported through the outcome:
/// exit code 2 for configuration errors, 3 for numerical ones.
[[nodiscard]] ScenarioOutcome run_scenario(const RunConfig& config, Subcommand subcommand, std::ostream& log);

} // namespace boundform
