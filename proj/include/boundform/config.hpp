#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "boundform/ensemble.hpp"
#include "boundform/evolution.hpp"
#include "boundform/perturbation.hpp"
#include "boundform/pulses.hpp"
#include "boundform/well.hpp"

namespace boundform {

enum class ScheduleType { gaussian, stochastic };

struct RunSettings {
    int initial_index = 0;
    double t_end = 200.0;          // fm
    double dt = 0.005;             // fm
    int sample_every = 100;
    double norm_tolerance = 1e-4;
    double settle_margin = 10.0;   // fm of quiet evolution checked before the final distribution
    bool include_initial = true;   // keep the initial state in the distribution statistics
};

struct OutputSettings {
    std::string directory = "out";
    std::string prefix = "run";
    bool write_psi = false;
    bool write_coupling = false;
    bool write_amplitudes = false;
};

/// Everything one batch run needs. Defaults reproduce the deuteron set-up
/// with a single pulse (V = 100 MeV, sigma_t = 1 fm, sigma_x = 1.2 fm, t0 = 50 fm).
struct RunConfig {
    WellConfig well;
    int grid_points = kDefaultGridPoints;
    ScheduleType schedule_type = ScheduleType::gaussian;
    GaussianTrain gaussian;
    StochasticSquareTrain stochastic;
    RunSettings run;
    EnsembleSpec ensemble{StochasticSquareTrain{}, 200};
    int threads = 1;
    ValidityScan scan;
    OutputSettings output;
    std::string source;            // text the config was parsed from

    /// Applies every module precondition; throws ConfigError naming the violation.
    void validate() const;
    [[nodiscard]] PulseSchedule schedule() const;
    [[nodiscard]] EvolveOptions evolve_options() const;
};

/// Parses the INI-style run configuration. Sections: well, schedule, run,
/// ensemble, scan, output. Unknown sections or keys are rejected; syntax
/// errors report the line number.
[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// FNV-1a 64-bit hash, used to fingerprint the config text.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view text);

} // namespace boundform
