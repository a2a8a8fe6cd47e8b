#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "boundform/coupling.hpp"
#include "boundform/evolution.hpp"
#include "boundform/pulses.hpp"

namespace boundform {

/// Member k is realised with seed base.seed + k.
struct EnsembleSpec {
    StochasticSquareTrain base;
    int n_realizations = 200;

    void validate() const;
    [[nodiscard]] std::uint64_t member_seed(int k) const { return base.seed + static_cast<std::uint64_t>(k); }
};

/// Pointwise-in-time Monte-Carlo averages with standard errors.
struct EnsembleResult {
    Eigen::VectorXd times;
    Eigen::MatrixXd mean_occupations;    // samples x n_basis
    Eigen::MatrixXd occupation_stderr;
    Eigen::VectorXd mean_energy;         // MeV
    Eigen::VectorXd energy_stderr;
    Eigen::VectorXd mean_norm_defect;
    int members = 0;
    std::uint64_t base_seed = 0;
};

struct EnsembleOptions {
    EvolveOptions evolve{0.004, 250, 1e-4};
    int threads = 1;    // members evolved concurrently; reduction order is fixed
};

/// Realises, evolves and averages every member. Accumulation runs in member
/// index order whatever the thread count, so results are reproducible.
[[nodiscard]] EnsembleResult run_ensemble(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                                          const EnsembleSpec& spec, int initial_index, double t_end,
                                          const EnsembleOptions& opts = {});

/// The ensemble-averaged mean energy over time.
[[nodiscard]] Eigen::VectorXd mean_energy_curve(const EnsembleResult& result);

/// Least-squares slope of values against times.
[[nodiscard]] double linear_trend_slope(const Eigen::VectorXd& times, const Eigen::VectorXd& values);

} // namespace boundform
