#pragma once

#include <functional>

#include <Eigen/Dense>

#include "boundform/coupling.hpp"
#include "boundform/eigensolver.hpp"
#include "boundform/pulses.hpp"

namespace boundform {

/// Interaction-picture amplitudes c~_n at time t; c_n = c~_n exp(-i E_n t / hbar).
struct StateVector {
    Eigen::VectorXcd c_tilde;
    double t = 0.0;
};

/// Sampled history of one evolution.
struct Trajectory {
    Eigen::VectorXd times;           // fm
    Eigen::MatrixXd occupations;     // samples x n_basis, |c_n|^2
    Eigen::VectorXd norm_defect;     // 1 - sum |c_n|^2
    Eigen::VectorXd mean_energy;     // MeV
    StateVector final_state;

    [[nodiscard]] Eigen::Index samples() const { return times.size(); }
};

struct EvolveOptions {
    double dt = 0.005;               // fm
    int sample_every = 100;
    double norm_tolerance = 1e-4;    // above this an integration-quality error is raised
};

/// Transition frequencies omega_jn = (E_j - E_n)/hbar in 1/fm.
[[nodiscard]] Eigen::MatrixXd transition_frequencies(const Eigen::VectorXd& energies);

/// dc~_j/dt = -(i/hbar) g sum_n M_jn exp(i omega_jn t) c~_n, evaluated as
/// rotate, dense real mat-vec, rotate back.
[[nodiscard]] Eigen::VectorXcd rhs(const Eigen::VectorXcd& c_tilde, double t, const CouplingMatrix& M,
                                   double g, const Eigen::VectorXd& energies);

/// Classic RK4 from `start` to `t_end` with fixed step `dt` (negative dt
/// integrates backwards). `observer(step, state)` runs after every step.
using StepObserver = std::function<void(long, const StateVector&)>;
[[nodiscard]] StateVector propagate(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                                    const PulseSchedule& schedule, StateVector start, double t_end,
                                    double dt, const StepObserver& observer = {});

/// RK4 evolution from c~(0) = e_{initial_index}. Throws NumericalError when
/// a sampled norm defect exceeds opts.norm_tolerance.
[[nodiscard]] Trajectory evolve(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                                const PulseSchedule& schedule, int initial_index, double t_end,
                                const EvolveOptions& opts = {});
[[nodiscard]] Trajectory evolve(const SpectralBasis& basis, const CouplingMatrix& M,
                                const PulseSchedule& schedule, int initial_index, double t_end,
                                const EvolveOptions& opts = {});

enum class OracleScheme {
    midpoint,          // H frozen at the step midpoint; second order
    magnus4,           // two-exponential commutator-free Magnus; fourth order
};

struct OracleOptions {
    double dt = 0.01;
    int sample_every = 1;
    int substeps = 1;    // exponential steps per dt
    OracleScheme scheme = OracleScheme::midpoint;
};

/// Schroedinger-picture propagation by products of exact exponentials of
/// frozen Hamiltonians diag(E) + g M; unitary per step. Samples line up
/// with evolve() when dt and sample_every agree.
[[nodiscard]] Trajectory evolve_oracle(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                                       const PulseSchedule& schedule, int initial_index,
                                       double t_end, const OracleOptions& opts = {});

/// Number of steps of size dt covering t_end; throws ConfigError when t_end
/// is not a multiple of dt, or when dt does not tile the stochastic windows.
[[nodiscard]] long step_count(const PulseSchedule& schedule, double t_end, double dt);

} // namespace boundform
