#include "boundform/evolution.hpp"

#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "boundform/errors.hpp"
#include "boundform/numerics.hpp"
#include "boundform/observables.hpp"
#include "boundform/units.hpp"

namespace boundform {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

Eigen::VectorXcd free_phase(const Eigen::VectorXd& energies, double t)
{
    const double s = -t / kHbarC;
    Eigen::VectorXcd out(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i)
        out[i] = std::polar(1.0, s * energies[i]);
    return out;
}

// Real symmetric M times a complex vector, as one (2 x n) * (n x n) product.
Eigen::VectorXcd real_symmetric_times(const Eigen::MatrixXd& M, const Eigen::VectorXcd& u)
{
    const Eigen::Index n = u.size();
    Eigen::VectorXcd out(n);
    Eigen::Map<const Eigen::Matrix<double, 2, Eigen::Dynamic>> in(reinterpret_cast<const double*>(u.data()), 2, n);
    Eigen::Map<Eigen::Matrix<double, 2, Eigen::Dynamic>> res(reinterpret_cast<double*>(out.data()), 2, n);
    res.noalias() = in * M;
    return out;
}

bool is_stochastic(const PulseSchedule& schedule)
{
    return std::holds_alternative<RealizedStochasticTrain>(schedule);
}

void check_index(int initial_index, Eigen::Index n)
{
    if (initial_index < 0 || initial_index >= n)
        throw ConfigError(fmt::format("evolve: initial_index {} outside [0, {})", initial_index, n));
}

struct Sampler {
    const Eigen::VectorXd& energies;
    Trajectory traj;
    double tolerance;
    Eigen::Index next = 0;

    Sampler(const Eigen::VectorXd& e, Eigen::Index count, double tol) : energies(e), tolerance(tol)
    {
        traj.times.resize(count);
        traj.occupations.resize(count, e.size());
        traj.norm_defect.resize(count);
        traj.mean_energy.resize(count);
    }

    void record(double t, const Eigen::VectorXd& occ)
    {
        const double defect = 1.0 - occ.sum();
        traj.times[next] = t;
        traj.occupations.row(next) = occ.transpose();
        traj.norm_defect[next] = defect;
        traj.mean_energy[next] = mean_energy(energies, occ);
        ++next;
        if (std::abs(defect) > tolerance)
            throw NumericalError(fmt::format(
                "evolve: norm defect {:.3g} at t = {} fm exceeds {:.1g}; reduce dt", defect, t, tolerance));
    }
};

Eigen::Index sample_count(long steps, int every)
{
    return static_cast<Eigen::Index>(steps / every + 1 + (steps % every != 0 ? 1 : 0));
}

} // namespace

Eigen::MatrixXd transition_frequencies(const Eigen::VectorXd& energies)
{
    const Eigen::Index n = energies.size();
    return (energies.replicate(1, n) - energies.transpose().replicate(n, 1)) / kHbarC;
}

Eigen::VectorXcd rhs(const Eigen::VectorXcd& c_tilde, double t, const CouplingMatrix& M, double g,
                     const Eigen::VectorXd& energies)
{
    if (g == 0.0)
        return Eigen::VectorXcd::Zero(c_tilde.size());
    const Eigen::VectorXcd phase = free_phase(energies, t);
    const Eigen::VectorXcd v = real_symmetric_times(M.m, phase.cwiseProduct(c_tilde));
    return (-kI * (g / kHbarC)) * phase.conjugate().cwiseProduct(v);
}

long step_count(const PulseSchedule& schedule, double t_end, double dt)
{
    if (!(dt != 0.0) || !std::isfinite(dt))
        throw ConfigError("evolve: dt must be non-zero");
    const double ratio = t_end / dt;
    const long steps = std::lround(ratio);
    if (steps < 0 || std::abs(ratio - static_cast<double>(steps)) > 1e-6)
        throw ConfigError(fmt::format("evolve: t_end = {} is not a whole number of dt = {} steps", t_end, dt));
    if (const auto* noise = std::get_if<RealizedStochasticTrain>(&schedule)) {
        const double per_window = noise->spec.window() / std::abs(dt);
        if (std::abs(per_window - std::round(per_window)) > 1e-6 || std::round(per_window) < 1)
            throw ConfigError(fmt::format(
                "evolve: dt = {} must divide the noise window {} fm", std::abs(dt), noise->spec.window()));
    }
    return steps;
}

StateVector propagate(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                      const PulseSchedule& schedule, StateVector start, double t_end, double dt,
                      const StepObserver& observer)
{
    const long steps = step_count(schedule, t_end - start.t, dt);
    const bool piecewise = is_stochastic(schedule);
    const double t0 = start.t;
    StateVector state = std::move(start);
    for (long k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        // Window amplitudes are held over a whole step, which never straddles a window edge.
        const double held = piecewise ? time_signal(schedule, t + 0.5 * dt) : 0.0;
        auto f = [&](double tau, const Eigen::VectorXcd& c) {
            return rhs(c, tau, M, piecewise ? held : time_signal(schedule, tau), energies);
        };
        state.c_tilde = rk4_step(f, t, state.c_tilde, dt);
        state.t = t0 + static_cast<double>(k + 1) * dt;
        if (observer)
            observer(k + 1, state);
    }
    return state;
}

Trajectory evolve(const Eigen::VectorXd& energies, const CouplingMatrix& M, const PulseSchedule& schedule,
                  int initial_index, double t_end, const EvolveOptions& opts)
{
    check_index(initial_index, energies.size());
    if (!(opts.dt > 0.0) || !(t_end > 0.0))
        throw ConfigError("evolve: dt and t_end must be positive");
    if (opts.sample_every < 1)
        throw ConfigError("evolve: sample_every must be >= 1");
    if (M.size() != energies.size())
        throw ContractViolation("evolve: coupling matrix and basis sizes differ");

    const long steps = step_count(schedule, t_end, opts.dt);
    Sampler sampler(energies, sample_count(steps, opts.sample_every), opts.norm_tolerance);

    StateVector start{Eigen::VectorXcd::Zero(energies.size()), 0.0};
    start.c_tilde[initial_index] = 1.0;
    sampler.record(0.0, start.c_tilde.cwiseAbs2());

    auto observer = [&](long k, const StateVector& s) {
        if (k % opts.sample_every == 0 || k == steps)
            sampler.record(s.t, s.c_tilde.cwiseAbs2());
    };
    Trajectory traj;
    StateVector final_state = propagate(energies, M, schedule, std::move(start), t_end, opts.dt, observer);
    traj = std::move(sampler.traj);
    traj.final_state = std::move(final_state);
    return traj;
}

Trajectory evolve(const SpectralBasis& basis, const CouplingMatrix& M, const PulseSchedule& schedule,
                  int initial_index, double t_end, const EvolveOptions& opts)
{
    return evolve(basis.energies(), M, schedule, initial_index, t_end, opts);
}

Trajectory evolve_oracle(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                         const PulseSchedule& schedule, int initial_index, double t_end,
                         const OracleOptions& opts)
{
    check_index(initial_index, energies.size());
    if (!(opts.dt > 0.0) || !(t_end > 0.0) || opts.substeps < 1 || opts.sample_every < 1)
        throw ConfigError("evolve_oracle: dt, t_end, substeps and sample_every must be positive");

    const long steps = step_count(schedule, t_end, opts.dt);
    const double h = opts.dt / opts.substeps;
    const Eigen::Index n = energies.size();
    const bool piecewise = is_stochastic(schedule);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(n);
    auto exp_step = [&](const Eigen::MatrixXd& H, double tau, const Eigen::VectorXcd& c) {
        solver.compute(H);
        Eigen::VectorXcd rotated = solver.eigenvectors().transpose().cast<Complex>() * c;
        for (Eigen::Index i = 0; i < n; ++i)
            rotated[i] *= std::polar(1.0, -solver.eigenvalues()[i] * tau / kHbarC);
        return Eigen::VectorXcd(solver.eigenvectors().cast<Complex>() * rotated);
    };
    const Eigen::MatrixXd H0 = energies.asDiagonal();
    auto hamiltonian = [&](double g) -> Eigen::MatrixXd { return H0 + g * M.m; };

    Sampler sampler(energies, sample_count(steps, opts.sample_every), 1.0);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
    c[initial_index] = 1.0;
    sampler.record(0.0, c.cwiseAbs2());

    const double root3 = std::sqrt(3.0);
    const double node1 = 0.5 - root3 / 6.0, node2 = 0.5 + root3 / 6.0;
    const double alpha1 = (3.0 - 2.0 * root3) / 12.0, alpha2 = (3.0 + 2.0 * root3) / 12.0;

    for (long k = 0; k < steps; ++k) {
        const double t_step = static_cast<double>(k) * opts.dt;
        const double held = piecewise ? time_signal(schedule, t_step + 0.5 * opts.dt) : 0.0;
        auto g = [&](double tau) { return piecewise ? held : time_signal(schedule, tau); };
        for (int s = 0; s < opts.substeps; ++s) {
            const double t = t_step + s * h;
            if (opts.scheme == OracleScheme::midpoint) {
                c = exp_step(hamiltonian(g(t + 0.5 * h)), h, c);
            } else {
                const Eigen::MatrixXd H1 = hamiltonian(g(t + node1 * h));
                const Eigen::MatrixXd H2 = hamiltonian(g(t + node2 * h));
                c = exp_step(alpha2 * H1 + alpha1 * H2, h, c);
                c = exp_step(alpha1 * H1 + alpha2 * H2, h, c);
            }
        }
        const long done = k + 1;
        if (done % opts.sample_every == 0 || done == steps)
            sampler.record(static_cast<double>(done) * opts.dt, c.cwiseAbs2());
    }

    Trajectory traj = std::move(sampler.traj);
    const double t_final = static_cast<double>(steps) * opts.dt;
    // Back to the interaction picture for the final state.
    traj.final_state = {free_phase(energies, t_final).conjugate().cwiseProduct(c), t_final};
    return traj;
}

} // namespace boundform
