#include "boundform/perturbation.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "boundform/errors.hpp"
#include "boundform/units.hpp"

namespace boundform {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

// int_0^t_final g(t) exp(i omega_f t) dt for every f.
Eigen::VectorXcd time_integrals(const GaussianTrain& train, const Eigen::VectorXd& omega, double t_final, double dt)
{
    long panels = static_cast<long>(std::ceil(t_final / dt));
    if (panels % 2)
        ++panels;
    panels = std::max(panels, 2L);
    const double h = t_final / static_cast<double>(panels);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(omega.size());
    for (long k = 0; k <= panels; ++k) {
        const double t = h * static_cast<double>(k);
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        const double g = time_signal(train, t);
        if (g < 1e-300)
            continue;
        for (Eigen::Index f = 0; f < omega.size(); ++f)
            acc[f] += (w * g) * std::polar(1.0, omega[f] * t);
    }
    return acc * (h / 3.0);
}

Eigen::VectorXcd time_integrals(const RealizedStochasticTrain& train, const Eigen::VectorXd& omega, double t_final)
{
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(omega.size());
    const double width = train.spec.window();
    for (std::size_t j = 0; j < train.amplitudes.size(); ++j) {
        const double lo = static_cast<double>(j) * width;
        if (lo >= t_final)
            break;
        const double hi = std::min(t_final, lo + width);
        const double amp = train.amplitudes[j];
        for (Eigen::Index f = 0; f < omega.size(); ++f) {
            const double w = omega[f];
            if (std::abs(w) * (hi - lo) < 1e-8) {
                acc[f] += amp * (hi - lo) * std::polar(1.0, w * 0.5 * (lo + hi));
            } else {
                acc[f] += amp * (std::polar(1.0, w * hi) - std::polar(1.0, w * lo)) / (kI * w);
            }
        }
    }
    return acc;
}

} // namespace

PerturbativeResult first_order_amplitudes(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                                          const PulseSchedule& schedule, int initial_index, double t_final,
                                          double dt)
{
    const Eigen::Index n = energies.size();
    if (initial_index < 0 || initial_index >= n)
        throw ConfigError(fmt::format("perturb: initial_index {} outside [0, {})", initial_index, n));
    if (!(t_final > 0.0) || !(dt > 0.0))
        throw ConfigError("perturb: t_final and dt must be positive");
    if (M.size() != n)
        throw ContractViolation("perturb: coupling matrix and basis sizes differ");

    const Eigen::VectorXd omega = (energies.array() - energies[initial_index]).matrix() / kHbarC;
    const Eigen::VectorXcd integrals = std::visit(
        [&](const auto& s) -> Eigen::VectorXcd {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, GaussianTrain>)
                return time_integrals(s, omega, t_final, dt);
            else
                return time_integrals(s, omega, t_final);
        },
        schedule);

    PerturbativeResult out;
    out.initial_index = initial_index;
    out.t_final = t_final;
    out.c1 = (-kI / kHbarC) * M.m.col(initial_index).cast<Complex>().cwiseProduct(integrals);
    out.c1[initial_index] += 1.0;
    out.probabilities = out.c1.cwiseAbs2();
    out.norm_constant_N = 1.0 / std::sqrt(out.probabilities.sum());
    return out;
}

double gaussian_transition_probability(double M_fi, double sigma_t, double omega_fi)
{
    const double amp = M_fi * sigma_t / kHbarC;
    return 2.0 * std::numbers::pi * amp * amp * std::exp(-sigma_t * sigma_t * omega_fi * omega_fi);
}

std::vector<ValidityPoint> validity_report(const SpectralBasis& basis, const ValidityScan& scan,
                                           const EvolveOptions& opts)
{
    const Eigen::VectorXd energies = basis.energies();
    const int init = scan.initial_index;
    std::vector<ValidityPoint> rows;
    for (double sx : scan.sigma_x) {
        // Coupling is linear in V: compute once per width.
        const CouplingMatrix unit = compute_coupling(basis, SpatialProfile{1.0, scan.x0, sx});
        for (double V : scan.V) {
            CouplingMatrix M = unit;
            M.m *= V;
            M.profile.V = V;
            for (double st : scan.sigma_t) {
                const PulseTiming timing = single_pulse_timing(st, opts.dt, scan.min_center);
                GaussianTrain train{M.profile, st, {timing.center}};
                train.validate();
                const PulseSchedule schedule = train;

                ValidityPoint row;
                row.V = V;
                row.sigma_t = st;
                row.sigma_x = sx;
                const PerturbativeResult pert = first_order_amplitudes(energies, M, schedule, init, timing.t_end, opts.dt);
                const Trajectory exact = evolve(energies, M, schedule, init, timing.t_end, opts);
                row.N = pert.norm_constant_N;
                row.breakdown = row.N > 2.0 || row.N < 0.5;
                row.perturbative = pert.probabilities;
                row.exact = exact.occupations.row(exact.samples() - 1).transpose();
                row.ratio.setConstant(basis.size(), std::numeric_limits<double>::quiet_NaN());

                double floor = 0.0;
                for (Eigen::Index f = 0; f < basis.size(); ++f)
                    if (f != init)
                        floor = std::max(floor, row.exact[f]);
                floor *= kPopulatedFloor;
                for (Eigen::Index f = 0; f < basis.size(); ++f) {
                    if (f == init || !(row.exact[f] > floor) || floor == 0.0)
                        continue;
                    const double r = row.perturbative[f] / row.exact[f];
                    row.ratio[f] = r;
                    if (r > 0.0)
                        row.max_ratio = std::max(row.max_ratio, std::max(r, 1.0 / r));
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

} // namespace boundform
