#pragma once

#include <vector>

#include <Eigen/Dense>

#include "boundform/coupling.hpp"
#include "boundform/eigensolver.hpp"
#include "boundform/evolution.hpp"
#include "boundform/pulses.hpp"

namespace boundform {

struct PerturbativeResult {
    Eigen::VectorXcd c1;             // first-order amplitudes at t_final
    Eigen::VectorXd probabilities;   // |c1_n|^2
    double norm_constant_N = 1.0;    // 1/sqrt(sum_n |c1_n|^2)
    int initial_index = 0;
    double t_final = 0.0;
};

/// c_f = delta_fi - (i/hbar) M_fi int_0^t_final g(t') exp(i omega_fi t') dt'.
/// Gaussian trains: composite Simpson with step <= dt. Stochastic trains:
/// exact antiderivative window by window.
[[nodiscard]] PerturbativeResult first_order_amplitudes(const Eigen::VectorXd& energies, const CouplingMatrix& M,
                                                        const PulseSchedule& schedule, int initial_index,
                                                        double t_final, double dt = 0.005);

/// |S_fi|^2 = 2 pi M_fi^2 sigma_t^2 / hbar^2 * exp(-sigma_t^2 omega_fi^2) for one
/// Gaussian pulse in the t -> infinity limit.
[[nodiscard]] double gaussian_transition_probability(double M_fi, double sigma_t, double omega_fi);

struct ValidityScan {
    std::vector<double> V{100.0};
    std::vector<double> sigma_t{1.0};
    std::vector<double> sigma_x{1.2};
    double x0 = 0.0;
    int initial_index = 0;
    double min_center = 50.0;     // pulse timing, see single_pulse_timing
};

struct ValidityPoint {
    double V = 0.0;
    double sigma_t = 0.0;
    double sigma_x = 0.0;
    double N = 0.0;
    bool breakdown = false;           // N outside [0.5, 2]
    double max_ratio = 0.0;           // max over populated states of max(p/e, e/p)
    Eigen::VectorXd perturbative;     // |c1_n|^2
    Eigen::VectorXd exact;            // |c_n|^2 from evolve()
    Eigen::VectorXd ratio;            // perturbative/exact; NaN where exact is negligible or n = initial
};

/// Perturbative vs exact comparison over the full (V, sigma_t, sigma_x) grid.
[[nodiscard]] std::vector<ValidityPoint> validity_report(const SpectralBasis& basis, const ValidityScan& scan,
                                                         const EvolveOptions& opts = {});

/// Relative population threshold below which a state counts as unpopulated.
inline constexpr double kPopulatedFloor = 1e-12;

} // namespace boundform
