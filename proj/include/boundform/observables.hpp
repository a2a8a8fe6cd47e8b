#pragma once

#include <vector>

#include <Eigen/Dense>

#include "boundform/eigensolver.hpp"
#include "boundform/evolution.hpp"

namespace boundform {

/// sum E_n w_n / sum w_n. Throws DomainError for all-zero or negative weights.
[[nodiscard]] double mean_energy(const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations);
[[nodiscard]] double mean_energy(const SpectralBasis& basis, const Eigen::VectorXd& occupations);

/// Standard deviation of the energy under the normalised weights.
[[nodiscard]] double energy_spread(const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations);
[[nodiscard]] double energy_spread(const SpectralBasis& basis, const Eigen::VectorXd& occupations);

/// delta_E * sigma_t / (hbar c); the energy-time bound is 1/2.
[[nodiscard]] double uncertainty_product(double delta_E, double sigma_t);

struct DistributionSummary {
    Eigen::VectorXd occupations;     // |c_n(t_final)|^2; initial entry zeroed unless included
    bool includes_initial = true;
    int initial_index = 0;
    double t_final = 0.0;
    double mean_energy = 0.0;        // MeV
    double energy_std = 0.0;         // MeV
    double energy_spread_2x = 0.0;   // MeV, twice the std
    double uncertainty_product = 0.0;     // energy_std * sigma_t / hbar c
    double uncertainty_product_2x = 0.0;  // energy_spread_2x * sigma_t / hbar c
    double max_drift = 0.0;          // largest occupation change over the settle window
};

/// Final-time distribution after checking the occupations have settled:
/// no occupation may move by more than `drift_tolerance` over the last
/// `settle_margin` fm (NumericalError otherwise). sigma_t <= 0 leaves the
/// uncertainty products at zero.
[[nodiscard]] DistributionSummary final_distribution(const Eigen::VectorXd& energies, const Trajectory& traj,
                                                     double settle_margin, int initial_index,
                                                     bool include_initial, double sigma_t,
                                                     double drift_tolerance = 1e-6);

/// Largest range of any occupation over samples with t >= t_from.
[[nodiscard]] double max_drift_after(const Trajectory& traj, double t_from);

/// First sampled time at which |occ_n(t) - occ_n(0)| exceeds `fraction` of
/// the total change occ_n(t_final) - occ_n(0). NaN when nothing changed.
[[nodiscard]] double first_response_time(const Trajectory& traj, int state, double fraction = 0.01);

struct Peak {
    int index = 0;
    double energy = 0.0;
    double height = 0.0;
    double prominence = 0.0;
    double fwhm = 0.0;    // MeV, linear interpolation between populated states
};

/// Local maxima of a final distribution in energy order, keeping those whose
/// prominence reaches `prominence_fraction` of the global maximum. States
/// with (near) zero occupation, such as parity-forbidden ones, are skipped.
[[nodiscard]] std::vector<Peak> find_peaks(const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations,
                                           double prominence_fraction = 0.1);

} // namespace boundform
