#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boundform/coupling.hpp"
#include "boundform/eigensolver.hpp"
#include "boundform/ensemble.hpp"
#include "boundform/evolution.hpp"
#include "boundform/observables.hpp"
#include "boundform/perturbation.hpp"
#include "boundform/pulses.hpp"

namespace boundform::csv {

/// Twelve significant digits, the shared number format of every table.
[[nodiscard]] std::string num(double value);

void write_basis(std::ostream& os, const SpectralBasis& basis);
void write_psi(std::ostream& os, const SpectralBasis& basis);
void write_coupling(std::ostream& os, const CouplingMatrix& M);
void write_noise(std::ostream& os, const RealizedStochasticTrain& train);
void write_trajectory(std::ostream& os, const Trajectory& traj);
void write_distribution(std::ostream& os, const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations);
void write_summary(std::ostream& os, const DistributionSummary& summary, double sigma_t);
void write_ensemble(std::ostream& os, const EnsembleResult& result);
void write_amplitudes(std::ostream& os, const Eigen::VectorXd& energies, const PerturbativeResult& result);
void write_validity(std::ostream& os, const std::vector<ValidityPoint>& points);

} // namespace boundform::csv
