#pragma once

#include <string>

#include <Eigen/Dense>

#include "boundform/eigensolver.hpp"
#include "boundform/pulses.hpp"

namespace boundform {

/// M_jn = <psi_j| V exp(-(x-x0)^2/(2 sigma_x^2)) |psi_n>, in MeV. The full
/// time-dependent matrix element is g(t) * M_jn.
struct CouplingMatrix {
    Eigen::MatrixXd m;
    SpatialProfile profile;
    std::string basis_id;

    [[nodiscard]] Eigen::Index size() const { return m.rows(); }
};

/// Simpson quadrature on the basis grid. The result is exactly symmetric.
/// Throws ConfigError when sigma_x is below four grid spacings.
[[nodiscard]] CouplingMatrix compute_coupling(const SpectralBasis& basis, const SpatialProfile& profile);

} // namespace boundform
