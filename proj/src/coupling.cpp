#include "boundform/coupling.hpp"

#include <fmt/format.h>

#include "boundform/errors.hpp"

namespace boundform {

CouplingMatrix compute_coupling(const SpectralBasis& basis, const SpatialProfile& profile)
{
    profile.validate();
    const double h = basis.spacing();
    if (profile.sigma_x < 4.0 * h)
        throw ConfigError(fmt::format(
            "coupling: sigma_x = {} fm is below four grid spacings ({} fm); raise grid_points",
            profile.sigma_x, 4.0 * h));

    Eigen::VectorXd density(basis.grid.size());
    for (Eigen::Index i = 0; i < basis.grid.size(); ++i)
        density[i] = basis.weights[i] * profile(basis.grid[i]);

    CouplingMatrix out;
    out.profile = profile;
    out.basis_id = basis.id();
    out.m.noalias() = basis.psi.transpose() * (density.asDiagonal() * basis.psi);
    out.m.triangularView<Eigen::StrictlyLower>() = out.m.transpose();
    return out;
}

} // namespace boundform
