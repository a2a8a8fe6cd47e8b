#include "boundform/well.hpp"

#include <cmath>

#include <fmt/format.h>

#include "boundform/errors.hpp"

namespace boundform {

void WellConfig::validate() const
{
    if (!(V0 < 0.0))
        throw ConfigError(fmt::format("well: V0 must be negative (got {})", V0));
    if (!(a > 0.0 && a < L))
        throw ConfigError(fmt::format("well: requires 0 < a < L (got a={}, L={})", a, L));
    if (!(mass > 0.0))
        throw ConfigError(fmt::format("well: mass must be positive (got {})", mass));
    if (n_basis < 1)
        throw ConfigError(fmt::format("well: n_basis must be >= 1 (got {})", n_basis));
}

std::optional<double> static_potential(const WellConfig& cfg, double x)
{
    const double ax = std::abs(x);
    if (ax > cfg.L)
        return std::nullopt;
    return ax <= cfg.a ? cfg.V0 : 0.0;
}

} // namespace boundform
