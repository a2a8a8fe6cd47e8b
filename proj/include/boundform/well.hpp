#pragma once

#include <optional>

#include "boundform/units.hpp"

namespace boundform {

/// Square well of depth V0 and half-width a, centred in a hard-walled box
/// [-L, L]. V0 is the (negative) potential value inside the well.
struct WellConfig {
    double V0 = -18.0;                  // MeV
    double a = 0.6;                     // fm
    double L = 100.0;                   // fm
    double mass = kProtonMass / 2.0;    // reduced mass, MeV
    int n_basis = 110;

    /// Throws ConfigError naming the violated invariant.
    void validate() const;

    /// 2m/(hbar c)^2, the factor converting energy to squared wavenumber.
    [[nodiscard]] double k_squared_per_MeV() const { return 2.0 * mass / (kHbarC * kHbarC); }
};

/// Deuteron-like defaults: one bound state near -2.3 MeV.
[[nodiscard]] inline WellConfig deuteron_well() { return WellConfig{}; }

/// Static potential in MeV. An empty optional marks the infinite wall
/// outside the box; callers treat that as a boundary, never as a number.
[[nodiscard]] std::optional<double> static_potential(const WellConfig& cfg, double x);

} // namespace boundform
