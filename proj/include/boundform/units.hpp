#pragma once

// Natural units: energies in MeV, lengths and times in fm. hbar enters only
// through hbar_c, so a phase E*t/hbar is written E*t/hbar_c.

namespace boundform {

struct UnitSystem {
    double hbar_c = 197.327;              // MeV fm
    double proton_mass_energy = 938.272;  // MeV
};

inline constexpr UnitSystem kUnits{};
inline constexpr double kHbarC = kUnits.hbar_c;
inline constexpr double kProtonMass = kUnits.proton_mass_energy;

} // namespace boundform
