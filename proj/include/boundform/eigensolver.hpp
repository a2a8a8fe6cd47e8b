#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "boundform/well.hpp"

namespace boundform {

enum class Parity { symmetric, antisymmetric };

[[nodiscard]] std::string_view to_string(Parity p);

/// One stationary state of the well-in-a-box.
///
/// With s(y) = sin(k1 y)/k1 above threshold (sinh below), the state is
///   region 1 [-L,-a]:  norm_constant * s(x + L)
///   region 2 [-a, a]:  inner_coefficient * cos(k2 x)   (symmetric)
///                      inner_coefficient * sin(k2 x)   (antisymmetric)
///   region 3 [ a, L]:  +/- norm_constant * s(L - x)
/// so norm_constant equals psi'(-L) and is positive by convention.
struct EigenState {
    int n = 0;
    Parity parity = Parity::symmetric;
    double energy = 0.0;      // MeV
    double k1 = 0.0;          // 1/fm; decay constant for E<0, wavenumber for E>0
    double k2 = 0.0;          // 1/fm; wavenumber inside the well
    double norm_constant = 0.0;
    double inner_coefficient = 0.0;
    double a = 0.0;
    double L = 0.0;

    [[nodiscard]] bool is_bound() const { return energy < 0.0; }
};

struct EigenvalueRoot {
    double energy;
    Parity parity;
};

struct SolverOptions {
    double energy_ceiling = 1.0e5;   // MeV; scanning past this is a shortfall
};

/// Pole-free matching function whose zeros are the eigenvalues of the given
/// parity. Continuous in E across the threshold E = 0.
[[nodiscard]] double matching_function(const WellConfig& cfg, double energy, Parity parity);

/// The n_basis lowest eigenvalues, ascending, with parities.
[[nodiscard]] std::vector<EigenvalueRoot> solve_eigenvalues(const WellConfig& cfg,
                                                            const SolverOptions& opts = {});

/// Piecewise state for a solved eigenvalue, normalised on [-L, L].
[[nodiscard]] EigenState build_state(const WellConfig& cfg, double energy, Parity parity, int n = 0);

/// psi(x) in 1/sqrt(fm). Throws DomainError for |x| > L.
[[nodiscard]] double evaluate_psi(const EigenState& state, double x);

/// Vectorised evaluation on sample points (all inside the box).
[[nodiscard]] Eigen::VectorXd sample_psi(const EigenState& state, const Eigen::Ref<const Eigen::VectorXd>& x);

inline constexpr int kDefaultGridPoints = 8001;
inline constexpr int kMinGridPoints = 2001;

/// Truncated eigenbasis sampled on a uniform grid over [-L, L].
struct SpectralBasis {
    WellConfig cfg;
    std::vector<EigenState> states;
    Eigen::VectorXd grid;
    Eigen::VectorXd weights;   // Simpson weights on grid
    Eigen::MatrixXd psi;       // grid.size() x n_basis, column n is psi_n

    [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(states.size()); }
    [[nodiscard]] double spacing() const { return grid[1] - grid[0]; }
    [[nodiscard]] Eigen::VectorXd energies() const;
    /// Short fingerprint of the physical parameters and grid.
    [[nodiscard]] std::string id() const;
};

/// Max |<psi_j|psi_n> - delta_jn| by quadrature on the basis grid.
[[nodiscard]] double orthonormality_defect(const SpectralBasis& basis);

/// Solves, builds and samples the basis; throws NumericalError when the
/// orthonormality defect exceeds 1e-6.
[[nodiscard]] SpectralBasis build_basis(const WellConfig& cfg, int grid_points = kDefaultGridPoints,
                                        const SolverOptions& opts = {});

/// Sign changes of a sampled function, ignoring exact zeros.
[[nodiscard]] int count_sign_changes(const Eigen::Ref<const Eigen::VectorXd>& samples);

} // namespace boundform
