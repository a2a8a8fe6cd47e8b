#include "boundform/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "boundform/errors.hpp"
#include "boundform/numerics.hpp"

namespace boundform {

namespace {

struct Wavenumbers {
    double k1;
    double k2;
};

Wavenumbers wavenumbers(const WellConfig& cfg, double energy)
{
    const double c = cfg.k_squared_per_MeV();
    return {std::sqrt(c * std::abs(energy)), std::sqrt(std::max(0.0, c * (energy - cfg.V0)))};
}

// s(y) = sin(k y)/k (oscillating) or sinh(k y)/k (bound), with the k -> 0 limit y.
double outer_s(double k, double y, bool bound)
{
    const double ky = k * y;
    if (std::abs(ky) < 1e-4) {
        const double sq = ky * ky;
        return bound ? y * (1.0 + sq / 6.0) : y * (1.0 - sq / 6.0);
    }
    return bound ? std::sinh(ky) / k : std::sin(ky) / k;
}

double outer_c(double k, double y, bool bound)
{
    return bound ? std::cosh(k * y) : std::cos(k * y);
}

double sinc(double z)
{
    return std::abs(z) < 1e-4 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
}

} // namespace

std::string_view to_string(Parity p)
{
    return p == Parity::symmetric ? "symmetric" : "antisymmetric";
}

double matching_function(const WellConfig& cfg, double energy, Parity parity)
{
    const auto [k1, k2] = wavenumbers(cfg, energy);
    const double y = cfg.L - cfg.a;
    const bool bound = energy < 0.0;
    // Below threshold divide through by cosh(k1 y) so nothing overflows.
    double S, C;
    if (bound) {
        const double ky = k1 * y;
        S = ky < 1e-4 ? y * (1.0 - ky * ky / 3.0) : std::tanh(ky) / k1;
        C = 1.0;
    } else {
        S = outer_s(k1, y, false);
        C = outer_c(k1, y, false);
    }
    const double ka = k2 * cfg.a;
    if (parity == Parity::symmetric)
        return k2 * std::sin(ka) * S - C * std::cos(ka);
    // Divided by k2 to drop the trivial zero at E = V0.
    return std::cos(ka) * S + C * cfg.a * sinc(ka);
}

std::vector<EigenvalueRoot> solve_eigenvalues(const WellConfig& cfg, const SolverOptions& opts)
{
    cfg.validate();
    const double c = cfg.k_squared_per_MeV();
    const auto wanted = static_cast<std::size_t>(cfg.n_basis);
    std::vector<EigenvalueRoot> roots;

    auto scan = [&](auto energy_of, double lo, double hi, double step, bool stop_when_full) {
        double q0 = lo;
        double f0s = matching_function(cfg, energy_of(q0), Parity::symmetric);
        double f0a = matching_function(cfg, energy_of(q0), Parity::antisymmetric);
        while (q0 < hi) {
            const double q1 = std::min(hi, q0 + step);
            const double e1 = energy_of(q1);
            if (e1 > opts.energy_ceiling)
                return;
            const double f1s = matching_function(cfg, e1, Parity::symmetric);
            const double f1a = matching_function(cfg, e1, Parity::antisymmetric);
            const auto solve = [&](Parity p, double fa, double fb) {
                if (fb == 0.0) {
                    roots.push_back({energy_of(q1), p});
                    return;
                }
                if ((fa < 0) == (fb < 0) || fa == 0.0)
                    return;
                const double q = brent_root(
                    [&](double qq) { return matching_function(cfg, energy_of(qq), p); }, q0, q1);
                roots.push_back({energy_of(q), p});
            };
            solve(Parity::symmetric, f0s, f1s);
            solve(Parity::antisymmetric, f0a, f1a);
            q0 = q1;
            f0s = f1s;
            f0a = f1a;
            if (stop_when_full && roots.size() >= wanted)
                return;
        }
    };

    // Bound states: scan the decay constant from the well bottom up to threshold.
    const double kappa_max = std::sqrt(c * -cfg.V0);
    const double bound_step = std::min(std::numbers::pi / (8.0 * cfg.L), kappa_max / 256.0);
    {
        // Scan in u = kappa_max - kappa so energies increase along the scan.
        const double lo = kappa_max * 1e-12;
        scan([&](double u) { const double kap = kappa_max - u; return -kap * kap / c; }, lo,
             kappa_max, bound_step, false);
    }

    // Box states: roots are spaced roughly pi/L apart in k1.
    const double step = std::numbers::pi / (8.0 * cfg.L);
    const double k_ceiling = std::sqrt(c * opts.energy_ceiling);
    scan([&](double k) { return k * k / c; }, 0.0, k_ceiling, step, true);

    std::sort(roots.begin(), roots.end(),
              [](const EigenvalueRoot& l, const EigenvalueRoot& r) { return l.energy < r.energy; });
    if (roots.size() < wanted)
        throw ConfigError(fmt::format(
            "eigensolver: found only {} of {} states below the {} MeV ceiling", roots.size(),
            wanted, opts.energy_ceiling));
    roots.resize(wanted);
    return roots;
}

EigenState build_state(const WellConfig& cfg, double energy, Parity parity, int n)
{
    const auto [k1, k2] = wavenumbers(cfg, energy);
    const bool bound = energy < 0.0;
    const double y = cfg.L - cfg.a;

    // Residual relative to the size of the individual terms.
    const double scale = parity == Parity::symmetric ? std::max(1.0, k2 * y) : std::max(y, cfg.a);
    const double residual = std::abs(matching_function(cfg, energy, parity)) / scale;
    if (residual > 1e-8)
        throw ContractViolation(fmt::format(
            "build_state: E = {} MeV is not a {} eigenvalue (residual {:.3g})", energy,
            to_string(parity), residual));

    EigenState st;
    st.n = n;
    st.parity = parity;
    st.energy = energy;
    st.k1 = k1;
    st.k2 = k2;
    st.a = cfg.a;
    st.L = cfg.L;

    // Match region 2 to region 1 at x = -a, using whichever of value or slope
    // matching has the better-conditioned denominator.
    const double s_edge = outer_s(k1, y, bound);
    const double c_edge = outer_c(k1, y, bound);
    const double ka = k2 * cfg.a;
    if (parity == Parity::symmetric) {
        const double by_value = std::cos(ka);
        const double by_slope = k2 * std::sin(ka);
        st.inner_coefficient = std::abs(by_value) * std::max(1.0, k2 * y)
                                       >= std::abs(by_slope) * y
                                   ? s_edge / by_value
                                   : c_edge / by_slope;
    } else {
        const double by_value = -std::sin(ka);
        const double by_slope = k2 * std::cos(ka);
        st.inner_coefficient = std::abs(by_value) * std::max(1.0, k2 * y)
                                       >= std::abs(by_slope) * y
                                   ? s_edge / by_value
                                   : c_edge / by_slope;
    }
    st.norm_constant = 1.0;

    // psi^2 is even, so integrate [0, a] and [a, L] and double.
    const auto inner = [&](double x) { const double v = evaluate_psi(st, x); return v * v; };
    const long inner_panels = std::max(200L, static_cast<long>(std::ceil(64.0 * k2 * cfg.a)));
    const long outer_panels = std::max(2000L, static_cast<long>(std::ceil(64.0 * k1 * y)));
    const double norm2 = 2.0 * (simpson_integrate(inner, 0.0, cfg.a, inner_panels)
                                + simpson_integrate(inner, cfg.a, cfg.L, outer_panels));
    if (!(norm2 > 0.0) || !std::isfinite(norm2))
        throw NumericalError(fmt::format("build_state: cannot normalise state at E = {} MeV", energy));
    const double scale_factor = 1.0 / std::sqrt(norm2);
    st.norm_constant *= scale_factor;
    st.inner_coefficient *= scale_factor;
    return st;
}

double evaluate_psi(const EigenState& st, double x)
{
    const double ax = std::abs(x);
    if (ax > st.L * (1.0 + 1e-12))
        throw DomainError(fmt::format("evaluate_psi: x = {} outside the box [-{}, {}]", x, st.L, st.L));
    const bool symmetric = st.parity == Parity::symmetric;
    if (ax <= st.a)
        return st.inner_coefficient * (symmetric ? std::cos(st.k2 * x) : std::sin(st.k2 * x));
    const double y = std::max(0.0, st.L - ax);
    const double v = st.norm_constant * outer_s(st.k1, y, st.is_bound());
    return (x < 0.0 || symmetric) ? v : -v;
}

Eigen::VectorXd sample_psi(const EigenState& state, const Eigen::Ref<const Eigen::VectorXd>& x)
{
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out[i] = evaluate_psi(state, x[i]);
    return out;
}

Eigen::VectorXd SpectralBasis::energies() const
{
    Eigen::VectorXd e(size());
    for (Eigen::Index i = 0; i < size(); ++i)
        e[i] = states[static_cast<std::size_t>(i)].energy;
    return e;
}

std::string SpectralBasis::id() const
{
    return fmt::format("V0={:.12g};a={:.12g};L={:.12g};m={:.12g};n={};grid={}", cfg.V0, cfg.a,
                       cfg.L, cfg.mass, cfg.n_basis, grid.size());
}

double orthonormality_defect(const SpectralBasis& basis)
{
    const Eigen::MatrixXd overlap = basis.psi.transpose() * basis.weights.asDiagonal() * basis.psi;
    return (overlap - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff();
}

SpectralBasis build_basis(const WellConfig& cfg, int grid_points, const SolverOptions& opts)
{
    if (grid_points < kMinGridPoints)
        throw ConfigError(fmt::format("build_basis: grid_points must be >= {} (got {})",
                                      kMinGridPoints, grid_points));
    const auto roots = solve_eigenvalues(cfg, opts);

    SpectralBasis basis;
    basis.cfg = cfg;
    basis.grid = Eigen::VectorXd::LinSpaced(grid_points, -cfg.L, cfg.L);
    basis.weights = simpson_weights(grid_points, basis.spacing());
    basis.psi.resize(grid_points, cfg.n_basis);
    basis.states.reserve(roots.size());
    for (std::size_t n = 0; n < roots.size(); ++n) {
        basis.states.push_back(build_state(cfg, roots[n].energy, roots[n].parity, static_cast<int>(n)));
        basis.psi.col(static_cast<Eigen::Index>(n)) = sample_psi(basis.states.back(), basis.grid);
    }

    const double defect = orthonormality_defect(basis);
    if (defect > 1e-6)
        throw NumericalError(fmt::format(
            "build_basis: orthonormality defect {:.3g} exceeds 1e-6; refine the grid", defect));
    return basis;
}

int count_sign_changes(const Eigen::Ref<const Eigen::VectorXd>& samples)
{
    const double floor = 1e-10 * samples.cwiseAbs().maxCoeff();
    int changes = 0;
    int last = 0;
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double v = samples[i];
        if (std::abs(v) <= floor)
            continue;
        const int sign = v > 0 ? 1 : -1;
        if (last != 0 && sign != last)
            ++changes;
        last = sign;
    }
    return changes;
}

} // namespace boundform
