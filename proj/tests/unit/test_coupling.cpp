#include <doctest.h>

#include <cmath>

#include "boundform/coupling.hpp"
#include "boundform/errors.hpp"
#include "boundform/numerics.hpp"

using namespace boundform;

namespace {

const SpectralBasis& basis()
{
    static const SpectralBasis b = build_basis(deuteron_well());
    return b;
}

// <psi_j|profile|psi_n> on ten times the grid resolution, split at the well edges.
double refined_element(const SpatialProfile& p, int j, int n)
{
    const auto& sj = basis().states[j];
    const auto& sn = basis().states[n];
    auto f = [&](double x) { return evaluate_psi(sj, x) * p(x) * evaluate_psi(sn, x); };
    const double L = sj.L, a = sj.a;
    const double h = basis().spacing() / 10.0;
    auto panels = [&](double lo, double hi) { return static_cast<long>(std::ceil((hi - lo) / h)); };
    return simpson_integrate(f, -L, -a, panels(-L, -a)) + simpson_integrate(f, -a, a, panels(-a, a)) +
           simpson_integrate(f, a, L, panels(a, L));
}

} // namespace

TEST_CASE("coupling is exactly symmetric")
{
    const auto M = compute_coupling(basis(), SpatialProfile{100.0, 0.3, 1.2});
    CHECK(M.m == M.m.transpose());
    CHECK(M.size() == 110);
    CHECK(M.basis_id == basis().id());
}

TEST_CASE("parity selection at the box centre")
{
    const double V = 100.0;
    const auto M = compute_coupling(basis(), SpatialProfile{V, 0.0, 1.2});
    double cross = 0.0;
    for (int j = 0; j < M.size(); ++j)
        for (int n = 0; n < M.size(); ++n)
            if (basis().states[j].parity != basis().states[n].parity)
                cross = std::max(cross, std::abs(M.m(j, n)));
    CHECK(cross <= 1e-8 * V);

    const auto shifted = compute_coupling(basis(), SpatialProfile{V, 0.3, 1.2});
    double shifted_cross = 0.0;
    for (int j = 0; j < M.size(); ++j)
        for (int n = 0; n < M.size(); ++n)
            if (basis().states[j].parity != basis().states[n].parity)
                shifted_cross = std::max(shifted_cross, std::abs(shifted.m(j, n)));
    CHECK(shifted_cross > 1e-2 * V);
}

TEST_CASE("wide profile reduces to the identity")
{
    const double V = 100.0;
    const auto M = compute_coupling(basis(), SpatialProfile{V, 0.0, 1e4});
    CHECK((M.m - V * Eigen::MatrixXd::Identity(M.size(), M.size())).cwiseAbs().maxCoeff() <= 1e-3 * V);
}

TEST_CASE("matrix elements match a refined quadrature")
{
    const SpatialProfile p{100.0, 0.0, 1.2};
    const auto M = compute_coupling(basis(), p);
    CHECK(M.m(0, 0) > 0.0);
    CHECK(M.m(0, 0) == doctest::Approx(refined_element(p, 0, 0)).epsilon(1e-7));
    CHECK(M.m(0, 50) == doctest::Approx(refined_element(p, 0, 50)).epsilon(1e-6));

    const SpatialProfile narrow{100.0, 0.0, 0.12};
    const auto Mn = compute_coupling(basis(), narrow);
    CHECK(Mn.m(0, 0) == doctest::Approx(refined_element(narrow, 0, 0)).epsilon(1e-6));
}

TEST_CASE("coupling is linear in V")
{
    const auto a = compute_coupling(basis(), SpatialProfile{100.0, 0.1, 1.2});
    const auto b = compute_coupling(basis(), SpatialProfile{200.0, 0.1, 1.2});
    CHECK(b.m == 2.0 * a.m);
}

TEST_CASE("profiles narrower than four grid steps are rejected")
{
    const double h = basis().spacing();
    CHECK_THROWS_AS((void)compute_coupling(basis(), SpatialProfile{100.0, 0.0, 3.9 * h}), ConfigError);
    CHECK_NOTHROW((void)compute_coupling(basis(), SpatialProfile{100.0, 0.0, 4.0 * h}));
}
