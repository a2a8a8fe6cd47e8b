#include <doctest.h>

#include <cmath>

#include "boundform/coupling.hpp"
#include "boundform/errors.hpp"
#include "boundform/observables.hpp"
#include "boundform/units.hpp"

using namespace boundform;

namespace {

const SpectralBasis& basis()
{
    static const SpectralBasis b = build_basis(deuteron_well());
    return b;
}

Trajectory synthetic(const Eigen::VectorXd& times, const Eigen::MatrixXd& occ)
{
    Trajectory t;
    t.times = times;
    t.occupations = occ;
    t.norm_defect = Eigen::VectorXd::Zero(times.size());
    t.mean_energy = Eigen::VectorXd::Zero(times.size());
    return t;
}

Eigen::VectorXd excited_only(Eigen::VectorXd occ, int initial)
{
    occ[initial] = 0.0;
    return occ;
}

Trajectory single_pulse(int init, double sigma_x, double sigma_t, double t_end)
{
    const auto M = compute_coupling(basis(), SpatialProfile{100.0, 0.0, sigma_x});
    return evolve(basis(), M, GaussianTrain{M.profile, sigma_t, {50.0}}, init, t_end, {0.005, 200});
}

} // namespace

TEST_CASE("mean energy")
{
    const Eigen::VectorXd E = basis().energies();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(E.size());
    w[0] = 1.0;
    CHECK(std::abs(mean_energy(basis(), w) + 2.3) <= 0.1);
    w[1] = 1.0;
    CHECK(mean_energy(E, w) == doctest::Approx(0.5 * (E[0] + E[1])));
    CHECK(mean_energy(E, 7.5 * w) == doctest::Approx(mean_energy(E, w)).epsilon(1e-15));
    CHECK_THROWS_AS((void)mean_energy(E, Eigen::VectorXd::Zero(E.size())), DomainError);
    w[3] = -0.1;
    CHECK_THROWS_AS((void)mean_energy(E, w), DomainError);
}

TEST_CASE("energy spread")
{
    const Eigen::VectorXd E = basis().energies();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(E.size());
    w[40] = 0.3;
    CHECK(energy_spread(E, w) == 0.0);
    w[41] = 0.3;
    CHECK(energy_spread(basis(), w) == doctest::Approx(0.5 * (E[41] - E[40])).epsilon(1e-12));
    CHECK(energy_spread(E, 3.0 * w) == doctest::Approx(energy_spread(E, w)).epsilon(1e-12));
    // central moments equal the raw-moment formula
    Eigen::VectorXd broad = Eigen::VectorXd::LinSpaced(E.size(), 1.0, 2.0);
    const double mu = mean_energy(E, broad);
    const double raw = std::sqrt(E.array().square().matrix().dot(broad) / broad.sum() - mu * mu);
    CHECK(energy_spread(E, broad) == doctest::Approx(raw).epsilon(1e-10));
}

TEST_CASE("uncertainty product")
{
    CHECK(uncertainty_product(24.0, 30.0) == doctest::Approx(3.649).epsilon(1e-3));
    for (const double st : {0.1, 1.0, 30.0})
        CHECK(uncertainty_product(kHbarC / (2.0 * st), st) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("settle check")
{
    const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(11, 0.0, 10.0);
    Eigen::MatrixXd occ = Eigen::MatrixXd::Zero(11, 2);
    occ.col(0).setConstant(1.0);
    occ(9, 0) = 0.9;
    occ(9, 1) = 0.1;
    occ(10, 0) = 0.9;
    occ(10, 1) = 0.1;
    const Trajectory t = synthetic(times, occ);
    const Eigen::VectorXd E(Eigen::Vector2d(-1.0, 3.0));
    CHECK(max_drift_after(t, 9.0) == 0.0);
    CHECK(max_drift_after(t, 8.0) == doctest::Approx(0.1));
    CHECK_NOTHROW((void)final_distribution(E, t, 1.0, 0, true, 1.0));
    CHECK_THROWS_AS((void)final_distribution(E, t, 2.0, 0, true, 1.0), NumericalError);
    CHECK_THROWS_AS((void)final_distribution(E, t, 11.0, 0, true, 1.0), ContractViolation);

    const auto with = final_distribution(E, t, 1.0, 0, true, 2.0);
    CHECK(with.mean_energy == doctest::Approx(-0.6));
    CHECK(with.energy_std == doctest::Approx(1.2));
    CHECK(with.energy_spread_2x == doctest::Approx(2.4));
    CHECK(with.uncertainty_product == doctest::Approx(1.2 * 2.0 / kHbarC));
    CHECK(with.uncertainty_product_2x == doctest::Approx(2.4 * 2.0 / kHbarC));
    const auto without = final_distribution(E, t, 1.0, 0, false, 2.0);
    CHECK(without.occupations[0] == 0.0);
    CHECK(without.mean_energy == doctest::Approx(3.0));
    CHECK(without.energy_std == 0.0);
}

TEST_CASE("first response time")
{
    const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(101, 0.0, 10.0);
    Eigen::MatrixXd occ(101, 2);
    for (int i = 0; i < 101; ++i) {
        const double t = times[i];
        occ(i, 1) = 0.5 * (1.0 + std::tanh(4.0 * (t - 5.0)));
        occ(i, 0) = 1.0 - occ(i, 1);
    }
    const Trajectory tr = synthetic(times, occ);
    const double t1 = first_response_time(tr, 1);
    CHECK(t1 > 3.5);
    CHECK(t1 < 5.0);
    CHECK(first_response_time(tr, 0) == t1);
    Eigen::MatrixXd flat = Eigen::MatrixXd::Ones(101, 1);
    CHECK(std::isnan(first_response_time(synthetic(times, flat), 0)));
}

TEST_CASE("peak finder")
{
    const int n = 80;
    const Eigen::VectorXd E = Eigen::VectorXd::LinSpaced(n, 0.0, 79.0);
    Eigen::VectorXd occ(n);
    for (int k = 0; k < n; ++k)
        occ[k] = std::exp(-0.5 * std::pow((k - 20) / 3.0, 2)) + 0.5 * std::exp(-0.5 * std::pow((k - 55) / 5.0, 2));
    auto peaks = find_peaks(E, occ);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].index == 20);
    CHECK(peaks[1].index == 55);
    const double fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0));
    CHECK(peaks[0].fwhm == doctest::Approx(3.0 * fwhm).epsilon(0.03));
    CHECK(peaks[1].fwhm == doctest::Approx(5.0 * fwhm).epsilon(0.03));
    CHECK(peaks[0].prominence == doctest::Approx(1.0).epsilon(1e-3));

    // unpopulated states in between (parity selection) are skipped
    Eigen::VectorXd sparse = occ;
    for (int k = 1; k < n; k += 2)
        sparse[k] = 0.0;
    peaks = find_peaks(E, sparse);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].index == 20);

    // small wiggles below the prominence floor are ignored
    Eigen::VectorXd noisy = occ;
    noisy[30] += 0.03;
    CHECK(find_peaks(E, noisy).size() == 2);
    CHECK(find_peaks(E, Eigen::VectorXd::Zero(n)).empty());
}

TEST_CASE("no drive gives a delta distribution")
{
    const auto M = compute_coupling(basis(), SpatialProfile{0.0, 0.0, 1.2});
    const auto traj = evolve(basis(), M, GaussianTrain{M.profile, 1.0, {5.0}}, 7, 20.0, {0.01, 100});
    const auto d = final_distribution(basis().energies(), traj, 5.0, 7, true, 1.0);
    CHECK(d.occupations[7] == 1.0);
    CHECK(d.occupations.sum() == 1.0);
    CHECK(d.energy_std == 0.0);
    CHECK(d.mean_energy == basis().states[7].energy);
}

TEST_CASE("wide pulse on the bound state concentrates near the 25th state")
{
    const Eigen::VectorXd E = basis().energies();
    const auto traj = single_pulse(0, 1.2, 1.0, 70.0);
    const auto d = final_distribution(E, traj, 10.0, 0, false, 1.0);
    Eigen::Index peak = 0;
    d.occupations.maxCoeff(&peak);
    CHECK(peak >= 20);
    CHECK(peak <= 32);
    CHECK(d.energy_std * 1.0 / kHbarC < 0.5 * 30.0);
}

TEST_CASE("distribution width from a high state barely depends on sigma_x")
{
    const Eigen::VectorXd E = basis().energies();
    const auto narrow = final_distribution(E, single_pulse(50, 0.12, 1.0, 70.0), 10.0, 50, false, 1.0);
    const auto wide = final_distribution(E, single_pulse(50, 1.2, 1.0, 70.0), 10.0, 50, false, 1.0);
    const double ratio = std::max(narrow.energy_std, wide.energy_std) / std::min(narrow.energy_std, wide.energy_std);
    MESSAGE("energy std ratio sigma_x 0.12 vs 1.2: ", ratio);
    CHECK(ratio < 2.0);
}

TEST_CASE("long pulse: peak position, width and the energy-time bound")
{
    const Eigen::VectorXd E = basis().energies();
    const double st = 30.0;
    const auto M = compute_coupling(basis(), SpatialProfile{100.0, 0.0, 1.2});
    const auto timing = single_pulse_timing(st, 0.005);
    const auto traj = evolve(basis(), M, GaussianTrain{M.profile, st, {timing.center}}, 0, timing.t_end + 10.0,
                             {0.005, 200});
    const auto d = final_distribution(E, traj, 10.0, 0, false, st);
    const auto all = final_distribution(E, traj, 10.0, 0, true, st);
    MESSAGE("excited: mean ", d.mean_energy, " std ", d.energy_std, "; with initial: mean ", all.mean_energy,
            " std ", all.energy_std);
    CHECK(std::abs(d.energy_std - 12.0) <= 0.3 * 12.0);
    CHECK(std::abs(all.energy_std - 12.0) <= 0.3 * 12.0);
    CHECK(std::abs(all.mean_energy - 9.0) <= 0.3 * 9.0);
    CHECK(d.uncertainty_product >= 0.5);
    const auto peaks = find_peaks(E, excited_only(d.occupations, 0));
    REQUIRE_FALSE(peaks.empty());
    for (const auto& p : peaks) {
        MESSAGE("peak ", p.index, " at ", p.energy, " MeV, fwhm ", p.fwhm);
        CHECK(p.fwhm * st / kHbarC >= 1.0);
    }
}
