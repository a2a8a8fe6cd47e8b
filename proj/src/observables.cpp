#include "boundform/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "boundform/errors.hpp"
#include "boundform/units.hpp"

namespace boundform {

namespace {

void check_weights(const Eigen::VectorXd& energies, const Eigen::VectorXd& w)
{
    if (energies.size() != w.size())
        throw ContractViolation("observables: energies and occupations differ in length");
    if ((w.array() < 0.0).any())
        throw DomainError("observables: occupations must be non-negative");
    if (!(w.sum() > 0.0))
        throw DomainError("observables: all occupations are zero; mean energy undefined");
}

} // namespace

double mean_energy(const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations)
{
    check_weights(energies, occupations);
    return energies.dot(occupations) / occupations.sum();
}

double mean_energy(const SpectralBasis& basis, const Eigen::VectorXd& occupations)
{
    return mean_energy(basis.energies(), occupations);
}

double energy_spread(const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations)
{
    const double mu = mean_energy(energies, occupations);
    if ((occupations.array() > 0.0).count() == 1)
        return 0.0;
    // Central second moment, which avoids cancellation for narrow distributions.
    const double var = (energies.array() - mu).square().matrix().dot(occupations) / occupations.sum();
    return std::sqrt(std::max(0.0, var));
}

double energy_spread(const SpectralBasis& basis, const Eigen::VectorXd& occupations)
{
    return energy_spread(basis.energies(), occupations);
}

double uncertainty_product(double delta_E, double sigma_t)
{
    return delta_E * sigma_t / kHbarC;
}

double max_drift_after(const Trajectory& traj, double t_from)
{
    double drift = 0.0;
    Eigen::Index first = traj.samples();
    for (Eigen::Index i = 0; i < traj.samples(); ++i)
        if (traj.times[i] >= t_from) {
            first = i;
            break;
        }
    if (first >= traj.samples())
        return 0.0;
    const auto tail = traj.occupations.bottomRows(traj.samples() - first);
    for (Eigen::Index n = 0; n < tail.cols(); ++n)
        drift = std::max(drift, tail.col(n).maxCoeff() - tail.col(n).minCoeff());
    return drift;
}

DistributionSummary final_distribution(const Eigen::VectorXd& energies, const Trajectory& traj,
                                       double settle_margin, int initial_index, bool include_initial,
                                       double sigma_t, double drift_tolerance)
{
    if (traj.samples() < 2)
        throw ContractViolation("final_distribution: trajectory has fewer than two samples");
    const double t_final = traj.times[traj.samples() - 1];
    if (settle_margin < 0.0 || t_final - settle_margin < traj.times[0])
        throw ContractViolation(fmt::format(
            "final_distribution: settle margin {} fm longer than the trajectory", settle_margin));

    DistributionSummary out;
    out.t_final = t_final;
    out.initial_index = initial_index;
    out.includes_initial = include_initial;
    out.max_drift = max_drift_after(traj, t_final - settle_margin);
    if (out.max_drift > drift_tolerance)
        throw NumericalError(fmt::format(
            "final_distribution: occupations still drift by {:.3g} over the last {} fm; not settled",
            out.max_drift, settle_margin));

    out.occupations = traj.occupations.row(traj.samples() - 1).transpose();
    if (!include_initial)
        out.occupations[initial_index] = 0.0;
    out.mean_energy = mean_energy(energies, out.occupations);
    out.energy_std = energy_spread(energies, out.occupations);
    out.energy_spread_2x = 2.0 * out.energy_std;
    if (sigma_t > 0.0) {
        out.uncertainty_product = uncertainty_product(out.energy_std, sigma_t);
        out.uncertainty_product_2x = uncertainty_product(out.energy_spread_2x, sigma_t);
    }
    return out;
}

double first_response_time(const Trajectory& traj, int state, double fraction)
{
    const auto col = traj.occupations.col(state);
    const double start = col[0];
    const double total = col[col.size() - 1] - start;
    if (total == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    const double threshold = fraction * std::abs(total);
    for (Eigen::Index i = 0; i < col.size(); ++i)
        if (std::abs(col[i] - start) > threshold)
            return traj.times[i];
    return traj.times[traj.samples() - 1];
}

std::vector<Peak> find_peaks(const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations,
                             double prominence_fraction)
{
    std::vector<Peak> peaks;
    const double top = occupations.maxCoeff();
    if (!(top > 0.0))
        return peaks;

    std::vector<int> idx;
    for (Eigen::Index n = 0; n < occupations.size(); ++n)
        if (occupations[n] > 1e-12 * top)
            idx.push_back(static_cast<int>(n));
    const auto m = static_cast<int>(idx.size());
    auto val = [&](int k) { return occupations[idx[static_cast<std::size_t>(k)]]; };
    auto en = [&](int k) { return energies[idx[static_cast<std::size_t>(k)]]; };

    for (int k = 0; k < m; ++k) {
        const double v = val(k);
        if ((k > 0 && val(k - 1) >= v) || (k + 1 < m && val(k + 1) > v))
            continue;
        double left_min = v, right_min = v;
        int j = k - 1;
        for (; j >= 0 && val(j) <= v; --j)
            left_min = std::min(left_min, val(j));
        if (j < 0)
            left_min = std::min(left_min, 0.0);
        j = k + 1;
        for (; j < m && val(j) <= v; ++j)
            right_min = std::min(right_min, val(j));
        if (j >= m)
            right_min = std::min(right_min, 0.0);
        const double prominence = v - std::max(left_min, right_min);
        if (prominence < prominence_fraction * top)
            continue;

        // Half-maximum crossings by linear interpolation in energy.
        const double half = 0.5 * v;
        double lo = en(0), hi = en(m - 1);
        for (int q = k; q > 0; --q)
            if (val(q - 1) < half) {
                lo = en(q - 1) + (half - val(q - 1)) / (val(q) - val(q - 1)) * (en(q) - en(q - 1));
                break;
            }
        for (int q = k; q + 1 < m; ++q)
            if (val(q + 1) < half) {
                hi = en(q) + (val(q) - half) / (val(q) - val(q + 1)) * (en(q + 1) - en(q));
                break;
            }
        peaks.push_back({idx[static_cast<std::size_t>(k)], en(k), v, prominence, hi - lo});
    }
    return peaks;
}

} // namespace boundform
