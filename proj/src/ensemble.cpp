#include "boundform/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "boundform/errors.hpp"

namespace boundform {

namespace {

// Welford accumulators over members, one per sampled quantity.
struct Accumulator {
    Eigen::MatrixXd occ_mean, occ_m2;
    Eigen::VectorXd e_mean, e_m2, defect_mean;
    int count = 0;

    void add(const Trajectory& t)
    {
        if (count == 0) {
            occ_mean = Eigen::MatrixXd::Zero(t.occupations.rows(), t.occupations.cols());
            occ_m2 = occ_mean;
            e_mean = Eigen::VectorXd::Zero(t.samples());
            e_m2 = e_mean;
            defect_mean = e_mean;
        }
        ++count;
        const double inv = 1.0 / count;
        const Eigen::MatrixXd d_occ = t.occupations - occ_mean;
        occ_mean += d_occ * inv;
        occ_m2 += d_occ.cwiseProduct(t.occupations - occ_mean);
        const Eigen::VectorXd d_e = t.mean_energy - e_mean;
        e_mean += d_e * inv;
        e_m2 += d_e.cwiseProduct(t.mean_energy - e_mean);
        defect_mean += (t.norm_defect - defect_mean) * inv;
    }
};

} // namespace

void EnsembleSpec::validate() const
{
    base.validate();
    if (n_realizations < 1)
        throw ConfigError(fmt::format("ensemble: n_realizations must be >= 1 (got {})", n_realizations));
}

EnsembleResult run_ensemble(const Eigen::VectorXd& energies, const CouplingMatrix& M, const EnsembleSpec& spec,
                            int initial_index, double t_end, const EnsembleOptions& opts)
{
    spec.validate();
    const int threads = std::max(1, opts.threads);
    Accumulator acc;
    Eigen::VectorXd times;

    auto run_member = [&](int k) {
        StochasticSquareTrain member = spec.base;
        member.seed = spec.member_seed(k);
        try {
            return evolve(energies, M, PulseSchedule{realize(member)}, initial_index, t_end, opts.evolve);
        } catch (const NumericalError& e) {
            throw NumericalError(fmt::format("ensemble member {} (seed {}): {}", k, member.seed, e.what()));
        }
    };

    for (int batch = 0; batch < spec.n_realizations; batch += threads) {
        const int size = std::min(threads, spec.n_realizations - batch);
        std::vector<std::optional<Trajectory>> results(static_cast<std::size_t>(size));
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(size));
        auto work = [&](int i) {
            try {
                results[static_cast<std::size_t>(i)] = run_member(batch + i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        };
        if (size == 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            for (int i = 0; i < size; ++i)
                pool.emplace_back(work, i);
        }
        for (int i = 0; i < size; ++i) {
            if (errors[static_cast<std::size_t>(i)])
                std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
            const Trajectory& t = *results[static_cast<std::size_t>(i)];
            if (acc.count == 0)
                times = t.times;
            acc.add(t);
        }
    }

    EnsembleResult out;
    out.times = times;
    out.members = acc.count;
    out.base_seed = spec.base.seed;
    out.mean_occupations = acc.occ_mean;
    out.mean_energy = acc.e_mean;
    out.mean_norm_defect = acc.defect_mean;
    if (acc.count > 1) {
        const double denom = static_cast<double>(acc.count) * (acc.count - 1);
        out.occupation_stderr = (acc.occ_m2 / denom).cwiseMax(0.0).cwiseSqrt();
        out.energy_stderr = (acc.e_m2 / denom).cwiseMax(0.0).cwiseSqrt();
    } else {
        out.occupation_stderr = Eigen::MatrixXd::Zero(acc.occ_mean.rows(), acc.occ_mean.cols());
        out.energy_stderr = Eigen::VectorXd::Zero(acc.e_mean.size());
    }
    return out;
}

Eigen::VectorXd mean_energy_curve(const EnsembleResult& result)
{
    return result.mean_energy;
}

double linear_trend_slope(const Eigen::VectorXd& times, const Eigen::VectorXd& values)
{
    const double tm = times.mean();
    const double vm = values.mean();
    const Eigen::ArrayXd dt = times.array() - tm;
    const double var = dt.square().sum();
    return var > 0.0 ? (dt * (values.array() - vm)).sum() / var : 0.0;
}

} // namespace boundform
