#include "boundform/csv.hpp"

#include <cmath>

#include <fmt/format.h>

namespace boundform::csv {

namespace {

void occupation_header(std::ostream& os, Eigen::Index n, const char* stem)
{
    for (Eigen::Index k = 0; k < n; ++k)
        os << ',' << stem << k;
}

} // namespace

std::string num(double value)
{
    if (std::isnan(value))
        return "nan";
    return fmt::format("{:.12g}", value);
}

void write_basis(std::ostream& os, const SpectralBasis& basis)
{
    os << "n,parity,energy,k1,k2,norm_constant\n";
    for (const auto& s : basis.states)
        os << s.n << ',' << to_string(s.parity) << ',' << num(s.energy) << ',' << num(s.k1) << ',' << num(s.k2)
           << ',' << num(s.norm_constant) << '\n';
}

void write_psi(std::ostream& os, const SpectralBasis& basis)
{
    os << 'x';
    occupation_header(os, basis.size(), "psi_");
    os << '\n';
    for (Eigen::Index i = 0; i < basis.grid.size(); ++i) {
        os << num(basis.grid[i]);
        for (Eigen::Index n = 0; n < basis.size(); ++n)
            os << ',' << num(basis.psi(i, n));
        os << '\n';
    }
}

void write_coupling(std::ostream& os, const CouplingMatrix& M)
{
    os << "j,n,M\n";
    for (Eigen::Index j = 0; j < M.size(); ++j)
        for (Eigen::Index n = 0; n < M.size(); ++n)
            os << j << ',' << n << ',' << num(M.m(j, n)) << '\n';
}

void write_noise(std::ostream& os, const RealizedStochasticTrain& train)
{
    os << "window,t_start,t_stop,amplitude\n";
    const double w = train.spec.window();
    for (std::size_t j = 0; j < train.amplitudes.size(); ++j)
        os << j << ',' << num(static_cast<double>(j) * w) << ',' << num(static_cast<double>(j + 1) * w) << ','
           << num(train.amplitudes[j]) << '\n';
}

void write_trajectory(std::ostream& os, const Trajectory& traj)
{
    os << "t,norm_defect,mean_energy";
    occupation_header(os, traj.occupations.cols(), "occ_");
    os << '\n';
    for (Eigen::Index i = 0; i < traj.samples(); ++i) {
        os << num(traj.times[i]) << ',' << num(traj.norm_defect[i]) << ',' << num(traj.mean_energy[i]);
        for (Eigen::Index n = 0; n < traj.occupations.cols(); ++n)
            os << ',' << num(traj.occupations(i, n));
        os << '\n';
    }
}

void write_distribution(std::ostream& os, const Eigen::VectorXd& energies, const Eigen::VectorXd& occupations)
{
    os << "n,energy,occupation\n";
    for (Eigen::Index n = 0; n < energies.size(); ++n)
        os << n << ',' << num(energies[n]) << ',' << num(occupations[n]) << '\n';
}

void write_summary(std::ostream& os, const DistributionSummary& s, double sigma_t)
{
    os << "initial_index,includes_initial,t_final,sigma_t,mean_energy,energy_std,energy_spread_2x,"
          "uncertainty_product,uncertainty_product_2x,max_drift\n";
    os << s.initial_index << ',' << (s.includes_initial ? 1 : 0) << ',' << num(s.t_final) << ',' << num(sigma_t)
       << ',' << num(s.mean_energy) << ',' << num(s.energy_std) << ',' << num(s.energy_spread_2x) << ','
       << num(s.uncertainty_product) << ',' << num(s.uncertainty_product_2x) << ',' << num(s.max_drift) << '\n';
}

void write_ensemble(std::ostream& os, const EnsembleResult& r)
{
    const Eigen::Index n = r.mean_occupations.cols();
    os << "t,norm_defect,mean_energy";
    occupation_header(os, n, "occ_");
    os << ",mean_energy_stderr";
    occupation_header(os, n, "occ_stderr_");
    os << '\n';
    for (Eigen::Index i = 0; i < r.times.size(); ++i) {
        os << num(r.times[i]) << ',' << num(r.mean_norm_defect[i]) << ',' << num(r.mean_energy[i]);
        for (Eigen::Index k = 0; k < n; ++k)
            os << ',' << num(r.mean_occupations(i, k));
        os << ',' << num(r.energy_stderr[i]);
        for (Eigen::Index k = 0; k < n; ++k)
            os << ',' << num(r.occupation_stderr(i, k));
        os << '\n';
    }
}

void write_amplitudes(std::ostream& os, const Eigen::VectorXd& energies, const PerturbativeResult& r)
{
    os << "n,energy,re_c1,im_c1,probability\n";
    for (Eigen::Index n = 0; n < r.c1.size(); ++n)
        os << n << ',' << num(energies[n]) << ',' << num(r.c1[n].real()) << ',' << num(r.c1[n].imag()) << ','
           << num(r.probabilities[n]) << '\n';
}

void write_validity(std::ostream& os, const std::vector<ValidityPoint>& points)
{
    const Eigen::Index n = points.empty() ? 0 : points.front().perturbative.size();
    os << "V,sigma_t,sigma_x,N,breakdown,max_ratio";
    occupation_header(os, n, "ratio_");
    os << '\n';
    for (const auto& p : points) {
        os << num(p.V) << ',' << num(p.sigma_t) << ',' << num(p.sigma_x) << ',' << num(p.N) << ','
           << (p.breakdown ? 1 : 0) << ',' << num(p.max_ratio);
        for (Eigen::Index k = 0; k < n; ++k)
            os << ',' << num(p.ratio[k]);
        os << '\n';
    }
}

} // namespace boundform::csv
