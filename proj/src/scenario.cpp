#include "boundform/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "boundform/coupling.hpp"
#include "boundform/csv.hpp"
#include "boundform/ensemble.hpp"
#include "boundform/errors.hpp"
#include "boundform/perturbation.hpp"

namespace boundform {

namespace {

namespace fs = std::filesystem;

class ArtifactWriter {
public:
    explicit ArtifactWriter(const OutputSettings& out) : dir_(out.directory), prefix_(out.prefix)
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
    }

    template <class Fn>
    void write(const std::string& name, Fn&& fn)
    {
        const fs::path path = dir_ / fmt::format("{}_{}", prefix_, name);
        std::ostringstream body;
        fn(body);
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw ConfigError(fmt::format("cannot write '{}'", path.string()));
        const std::string text = body.str();
        file << text;
        files_.push_back({path.string(), fnv1a64(text)});
    }

    struct File {
        std::string path;
        std::uint64_t hash;
    };
    [[nodiscard]] const std::vector<File>& files() const { return files_; }
    [[nodiscard]] fs::path path_for(const std::string& name) const
    {
        return dir_ / fmt::format("{}_{}", prefix_, name);
    }

private:
    fs::path dir_;
    std::string prefix_;
    std::vector<File> files_;
};

std::string hex(std::uint64_t h)
{
    return fmt::format("{:016x}", h);
}

// Time after which a schedule is quiet to double precision.
double activity_end(const RunConfig& cfg)
{
    if (cfg.schedule_type == ScheduleType::gaussian)
        return cfg.gaussian.centers.back() + 8.0 * cfg.gaussian.sigma_t;
    return cfg.stochastic.duration();
}

void write_uncertainty(std::ostream& os, const std::vector<UncertaintyRow>& rows)
{
    os << "V,sigma_t,sigma_x,t0,t_end,includes_initial,mean_energy,energy_std,energy_spread_2x,"
          "uncertainty_product,uncertainty_product_2x,peak_index,peak_energy,peak_fwhm\n";
    for (const auto& r : rows) {
        const auto& s = r.summary;
        Peak top{-1, NAN, NAN, NAN, NAN};
        for (const auto& p : r.peaks)
            if (top.index < 0 || p.height > top.height)
                top = p;
        os << csv::num(r.V) << ',' << csv::num(r.sigma_t) << ',' << csv::num(r.sigma_x) << ','
           << csv::num(r.center) << ',' << csv::num(r.t_end) << ',' << (s.includes_initial ? 1 : 0) << ','
           << csv::num(s.mean_energy) << ',' << csv::num(s.energy_std) << ',' << csv::num(s.energy_spread_2x)
           << ',' << csv::num(s.uncertainty_product) << ',' << csv::num(s.uncertainty_product_2x) << ','
           << top.index << ',' << csv::num(top.energy) << ',' << csv::num(top.fwhm) << '\n';
    }
}

void write_peaks(std::ostream& os, const std::vector<UncertaintyRow>& rows)
{
    os << "V,sigma_t,sigma_x,index,energy,height,prominence,fwhm\n";
    for (const auto& r : rows)
        for (const auto& p : r.peaks)
            os << csv::num(r.V) << ',' << csv::num(r.sigma_t) << ',' << csv::num(r.sigma_x) << ',' << p.index
               << ',' << csv::num(p.energy) << ',' << csv::num(p.height) << ',' << csv::num(p.prominence) << ','
               << csv::num(p.fwhm) << '\n';
}

void run_body(const RunConfig& cfg, Subcommand sub, std::ostream& log, ArtifactWriter& out, nlohmann::json& meta)
{
    log << fmt::format("building basis: n_basis={} grid_points={}\n", cfg.well.n_basis, cfg.grid_points);
    const SpectralBasis basis = build_basis(cfg.well, cfg.grid_points);
    const Eigen::VectorXd energies = basis.energies();
    meta["basis_id"] = basis.id();
    meta["orthonormality_defect"] = orthonormality_defect(basis);

    if (sub == Subcommand::eigen) {
        out.write("basis.csv", [&](std::ostream& os) { csv::write_basis(os, basis); });
        if (cfg.output.write_psi)
            out.write("psi.csv", [&](std::ostream& os) { csv::write_psi(os, basis); });
        return;
    }

    const EvolveOptions opts = cfg.evolve_options();

    if (sub == Subcommand::report) {
        ValidityScan scan = cfg.scan;
        const auto rows = uncertainty_scan(basis, scan, opts, cfg.run.settle_margin, cfg.run.include_initial);
        out.write("uncertainty.csv", [&](std::ostream& os) { write_uncertainty(os, rows); });
        out.write("peaks.csv", [&](std::ostream& os) { write_peaks(os, rows); });
        for (const auto& r : rows)
            log << fmt::format("V={} sigma_t={} sigma_x={}: dE(2x std)*sigma_t/hbar c = {:.4g}\n", r.V, r.sigma_t,
                               r.sigma_x, r.summary.uncertainty_product_2x);
        return;
    }

    const SpatialProfile& profile =
        cfg.schedule_type == ScheduleType::gaussian ? cfg.gaussian.profile : cfg.stochastic.profile;
    const CouplingMatrix M = compute_coupling(basis, profile);
    if (cfg.output.write_coupling)
        out.write("coupling.csv", [&](std::ostream& os) { csv::write_coupling(os, M); });

    if (sub == Subcommand::ensemble) {
        EnsembleSpec spec = cfg.ensemble;
        spec.base = cfg.stochastic;
        if (cfg.schedule_type != ScheduleType::stochastic)
            throw ConfigError("ensemble requires schedule.type = stochastic");
        meta["seeds"] = {{"base_seed", spec.base.seed},
                         {"first_member_seed", spec.member_seed(0)},
                         {"last_member_seed", spec.member_seed(spec.n_realizations - 1)}};
        meta["members"] = spec.n_realizations;
        log << fmt::format("ensemble: {} members, base seed {}\n", spec.n_realizations, spec.base.seed);
        const EnsembleResult result =
            run_ensemble(energies, M, spec, cfg.run.initial_index, cfg.run.t_end, {opts, cfg.threads});
        out.write("ensemble.csv", [&](std::ostream& os) { csv::write_ensemble(os, result); });
        return;
    }

    const PulseSchedule schedule = cfg.schedule();
    if (const auto* noise = std::get_if<RealizedStochasticTrain>(&schedule)) {
        meta["seeds"] = {{"schedule_seed", noise->spec.seed}};
        out.write("noise.csv", [&](std::ostream& os) { csv::write_noise(os, *noise); });
    }

    if (sub == Subcommand::evolve) {
        log << fmt::format("evolve: initial state {}, t_end {} fm, dt {} fm\n", cfg.run.initial_index, cfg.run.t_end,
                           cfg.run.dt);
        const Trajectory traj = evolve(energies, M, schedule, cfg.run.initial_index, cfg.run.t_end, opts);
        const bool quiet = cfg.run.t_end - cfg.run.settle_margin >= activity_end(cfg);
        const double margin = quiet ? cfg.run.settle_margin : 0.0;
        if (!quiet)
            log << "note: drive still active near t_end; settle check skipped\n";
        const double sigma_t = cfg.schedule_type == ScheduleType::gaussian ? cfg.gaussian.sigma_t : 0.0;
        const DistributionSummary summary = final_distribution(energies, traj, margin, cfg.run.initial_index,
                                                               cfg.run.include_initial, sigma_t);
        out.write("trajectory.csv", [&](std::ostream& os) { csv::write_trajectory(os, traj); });
        out.write("distribution.csv", [&](std::ostream& os) {
            csv::write_distribution(os, energies, traj.occupations.row(traj.samples() - 1).transpose());
        });
        out.write("summary.csv", [&](std::ostream& os) { csv::write_summary(os, summary, sigma_t); });
        meta["max_norm_defect"] = traj.norm_defect.cwiseAbs().maxCoeff();
        return;
    }

    // perturb
    const PerturbativeResult pert =
        first_order_amplitudes(energies, M, schedule, cfg.run.initial_index, cfg.run.t_end, cfg.run.dt);
    out.write("amplitudes.csv", [&](std::ostream& os) { csv::write_amplitudes(os, energies, pert); });
    meta["norm_constant_N"] = pert.norm_constant_N;
    log << fmt::format("perturb: N = {:.6g}\n", pert.norm_constant_N);
    const auto points = validity_report(basis, cfg.scan, opts);
    out.write("validity.csv", [&](std::ostream& os) { csv::write_validity(os, points); });
}

} // namespace

std::string_view to_string(Subcommand s)
{
    switch (s) {
    case Subcommand::eigen: return "eigen";
    case Subcommand::evolve: return "evolve";
    case Subcommand::ensemble: return "ensemble";
    case Subcommand::perturb: return "perturb";
    case Subcommand::report: return "report";
    }
    return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view name)
{
    for (const auto s : {Subcommand::eigen, Subcommand::evolve, Subcommand::ensemble, Subcommand::perturb,
                         Subcommand::report})
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

std::vector<UncertaintyRow> uncertainty_scan(const SpectralBasis& basis, const ValidityScan& scan,
                                             const EvolveOptions& opts, double settle_margin, bool include_initial)
{
    const Eigen::VectorXd energies = basis.energies();
    std::vector<UncertaintyRow> rows;
    for (const double sigma_x : scan.sigma_x) {
        const CouplingMatrix unit = compute_coupling(basis, SpatialProfile{1.0, scan.x0, sigma_x});
        for (const double V : scan.V) {
            CouplingMatrix M = unit;
            M.m *= V;
            M.profile.V = V;
            for (const double sigma_t : scan.sigma_t) {
                const PulseTiming timing = single_pulse_timing(sigma_t, opts.dt, scan.min_center);
                const double t_end = std::round((timing.t_end + settle_margin) / opts.dt) * opts.dt;
                const GaussianTrain train{M.profile, sigma_t, {timing.center}};
                const Trajectory traj = evolve(energies, M, train, scan.initial_index, t_end, opts);
                UncertaintyRow row;
                row.V = V;
                row.sigma_t = sigma_t;
                row.sigma_x = sigma_x;
                row.center = timing.center;
                row.t_end = t_end;
                row.summary =
                    final_distribution(energies, traj, settle_margin, scan.initial_index, include_initial, sigma_t);
                Eigen::VectorXd excited = row.summary.occupations;
                excited[scan.initial_index] = 0.0;
                row.peaks = find_peaks(energies, excited);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

ScenarioOutcome run_scenario(const RunConfig& config, Subcommand subcommand, std::ostream& log)
{
    ScenarioOutcome outcome;
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json meta;
    meta["tool"] = "boundform";
    meta["version"] = std::string(kVersion);
    meta["subcommand"] = std::string(to_string(subcommand));
    meta["config_hash"] = hex(fnv1a64(config.source));
    try {
        config.validate();
        ArtifactWriter out(config.output);
        run_body(config, subcommand, log, out, meta);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        nlohmann::json files = nlohmann::json::array();
        for (const auto& f : out.files()) {
            files.push_back({{"path", f.path}, {"fnv1a64", hex(f.hash)}});
            outcome.artifacts.push_back(f.path);
        }
        meta["artifacts"] = files;
        meta["wall_time_s"] = wall;
        meta["config"] = config.source;
        const fs::path manifest = out.path_for(fmt::format("{}_manifest.json", to_string(subcommand)));
        std::ofstream mf(manifest, std::ios::binary);
        if (!mf)
            throw ConfigError(fmt::format("cannot write '{}'", manifest.string()));
        mf << meta.dump(2) << '\n';
        outcome.artifacts.push_back(manifest.string());
    } catch (const ConfigError& e) {
        outcome.exit_code = kExitConfigError;
        outcome.error = e.what();
    } catch (const std::exception& e) {
        outcome.exit_code = kExitNumericalError;
        outcome.error = e.what();
    }
    return outcome;
}

} // namespace boundform
