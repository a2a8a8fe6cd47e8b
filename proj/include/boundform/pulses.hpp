#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "boundform/well.hpp"

namespace boundform {

/// Spatial factor V * exp(-(x - x0)^2 / (2 sigma_x^2)) shared by every drive.
struct SpatialProfile {
    double V = 100.0;       // MeV; 1 for stochastic drives (amplitude lives in g(t))
    double x0 = 0.0;        // fm
    double sigma_x = 1.2;   // fm

    void validate() const;
    [[nodiscard]] double shape(double x) const;   // the dimensionless Gaussian
    [[nodiscard]] double operator()(double x) const { return V * shape(x); }
};

/// Sum of Gaussian pulses in time, each of width sigma_t.
struct GaussianTrain {
    SpatialProfile profile;
    double sigma_t = 1.0;             // fm
    std::vector<double> centers{50.0};

    void validate() const;
};

/// Piecewise-constant noise: a fresh Normal(0, sigma_V) amplitude every
/// hold_factor * delta_t, for n_pulses contiguous windows starting at t = 0.
struct StochasticSquareTrain {
    SpatialProfile profile{1.0, 0.0, 1.2};
    double sigma_V = 50.0;    // MeV
    double delta_t = 0.02;    // fm
    int hold_factor = 5;
    int n_pulses = 2000;
    std::uint64_t seed = 1;

    void validate() const;
    [[nodiscard]] double window() const { return hold_factor * delta_t; }
    [[nodiscard]] double duration() const { return n_pulses * window(); }
};

/// A stochastic train with its amplitudes drawn (MeV, one per window).
struct RealizedStochasticTrain {
    StochasticSquareTrain spec;
    std::vector<double> amplitudes;
};

using PulseSchedule = std::variant<GaussianTrain, RealizedStochasticTrain>;

/// Draws the window amplitudes; deterministic in spec.seed.
[[nodiscard]] RealizedStochasticTrain realize(const StochasticSquareTrain& spec);

/// Dimensionless time factor g(t). For stochastic trains this is the window
/// amplitude in MeV, since their spatial profile carries V = 1 MeV.
[[nodiscard]] double time_signal(const GaussianTrain& train, double t);
[[nodiscard]] double time_signal(const RealizedStochasticTrain& train, double t);
[[nodiscard]] double time_signal(const PulseSchedule& schedule, double t);

[[nodiscard]] const SpatialProfile& profile_of(const PulseSchedule& schedule);

/// V(x, t) in MeV. Throws DomainError outside the box.
[[nodiscard]] double potential_at(const PulseSchedule& schedule, const WellConfig& cfg, double x, double t);

/// Time after which the drive is negligible: last centre for Gaussian
/// trains, end of the last window for stochastic trains.
[[nodiscard]] double drive_end(const PulseSchedule& schedule);

/// Standard normals from mt19937_64 via Box-Muller. Unlike
/// std::normal_distribution the sequence is identical on every standard library.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace boundform

namespace boundform {

/// Timing for a single isolated pulse of width sigma_t: centred no earlier
/// than `min_center` and at least `lead` widths after t = 0, followed by
/// `settle` widths of free evolution. t_end is rounded up to a multiple of dt.
struct PulseTiming {
    double center;
    double t_end;
};
[[nodiscard]] PulseTiming single_pulse_timing(double sigma_t, double dt, double min_center = 50.0,
                                              double lead = 8.0, double settle = 10.0);

} // namespace boundform
