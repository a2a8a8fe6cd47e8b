#include "boundform/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "boundform/errors.hpp"

namespace boundform {

void SpatialProfile::validate() const
{
    if (!(sigma_x > 0.0))
        throw ConfigError(fmt::format("pulse: sigma_x must be positive (got {})", sigma_x));
}

double SpatialProfile::shape(double x) const
{
    const double d = x - x0;
    return std::exp(-d * d / (2.0 * sigma_x * sigma_x));
}

void GaussianTrain::validate() const
{
    profile.validate();
    if (!(sigma_t > 0.0))
        throw ConfigError(fmt::format("pulse: sigma_t must be positive (got {})", sigma_t));
    if (centers.empty())
        throw ConfigError("pulse: a Gaussian train needs at least one centre");
    for (std::size_t i = 1; i < centers.size(); ++i)
        if (!(centers[i] > centers[i - 1]))
            throw ConfigError("pulse: centres must be strictly increasing");
}

void StochasticSquareTrain::validate() const
{
    profile.validate();
    if (!(sigma_V >= 0.0))
        throw ConfigError(fmt::format("noise: sigma_V must be non-negative (got {})", sigma_V));
    if (!(delta_t > 0.0))
        throw ConfigError(fmt::format("noise: delta_t must be positive (got {})", delta_t));
    if (hold_factor < 1)
        throw ConfigError(fmt::format("noise: hold_factor must be >= 1 (got {})", hold_factor));
    if (n_pulses < 1)
        throw ConfigError(fmt::format("noise: n_pulses must be >= 1 (got {})", n_pulses));
}

double NormalStream::next()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 53-bit uniforms; u1 in (0, 1] keeps the log finite.
    constexpr double scale = 1.0 / 9007199254740992.0;
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * scale;
    const double u2 = static_cast<double>(engine_() >> 11) * scale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

RealizedStochasticTrain realize(const StochasticSquareTrain& spec)
{
    spec.validate();
    RealizedStochasticTrain out{spec, {}};
    out.amplitudes.reserve(static_cast<std::size_t>(spec.n_pulses));
    NormalStream normals(spec.seed);
    for (int j = 0; j < spec.n_pulses; ++j)
        out.amplitudes.push_back(spec.sigma_V * normals.next());
    return out;
}

double time_signal(const GaussianTrain& train, double t)
{
    double g = 0.0;
    const double inv = 1.0 / (2.0 * train.sigma_t * train.sigma_t);
    for (double tk : train.centers) {
        const double d = t - tk;
        g += std::exp(-d * d * inv);
    }
    return g;
}

double time_signal(const RealizedStochasticTrain& train, double t)
{
    if (t < 0.0)
        return 0.0;
    const auto j = static_cast<std::size_t>(std::floor(t / train.spec.window()));
    return j < train.amplitudes.size() ? train.amplitudes[j] : 0.0;
}

double time_signal(const PulseSchedule& schedule, double t)
{
    return std::visit([t](const auto& s) { return time_signal(s, t); }, schedule);
}

const SpatialProfile& profile_of(const PulseSchedule& schedule)
{
    return std::visit(
        [](const auto& s) -> const SpatialProfile& {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, GaussianTrain>)
                return s.profile;
            else
                return s.spec.profile;
        },
        schedule);
}

double potential_at(const PulseSchedule& schedule, const WellConfig& cfg, double x, double t)
{
    if (std::abs(x) > cfg.L)
        throw DomainError(fmt::format("potential_at: x = {} outside the box", x));
    return profile_of(schedule)(x) * time_signal(schedule, t);
}

double drive_end(const PulseSchedule& schedule)
{
    if (const auto* g = std::get_if<GaussianTrain>(&schedule))
        return g->centers.back();
    return std::get<RealizedStochasticTrain>(schedule).spec.duration();
}

} // namespace boundform

namespace boundform {

PulseTiming single_pulse_timing(double sigma_t, double dt, double min_center, double lead, double settle)
{
    const double center = std::max(min_center, lead * sigma_t);
    const double steps = std::ceil((center + settle * sigma_t) / dt - 1e-9);
    return {center, steps * dt};
}

} // namespace boundform
