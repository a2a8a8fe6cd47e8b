#include <doctest.h>

#include <cmath>
#include <numeric>

#include "boundform/errors.hpp"
#include "boundform/pulses.hpp"

using namespace boundform;

namespace {

struct Moments {
    double mean, std;
};

Moments moments(const std::vector<double>& v)
{
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : v)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1))};
}

} // namespace

TEST_CASE("gaussian time signal")
{
    const GaussianTrain single{{100.0, 0.0, 1.2}, 1.0, {50.0}};
    CHECK(time_signal(single, 50.0) == 1.0);
    CHECK(time_signal(single, 55.0) == doctest::Approx(std::exp(-12.5)).epsilon(1e-14));
    CHECK(time_signal(single, 55.0) == doctest::Approx(3.7e-6).epsilon(0.01));
    CHECK(time_signal(single, 45.0) == time_signal(single, 55.0));
}

TEST_CASE("gaussian trains add")
{
    const GaussianTrain train{{}, 2.0, {10.0, 13.0, 30.0}};
    for (double t = 0.0; t < 40.0; t += 0.37) {
        double sum = 0.0;
        for (const double c : train.centers)
            sum += time_signal(GaussianTrain{{}, 2.0, {c}}, t);
        CHECK(time_signal(train, t) == doctest::Approx(sum).epsilon(1e-15));
    }
}

TEST_CASE("potential at the pulse peak")
{
    const WellConfig cfg = deuteron_well();
    const PulseSchedule s = GaussianTrain{{100.0, 0.0, 1.2}, 1.0, {50.0}};
    CHECK(potential_at(s, cfg, 0.0, 50.0) == 100.0);
    CHECK(potential_at(s, cfg, 1.2, 50.0) == doctest::Approx(100.0 * std::exp(-0.5)).epsilon(1e-15));
    CHECK_THROWS_AS((void)potential_at(s, cfg, 100.5, 50.0), DomainError);
}

TEST_CASE("potential factorises for every schedule")
{
    const WellConfig cfg = deuteron_well();
    StochasticSquareTrain noise;
    noise.n_pulses = 50;
    noise.profile.x0 = 0.3;
    const std::vector<PulseSchedule> schedules{GaussianTrain{{70.0, -0.4, 0.5}, 0.7, {3.0, 4.5}},
                                               PulseSchedule{realize(noise)}};
    for (const auto& s : schedules)
        for (double x = -3.0; x <= 3.0; x += 0.25)
            for (double t = 0.0; t < 6.0; t += 0.013)
                CHECK(potential_at(s, cfg, x, t) == profile_of(s)(x) * time_signal(s, t));
}

TEST_CASE("stochastic windows are contiguous")
{
    StochasticSquareTrain spec;
    spec.n_pulses = 10;
    const auto train = realize(spec);
    const double w = spec.window();
    CHECK(w == doctest::Approx(0.1));
    CHECK(spec.duration() == doctest::Approx(1.0));
    for (int j = 0; j < 10; ++j) {
        CHECK(time_signal(train, (j + 0.01) * w) == train.amplitudes[j]);
        CHECK(time_signal(train, (j + 0.5) * w) == train.amplitudes[j]);
        CHECK(time_signal(train, (j + 0.99) * w) == train.amplitudes[j]);
    }
    CHECK(time_signal(train, -0.01) == 0.0);
    CHECK(time_signal(train, 1.05) == 0.0);
    CHECK(drive_end(PulseSchedule{train}) == doctest::Approx(1.0));
    CHECK(drive_end(PulseSchedule{GaussianTrain{{}, 1.0, {5.0, 9.0}}}) == 9.0);
}

TEST_CASE("realize is deterministic in the seed")
{
    StochasticSquareTrain spec;
    const auto a = realize(spec);
    const auto b = realize(spec);
    CHECK(a.amplitudes == b.amplitudes);
    spec.seed = 2;
    const auto c = realize(spec);
    CHECK(a.amplitudes != c.amplitudes);
    CHECK(a.amplitudes.size() == 2000);
}

TEST_CASE("amplitude statistics")
{
    StochasticSquareTrain spec;
    const auto m = moments(realize(spec).amplitudes);
    CHECK(std::abs(m.std - 50.0) <= 5.0);

    spec.n_pulses = 100000;
    spec.seed = 17;
    const auto big = realize(spec).amplitudes;
    const auto mb = moments(big);
    CHECK(std::abs(mb.mean) <= 3.0 * 50.0 / std::sqrt(1e5));
    CHECK(std::abs(mb.std - 50.0) <= 50.0 * 5.0 / std::sqrt(2e5));

    // neighbouring windows are uncorrelated
    double cov = 0.0;
    for (std::size_t i = 1; i < big.size(); ++i)
        cov += (big[i] - mb.mean) * (big[i - 1] - mb.mean);
    const double r = cov / ((big.size() - 1) * mb.std * mb.std);
    CHECK(std::abs(r) <= 4.0 / std::sqrt(1e5));
}

TEST_CASE("1000-window profile is consistent with a normal histogram")
{
    StochasticSquareTrain spec;
    spec.n_pulses = 1000;
    spec.seed = 2024;
    const auto amps = realize(spec).amplitudes;
    // chi-square against Normal(0, 50) on eight equiprobable bins
    const double edges[] = {-1.15035, -0.67449, -0.31864, 0.0, 0.31864, 0.67449, 1.15035};
    int counts[8] = {};
    for (const double a : amps) {
        int b = 0;
        while (b < 7 && a / 50.0 > edges[b])
            ++b;
        ++counts[b];
    }
    double chi2 = 0.0;
    for (const int c : counts)
        chi2 += (c - 125.0) * (c - 125.0) / 125.0;
    CHECK(chi2 < 24.3);   // 7 degrees of freedom, p = 0.001
}

TEST_CASE("zero noise amplitude")
{
    StochasticSquareTrain spec;
    spec.sigma_V = 0.0;
    for (const double a : realize(spec).amplitudes)
        CHECK(a == 0.0);
}

TEST_CASE("normal stream is reproducible")
{
    NormalStream a(99), b(99);
    for (int i = 0; i < 1001; ++i)
        CHECK(a.next() == b.next());
}

TEST_CASE("invalid schedules are rejected")
{
    CHECK_THROWS_AS((GaussianTrain{{100.0, 0.0, 1.2}, -1.0, {50.0}}).validate(), ConfigError);
    CHECK_THROWS_AS((GaussianTrain{{100.0, 0.0, 0.0}, 1.0, {50.0}}).validate(), ConfigError);
    CHECK_THROWS_AS((GaussianTrain{{100.0, 0.0, 1.2}, 1.0, {}}).validate(), ConfigError);
    CHECK_THROWS_AS((GaussianTrain{{100.0, 0.0, 1.2}, 1.0, {5.0, 5.0}}).validate(), ConfigError);
    auto noise = [](auto mutate) {
        StochasticSquareTrain s;
        mutate(s);
        return s;
    };
    CHECK_THROWS_AS(noise([](auto& s) { s.sigma_V = -1.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(noise([](auto& s) { s.delta_t = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(noise([](auto& s) { s.hold_factor = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(noise([](auto& s) { s.n_pulses = 0; }).validate(), ConfigError);
}

TEST_CASE("single pulse timing")
{
    const auto a = single_pulse_timing(1.0, 0.005);
    CHECK(a.center == 50.0);
    CHECK(a.t_end == doctest::Approx(60.0));
    const auto b = single_pulse_timing(30.0, 0.005);
    CHECK(b.center == 240.0);
    CHECK(b.t_end == doctest::Approx(540.0));
    const auto c = single_pulse_timing(0.1, 0.007);
    CHECK(std::abs(c.t_end / 0.007 - std::round(c.t_end / 0.007)) < 1e-9);
    CHECK(c.t_end >= 51.0);
}
