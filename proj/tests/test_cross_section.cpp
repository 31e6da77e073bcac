#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "knmatch/cross_section.hpp"

using namespace knmatch;

namespace {

constexpr double kRestEnergy = 0.5109989461;

/// Independent evaluation straight from the closed form.
double kn_oracle(double hnu, double phi, bool full)
{
    const double r = 1.0 / (1.0 + hnu / kRestEnergy * (1.0 - std::cos(phi)));
    const double s = std::sin(phi);
    return 0.5 * r * r * (r + 1.0 / r - (full ? s * s : 0.0));
}

double thomson(double phi)
{
    const double c = std::cos(phi);
    return 0.5 * (1.0 + c * c);
}

}  // namespace

TEST_CASE("forward value equals the Thomson forward value exactly")
{
    for (double hnu : {1e-7, 1e-3, 0.5, 1.0, 42.0, 1000.0}) {
        CHECK(kn_differential(hnu, 0.0, KnVariant::Full) == 1.0);
        CHECK(kn_differential(hnu, 0.0, KnVariant::NoInterference) == 1.0);
    }
}

TEST_CASE("differential reference points")
{
    const double backscatter = kn_differential(1.0, kPi, KnVariant::Full);
    CHECK(std::abs(backscatter - 0.10597) < 1e-5);
    CHECK(backscatter == doctest::Approx(kn_oracle(1.0, kPi, true)).epsilon(1e-14));
    CHECK(std::abs(kn_differential(1e-5, kPi / 2, KnVariant::Full) - 0.5) < 1e-4);
}

TEST_CASE("full variant never exceeds the no-interference variant")
{
    std::mt19937_64 rng(7101);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double hnu = std::exp(std::log(1e-5) + u01(rng) * std::log(1e3 / 1e-5));
        const double phi = u01(rng) * kPi;
        const double full = kn_differential(hnu, phi, KnVariant::Full);
        const double bare = kn_differential(hnu, phi, KnVariant::NoInterference);
        CHECK(full > 0.0);
        CHECK(full <= bare);
        CHECK(bare <= 1.0);
    }
}

TEST_CASE("thomson limit at vanishing energy")
{
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double phi = i * kPi / 2000;
        sup = std::max(sup, std::abs(kn_differential(1e-7, phi, KnVariant::Full) - thomson(phi)));
    }
    CHECK(sup < 1e-5);
}

TEST_CASE("minimum sits at pi for energies above the migration threshold")
{
    for (double hnu : {0.9, 1.0, 10.0, 1000.0}) {
        const KnMinimum m = kn_minimum(hnu, KnVariant::Full);
        CHECK(m.angle == kPi);
        CHECK(m.value == kn_differential(hnu, kPi, KnVariant::Full));
    }
}

TEST_CASE("minimum in the Thomson regime sits just above half pi")
{
    const KnMinimum m = kn_minimum(1e-5, KnVariant::Full);
    CHECK(std::abs(m.angle - kPi / 2) < 1e-3);
    // the true minimum is at pi/2 + hnu/m0c^2, never below pi/2
    CHECK(m.angle > kPi / 2);
    CHECK(std::abs(m.angle - (kPi / 2 + 1e-5 / kRestEnergy)) < 1e-7);
}

TEST_CASE("no-interference variant is minimized at pi for every energy")
{
    for (double hnu : {1e-5, 0.01, 0.5, 1.0, 1000.0}) {
        const KnMinimum m = kn_minimum(hnu, KnVariant::NoInterference);
        CHECK(m.angle == kPi);
        CHECK(m.value == kn_differential(hnu, kPi, KnVariant::NoInterference));
    }
}

TEST_CASE("minimum location migrates toward pi with rising energy")
{
    const double a = kn_minimum(1e-5, KnVariant::Full).angle;
    const double b = kn_minimum(0.01, KnVariant::Full).angle;
    const double c = kn_minimum(0.1, KnVariant::Full).angle;
    const double d = kn_minimum(0.5, KnVariant::Full).angle;
    const double e = kn_minimum(0.85, KnVariant::Full).angle;
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c < d);
    CHECK(d < e);
    CHECK(e < kPi);
    // regression anchors for the interior minima
    CHECK(std::abs(c - 1.7084192267) < 1e-6);
    CHECK(std::abs(d - 1.9878442267) < 1e-6);
}

TEST_CASE("reported minimum never exceeds a dense grid scan")
{
    for (double hnu : {1e-5, 0.01, 0.5, 2.0, 100.0}) {
        for (KnVariant v : {KnVariant::Full, KnVariant::NoInterference}) {
            const KnMinimum m = kn_minimum(hnu, v);
            double grid_min = 1.0;
            for (int i = 0; i <= 100000; ++i) {
                grid_min = std::min(grid_min, kn_differential(hnu, i * kPi / 100000, v));
            }
            CHECK(m.value <= grid_min + 1e-12);
        }
    }
}

TEST_CASE("total cross section approaches the Thomson value")
{
    const double thomson_total = 8.0 * kPi / 3.0;
    const double sigma = kn_total_cross_section(1e-6);
    CHECK(std::abs(sigma - thomson_total) / thomson_total < 1e-3);
    // 8pi/3 r_e^2 = 0.66525 barn
    CHECK(std::abs(re2_to_barn(sigma) - 0.66525) < 1e-4);
}

TEST_CASE("total cross section agrees with a dense trapezoid oracle")
{
    for (double hnu : {0.001, 1.0, 1000.0}) {
        const int n = 1000000;
        const double h = kPi / n;
        double acc = 0.0;  // sin(phi) kills both endpoints
        for (int i = 1; i < n; ++i) {
            acc += kn_differential(hnu, i * h, KnVariant::Full) * std::sin(i * h);
        }
        const double trapezoid = 2.0 * kPi * acc * h;
        const double sigma = kn_total_cross_section(hnu);
        CHECK(std::abs(sigma - trapezoid) / trapezoid < 1e-7);
    }
}

TEST_CASE("total cross section falls off like one over energy, log-corrected")
{
    for (double e : {100.0, 250.0, 500.0}) {
        const double ratio = kn_total_cross_section(2 * e) / kn_total_cross_section(e);
        CHECK(ratio > 0.50);
        CHECK(ratio < 0.62);
    }
    CHECK(kn_total_cross_section(10.0) > kn_total_cross_section(100.0));
    CHECK(kn_total_cross_section(100.0) > kn_total_cross_section(1000.0));
    // regression anchor
    CHECK(kn_total_cross_section(1.0) == doctest::Approx(2.6597850355).epsilon(1e-9));
}

TEST_CASE("concurrent evaluation is deterministic")
{
    double results[4] = {};
    std::thread workers[4];
    for (int i = 0; i < 4; ++i) {
        workers[i] = std::thread([&, i] {
            results[i] = kn_total_cross_section(1.0) + kn_minimum(0.3, KnVariant::Full).angle;
        });
    }
    for (auto& w : workers) w.join();
    for (int i = 1; i < 4; ++i) CHECK(results[i] == results[0]);
}

TEST_CASE("cross section rejects invalid input")
{
    CHECK_THROWS_AS(kn_differential(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(kn_differential(1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(kn_minimum(-1.0), std::domain_error);
    CHECK_THROWS_AS(kn_total_cross_section(0.0), std::domain_error);
}
