#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "vlc/dpd.hpp"
#include "vlc/led.hpp"

using namespace vlc;

TEST_CASE("optical power at tabulated temperatures")
{
    const LedModel led = LedModel::builtin();
    CHECK(led.optical_power(0.35, 30.0) == doctest::Approx(0.2410).epsilon(5e-4));
    CHECK(led.optical_power(0.175, 50.0) == doctest::Approx(0.1278).epsilon(5e-3));
    CHECK(led.optical_power(0.0, 20.0) == doctest::Approx(0.008781).epsilon(1e-12));
}

TEST_CASE("temperature interpolation is linear per coefficient")
{
    const LedModel led = LedModel::builtin();
    const LedPolyEntry a = led.coefficients_at(20.0);
    const LedPolyEntry b = led.coefficients_at(30.0);
    const LedPolyEntry mid = led.coefficients_at(25.0);
    CHECK(mid.a2 == doctest::Approx(0.5 * (a.a2 + b.a2)).epsilon(1e-12));
    CHECK(mid.a1 == doctest::Approx(0.5 * (a.a1 + b.a1)).epsilon(1e-12));
    CHECK(mid.a0 == doctest::Approx(0.5 * (a.a0 + b.a0)).epsilon(1e-12));
}

TEST_CASE("range checking")
{
    const LedModel led = LedModel::builtin();
    CHECK_THROWS(led.optical_power(0.36, 30.0));
    CHECK_THROWS(led.optical_power(-0.01, 30.0));
    CHECK_THROWS(led.optical_power(0.1, 150.0));
    CHECK_THROWS(led.optical_power(0.1, -20.0));

    LedModel loose(led.entries(), 115.0, 3.457, 2.1e-3, 0.0, 0.35, true);
    CHECK_NOTHROW(loose.optical_power(0.1, 120.0));
}

TEST_CASE("flux and power conversions")
{
    const LedModel led = LedModel::builtin();
    CHECK(led.flux_from_tia_voltage(3.457) == doctest::Approx(115.0).epsilon(1e-12));
    CHECK(led.flux_from_tia_voltage(0.0) == 0.0);
    CHECK(led.flux_from_tia_voltage(1.0) == doctest::Approx(33.266).epsilon(1e-4));
    CHECK_THROWS(led.flux_from_tia_voltage(-0.1));

    CHECK(led.optical_power_from_flux(115.0) == doctest::Approx(0.2415).epsilon(1e-12));
    CHECK(led.optical_power_from_flux(0.0) == 0.0);
    CHECK(led.optical_power_from_flux(100.0) == doctest::Approx(0.210).epsilon(1e-12));
    // flux conversion cross-checks the 30 degC polynomial at full drive
    CHECK(led.optical_power(0.35, 30.0) ==
          doctest::Approx(led.optical_power_from_flux(115.0)).epsilon(3e-3));
}

TEST_CASE("fit round trip recovers every tabulated row")
{
    const LedModel led = LedModel::builtin();
    CHECK(led.entries().size() == 12);
    for (const LedPolyEntry& e : led.entries()) {
        std::vector<double> xs, ys;
        for (int i = 0; i < 50; ++i) {
            const double x = 0.35 * i / 49.0;
            xs.push_back(x);
            ys.push_back(led.optical_power(x, e.temp_c));
        }
        const PolyFit2 fit = polyfit2(xs, ys);
        CHECK(std::abs(fit.a - e.a2) < 1e-9);
        CHECK(std::abs(fit.b - e.a1) < 1e-9);
        CHECK(std::abs(fit.c - e.a0) < 1e-9);
    }
}

TEST_CASE("tabulated physics sanity")
{
    const LedModel led = LedModel::builtin();
    for (const LedPolyEntry& e : led.entries()) {
        CHECK(e.a2 < 0.0); // compressive
        CHECK(led.optical_power(0.35, e.temp_c) > 0.0);
    }
    // efficiency falls with junction heating; the characterization has a
    // little scatter, so allow a small tolerance on adjacent rows
    double prev = 1e9;
    for (const LedPolyEntry& e : led.entries()) {
        if (e.temp_c < 0.0) continue;
        const double p = led.optical_power(0.35, e.temp_c);
        CHECK(p <= prev + 0.001);
        prev = p;
    }
    CHECK(led.optical_power(0.35, 100.0) < 0.9 * led.optical_power(0.35, 0.0));
    // concavity: slope decreasing in current
    CHECK(led.optical_power_slope(0.3, 30.0) < led.optical_power_slope(0.1, 30.0));
}

TEST_CASE("model CSV round trip")
{
    const LedModel led = LedModel::builtin();
    const std::string path = "led_roundtrip_tmp.csv";
    {
        std::ofstream f(path);
        f.precision(17);
        f << "temp_c,a2,a1,a0\n";
        for (const LedPolyEntry& e : led.entries())
            f << e.temp_c << ',' << e.a2 << ',' << e.a1 << ',' << e.a0 << '\n';
    }
    const LedModel loaded = LedModel::from_csv(path);
    REQUIRE(loaded.entries().size() == led.entries().size());
    for (std::size_t i = 0; i < led.entries().size(); ++i) {
        CHECK(loaded.entries()[i].temp_c == led.entries()[i].temp_c);
        CHECK(loaded.entries()[i].a1 == led.entries()[i].a1);
    }
    std::remove(path.c_str());
}

TEST_CASE("frequency response interpolation")
{
    const FrequencyResponse flat = FrequencyResponse::flat();
    CHECK(std::abs(flat.eval(3.3e6) - cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(electric_gain(flat, 5.968e-8, 1e6)) ==
          doctest::Approx(5.968e-8).epsilon(1e-12));

    FrequencyResponse two({{0.0, 1.0, 0.0}, {10e6, 0.5, 0.0}});
    CHECK(std::abs(two.eval(5e6)) == doctest::Approx(0.75).epsilon(1e-12));
    // endpoint hold
    CHECK(std::abs(two.eval(20e6)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("default parametric response")
{
    const FrequencyResponse r = FrequencyResponse::lowpass_default();
    CHECK(std::abs(r.eval(0.0)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::arg(r.eval(0.0)) == doctest::Approx(0.0).epsilon(1e-9));

    // single-pole cutoff with the second stage pushed far out
    const FrequencyResponse lone = FrequencyResponse::lowpass_default(2e6, 1e12, 2048, 10e6);
    CHECK(std::abs(lone.eval(2e6)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));

    double prev = 2.0;
    for (int i = 0; i <= 50; ++i) {
        const double m = std::abs(r.eval(i * 10e6 / 50.0));
        CHECK(m <= prev + 1e-12);
        prev = m;
    }
}

TEST_CASE("frequency response validation")
{
    CHECK_THROWS(FrequencyResponse({}));
    CHECK_THROWS(FrequencyResponse({{1e6, 1.0, 0.0}, {1e6, 0.5, 0.0}}));
    CHECK_THROWS(FrequencyResponse::lowpass_default(0.0, 1e6));
}
