#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vlc/dpd.hpp"
#include "vlc/led.hpp"

using namespace vlc;

namespace {

constexpr double kIl = -0.15, kIu = 0.15, kBias0 = 0.175;
constexpr double kVoltsPerWatt = 17.35;

// closed-form simple linear regression, used as an independent oracle
struct LineFit {
    double slope, intercept, r;
};

LineFit linfit(const std::vector<double>& xs, const std::vector<double>& ys)
{
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    const double r = (n * sxy - sx * sy) /
                     std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return {slope, intercept, r};
}

// composed commanded-current -> optical-power response over the drive range
std::vector<double> composed_power(const DpdCurve& curve, const LedModel& led, double temp_c,
                                   const std::vector<double>& grid)
{
    std::vector<double> out;
    for (double i : grid) {
        const double drive =
            std::clamp(curve.eval(i), curve.drive_min, curve.drive_max);
        out.push_back(led.optical_power(drive, temp_c));
    }
    return out;
}

// RMS deviation from a given line, normalized by the reference span
double nrms_vs_line(const std::vector<double>& xs, const std::vector<double>& ys,
                    const LineFit& line, double span)
{
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (line.slope * xs[i] + line.intercept);
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(xs.size())) / span;
}

double nrms_from_line(const std::vector<double>& xs, const std::vector<double>& ys)
{
    double lo = ys[0], hi = ys[0];
    for (double y : ys) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    return nrms_vs_line(xs, ys, linfit(xs, ys), hi - lo);
}

std::vector<double> grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

} // namespace

TEST_CASE("polyfit2 exact recovery")
{
    std::vector<double> xs, ys;
    for (int i = 0; i < 25; ++i) {
        const double x = -2.0 + 4.0 * i / 24.0;
        xs.push_back(x);
        ys.push_back(2.0 * x * x - x + 3.0);
    }
    const PolyFit2 f = polyfit2(xs, ys);
    CHECK(std::abs(f.a - 2.0) < 1e-10);
    CHECK(std::abs(f.b + 1.0) < 1e-10);
    CHECK(std::abs(f.c - 3.0) < 1e-10);
    CHECK(f.correlation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polyfit2 recovers the 30 degC characterization row")
{
    const LedModel led = LedModel::builtin();
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
        const double x = 0.35 * i / 39.0;
        xs.push_back(x);
        ys.push_back(led.optical_power(x, 30.0));
    }
    const PolyFit2 f = polyfit2(xs, ys);
    CHECK(std::abs(f.a - (-0.22566)) < 1e-9);
    CHECK(std::abs(f.b - 0.742316) < 1e-9);
    CHECK(std::abs(f.c - 0.008848) < 1e-9);
}

TEST_CASE("polyfit2 on noisy linear data")
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 0.01);
    std::vector<double> xs, ys;
    for (int i = 0; i < 200; ++i) {
        const double x = i / 199.0;
        xs.push_back(x);
        ys.push_back(0.7 * x + 0.1 + n(rng));
    }
    const PolyFit2 f = polyfit2(xs, ys);
    CHECK(std::abs(f.a) < 0.05);
    CHECK(f.b == doctest::Approx(0.7).epsilon(0.05));
    CHECK(f.correlation == doctest::Approx(std::abs(linfit(xs, ys).r)).epsilon(1e-3));
}

TEST_CASE("polyfit2 preconditions")
{
    CHECK_THROWS(polyfit2({1.0, 2.0}, {1.0, 2.0}));
    CHECK_THROWS(polyfit2({1.0, 1.0, 1.0, 1.0}, {1.0, 2.0, 3.0, 4.0}));
    CHECK_THROWS(polyfit2({1.0, 2.0, 3.0}, {1.0, 2.0}));
    // ill-scaled abscissa survives the column scaling
    std::vector<double> xs, ys;
    for (int i = 0; i < 10; ++i) {
        const double x = 100.0 + i * 0.01;
        xs.push_back(x);
        ys.push_back(3.0 * x * x + 2.0 * x + 1.0);
    }
    CHECK_NOTHROW(polyfit2(xs, ys));
}

TEST_CASE("passthrough and application")
{
    const DpdCurve id = DpdCurve::passthrough(kBias0, 0.0, 0.35);
    CHECK(id.eval(0.0) == kBias0);
    CHECK(id.bias_current == kBias0);

    const TimeFrame frame{-0.15, 0.0, 0.1, 0.15};
    const TimeFrame out = vlc::apply(id, frame);
    for (std::size_t i = 0; i < frame.size(); ++i)
        CHECK(out[i] == doctest::Approx(frame[i] + kBias0).epsilon(1e-15));

    // zero frame maps to the bias current
    const TimeFrame z = vlc::apply(id, TimeFrame(16, 0.0));
    for (double v : z) CHECK(v == kBias0);

    // output clamps to the valid drive range
    const TimeFrame big = vlc::apply(id, TimeFrame{10.0, -10.0});
    CHECK(big[0] == 0.35);
    CHECK(big[1] == 0.0);
}

TEST_CASE("calibration against a linear device is a no-op")
{
    const FeedbackSampler lin = [](double i) { return 11.3 * i; };
    const DpdCurve c = calibrate(lin, 64, kIl, kIu, kBias0);
    CHECK(std::abs(c.c2) < 1e-9);
    CHECK(c.c1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.c0 == doctest::Approx(kBias0).epsilon(1e-9));
    const TimeFrame frame{-0.12, 0.03, 0.09};
    const TimeFrame out = vlc::apply(c, frame);
    for (std::size_t i = 0; i < frame.size(); ++i)
        CHECK(std::abs(out[i] - (frame[i] + kBias0)) < 1e-6);
}

TEST_CASE("calibration preconditions and failure diagnostics")
{
    const FeedbackSampler lin = [](double i) { return 2.0 * i; };
    CHECK_THROWS(calibrate(lin, 2, kIl, kIu, kBias0));
    CHECK_THROWS(calibrate(lin, 64, kIu, kIl, kBias0));
    // non-monotone device voltage
    const FeedbackSampler fold = [](double i) { return -(i - 0.2) * (i - 0.2); };
    CHECK_THROWS_AS(calibrate(fold, 64, kIl, kIu, kBias0), CalibrationError);
}

TEST_CASE("calibration linearizes the characterized device")
{
    const LedModel led = LedModel::builtin();
    const auto sampler = make_led_sampler(led, 50.0, kVoltsPerWatt);
    const DpdCurve c = calibrate(sampler, 100, kIl, kIu, kBias0);

    const auto g = grid(kIl, kIu, 200);
    const auto p = composed_power(c, led, 50.0, g);
    CHECK(std::abs(linfit(g, p).r) > 0.99999);
}

TEST_CASE("linearization and monotonicity across the full table")
{
    const LedModel led = LedModel::builtin();
    const auto g = grid(kIl, kIu, 200);
    for (const LedPolyEntry& e : led.entries()) {
        const DpdCurve c =
            calibrate(make_led_sampler(led, e.temp_c, kVoltsPerWatt), 100, kIl, kIu, kBias0);
        CHECK(nrms_from_line(g, composed_power(c, led, e.temp_c, g)) < 0.005);
        // strictly increasing drive mapping
        double prev = c.eval(kIl);
        for (std::size_t i = 1; i < g.size(); ++i) {
            const double v = c.eval(g[i]);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("recalibration is idempotent")
{
    const LedModel led = LedModel::builtin();
    const auto sampler = make_led_sampler(led, 70.0, kVoltsPerWatt);
    const DpdCurve a = calibrate(sampler, 64, kIl, kIu, kBias0);
    const DpdCurve b = calibrate(sampler, 64, kIl, kIu, kBias0);
    CHECK(std::abs(a.c2 - b.c2) < 1e-12);
    CHECK(std::abs(a.c1 - b.c1) < 1e-12);
    CHECK(std::abs(a.c0 - b.c0) < 1e-12);
}

TEST_CASE("fixed calibration mismatch")
{
    const LedModel led = LedModel::builtin();
    const DpdCurve f50 =
        make_fixed_dpd(led, 50.0, 100, kIl, kIu, kBias0, kVoltsPerWatt);
    CHECK(f50.source_mode == DpdMode::Fixed);
    CHECK(f50.calib_temp_c == 50.0);

    // the mismatch is measured against the calibration-time reference line:
    // the receiver was set up for that linear response, so gain and offset
    // drift count as distortion even though a refit line would absorb them
    const auto g = grid(kIl, kIu, 200);
    const auto p50 = composed_power(f50, led, 50.0, g);
    const LineFit ref = linfit(g, p50);
    double lo = p50[0], hi = p50[0];
    for (double p : p50) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    const double matched = nrms_vs_line(g, p50, ref, hi - lo);
    const double hot = nrms_vs_line(g, composed_power(f50, led, 100.0, g), ref, hi - lo);
    CHECK(hot > 10.0 * matched);

    // residual curvature flips sign between under- and over-correction
    const PolyFit2 hot_fit = polyfit2(g, composed_power(f50, led, 100.0, g));
    const PolyFit2 cold_fit = polyfit2(g, composed_power(f50, led, 0.0, g));
    CHECK(hot_fit.a * cold_fit.a < 0.0);
}

TEST_CASE("fixed target span keeps the composed gain temperature invariant")
{
    const LedModel led = LedModel::builtin();
    const auto span = observed_vspan(make_led_sampler(led, 100.0, kVoltsPerWatt), 64, kIl,
                                     kIu, kBias0);
    CHECK(span.first < span.second);

    CalibrationOptions opts;
    opts.target_vspan = span;
    const auto g = grid(kIl, kIu, 200);
    double slope20 = 0.0, slope80 = 0.0;
    for (double t : {20.0, 80.0}) {
        const DpdCurve c =
            calibrate(make_led_sampler(led, t, kVoltsPerWatt), 100, kIl, kIu, kBias0, opts);
        const double s = linfit(g, composed_power(c, led, t, g)).slope;
        (t == 20.0 ? slope20 : slope80) = s;
    }
    CHECK(slope20 == doctest::Approx(slope80).epsilon(1e-3));
}

TEST_CASE("curve CSV round trip")
{
    const LedModel led = LedModel::builtin();
    const DpdCurve c = make_fixed_dpd(led, 50.0, 64, kIl, kIu, kBias0, kVoltsPerWatt);
    const DpdCurve back = DpdCurve::from_csv(c.to_csv());
    CHECK(back.c2 == doctest::Approx(c.c2).epsilon(1e-15));
    CHECK(back.c1 == doctest::Approx(c.c1).epsilon(1e-15));
    CHECK(back.c0 == doctest::Approx(c.c0).epsilon(1e-15));
    CHECK(back.bias_current == doctest::Approx(c.bias_current).epsilon(1e-15));
    CHECK(back.source_mode == DpdMode::Fixed);
    CHECK(back.calib_temp_c == 50.0);
    CHECK_THROWS(DpdCurve::from_csv("nonsense"));
}
