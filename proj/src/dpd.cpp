#include "vlc/dpd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vlc {

namespace {

// Householder QR on the n x 3 Vandermonde [x^2 x 1]; columns are scaled to
// unit norm first so near-collinear inputs stay well conditioned.
std::array<double, 3> qr_solve3(const std::vector<double>& xs, const std::vector<double>& ys)
{
    const std::size_t n = xs.size();
    std::vector<std::array<double, 3>> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = {xs[i] * xs[i], xs[i], 1.0};

    std::array<double, 3> scale{};
    for (std::size_t c = 0; c < 3; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i][c] * a[i][c];
        scale[c] = std::sqrt(s);
        if (scale[c] == 0.0) throw std::invalid_argument("polyfit2: zero column in design matrix");
        for (std::size_t i = 0; i < n; ++i) a[i][c] /= scale[c];
    }

    std::vector<double> b = ys;
    for (std::size_t c = 0; c < 3; ++c) {
        double norm = 0.0;
        for (std::size_t i = c; i < n; ++i) norm += a[i][c] * a[i][c];
        norm = std::sqrt(norm);
        if (norm < 1e-13) throw std::invalid_argument("polyfit2: rank-deficient design matrix");

        const double alpha = a[c][c] >= 0.0 ? -norm : norm;
        std::vector<double> v(n, 0.0);
        for (std::size_t i = c; i < n; ++i) v[i] = a[i][c];
        v[c] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = c; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;

        for (std::size_t col = c; col < 3; ++col) {
            double dot = 0.0;
            for (std::size_t i = c; i < n; ++i) dot += v[i] * a[i][col];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = c; i < n; ++i) a[i][col] -= f * v[i];
        }
        double dot = 0.0;
        for (std::size_t i = c; i < n; ++i) dot += v[i] * b[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = c; i < n; ++i) b[i] -= f * v[i];
    }

    std::array<double, 3> coef{};
    for (int r = 2; r >= 0; --r) {
        double acc = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < 3; ++c) acc -= a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * coef[static_cast<std::size_t>(c)];
        coef[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    }
    for (std::size_t c = 0; c < 3; ++c) coef[c] /= scale[c];
    return coef;
}

} // namespace

PolyFit2 polyfit2(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size()) throw std::invalid_argument("polyfit2: length mismatch");
    if (std::set<double>(xs.begin(), xs.end()).size() < 3)
        throw std::invalid_argument("polyfit2: need at least 3 distinct x values");

    const auto coef = qr_solve3(xs, ys);
    PolyFit2 fit;
    fit.a = coef[0];
    fit.b = coef[1];
    fit.c = coef[2];

    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= static_cast<double>(ys.size());
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
        const double r = ys[i] - fit.eval(xs[i]);
        ss_res += r * r;
    }
    fit.correlation = ss_tot > 0.0 ? std::sqrt(std::max(0.0, 1.0 - ss_res / ss_tot)) : 1.0;
    return fit;
}

DpdCurve DpdCurve::passthrough(double bias0, double drive_min, double drive_max)
{
    DpdCurve c;
    c.c2 = 0.0;
    c.c1 = 1.0;
    c.c0 = bias0;
    c.bias_current = bias0;
    c.source_mode = DpdMode::None;
    c.drive_min = drive_min;
    c.drive_max = drive_max;
    return c;
}

TimeFrame apply(const DpdCurve& curve, const TimeFrame& frame)
{
    TimeFrame out(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i)
        out[i] = std::clamp(curve.eval(frame[i]), curve.drive_min, curve.drive_max);
    return out;
}

std::pair<double, double> observed_vspan(const FeedbackSampler& sampler, std::size_t j_levels,
                                         double i_lo, double i_hi, double i_bias0)
{
    double vmin = 0.0, vmax = 0.0;
    for (std::size_t j = 0; j < j_levels; ++j) {
        const double i = i_lo + (i_hi - i_lo) * static_cast<double>(j) / static_cast<double>(j_levels - 1);
        const double v = sampler(i + i_bias0);
        if (j == 0 || v < vmin) vmin = v;
        if (j == 0 || v > vmax) vmax = v;
    }
    return {vmin, vmax};
}

DpdCurve calibrate(const FeedbackSampler& sampler, std::size_t j_levels,
                   double i_lo, double i_hi, double i_bias0,
                   const CalibrationOptions& opts)
{
    if (j_levels < 3) throw std::invalid_argument("calibrate: need at least 3 current levels");
    if (i_lo >= i_hi) throw std::invalid_argument("calibrate: i_lo must be below i_hi");
    if (opts.samples_per_level < 1) throw std::invalid_argument("calibrate: samples_per_level must be >= 1");

    // step 1-2: equally spaced drive grid, per-level mean TIA voltage
    std::vector<double> grid(j_levels), vmean(j_levels);
    for (std::size_t j = 0; j < j_levels; ++j) {
        grid[j] = i_lo + (i_hi - i_lo) * static_cast<double>(j) / static_cast<double>(j_levels - 1);
        double acc = 0.0;
        for (std::size_t s = 0; s < opts.samples_per_level; ++s) acc += sampler(grid[j] + i_bias0);
        vmean[j] = acc / static_cast<double>(opts.samples_per_level);
    }

    for (std::size_t j = 1; j < j_levels; ++j)
        if (vmean[j] <= vmean[j - 1])
            throw CalibrationError("calibrate: feedback voltage not strictly increasing between levels " +
                                   std::to_string(j - 1) + " and " + std::to_string(j));

    // step 3: drive current as a function of observed voltage
    std::vector<double> drive(j_levels);
    for (std::size_t j = 0; j < j_levels; ++j) drive[j] = grid[j] + i_bias0;
    const PolyFit2 inv = polyfit2(vmean, drive);

    const double v_lo = opts.target_vspan ? opts.target_vspan->first : vmean.front();
    const double v_hi = opts.target_vspan ? opts.target_vspan->second : vmean.back();
    if (v_lo >= v_hi) throw CalibrationError("calibrate: degenerate target voltage span");

    // the fitted parabola must be monotone across the span it will be
    // evaluated on, otherwise the drive curve would fold
    const double d_lo = 2.0 * inv.a * v_lo + inv.b;
    const double d_hi = 2.0 * inv.a * v_hi + inv.b;
    if (d_lo <= 0.0 || d_hi <= 0.0)
        throw CalibrationError("calibrate: inverse fit non-monotone over the target span");

    // steps 4-5: equally spaced voltage targets mapped to drive currents
    std::vector<double> drive_target(j_levels);
    for (std::size_t j = 0; j < j_levels; ++j) {
        const double v = v_lo + (v_hi - v_lo) * static_cast<double>(j) / static_cast<double>(j_levels - 1);
        drive_target[j] = inv.eval(v);
    }

    // step 6: final commanded-current -> drive-current polynomial
    const PolyFit2 fwd = polyfit2(grid, drive_target);

    DpdCurve curve;
    curve.c2 = fwd.a;
    curve.c1 = fwd.b;
    curve.c0 = fwd.c;
    curve.bias_current = fwd.c;
    curve.source_mode = DpdMode::LuminousFeedback;
    curve.calib_levels = j_levels;
    curve.drive_min = opts.drive_min;
    curve.drive_max = opts.drive_max;

    const double s_lo = 2.0 * curve.c2 * i_lo + curve.c1;
    const double s_hi = 2.0 * curve.c2 * i_hi + curve.c1;
    if (s_lo <= 0.0 || s_hi <= 0.0)
        throw CalibrationError("calibrate: resulting drive mapping is not strictly increasing");
    return curve;
}

FeedbackSampler make_led_sampler(const LedModel& model, double temp_c, double volts_per_watt)
{
    const double lo = model.current_min();
    const double hi = model.current_max();
    return [=, &model](double i_drive) {
        return volts_per_watt * model.optical_power(std::clamp(i_drive, lo, hi), temp_c);
    };
}

DpdCurve make_fixed_dpd(const LedModel& model, double calib_temp_c, std::size_t j_levels,
                        double i_lo, double i_hi, double i_bias0, double volts_per_watt,
                        const CalibrationOptions& opts)
{
    CalibrationOptions o = opts;
    o.drive_min = model.current_min();
    o.drive_max = model.current_max();
    DpdCurve c = calibrate(make_led_sampler(model, calib_temp_c, volts_per_watt),
                           j_levels, i_lo, i_hi, i_bias0, o);
    c.source_mode = DpdMode::Fixed;
    c.calib_temp_c = calib_temp_c;
    return c;
}

std::string DpdCurve::to_csv() const
{
    std::ostringstream out;
    out.precision(17);
    out << "c2,c1,c0,bias_current,source_mode,calib_temp\n";
    const char* mode = source_mode == DpdMode::None ? "none"
                     : source_mode == DpdMode::Fixed ? "fixed" : "luminous_feedback";
    out << c2 << ',' << c1 << ',' << c0 << ',' << bias_current << ',' << mode << ',' << calib_temp_c << '\n';
    return out.str();
}

DpdCurve DpdCurve::from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || !std::getline(in, line))
        throw std::runtime_error("DpdCurve: malformed CSV");
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    DpdCurve c;
    std::string mode;
    if (!(ss >> c.c2 >> c.c1 >> c.c0 >> c.bias_current >> mode >> c.calib_temp_c))
        throw std::runtime_error("DpdCurve: malformed CSV row");
    if (mode == "none") c.source_mode = DpdMode::None;
    else if (mode == "fixed") c.source_mode = DpdMode::Fixed;
    else if (mode == "luminous_feedback") c.source_mode = DpdMode::LuminousFeedback;
    else throw std::runtime_error("DpdCurve: unknown source mode " + mode);
    return c;
}

} // namespace vlc
