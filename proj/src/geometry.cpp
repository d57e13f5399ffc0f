#include "vlc/geometry.hpp"

#include <cmath>
#include <numbers>

namespace vlc {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const
{
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("Vec3: cannot normalize a zero vector");
    return {x / n, y / n, z / n};
}

LinkGeometry::LinkGeometry(Vec3 led_p, Vec3 led_n, Vec3 rx_p, Vec3 rx_n,
                           Vec3 fb_p, Vec3 fb_n, double n_l, double area)
    : led_pos(led_p), led_normal(led_n.normalized()),
      rx_pos(rx_p), rx_normal(rx_n.normalized()),
      fb_pos(fb_p), fb_normal(fb_n.normalized()),
      lambert_order(n_l), pd_area(area)
{
    if (pd_area <= 0.0) throw std::invalid_argument("LinkGeometry: pd_area must be > 0");
    if (lambert_order <= 0.0) throw std::invalid_argument("LinkGeometry: lambert_order must be > 0");
}

double lambertian_gain_angles(double phi, double theta, double distance,
                              double pd_area, double lambert_order)
{
    if (distance <= 0.0) throw std::invalid_argument("lambertian_gain_angles: distance must be > 0");
    if (pd_area <= 0.0) throw std::invalid_argument("lambertian_gain_angles: pd_area must be > 0");

    constexpr double half_pi = std::numbers::pi / 2.0;
    if (phi >= half_pi || theta >= half_pi) return 0.0;

    const double g = (lambert_order + 1.0) * pd_area / (2.0 * std::numbers::pi)
                   * std::pow(std::cos(phi), lambert_order) * std::cos(theta)
                   / (distance * distance);
    return g > 0.0 ? g : 0.0;
}

double gain_from_vectors(const LinkGeometry& g, PdTarget which)
{
    const Vec3& pd_pos = (which == PdTarget::Remote) ? g.rx_pos : g.fb_pos;
    const Vec3& pd_n = (which == PdTarget::Remote) ? g.rx_normal : g.fb_normal;

    const Vec3 v = pd_pos - g.led_pos;
    const double r = v.norm();
    if (r == 0.0) throw std::invalid_argument("gain_from_vectors: LED and PD positions coincide");

    const double cos_phi = v.dot(g.led_normal) / r;
    if (cos_phi <= 0.0) return 0.0; // PD behind the LED

    const double gain = -(g.lambert_order + 1.0) * g.pd_area / (2.0 * std::numbers::pi)
                      * std::pow(v.dot(g.led_normal), g.lambert_order) * v.dot(pd_n)
                      / std::pow(r, g.lambert_order + 3.0);
    return gain > 0.0 ? gain : 0.0;
}

} // namespace vlc
