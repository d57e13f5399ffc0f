#pragma once

#include <stdexcept>

namespace vlc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
    Vec3 normalized() const;

    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

enum class PdTarget { Remote, Feedback };

// LED + photodiode placement for the line-of-sight link budget.
// Orientation vectors are renormalized at construction so configs may use
// integer normals like [0,0,-1].
struct LinkGeometry {
    Vec3 led_pos;
    Vec3 led_normal;
    Vec3 rx_pos;
    Vec3 rx_normal;
    Vec3 fb_pos;
    Vec3 fb_normal;
    double lambert_order = 0.5; // n_L
    double pd_area = 1e-6;      // m^2

    LinkGeometry() = default;
    LinkGeometry(Vec3 led_p, Vec3 led_n, Vec3 rx_p, Vec3 rx_n,
                 Vec3 fb_p, Vec3 fb_n, double n_l, double area);
};

// DC optical channel gain from incidence/irradiance angles.
// Returns 0 when either angle reaches 90 degrees (detector facing away).
double lambertian_gain_angles(double phi, double theta, double distance,
                              double pd_area, double lambert_order);

// Same gain evaluated from the position/orientation vectors. The sign
// convention follows v = pd_pos - led_pos with a detector normal facing the
// LED; out-of-field geometries clamp to 0.
double gain_from_vectors(const LinkGeometry& g, PdTarget which);

} // namespace vlc
