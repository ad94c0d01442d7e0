#ifndef LINKPROBE_AXISYM_HPP
#define LINKPROBE_AXISYM_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "linkprobe/geometry.hpp"
#include "linkprobe/planar.hpp"

namespace linkprobe {

// ---------------------------------------------------------------------------
// Axisymmetric maps: a profile (Theta, u1, u2) defines
//
//   u(r cos t, r sin t, z) = u1(r,t,z) (cos Theta(t), sin Theta(t), 0)
//                          + u2(r,t,z) e3,
//
// i.e. the half-plane O_t maps into the half-plane O_{Theta(t)}.  Theta is a
// monotone circle map with Theta(2 pi) = Theta(0) + 2 pi; u1 >= 0.
// ---------------------------------------------------------------------------

// Below this distance from the axis the cylindrical frame degenerates and
// profile evaluation is refused (configurable per-call where relevant).
inline constexpr double kDefaultAxisExclusion = 1e-3;

struct AxisymProfile {
    std::string name;
    std::function<double(double)> theta;       // Theta(t)
    std::function<double(double)> theta_prime; // optional; finite difference when absent
    std::function<double(double, double, double)> u1; // u1(r, t, z) >= 0
    std::function<double(double, double, double)> u2; // u2(r, t, z)
    bool orientation_preserving = false;
    bool injective = false;
};

// Checks the profile invariants: Theta(2 pi) - Theta(0) = 2 pi within 1e-12,
// strict increase on a 4096-point net, u1 >= 0 on a sample of the solid
// torus.  Throws ConfigError on violation.
void validate_profile(const AxisymProfile& p);

// Theta'(t), analytic when provided, else central finite difference.
double profile_theta_prime(const AxisymProfile& p, double t);

// Evaluate the axisymmetric map at an off-axis point.
Point3 axisym_eval(const AxisymProfile& p, const Point3& x);

// det Du at x, assembled column-by-column in the cylindrical orthonormal
// frame (d/dr, (1/r) d/dtheta, d/dz of the Cartesian image); agrees with the
// full Cartesian finite-difference determinant for smooth profiles.
double axisym_jacobian(const AxisymProfile& p, const Point3& x);

// ---------------------------------------------------------------------------
// Evaluable 3-D map fields from a named catalog
// ---------------------------------------------------------------------------

struct MapField3 {
    enum class Kind { Identity, Linear, Axisym, Composed, Custom };

    std::string name;
    Kind kind = Kind::Identity;
    std::function<Point3(const Point3&)> eval;
    std::function<Mat3(const Point3&)> jac; // optional analytic Jacobian
    std::shared_ptr<AxisymProfile> profile; // set when kind == Axisym
    bool orientation_preserving = false;
    bool injective = false;
};

MapField3 make_identity_field();
MapField3 make_linear_field(const Mat3& m);
MapField3 make_axisym_field(const AxisymProfile& profile);
// outer after inner; analytic Jacobian chained when both factors carry one.
MapField3 make_composed_field(const MapField3& outer, const MapField3& inner);
// Test-only escape hatch for maps outside the named catalog (e.g. the fold
// (|x1|, x2, x3) used to prove the injectivity sampler can detect failures).
MapField3 make_custom_field(std::string name,
                            std::function<Point3(const Point3&)> eval,
                            std::function<Mat3(const Point3&)> jac = nullptr);

// Jacobian of a field: analytic when present, else central finite
// differences with step 1e-6 x max(1, |x|).
Mat3 field_jacobian(const MapField3& m, const Point3& x);

// ---------------------------------------------------------------------------
// Sampled injectivity check (falsification only: it can exhibit collisions,
// never certify injectivity)
// ---------------------------------------------------------------------------

struct Ball3 {
    Point3 center{0.0, 0.0, 0.0};
    double radius = 1.0;
};

struct CollisionPair {
    Point3 x;
    Point3 x_prime;
    double image_distance;
};

struct InjectivityReport {
    long n_samples = 0;
    long n_candidate_pairs = 0; // image-space near pairs handed to the polisher
    long n_collisions = 0;      // |x - x'| > 1e-3 with |m(x) - m(x')| < 1e-9 scale
    double image_scale = 0.0;
    std::vector<CollisionPair> examples; // capped at 10
};

// Draws n_pairs sample points, finds image-space near pairs by spatial
// hashing, and polishes each candidate with damped Newton toward an exact
// collision m(x) = m(x').  A fold produces collisions in bulk; an injective
// map produces none.
InjectivityReport injectivity_sample(const MapField3& m, const Ball3& domain,
                                     long n_pairs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Planar restriction
// ---------------------------------------------------------------------------

// For an axisymmetric field, the half-plane O_theta maps into O_{Theta(theta)};
// rotating the image onto {x3 = 0} exposes the planar profile map
//
//   w(x, y) = ( u1(x, theta, -y), -u2(x, theta, -y) ),
//
// where (x, y) parametrize O_theta via rho = x, z = -y (the same frame the
// rotation uses).  det Dw > 0 wherever the profile Jacobian factor is
// positive.  Throws NotAxisymmetricError for non-axisym fields.
PlanarMap restrict_to_halfplane(const MapField3& m, double theta);

// ---------------------------------------------------------------------------
// Catalog and config
// ---------------------------------------------------------------------------

// Named orientation-preserving injective profiles: identity, angular twist
// (Theta = t + 0.3 sin t), radial exponential stretch (u1 = r e^z), and
// vertical shear (u2 = z + 0.1 r).
std::vector<AxisymProfile> axisym_profile_catalog();

// Load a profile from the JSON schema:
//   {
//     "name": "...",
//     "theta": {"kind": "linear"} | {"kind": "sin", "amplitude": a}
//            | {"kind": "table", "points": [[t0, T0], [t1, T1], ...]},
//     "u1": {"r_scale": a, "exp_z": k},   // u1 = a r exp(k z)
//     "u2": {"z_scale": a, "r_shear": k}  // u2 = a z + k r
//   }
// Table thetas are interpolated with a monotone cubic (Fritsch-Carlson).
AxisymProfile load_profile(const std::string& path);

// Strictly increasing monotone cubic through the given (t, value) knots;
// exposed for tests of the table-Theta path.
std::function<double(double)> monotone_cubic(std::vector<std::pair<double, double>> knots);

} // namespace linkprobe

#endif // LINKPROBE_AXISYM_HPP
