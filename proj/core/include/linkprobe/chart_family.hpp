#pragma once

// Cylindrical chart L at an off-axis base point, the rescaled embedding
// family T_r(z) = L^{-1}(alpha r z / R), and numerical verification of the
// family's containment / Jacobian / linearization invariants:
//   (i)   T_r(0) = x0 and T_r(B_4(0)) c B_{4r}(x0),
//   (ii)  det DT_r(z) >= r^3 / c,
//   (iii) sup_z |A - DT_r(z)/r|_op <= |A|_op / 2, decreasing as r -> 0.
//
// The chart is L(x) = (r - r0, z0 - z, theta - theta0) in cylindrical
// coordinates, with the angular offset wrapped to (-pi, pi].  Its inverse is
// L^{-1}(y) = cyl(r0 + y1, theta0 + y3, z0 - y2).

#include <vector>

#include "linkprobe/axisym.hpp"
#include "linkprobe/errors.hpp"
#include "linkprobe/geometry.hpp"

namespace linkprobe {

struct ChartFamily {
    Point3 x0{};          // off-axis base point
    CylPoint3 x0_cyl{};   // cached cylindrical coordinates of x0
    double alpha = 0.0;   // rescaling constant, alpha = R / denom
    double R = 0.0;       // chart radius (suprema estimated over B_{4R}(x0))
    double R_prime = 0.0; // admissible radius bound for T_r, R' < R
    Mat3 A{};             // limit differential, A = (alpha/R) DL^{-1}(0)
    double c = 0.0;       // Jacobian lower-bound constant: det DT_r >= r^3/c
    double denom = 0.0;   // |DL^{-1}(0)|_op + inflated sup variation
};

// Chart evaluation.  Throws AxisPointError off the chart's cylinder domain
// and OutOfChartError when x is farther than r0 from x0 (the chart is only
// used on B_{r0}(x0), which keeps the angular offset away from the cut).
Point3 chart_L(const Point3& x0, const Point3& x);

// Inverse chart: y -> cyl(r0 + y1, theta0 + y3, z0 - y2).  Throws
// OutOfChartError when the radial coordinate r0 + y1 is not positive.
Point3 chart_L_inverse(const Point3& x0, const Point3& y);

// Differential of the inverse chart at y; columns are the images of the
// coordinate directions.  det = r0 + y1.
Mat3 chart_L_inverse_diff(const Point3& x0, const Point3& y);

// Builds the constants alpha, R, R', A, c for the chart at x0.  Suprema over
// B_{4R}(x0) are estimated on a 32^3 spherical sample grid and inflated by
// 10% so every inequality the constants must satisfy is preserved.  R starts
// at r0/8 (keeping 4R well clear of the angular cut) and halves until the
// sampled det-variation of the inverse differential is at most det/2; R'
// halves from R/2 until the sampled operator-norm variation is at most
// |DL^{-1}(0)|_op / 2.
ChartFamily build_family(const Point3& x0);

// T_r(z) = L^{-1}(alpha r z / R).  Throws RadiusOutOfRangeError unless
// 0 < r <= R'.  z is expected in B_4(0); the chart tolerates the whole
// rescaled range either way.
Point3 chart_T_r(const ChartFamily& f, double r, const Point3& z);

// Differential of T_r at z: (alpha r / R) DL^{-1}(alpha r z / R).
Mat3 chart_DT_r(const ChartFamily& f, double r, const Point3& z);

struct FamilyRadiusCheck {
    double radius = 0.0;
    double max_containment_ratio = 0.0; // max |T_r(z) - x0| / (4r), want < 1
    double min_det_ratio = 0.0;         // min c det DT_r / r^3, want >= 1
    double sup_deviation = 0.0;         // sup |A - DT_r(z)/r|_op
    bool containment_ok = false;
    bool det_ok = false;
    bool deviation_ok = false;          // sup_deviation <= |A|_op / 2
};

struct FamilyReport {
    std::vector<FamilyRadiusCheck> per_radius; // ladder r = R' 2^{-k}
    double a_norm = 0.0;                       // |A|_op
    bool deviation_decreasing = false;         // last sup < first sup
    bool all_ok = false;
};

// Checks the family invariants on n_samples points of B_4(0) across the
// geometric radius ladder r = R' 2^{-k}, k = 0 .. n_radii-1.
FamilyReport verify_family(const ChartFamily& f, int n_samples, int n_radii);

// L^1 rescaled-deviation of u_j against the differentiable limit u at the
// family's base point:
//   integral over B_4(0) of |(u_j(T_r(z)) - u(x0))/r - Du(x0)[A z]| dz
// by product Gauss-Legendre quadrature (quad_n radial x quad_n polar x
// 2 quad_n azimuthal nodes).  Requires quad_n >= 8 and 0 < r <= R'.
double rescaled_deviation_l1(const MapField3& u_j, const MapField3& u_limit,
                             const ChartFamily& f, double r, int quad_n);

} // namespace linkprobe
