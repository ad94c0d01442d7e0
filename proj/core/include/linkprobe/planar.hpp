#ifndef LINKPROBE_PLANAR_HPP
#define LINKPROBE_PLANAR_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "linkprobe/geometry.hpp"
#include "linkprobe/linking.hpp"
#include "linkprobe/torus.hpp"

namespace linkprobe {

// ---------------------------------------------------------------------------
// 2-D topological degree: winding numbers on circles, degree by preimage
// counting, the slice reduction of 3-D linking to a difference of two planar
// degrees, and the divergence-identity residual.
// ---------------------------------------------------------------------------

struct PlanarMap {
    std::string name;
    std::function<Vec2(Vec2)> eval;
    // Analytic Jacobian; when absent a central finite difference is used.
    std::function<Mat2(Vec2)> jac;
    Vec2 domain_center{0.0, 0.0};
    double domain_radius = 1.0;
    bool orientation_preserving = false; // det Dw > 0 a.e.
    bool injective = false;              // one-to-one on the domain
};

struct DegreeResult {
    int value = 0;
    double boundary_clearance = 0.0; // min distance from the boundary image to y
    bool defined = false;
};

struct Circle2 {
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
};

// Relative clearance below which a degree result is marked undefined.
inline constexpr double kDegreeClearanceRel = 1e-9;

// Jacobian of a planar map: analytic when available, else central finite
// differences with step 1e-6 x max(1, |x|).
Mat2 planar_jacobian(const PlanarMap& w, Vec2 x);

// Winding number of t -> w(circle(t)) - y: total accumulated angle / 2 pi.
// Starts from n samples and bisects adaptively until every angular step is
// below pi/2 (the safe-winding criterion).  Throws BoundaryHitError when a
// sample lands (numerically) on y.  Requires n >= 8.
DegreeResult winding_number(const PlanarMap& w, const Circle2& circle, Vec2 y, int n);

// Degree by root counting: distinct solutions of w(x) = y strictly inside
// the disk, located by a grid_n x grid_n scan with damped-Newton polishing
// and deduplication at radius 1e-8 x disk radius.  For a.e.-injective maps
// with det Dw > 0 a.e. this equals the winding number.
DegreeResult preimage_count_degree(const PlanarMap& w, const Circle2& disk, Vec2 y, int grid_n);

// Linking of (v o mu_a, v o nu_b) computed entirely inside the slice plane
// {x3 = a2}: if v maps the slice into a single plane (a horizontal plane, or
// a plane through the x3-axis — detected by sampling, tolerance 1e-9), its
// planar part w is extracted (after rotation_for_halfplane in the axial
// case) and the result is
//
//     winding(w, S_a, w(p_ab)) - winding(w, S_a, w(q_ab)),
//
// with S_a the circle of radius a1 + 2 and p_ab/q_ab the slice crossings of
// nu_b.  Throws NotPlanarError / ImagesTouchError.
LinkResult linking_via_planar_degree(const std::function<Point3(const Point3&)>& v,
                                     const LinkParamA& a, const LinkParamB& b, int n);

// ---------------------------------------------------------------------------
// Divergence-identity residual
//
//   R(w; phi, g) =   integral (div g)(w) phi det Dw dx
//                  + integral g(w) . (cof Dw)[grad phi] dx,
//
// which vanishes for smooth maps (integration by parts; cof Dw is
// divergence-free row-wise).  |R| is the diagnostic the test catalog drives
// toward zero.
// ---------------------------------------------------------------------------

// Polynomial bump test function phi(x) = max(0, 1 - |x - c|^2 / rho^2)^3,
// C^2 and compactly supported in the disk of radius rho about c.
struct TestFunction {
    std::string name;
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
    double eval(Vec2 x) const;
    Vec2 grad(Vec2 x) const;
};

// Compactly supported vector field g(u, v) = B(u, v) (P(u, v), Q(u, v)):
// a wide bump B = max(0, 1 - (u^2+v^2)/40^2)^3 times cubic polynomials
//   P = c0 + c1 u + c2 v + c3 u v + c4 u^2 v,
//   Q = c5 + c6 u + c7 v + c8 u^2 + c9 v^2 u,
// with closed-form divergence.
struct VectorField2 {
    std::string name;
    std::array<double, 10> coef{};
    Vec2 eval(Vec2 u) const;
    double divergence(Vec2 u) const;
};

double divergence_identity_residual(const PlanarMap& w, const TestFunction& phi,
                                    const VectorField2& g, int quad_n);

// ---------------------------------------------------------------------------
// Catalogs
// ---------------------------------------------------------------------------

// Named planar maps on the unit disk: identity, shear, rotation, complex
// square, sinusoidal perturbation of the identity, and the reflection
// (x, -y) (orientation-reversing control).
std::vector<PlanarMap> planar_map_catalog();

// The smooth subset driven through the divergence sweep (identity, shear,
// rotation, complex square, sinusoidal perturbation); the reflection is kept
// out of it and serves as the orientation-reversing degree control only.
std::vector<PlanarMap> planar_map_catalog_smooth();

// Three bump test functions x three fixed-coefficient vector fields.
std::vector<TestFunction> test_function_catalog();
std::vector<VectorField2> vector_field_catalog();

} // namespace linkprobe

#endif // LINKPROBE_PLANAR_HPP
