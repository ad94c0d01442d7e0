#ifndef LINKPROBE_TORUS_HPP
#define LINKPROBE_TORUS_HPP

#include "linkprobe/geometry.hpp"
#include "linkprobe/rng.hpp"

namespace linkprobe {

// ---------------------------------------------------------------------------
// The solid torus ("anuloid")
//
//   A = { x in R^3 : (sqrt(x1^2 + x2^2) - 2)^2 + x3^2 < 1 },
//
// core-circle radius 2, tube radius 1, parametrized by
//
//   phi(xi, eta) = ((|xi| eta1 + 2) xi_hat1, (|xi| eta1 + 2) xi_hat2, |xi| eta2)
//
// with xi in S^1 and eta in the closed unit disk.  Two circle families live
// inside it: the horizontal rings mu_a (fibers of eta) and the vertical tube
// circles nu_b (fibers of the tilde chart below).
// ---------------------------------------------------------------------------

inline constexpr double kCoreRadius = 2.0;
inline constexpr double kTubeRadius = 1.0;

// Tolerance below which a vertical-circle/plane intersection counts as
// tangential (such parameter pairs form a null set; callers resample).
inline constexpr double kTangentTol = 1e-12;

struct TorusParam {
    Vec2 xi;  // unit 2-vector (angular position along the core circle)
    Vec2 eta; // point of the closed unit disk (position in the tube section)
};

// Output of the tilde chart: xi_t has length s = sqrt((r-2)^2 + z^2) (not
// unit), eta_t = ((r-2), z)/s is unit.  phi(xi_t, eta_t) recovers the point.
struct TorusParamTilde {
    Vec2 xi_t;
    Vec2 eta_t;
};

// Horizontal-ring parameter: a in the open disk of radius 1/10 about 0.
struct LinkParamA {
    Vec2 a;
};

// Vertical-circle parameter: b in the closed unit disk with |b - e1| < 1/10.
// The boundary value b = e1 is admitted: it is the canonical vertical circle
// and linking against it is the reference case throughout.
struct LinkParamB {
    Vec2 b;
};

// The horizontal slice at z = a2 through the link pair (a, b): the ring
// mu_a projects to the circle S_a of radius a1 + 2, and the vertical circle
// nu_b crosses the slice plane at p_ab (inside the disk) and q_ab (outside).
struct PlanarSlice {
    LinkParamA a;
    double circle_radius = 0.0; // a1 + 2
    Vec2 p_ab;                  // projected crossing inside the disk
    Vec2 q_ab;                  // projected crossing outside the disk
    double z_level = 0.0;       // a2
};

bool valid_link_a(const LinkParamA& a);
bool valid_link_b(const LinkParamB& b);

// Membership in the closed solid torus, with slack `tol` on the tube radius.
bool in_closed_anuloid(const Point3& p, double tol = 1e-12);

// Torus parametrization.  Throws ZeroXiError when |xi|^2 < kAxisTol2.
Point3 phi(Vec2 xi, Vec2 eta);
inline Point3 phi(const TorusParam& tp) { return phi(tp.xi, tp.eta); }

// Horizontal ring through tube-section point a:
//   mu_a(t) = ((a1 + 2) cos t, (a1 + 2) sin t, a2).
Point3 mu_a(const LinkParamA& a, double t);

// Vertical circle over core angle b_hat with radius |b|:
//   nu_b(t) = ((|b| cos t + 2) b_hat1, (|b| cos t + 2) b_hat2, |b| sin t).
Point3 nu_b(const LinkParamB& b, double t);

// Inverse chart: xi = (x1, x2)/r, eta = (r - 2, x3).
// Throws AxisPointError off the cylindrical domain and OutsideAnuloidError
// when |eta| > 1 + 1e-12.
TorusParam chart_xi_eta(const Point3& p);

// Tilde chart: xi_t = s (cos theta, sin theta), eta_t = ((r - 2), z)/s with
// s = sqrt((r-2)^2 + z^2).  Throws OnCoreCircleError when s^2 < kAxisTol2.
TorusParamTilde chart_tilde(const Point3& p);

// Audited coarea Jacobian of the eta fibration.  The displayed derivative
// matrix of eta has orthonormal rows, so the Gram determinant is identically
// one; the coarea volume identity (both sides 4 pi^2) confirms it.
double coarea_jacobian_eta(const Point3& p);

// Claimed (unaudited) value r = sqrt(x1^2 + x2^2), kept so the coarea check
// can quantify how badly it fails the volume identity.
double coarea_jacobian_eta_claimed(const Point3& p);

// Audited coarea Jacobian of the tilde fibration: s / r with
// s = sqrt((r-2)^2 + z^2).  Validated against a finite-difference Gram
// determinant and the coarea identity with value 4 pi^2 / 3.
double coarea_jacobian_xi_tilde(const Point3& p);

// Claimed (unaudited) value s^2 / r^2 — the square of the audited one; the
// coarea check quantifies its failure as well.
double coarea_jacobian_xi_tilde_claimed(const Point3& p);

// Intersect the vertical circle nu_b with the horizontal plane z = a2 and
// classify the two crossings as inside/outside the ring disk of mu_a.
// Throws NoIntersectionError when |b| <= |a2| and TangentialError when
// the circle only grazes the plane (||b| - |a2|| < kTangentTol).
PlanarSlice planar_slice(const LinkParamA& a, const LinkParamB& b);

// Uniform samplers for the two parameter domains.  `sample_link_b` draws
// from the disk of radius 1/10 about e1 and rejects |b| >= 1 (acceptance
// about one half).
LinkParamA sample_link_a(Rng& rng);
LinkParamB sample_link_b(Rng& rng);

} // namespace linkprobe

#endif // LINKPROBE_TORUS_HPP
