#include "linkprobe/torus.hpp"

#include <cmath>

namespace linkprobe {

bool valid_link_a(const LinkParamA& a) {
    return norm(a.a) < 0.1;
}

bool valid_link_b(const LinkParamB& b) {
    return norm(b.b) <= 1.0 + 1e-12 && norm(b.b - Vec2{1.0, 0.0}) < 0.1;
}

bool in_closed_anuloid(const Point3& p, double tol) {
    const double r = std::hypot(p.x1, p.x2);
    const double d2 = (r - kCoreRadius) * (r - kCoreRadius) + p.x3 * p.x3;
    const double rmax = kTubeRadius + tol;
    return d2 <= rmax * rmax;
}

Point3 phi(Vec2 xi, Vec2 eta) {
    const double xi_len2 = norm2(xi);
    if (xi_len2 < kAxisTol2) {
        throw ZeroXiError();
    }
    const double xi_len = std::sqrt(xi_len2);
    const double radial = xi_len * eta.x + kCoreRadius;
    return {radial * xi.x / xi_len, radial * xi.y / xi_len, xi_len * eta.y};
}

Point3 mu_a(const LinkParamA& a, double t) {
    const double radial = a.a.x + kCoreRadius;
    return {radial * std::cos(t), radial * std::sin(t), a.a.y};
}

Point3 nu_b(const LinkParamB& b, double t) {
    const double blen = norm(b.b);
    const double radial = blen * std::cos(t) + kCoreRadius;
    // b_hat degenerates only at b = 0, which valid_link_b excludes
    // (|b - e1| < 1/10 forces |b| > 9/10).
    return {radial * b.b.x / blen, radial * b.b.y / blen, blen * std::sin(t)};
}

TorusParam chart_xi_eta(const Point3& p) {
    const CylPoint3 c = to_cylindrical(p); // throws AxisPointError on the axis
    const Vec2 eta{c.r - kCoreRadius, c.z};
    if (norm(eta) > kTubeRadius + 1e-12) {
        throw OutsideAnuloidError();
    }
    return {{p.x1 / c.r, p.x2 / c.r}, eta};
}

TorusParamTilde chart_tilde(const Point3& p) {
    const CylPoint3 c = to_cylindrical(p);
    const double dr = c.r - kCoreRadius;
    const double s2 = dr * dr + c.z * c.z;
    if (s2 < kAxisTol2) {
        throw OnCoreCircleError();
    }
    const double s = std::sqrt(s2);
    if (s > kTubeRadius + 1e-12) {
        throw OutsideAnuloidError();
    }
    const double ct = std::cos(c.theta);
    const double st = std::sin(c.theta);
    return {{s * ct, s * st}, {dr / s, c.z / s}};
}

double coarea_jacobian_eta(const Point3& p) {
    // Validate the domain (inside the closed torus, off the axis) and return
    // the audited constant value 1.
    (void)chart_xi_eta(p);
    return 1.0;
}

double coarea_jacobian_eta_claimed(const Point3& p) {
    (void)chart_xi_eta(p);
    return std::hypot(p.x1, p.x2);
}

double coarea_jacobian_xi_tilde(const Point3& p) {
    const CylPoint3 c = to_cylindrical(p);
    const double dr = c.r - kCoreRadius;
    const double s2 = dr * dr + c.z * c.z;
    if (s2 < kAxisTol2) {
        throw OnCoreCircleError();
    }
    return std::sqrt(s2) / c.r;
}

double coarea_jacobian_xi_tilde_claimed(const Point3& p) {
    const double audited = coarea_jacobian_xi_tilde(p);
    return audited * audited;
}

PlanarSlice planar_slice(const LinkParamA& a, const LinkParamB& b) {
    const double blen = norm(b.b);
    const double z = a.a.y;
    if (std::abs(blen - std::abs(z)) < kTangentTol) {
        throw TangentialError();
    }
    if (blen <= std::abs(z)) {
        throw NoIntersectionError("vertical circle does not reach the slice plane");
    }
    // nu_b meets {x3 = a2} where |b| sin t = a2: two solutions with
    // cos t = -/+ sqrt(1 - (a2/|b|)^2).  The cos t < 0 crossing has radial
    // coordinate |b| cos t + 2 < 2 <= a1 + 2 - |a1| margin, i.e. lies inside
    // the ring disk; the cos t > 0 crossing lies outside.  Within the typed
    // parameter domains the radial gap to the circle radius is >= 0.55, so
    // the classification is never ambiguous.
    const double sin_t = z / blen;
    const double cos_t = std::sqrt(1.0 - sin_t * sin_t);
    const Vec2 b_hat = (1.0 / blen) * b.b;
    const double radial_in = kCoreRadius - blen * cos_t;
    const double radial_out = kCoreRadius + blen * cos_t;

    PlanarSlice s;
    s.a = a;
    s.circle_radius = a.a.x + kCoreRadius;
    s.p_ab = radial_in * b_hat;
    s.q_ab = radial_out * b_hat;
    s.z_level = z;
    return s;
}

LinkParamA sample_link_a(Rng& rng) {
    return {rng.disk_point({0.0, 0.0}, 0.1)};
}

LinkParamB sample_link_b(Rng& rng) {
    for (;;) {
        const Vec2 b = rng.disk_point({1.0, 0.0}, 0.1);
        if (norm(b) < 1.0) {
            return {b};
        }
    }
}

} // namespace linkprobe
