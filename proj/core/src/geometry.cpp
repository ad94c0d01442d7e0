#include "linkprobe/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace linkprobe {

bool is_finite(const Point3& p) {
    return std::isfinite(p.x1) && std::isfinite(p.x2) && std::isfinite(p.x3);
}

double wrap_to_2pi(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    // fmod can return exactly kTwoPi after the correction when angle is a
    // tiny negative number; normalize that edge back to 0.
    if (a >= kTwoPi) a = 0.0;
    return a;
}

double wrap_to_pi(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a > kPi) a -= kTwoPi;
    if (a <= -kPi) a += kTwoPi;
    return a;
}

CylPoint3 to_cylindrical(const Point3& p) {
    const double rho2 = p.x1 * p.x1 + p.x2 * p.x2;
    if (rho2 < kAxisTol2) {
        throw AxisPointError();
    }
    CylPoint3 c;
    c.r = std::sqrt(rho2);
    c.theta = wrap_to_2pi(std::atan2(p.x2, p.x1));
    c.z = p.x3;
    return c;
}

Point3 to_cartesian(const CylPoint3& c) {
    return {c.r * std::cos(c.theta), c.r * std::sin(c.theta), c.z};
}

Mat3 mat3_identity() {
    Mat3 r;
    r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
    return r;
}

Mat3 mat3_diag(double d1, double d2, double d3) {
    Mat3 r;
    r(0, 0) = d1;
    r(1, 1) = d2;
    r(2, 2) = d3;
    return r;
}

Mat3 mat3_from_rows(Point3 r0, Point3 r1, Point3 r2) {
    Mat3 r;
    r.m[0] = {r0.x1, r0.x2, r0.x3};
    r.m[1] = {r1.x1, r1.x2, r1.x3};
    r.m[2] = {r2.x1, r2.x2, r2.x3};
    return r;
}

Mat3 mat3_from_cols(Point3 c0, Point3 c1, Point3 c2) {
    Mat3 r;
    r.m[0] = {c0.x1, c1.x1, c2.x1};
    r.m[1] = {c0.x2, c1.x2, c2.x2};
    r.m[2] = {c0.x3, c1.x3, c2.x3};
    return r;
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = s * a(i, j);
    return r;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

Point3 mat3_apply(const Mat3& m, const Point3& v) {
    return {m(0, 0) * v.x1 + m(0, 1) * v.x2 + m(0, 2) * v.x3,
            m(1, 0) * v.x1 + m(1, 1) * v.x2 + m(1, 2) * v.x3,
            m(2, 0) * v.x1 + m(2, 1) * v.x2 + m(2, 2) * v.x3};
}

double mat3_det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat3 mat3_cof(const Mat3& m) {
    Mat3 c;
    c(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    c(0, 1) = -(m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0));
    c(0, 2) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    c(1, 0) = -(m(0, 1) * m(2, 2) - m(0, 2) * m(2, 1));
    c(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    c(1, 2) = -(m(0, 0) * m(2, 1) - m(0, 1) * m(2, 0));
    c(2, 0) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    c(2, 1) = -(m(0, 0) * m(1, 2) - m(0, 2) * m(1, 0));
    c(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return c;
}

Mat3 mat3_inverse(const Mat3& m) {
    const double det = mat3_det(m);
    if (std::abs(det) <= kSingularTol) {
        throw SingularError();
    }
    // inverse = adj / det = cof^T / det.
    const Mat3 c = mat3_cof(m);
    Mat3 inv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) inv(i, j) = c(j, i) / det;
    return inv;
}

Mat3 mat3_transpose(const Mat3& m) {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = m(j, i);
    return t;
}

double mat3_frobenius(const Mat3& m) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

std::array<double, 3> sym3_eigenvalues(const Mat3& s) {
    // Trigonometric solution of the characteristic cubic for a real
    // symmetric 3x3 matrix (Smith's algorithm).  All roots are real.
    const double p1 = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
    const double tr = s(0, 0) + s(1, 1) + s(2, 2);
    if (p1 == 0.0) {
        std::array<double, 3> eig = {s(0, 0), s(1, 1), s(2, 2)};
        std::sort(eig.begin(), eig.end());
        return eig;
    }
    const double q = tr / 3.0;
    const double p2 = (s(0, 0) - q) * (s(0, 0) - q) + (s(1, 1) - q) * (s(1, 1) - q) +
                      (s(2, 2) - q) * (s(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b = (1.0 / p) * (s - q * mat3_identity());
    const double r = std::clamp(mat3_det(b) / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
    const double e2 = tr - e1 - e3;
    std::array<double, 3> eig = {e1, e2, e3};
    std::sort(eig.begin(), eig.end());
    return eig;
}

double mat3_op_norm(const Mat3& m) {
    const Mat3 mtm = mat3_transpose(m) * m;
    const auto eig = sym3_eigenvalues(mtm);
    return std::sqrt(std::max(0.0, eig[2]));
}

double mat3_min_singular(const Mat3& m) {
    const Mat3 mtm = mat3_transpose(m) * m;
    const auto eig = sym3_eigenvalues(mtm);
    return std::sqrt(std::max(0.0, eig[0]));
}

Mat3 rotation_for_halfplane(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return mat3_from_rows({c, s, 0.0}, {0.0, 0.0, -1.0}, {-s, c, 0.0});
}

} // namespace linkprobe
