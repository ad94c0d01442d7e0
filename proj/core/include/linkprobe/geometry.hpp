#ifndef LINKPROBE_GEOMETRY_HPP
#define LINKPROBE_GEOMETRY_HPP

#include <array>
#include <cmath>

#include "linkprobe/errors.hpp"

namespace linkprobe {

// ---------------------------------------------------------------------------
// Scalar constants
// ---------------------------------------------------------------------------

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// A point whose distance from the x3-axis squared falls below this value is
// treated as lying on the axis (no polar angle).  Chosen as (1e-9)^2.
inline constexpr double kAxisTol2 = 1e-18;

// |det| below this value counts as singular for inversion purposes.
inline constexpr double kSingularTol = 1e-14;

// ---------------------------------------------------------------------------
// 2-vectors (parameter planes, planar maps)
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
// Scalar cross product a.x b.y - a.y b.x (signed area of the pair).
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }

// 2x2 matrices (planar Jacobians).  Row-major [[a, b], [c, d]].
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

inline double mat2_det(const Mat2& m) { return m.a * m.d - m.b * m.c; }
// Cofactor matrix: cof [[a,b],[c,d]] = [[d,-c],[-b,a]].
inline Mat2 mat2_cof(const Mat2& m) { return {m.d, -m.c, -m.b, m.a}; }
inline Vec2 mat2_apply(const Mat2& m, Vec2 v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

// ---------------------------------------------------------------------------
// 3-vectors / points
// ---------------------------------------------------------------------------

struct Point3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

inline Point3 operator+(Point3 a, Point3 b) { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
inline Point3 operator-(Point3 a, Point3 b) { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
inline Point3 operator*(double s, Point3 a) { return {s * a.x1, s * a.x2, s * a.x3}; }
inline Point3 operator-(Point3 a) { return {-a.x1, -a.x2, -a.x3}; }
inline double dot(Point3 a, Point3 b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }
inline Point3 cross(Point3 a, Point3 b) {
    return {a.x2 * b.x3 - a.x3 * b.x2,
            a.x3 * b.x1 - a.x1 * b.x3,
            a.x1 * b.x2 - a.x2 * b.x1};
}
inline double norm2(Point3 a) { return dot(a, a); }
inline double norm(Point3 a) { return std::sqrt(norm2(a)); }
inline Point3 normalized(Point3 a) {
    const double n = norm(a);
    return {a.x1 / n, a.x2 / n, a.x3 / n};
}

bool is_finite(const Point3& p);

// Cylindrical representation (r, theta, z) with r >= 0 and theta in [0, 2pi).
struct CylPoint3 {
    double r = 0.0;
    double theta = 0.0;
    double z = 0.0;
};

// Wrap an angle into [0, 2pi).
double wrap_to_2pi(double angle);
// Wrap an angle into (-pi, pi].
double wrap_to_pi(double angle);

// Cartesian -> cylindrical.  Throws AxisPointError when x1^2 + x2^2 < kAxisTol2:
// points on the axis carry no polar angle and every construction downstream
// explicitly avoids them.
CylPoint3 to_cylindrical(const Point3& p);

// Cylindrical -> Cartesian (total).
Point3 to_cartesian(const CylPoint3& c);

// ---------------------------------------------------------------------------
// 3x3 matrices
// ---------------------------------------------------------------------------

struct Mat3 {
    // Row-major entries: m[row][col].
    std::array<std::array<double, 3>, 3> m{{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};

    double& operator()(int row, int col) { return m[row][col]; }
    double operator()(int row, int col) const { return m[row][col]; }
};

Mat3 mat3_identity();
Mat3 mat3_diag(double d1, double d2, double d3);
Mat3 mat3_from_rows(Point3 r0, Point3 r1, Point3 r2);
Mat3 mat3_from_cols(Point3 c0, Point3 c1, Point3 c2);

Mat3 operator+(const Mat3& a, const Mat3& b);
Mat3 operator-(const Mat3& a, const Mat3& b);
Mat3 operator*(double s, const Mat3& a);
Mat3 operator*(const Mat3& a, const Mat3& b);
Point3 mat3_apply(const Mat3& m, const Point3& v);

double mat3_det(const Mat3& m);
// Cofactor matrix: satisfies m . cof(m)^T = det(m) . Id.
Mat3 mat3_cof(const Mat3& m);
// Inverse via adjugate.  Throws SingularError when |det| <= kSingularTol.
Mat3 mat3_inverse(const Mat3& m);
Mat3 mat3_transpose(const Mat3& m);

// Frobenius norm (root of sum of squared entries).
double mat3_frobenius(const Mat3& m);
// Spectral / operator norm: largest singular value, computed from the
// closed-form eigenvalues of the symmetric matrix m^T m.
double mat3_op_norm(const Mat3& m);
// Smallest singular value (min over unit z of |m z|); same eigenvalue route.
double mat3_min_singular(const Mat3& m);

// Eigenvalues of a symmetric 3x3 matrix, ascending, by the trigonometric
// (Cardano) closed form.  Input is not checked for symmetry.
std::array<double, 3> sym3_eigenvalues(const Mat3& s);

// Rotation taking the half-plane O_angle = {(rho cos angle, rho sin angle, z) :
// rho > 0} into the coordinate plane {x3 = 0}:
//
//   rows (cos a, sin a, 0), (0, 0, -1), (-sin a, cos a, 0),
//
// so a point (rho cos a, rho sin a, z) maps to (rho, -z, 0).  Determinant +1.
Mat3 rotation_for_halfplane(double angle);

} // namespace linkprobe

#endif // LINKPROBE_GEOMETRY_HPP
