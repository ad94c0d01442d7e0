#include "linkprobe/chart_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "linkprobe/quadrature.hpp"
#include "linkprobe/rng.hpp"

namespace linkprobe {

namespace {

// Deterministic 32^3 spherical product grid over the closed ball
// B_rad(center): radii include the boundary shell, where the suprema of the
// chart-variation quantities are attained.
template <typename Fn>
void for_each_grid_point(const Point3& center, double rad, const Fn& fn) {
    const int n = 32;
    for (int i = 1; i <= n; ++i) {
        const double rr = rad * static_cast<double>(i) / n;
        for (int j = 0; j < n; ++j) {
            const double ct = -1.0 + 2.0 * (j + 0.5) / n;
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int k = 0; k < n; ++k) {
                const double ph = kTwoPi * (k + 0.5) / n;
                fn(center + Point3{rr * st * std::cos(ph), rr * st * std::sin(ph), rr * ct});
            }
        }
    }
}

constexpr double kSupInflation = 1.10;

} // namespace

Point3 chart_L(const Point3& x0, const Point3& x) {
    const CylPoint3 c0 = to_cylindrical(x0);
    const CylPoint3 c = to_cylindrical(x);
    if (norm(x - x0) > c0.r) {
        throw OutOfChartError("point outside B_r0(x0), the chart's domain of use");
    }
    return {c.r - c0.r, c0.z - c.z, wrap_to_pi(c.theta - c0.theta)};
}

Point3 chart_L_inverse(const Point3& x0, const Point3& y) {
    const CylPoint3 c0 = to_cylindrical(x0);
    const double rho = c0.r + y.x1;
    if (rho <= 0.0) {
        throw OutOfChartError("inverse chart radial coordinate r0 + y1 must be positive");
    }
    return to_cartesian({rho, c0.theta + y.x3, c0.z - y.x2});
}

Mat3 chart_L_inverse_diff(const Point3& x0, const Point3& y) {
    const CylPoint3 c0 = to_cylindrical(x0);
    const double rho = c0.r + y.x1;
    const double ph = c0.theta + y.x3;
    return mat3_from_cols({std::cos(ph), std::sin(ph), 0.0},
                          {0.0, 0.0, -1.0},
                          {-rho * std::sin(ph), rho * std::cos(ph), 0.0});
}

ChartFamily build_family(const Point3& x0) {
    ChartFamily fam;
    fam.x0 = x0;
    fam.x0_cyl = to_cylindrical(x0);
    const double r0 = fam.x0_cyl.r;

    const Mat3 d0 = chart_L_inverse_diff(x0, {0.0, 0.0, 0.0});
    const double n0 = mat3_op_norm(d0);

    // R: start at r0/8 (so 4R stays clear of both the axis and the angular
    // cut) and halve until the sampled variation of det DL^{-1} = r0 + y1
    // over B_{4R}(x0) is at most half of det DL^{-1}(0) = r0.  That bound is
    // exactly what the Jacobian lower bound det DT_r >= r^3/c consumes.
    double R = r0 / 8.0;
    double sup_op = 0.0;
    for (;;) {
        sup_op = 0.0;
        double sup_det = 0.0;
        for_each_grid_point(x0, 4.0 * R, [&](const Point3& x) {
            const Point3 y = chart_L(x0, x);
            sup_op = std::max(sup_op, mat3_op_norm(chart_L_inverse_diff(x0, y) - d0));
            sup_det = std::max(sup_det, std::abs(y.x1));
        });
        sup_op *= kSupInflation;
        sup_det *= kSupInflation;
        if (sup_det <= 0.5 * r0) break;
        R /= 2.0;
    }

    fam.R = R;
    fam.denom = n0 + sup_op;
    fam.alpha = R / fam.denom;
    fam.A = (fam.alpha / R) * d0;
    // det DL(x0) = 1/r0; the cubic denom factor absorbs the (alpha/R)^3
    // rescaling of DT_r, and the factor 2 the det variation bounded above.
    fam.c = 2.0 * (1.0 / r0) * fam.denom * fam.denom * fam.denom;

    // R': halve from R/2 until the inflated operator-norm variation over
    // B_{4R'} is at most |DL^{-1}(0)|_op / 2.
    double rp = R / 2.0;
    for (;;) {
        double s = 0.0;
        for_each_grid_point(x0, 4.0 * rp, [&](const Point3& x) {
            const Point3 y = chart_L(x0, x);
            s = std::max(s, mat3_op_norm(chart_L_inverse_diff(x0, y) - d0));
        });
        if (s * kSupInflation <= 0.5 * n0) break;
        rp /= 2.0;
    }
    fam.R_prime = rp;
    return fam;
}

Point3 chart_T_r(const ChartFamily& f, double r, const Point3& z) {
    if (!(r > 0.0) || r > f.R_prime * (1.0 + 1e-12)) {
        throw RadiusOutOfRangeError();
    }
    const double s = f.alpha * r / f.R;
    return chart_L_inverse(f.x0, s * z);
}

Mat3 chart_DT_r(const ChartFamily& f, double r, const Point3& z) {
    if (!(r > 0.0) || r > f.R_prime * (1.0 + 1e-12)) {
        throw RadiusOutOfRangeError();
    }
    const double s = f.alpha * r / f.R;
    return s * chart_L_inverse_diff(f.x0, s * z);
}

FamilyReport verify_family(const ChartFamily& f, int n_samples, int n_radii) {
    if (n_samples < 1 || n_radii < 1) {
        throw ConfigError("verify_family needs n_samples >= 1 and n_radii >= 1");
    }
    std::vector<Point3> zs;
    zs.reserve(static_cast<std::size_t>(n_samples) + 1);
    zs.push_back({0.0, 0.0, 0.0});
    Rng rng(0x7a11ad5eedULL);
    for (int i = 0; i < n_samples; ++i) {
        const double rho = 4.0 * std::cbrt(rng.uniform01());
        zs.push_back(rho * rng.unit_vec3());
    }

    FamilyReport report;
    report.a_norm = mat3_op_norm(f.A);
    for (int k = 0; k < n_radii; ++k) {
        const double r = f.R_prime * std::pow(2.0, -k);
        FamilyRadiusCheck chk;
        chk.radius = r;
        chk.min_det_ratio = std::numeric_limits<double>::infinity();
        for (const Point3& z : zs) {
            const Point3 x = chart_T_r(f, r, z);
            chk.max_containment_ratio =
                std::max(chk.max_containment_ratio, norm(x - f.x0) / (4.0 * r));
            const Mat3 dt = chart_DT_r(f, r, z);
            chk.min_det_ratio = std::min(chk.min_det_ratio, f.c * mat3_det(dt) / (r * r * r));
            chk.sup_deviation =
                std::max(chk.sup_deviation, mat3_op_norm(f.A - (1.0 / r) * dt));
        }
        chk.containment_ok = chk.max_containment_ratio < 1.0;
        chk.det_ok = chk.min_det_ratio >= 1.0;
        chk.deviation_ok = chk.sup_deviation <= 0.5 * report.a_norm;
        report.per_radius.push_back(chk);
    }
    report.deviation_decreasing =
        report.per_radius.back().sup_deviation < report.per_radius.front().sup_deviation;
    report.all_ok = report.deviation_decreasing;
    for (const FamilyRadiusCheck& chk : report.per_radius) {
        report.all_ok = report.all_ok && chk.containment_ok && chk.det_ok && chk.deviation_ok;
    }
    return report;
}

double rescaled_deviation_l1(const MapField3& u_j, const MapField3& u_limit,
                             const ChartFamily& f, double r, int quad_n) {
    if (quad_n < 8) {
        throw ConfigError("rescaled_deviation_l1 needs quad_n >= 8");
    }
    const Point3 ux0 = u_limit.eval(f.x0);
    const Mat3 du_a = field_jacobian(u_limit, f.x0) * f.A;
    const auto nodes = ball_quadrature(4.0, quad_n, quad_n, 2 * quad_n);
    double total = 0.0, comp = 0.0;
    for (const BallNode& node : nodes) {
        const Point3 val =
            (1.0 / r) * (u_j.eval(chart_T_r(f, r, node.p)) - ux0) - mat3_apply(du_a, node.p);
        const double term = node.w * norm(val) - comp;
        const double t = total + term;
        comp = (t - total) - term;
        total = t;
    }
    return total;
}

} // namespace linkprobe
