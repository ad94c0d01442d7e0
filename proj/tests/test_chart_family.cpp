#include "doctest.h"

#include <cmath>

#include "linkprobe/axisym.hpp"
#include "linkprobe/chart_family.hpp"
#include "linkprobe/errors.hpp"
#include "linkprobe/geometry.hpp"
#include "linkprobe/rng.hpp"

using namespace linkprobe;

namespace {

Point3 random_off_axis_point(Rng& rng) {
    const double r0 = rng.uniform(0.4, 4.0);
    const double th = rng.uniform(0.0, kTwoPi);
    const double z0 = rng.uniform(-2.0, 2.0);
    return to_cartesian(CylPoint3{r0, th, z0});
}

} // namespace

TEST_CASE("chart evaluation at the reference base point") {
    const Point3 x0{2.0, 0.0, 0.0};
    // The base point goes to the origin.
    CHECK(norm(chart_L(x0, x0)) < 1e-15);
    // One unit up in z: y = (0, -1, 0).
    CHECK(norm(chart_L(x0, Point3{2.0, 0.0, 1.0}) - Point3{0.0, -1.0, 0.0}) < 1e-15);
    // One unit outward in radius: y = (1, 0, 0).
    CHECK(norm(chart_L(x0, Point3{3.0, 0.0, 0.0}) - Point3{1.0, 0.0, 0.0}) < 1e-15);

    CHECK_THROWS_AS((void)chart_L(x0, Point3{-2.0, 0.0, 0.0}), OutOfChartError);
    CHECK_THROWS_AS((void)chart_L_inverse(x0, Point3{-2.5, 0.0, 0.0}), OutOfChartError);
}

TEST_CASE("chart round-trips within its ball") {
    Rng rng(51);
    for (int i = 0; i < 100; ++i) {
        const Point3 x0 = random_off_axis_point(rng);
        const double r0 = to_cylindrical(x0).r;
        // Points well inside B_{r0}(x0).
        const Point3 dx = (0.4 * r0 * rng.uniform01()) * rng.unit_vec3();
        const Point3 x = x0 + dx;
        if (std::hypot(x.x1, x.x2) < 0.05) continue;
        const Point3 y = chart_L(x0, x);
        CHECK(norm(chart_L_inverse(x0, y) - x) < 1e-10 * (1.0 + norm(x)));
    }
}

TEST_CASE("chart flattens the base half-plane into {y3 = 0}") {
    Rng rng(52);
    for (int i = 0; i < 100; ++i) {
        const Point3 x0 = random_off_axis_point(rng);
        const CylPoint3 c0 = to_cylindrical(x0);
        // A nearby point of the same half-plane O_theta0.
        const double rho = c0.r * rng.uniform(0.7, 1.3);
        const double z = c0.z + rng.uniform(-0.3, 0.3) * c0.r;
        const Point3 x = to_cartesian(CylPoint3{rho, c0.theta, z});
        if (norm(x - x0) >= c0.r) continue;
        const Point3 y = chart_L(x0, x);
        CHECK(std::abs(y.x3) < 1e-12);
        CHECK(y.x1 == doctest::Approx(rho - c0.r).epsilon(1e-10));
        CHECK(y.x2 == doctest::Approx(c0.z - z).epsilon(1e-10));
    }
}

TEST_CASE("inverse-chart differential matches finite differences") {
    Rng rng(53);
    for (int i = 0; i < 30; ++i) {
        const Point3 x0 = random_off_axis_point(rng);
        const double r0 = to_cylindrical(x0).r;
        const Point3 y{rng.uniform(-0.2, 0.2) * r0, rng.uniform(-0.2, 0.2) * r0,
                       rng.uniform(-0.4, 0.4)};
        const Mat3 d = chart_L_inverse_diff(x0, y);
        CHECK(mat3_det(d) == doctest::Approx(r0 + y.x1).epsilon(1e-10));
        const double h = 1e-7;
        for (int c = 0; c < 3; ++c) {
            Point3 dy{};
            (c == 0 ? dy.x1 : c == 1 ? dy.x2 : dy.x3) = h;
            const Point3 fd =
                (1.0 / (2 * h)) * (chart_L_inverse(x0, y + dy) - chart_L_inverse(x0, y - dy));
            CHECK(d(0, c) == doctest::Approx(fd.x1).epsilon(1e-5));
            CHECK(d(1, c) == doctest::Approx(fd.x2).epsilon(1e-5));
            CHECK(d(2, c) == doctest::Approx(fd.x3).epsilon(1e-5));
        }
    }
}

TEST_CASE("family constants at the reference point match the frozen audit") {
    const ChartFamily f = build_family(Point3{2.0, 0.0, 0.0});
    // The halving loops terminate at exactly these dyadic radii.
    CHECK(f.R == doctest::Approx(0.125));
    CHECK(f.R_prime == doctest::Approx(0.0625));
    // Constants depend on the sampled suprema; pinned to 2% of the audit.
    CHECK(f.alpha == doctest::Approx(0.048663).epsilon(0.02));
    CHECK(f.denom == doctest::Approx(2.568673).epsilon(0.02));
    CHECK(f.c == doctest::Approx(16.948).epsilon(0.02));
    CHECK(f.alpha == doctest::Approx(f.R / f.denom).epsilon(1e-12));
    CHECK(mat3_det(f.A) > 0.0);
}

TEST_CASE("family invariants hold across base points") {
    Rng rng(54);
    for (int i = 0; i < 8; ++i) {
        const Point3 x0 = random_off_axis_point(rng);
        const ChartFamily f = build_family(x0);
        const double r0 = to_cylindrical(x0).r;
        CHECK(f.R <= r0 / 8.0 + 1e-15);
        CHECK(f.R_prime < f.R);
        CHECK(mat3_det(f.A) > 0.0);
        // T_r(0) = x0.
        CHECK(norm(chart_T_r(f, f.R_prime, Point3{0, 0, 0}) - x0) < 1e-10);

        const FamilyReport rep = verify_family(f, 200, 6);
        CHECK(rep.all_ok);
        CHECK(rep.deviation_decreasing);
        for (const auto& rc : rep.per_radius) {
            CHECK(rc.containment_ok);
            CHECK(rc.det_ok);
            CHECK(rc.deviation_ok);
            CHECK(rc.max_containment_ratio < 1.0);
            CHECK(rc.min_det_ratio >= 1.0);
            CHECK(rc.sup_deviation <= 0.5 * rep.a_norm + 1e-12);
        }
    }
}

TEST_CASE("embedding radius domain is enforced") {
    const ChartFamily f = build_family(Point3{2.0, 0.0, 0.0});
    CHECK_THROWS_AS((void)chart_T_r(f, 0.0, Point3{1, 0, 0}), RadiusOutOfRangeError);
    CHECK_THROWS_AS((void)chart_T_r(f, -0.01, Point3{1, 0, 0}), RadiusOutOfRangeError);
    CHECK_THROWS_AS((void)chart_T_r(f, f.R_prime * 1.01, Point3{1, 0, 0}),
                    RadiusOutOfRangeError);
    CHECK_NOTHROW((void)chart_T_r(f, f.R_prime, Point3{1, 0, 0}));
}

TEST_CASE("differential of the embedding matches finite differences") {
    const ChartFamily f = build_family(Point3{2.0, 0.0, 0.0});
    const double r = f.R_prime / 2.0;
    Rng rng(55);
    for (int i = 0; i < 10; ++i) {
        const Point3 z = 4.0 * std::cbrt(rng.uniform01()) * rng.unit_vec3();
        const Mat3 d = chart_DT_r(f, r, z);
        const double h = 1e-6;
        for (int c = 0; c < 3; ++c) {
            Point3 dz{};
            (c == 0 ? dz.x1 : c == 1 ? dz.x2 : dz.x3) = h;
            const Point3 fd =
                (1.0 / (2 * h)) * (chart_T_r(f, r, z + dz) - chart_T_r(f, r, z - dz));
            CHECK(d(0, c) == doctest::Approx(fd.x1).epsilon(1e-5));
            CHECK(d(1, c) == doctest::Approx(fd.x2).epsilon(1e-5));
            CHECK(d(2, c) == doctest::Approx(fd.x3).epsilon(1e-5));
        }
    }
}

TEST_CASE("rescaled deviation of the identity matches the frozen line and scales with r") {
    const ChartFamily f = build_family(Point3{2.0, 0.0, 0.0});
    const MapField3 id = make_identity_field();
    // For the identity the integrand is the pure chart curvature defect,
    // linear in r: audit value 165.6396 r at quad_n = 32.
    const double e3 = rescaled_deviation_l1(id, id, f, 1e-3, 32);
    const double e5 = rescaled_deviation_l1(id, id, f, 1e-5, 32);
    CHECK(e3 == doctest::Approx(165.6396e-3).epsilon(0.02));
    CHECK(e5 == doctest::Approx(165.6396e-5).epsilon(0.02));
    CHECK(e3 / e5 == doctest::Approx(100.0).epsilon(1e-3));

    CHECK_THROWS_AS((void)rescaled_deviation_l1(id, id, f, 1e-3, 4), ConfigError);
    CHECK_THROWS_AS((void)rescaled_deviation_l1(id, id, f, 2.0 * f.R_prime, 32),
                    RadiusOutOfRangeError);
}
