#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "linkprobe/errors.hpp"
#include "linkprobe/linking.hpp"
#include "linkprobe/rng.hpp"
#include "linkprobe/torus.hpp"

using namespace linkprobe;

namespace {

ClosedPolyline3 circle_xy(double radius, Point3 center, int n) {
    return sample_curve(
        [&](double t) {
            return center + Point3{radius * std::cos(t), radius * std::sin(t), 0.0};
        },
        n);
}

ClosedPolyline3 canonical_ring(int n) {
    return sample_curve([](double t) { return mu_a(LinkParamA{{0.0, 0.0}}, t); }, n);
}

ClosedPolyline3 canonical_vertical(int n) {
    return sample_curve([](double t) { return nu_b(LinkParamB{{1.0, 0.0}}, t); }, n);
}

ClosedPolyline3 reversed(const ClosedPolyline3& c) {
    ClosedPolyline3 r = c;
    std::reverse(r.vertices.begin(), r.vertices.end());
    return r;
}

} // namespace

TEST_CASE("polyline invariants and measures") {
    const ClosedPolyline3 tri{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}};
    validate_polyline(tri);
    CHECK(polyline_diameter(tri) == doctest::Approx(std::sqrt(2.0)));
    CHECK(polyline_length(tri) == doctest::Approx(2.0 + std::sqrt(2.0)));

    CHECK_THROWS_AS(validate_polyline(ClosedPolyline3{{{0, 0, 0}, {1, 0, 0}}}),
                    ConfigError);
    CHECK_THROWS_AS(
        validate_polyline(ClosedPolyline3{{{0, 0, 0}, {0, 0, 0}, {1, 0, 0}}}),
        ConfigError);

    // Separation between two parallel unit circles one apart in z.
    const ClosedPolyline3 c1 = circle_xy(1.0, {0, 0, 0}, 64);
    const ClosedPolyline3 c2 = circle_xy(1.0, {0, 0, 1}, 64);
    CHECK(polyline_separation(c1, c2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sample_curve places vertices at equispaced parameters") {
    const ClosedPolyline3 c = canonical_ring(8);
    REQUIRE(c.vertices.size() == 8);
    CHECK(norm(c.vertices[0] - Point3{2.0, 0.0, 0.0}) < 1e-15);
    CHECK(norm(c.vertices[2] - Point3{0.0, 2.0, 0.0}) < 1e-15);
    CHECK_THROWS_AS((void)sample_curve([](double) { return Point3{}; }, 2),
                    ConfigError);
}

TEST_CASE("canonical pair links once: Gauss route is near-exact") {
    for (int n : {64, 128, 256}) {
        const LinkResult res = linking_gauss(canonical_ring(n), canonical_vertical(n));
        REQUIRE(res.defined);
        CHECK(res.value == 1);
        CHECK(std::abs(res.raw - 1.0) < 1e-6);
    }
}

TEST_CASE("canonical pair links once: crossing count agrees") {
    const ClosedPolyline3 ring = canonical_ring(128);
    const ClosedPolyline3 vert = canonical_vertical(128);
    const LinkResult res = linking_crossings_any(ring, vert);
    REQUIRE(res.defined);
    CHECK(res.value == 1);
}

TEST_CASE("orientation reversal flips the sign in both routes") {
    const ClosedPolyline3 ring = canonical_ring(128);
    const ClosedPolyline3 vert = canonical_vertical(128);
    CHECK(linking_gauss(reversed(ring), vert).value == -1);
    CHECK(linking_gauss(ring, reversed(vert)).value == -1);
    CHECK(linking_gauss(reversed(ring), reversed(vert)).value == 1);
    CHECK(linking_crossings_any(reversed(ring), vert).value == -1);
}

TEST_CASE("split pairs have linking number zero") {
    const ClosedPolyline3 c1 = circle_xy(1.0, {0, 0, 0}, 96);
    const ClosedPolyline3 c2 = circle_xy(1.0, {4, 0, 0}, 96);
    const LinkResult g = linking_gauss(c1, c2);
    REQUIRE(g.defined);
    CHECK(g.value == 0);
    CHECK(std::abs(g.raw) < 1e-9);
    CHECK(linking_crossings_any(c1, c2).value == 0);
}

TEST_CASE("touching curves are rejected rather than rounded") {
    // Unit circles in the xy- and xz-planes through the common point (1,0,0):
    // both polylines contain that exact vertex.
    const ClosedPolyline3 c1 = circle_xy(1.0, {0, 0, 0}, 64);
    const ClosedPolyline3 c2 = sample_curve(
        [](double t) { return Point3{std::cos(t), 0.0, std::sin(t)}; }, 64);
    CHECK_THROWS_AS((void)linking_gauss(c1, c2), CurvesTouchError);
}

TEST_CASE("gauss result carries the separation and stays integer-consistent") {
    Rng rng(11);
    for (int i = 0; i < 25; ++i) {
        const LinkParamA a = sample_link_a(rng);
        const LinkParamB b = sample_link_b(rng);
        const ClosedPolyline3 ring =
            sample_curve([&](double t) { return mu_a(a, t); }, 128);
        const ClosedPolyline3 vert =
            sample_curve([&](double t) { return nu_b(b, t); }, 128);
        const LinkResult res = linking_gauss(ring, vert);
        REQUIRE(res.defined);
        CHECK(res.value == 1);
        CHECK(std::abs(res.raw - 1.0) < 1e-6);
        CHECK(res.min_separation == doctest::Approx(polyline_separation(ring, vert)));
        CHECK(res.min_separation > 0.1); // typed domains keep the pair apart
    }
}

TEST_CASE("crossing route agrees with gauss on random perturbed pairs") {
    Rng rng(12);
    for (int i = 0; i < 10; ++i) {
        const LinkParamA a = sample_link_a(rng);
        const LinkParamB b = sample_link_b(rng);
        const ClosedPolyline3 ring =
            sample_curve([&](double t) { return mu_a(a, t); }, 96);
        const ClosedPolyline3 vert =
            sample_curve([&](double t) { return nu_b(b, t); }, 96);
        const LinkResult g = linking_gauss(ring, vert);
        const LinkResult x = linking_crossings_any(ring, vert, 1000 + i);
        REQUIRE(g.defined);
        REQUIRE(x.defined);
        CHECK(g.value == x.value);
    }
}

TEST_CASE("minimum singular value: spherical net matches the closed form") {
    Rng rng(13);
    for (int i = 0; i < 30; ++i) {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-2.0, 2.0);
        const double exact = mat3_min_singular(m);
        if (exact < 1e-3) continue; // ill-conditioned draws prove nothing here
        CHECK(min_singular_net(m) == doctest::Approx(exact).epsilon(1e-5));
    }
    CHECK(min_singular_net(mat3_diag(2.0, 3.0, -4.0)) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("perturbed linear maps link by the sign of the determinant") {
    const LinkParamA a{{0.02, -0.01}};
    const LinkParamB b{{0.97, 0.03}};

    const Mat3 plus = mat3_diag(1.0, 1.0, 1.0);
    const Mat3 minus = mat3_diag(1.0, 1.0, -1.0);
    const Mat3 skew = mat3_from_rows({1.0, 0.4, 0.0}, {-0.2, 1.3, 0.1}, {0.0, 0.2, 0.8});

    const auto zero_pert = [](const Point3&) { return Point3{0.0, 0.0, 0.0}; };
    CHECK(perturbed_linear_linking(plus, zero_pert, a, b, 256).value == 1);
    CHECK(perturbed_linear_linking(minus, zero_pert, a, b, 256).value == -1);
    CHECK(perturbed_linear_linking(skew, zero_pert, a, b, 256).value ==
          (mat3_det(skew) > 0.0 ? 1 : -1));

    // A smooth perturbation below the m*/10 budget cannot change the answer.
    const double mstar = min_singular_net(skew);
    const double eps = 0.09 * mstar / std::sqrt(3.0); // |pert| <= 0.09 m*
    const auto small = [eps](const Point3& z) {
        return Point3{eps * std::sin(1.3 * z.x2), eps * std::cos(0.7 * z.x3),
                      eps * std::sin(0.9 * z.x1 + 0.5)};
    };
    CHECK(perturbed_linear_linking(skew, small, a, b, 256).value ==
          (mat3_det(skew) > 0.0 ? 1 : -1));

    // Oversized perturbations are refused, not silently accepted.
    const auto big = [mstar](const Point3&) {
        return Point3{0.2 * mstar, 0.0, 0.0};
    };
    CHECK_THROWS_AS((void)perturbed_linear_linking(skew, big, a, b, 256),
                    PerturbationTooLargeError);
    CHECK_THROWS_AS(
        (void)perturbed_linear_linking(mat3_diag(1.0, 1.0, 0.0), zero_pert, a, b, 64),
        SingularError);
}

TEST_CASE("curve files round-trip and reject malformed input") {
    const std::string path = "test_curve_roundtrip.txt";
    const ClosedPolyline3 c = canonical_ring(16);
    write_curve_file(path, c);
    const ClosedPolyline3 back = read_curve_file(path);
    REQUIRE(back.vertices.size() == c.vertices.size());
    for (std::size_t i = 0; i < c.vertices.size(); ++i)
        CHECK(norm(back.vertices[i] - c.vertices[i]) < 1e-15);
    std::remove(path.c_str());

    // Comments (whole-line and inline) and blank lines are skipped.
    {
        std::FILE* f = std::fopen("test_curve_ok.txt", "w");
        std::fputs("# triangle\n0 0 0\n\n1 0 0   # inline comment\n0 1 0\n", f);
        std::fclose(f);
    }
    const ClosedPolyline3 tri = read_curve_file("test_curve_ok.txt");
    CHECK(tri.vertices.size() == 3);
    CHECK(norm(tri.vertices[1] - Point3{1.0, 0.0, 0.0}) < 1e-15);
    std::remove("test_curve_ok.txt");

    // Too few vertices after comment stripping is a format error.
    {
        std::FILE* f = std::fopen("test_curve_short.txt", "w");
        std::fputs("0 0 0\n1 0 0\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS((void)read_curve_file("test_curve_short.txt"), ConfigError);
    std::remove("test_curve_short.txt");
    {
        std::FILE* f = std::fopen("test_curve_bad.txt", "w");
        std::fputs("0 0\n1 0 0\n0 1 0\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS((void)read_curve_file("test_curve_bad.txt"), ConfigError);
    std::remove("test_curve_bad.txt");
    CHECK_THROWS_AS((void)read_curve_file("no_such_file_anywhere.txt"), ConfigError);
}
