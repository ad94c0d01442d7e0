#include "doctest.h"

#include <cmath>

#include "linkprobe/errors.hpp"
#include "linkprobe/geometry.hpp"
#include "linkprobe/rng.hpp"
#include "linkprobe/torus.hpp"

using namespace linkprobe;

TEST_CASE("parameter domains: ring and vertical-circle families") {
    CHECK(valid_link_a(LinkParamA{{0.0, 0.0}}));
    CHECK(valid_link_a(LinkParamA{{0.05, -0.03}}));
    CHECK_FALSE(valid_link_a(LinkParamA{{0.1, 0.0}}));
    CHECK(valid_link_b(LinkParamB{{1.0, 0.0}})); // the canonical boundary value
    CHECK(valid_link_b(LinkParamB{{0.95, 0.02}}));
    CHECK_FALSE(valid_link_b(LinkParamB{{1.05, 0.0}}));  // outside the unit disk
    CHECK_FALSE(valid_link_b(LinkParamB{{0.85, 0.0}}));  // too far from e1
}

TEST_CASE("samplers stay in their typed domains and are deterministic") {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        CHECK(valid_link_a(sample_link_a(rng)));
        const LinkParamB b = sample_link_b(rng);
        CHECK(valid_link_b(b));
        CHECK(norm(b.b) < 1.0); // the sampler stays strictly interior
    }
    Rng r1(17), r2(17);
    for (int i = 0; i < 20; ++i) {
        const LinkParamA a1 = sample_link_a(r1);
        const LinkParamA a2 = sample_link_a(r2);
        CHECK(a1.a.x == a2.a.x);
        CHECK(a1.a.y == a2.a.y);
    }
}

TEST_CASE("torus parametrization phi and membership test") {
    // xi = e1, eta = 0 is the core-circle point (2, 0, 0).
    const Point3 core = phi(Vec2{1.0, 0.0}, Vec2{0.0, 0.0});
    CHECK(norm(core - Point3{2.0, 0.0, 0.0}) < 1e-15);
    // Non-unit xi is normalized through its direction only in the radial
    // factor: |xi| scales eta.
    const Point3 p = phi(Vec2{0.0, 2.0}, Vec2{0.25, 0.1});
    CHECK(p.x1 == doctest::Approx(0.0));
    CHECK(p.x2 == doctest::Approx(2.0 * 0.25 + 2.0));
    CHECK(p.x3 == doctest::Approx(2.0 * 0.1));
    CHECK_THROWS_AS((void)phi(Vec2{0.0, 0.0}, Vec2{0.5, 0.0}), ZeroXiError);

    CHECK(in_closed_anuloid(Point3{2.0, 0.0, 0.0}));
    CHECK(in_closed_anuloid(Point3{3.0, 0.0, 0.0}));       // boundary
    CHECK_FALSE(in_closed_anuloid(Point3{3.1, 0.0, 0.0}));
    CHECK_FALSE(in_closed_anuloid(Point3{0.5, 0.0, 0.0})); // inner hole
}

TEST_CASE("ring and vertical circles lie in the closed solid torus") {
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
        const LinkParamA a = sample_link_a(rng);
        const LinkParamB b = sample_link_b(rng);
        for (int k = 0; k < 16; ++k) {
            const double t = kTwoPi * k / 16.0;
            CHECK(in_closed_anuloid(mu_a(a, t), 1e-9));
            CHECK(in_closed_anuloid(nu_b(b, t), 1e-9));
        }
    }
    // Canonical shapes: mu_0 is the core circle, nu_e1 the unit vertical
    // circle in the {x2 = 0} half-plane.
    CHECK(norm(mu_a(LinkParamA{{0.0, 0.0}}, 0.3) -
               Point3{2.0 * std::cos(0.3), 2.0 * std::sin(0.3), 0.0}) < 1e-15);
    CHECK(norm(nu_b(LinkParamB{{1.0, 0.0}}, 0.4) -
               Point3{std::cos(0.4) + 2.0, 0.0, std::sin(0.4)}) < 1e-14);
}

TEST_CASE("charts invert phi on the anuloid") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        // Sample the open anuloid through its defining parametrization.
        const double t = rng.uniform(0.0, kTwoPi);
        const double s = 0.999 * std::sqrt(rng.uniform01());
        const double psi = rng.uniform(0.0, kTwoPi);
        const Point3 p = phi(Vec2{std::cos(t), std::sin(t)},
                             Vec2{s * std::cos(psi), s * std::sin(psi)});

        const TorusParam tp = chart_xi_eta(p);
        CHECK(std::abs(norm(tp.xi) - 1.0) < 1e-12); // unit angular factor
        CHECK(norm(tp.eta) <= 1.0 + 1e-12);
        CHECK(norm(phi(tp.xi, tp.eta) - p) < 1e-12);

        if (s > 1e-6) {
            const TorusParamTilde tt = chart_tilde(p);
            CHECK(std::abs(norm(tt.eta_t) - 1.0) < 1e-12); // unit section dir
            CHECK(norm(tt.xi_t) == doctest::Approx(s).epsilon(1e-9));
            CHECK(norm(phi(tt.xi_t, tt.eta_t) - p) < 1e-12);
        }
    }
    CHECK_THROWS_AS((void)chart_xi_eta(Point3{3.5, 0.0, 0.0}), OutsideAnuloidError);
    CHECK_THROWS_AS((void)chart_tilde(Point3{2.0, 0.0, 0.0}), OnCoreCircleError);
}

TEST_CASE("coarea factors: audited values against the claimed ones") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform(0.0, kTwoPi);
        const double s = 0.98 * std::sqrt(rng.uniform01()) + 1e-3;
        const double psi = rng.uniform(0.0, kTwoPi);
        const Point3 p = phi(Vec2{std::cos(t), std::sin(t)},
                             Vec2{s * std::cos(psi), s * std::sin(psi)});
        const double r = std::hypot(p.x1, p.x2);

        // Audited: the horizontal fibration has unit factor; the section
        // fibration has factor s / r.
        CHECK(coarea_jacobian_eta(p) == 1.0);
        CHECK(coarea_jacobian_xi_tilde(p) == doctest::Approx(s / r).epsilon(1e-9));

        // Claimed (kept verbatim for the audit): r and (s/r)^2.
        CHECK(coarea_jacobian_eta_claimed(p) == doctest::Approx(r));
        CHECK(coarea_jacobian_xi_tilde_claimed(p) ==
              doctest::Approx((s / r) * (s / r)).epsilon(1e-9));
    }
}

TEST_CASE("planar slice of the canonical pair has the frozen crossing point") {
    const LinkParamA a{{0.0, 0.05}};
    const LinkParamB b{{1.0, 0.0}};
    const PlanarSlice s = planar_slice(a, b);
    CHECK(s.circle_radius == doctest::Approx(2.0));
    CHECK(s.z_level == doctest::Approx(0.05));
    // Inside crossing: radial coordinate 2 - sqrt(1 - 0.05^2).
    CHECK(s.p_ab.x == doctest::Approx(1.0012507822280916).epsilon(1e-14));
    CHECK(s.p_ab.y == doctest::Approx(0.0));
    // Outside crossing: 2 + sqrt(1 - 0.05^2).
    CHECK(s.q_ab.x == doctest::Approx(2.9987492177719084).epsilon(1e-14));
    CHECK(norm(s.p_ab) < s.circle_radius);
    CHECK(norm(s.q_ab) > s.circle_radius);
}

TEST_CASE("planar slice crossings lie on the vertical circle for random pairs") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const LinkParamA a = sample_link_a(rng);
        const LinkParamB b = sample_link_b(rng);
        const PlanarSlice s = planar_slice(a, b);
        // Both crossings are nu_b points at height a2.
        const double blen = norm(b.b);
        const double sin_t = a.a.y / blen;
        const double t_in = kPi - std::asin(sin_t);
        const double t_out = std::asin(sin_t);
        const Point3 pin = nu_b(b, t_in);
        const Point3 pout = nu_b(b, t_out);
        CHECK(std::abs(pin.x3 - s.z_level) < 1e-12);
        CHECK(norm(Vec2{pin.x1, pin.x2} - s.p_ab) < 1e-9);
        CHECK(norm(Vec2{pout.x1, pout.x2} - s.q_ab) < 1e-9);
        CHECK(norm(s.p_ab) < s.circle_radius);
        CHECK(norm(s.q_ab) > s.circle_radius);
    }
}

TEST_CASE("planar slice rejects non-transverse configurations") {
    // |b| below the slice height: no intersection.
    CHECK_THROWS_AS((void)planar_slice(LinkParamA{{0.0, 0.95}}, LinkParamB{{0.9, 0.0}}),
                    NoIntersectionError);
    // |b| equal to the slice height: tangential contact.
    CHECK_THROWS_AS((void)planar_slice(LinkParamA{{0.0, 0.9}}, LinkParamB{{0.9, 0.0}}),
                    TangentialError);
}
