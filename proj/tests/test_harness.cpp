#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "linkprobe/axisym.hpp"
#include "linkprobe/errors.hpp"
#include "linkprobe/harness.hpp"

using namespace linkprobe;

namespace {

MapField3 catalog_field(const std::string& name) {
    for (const auto& p : axisym_profile_catalog()) {
        if (p.name == name) return make_axisym_field(p);
    }
    throw ConfigError("no such catalog profile: " + name);
}

} // namespace

TEST_CASE("property sweep: identity map links every admissible pair once") {
    PropertyLConfig cfg;
    cfg.map = catalog_field("identity");
    cfg.n_a = 6;
    cfg.n_b = 6;
    cfg.n_curve = 128;
    cfg.seed = 3;
    cfg.method = SweepMethod::Both;
    const LinkProbeReport rep = run_property_l(cfg);
    REQUIRE(rep.samples.size() == 36);
    CHECK(rep.hypotheses_hold);
    CHECK(rep.n_defined == 36);
    CHECK(rep.n_value_one == 36);
    CHECK(rep.n_negative == 0);
    CHECK(rep.n_disagree == 0);
    CHECK(rep.n_undefined == 0);
    CHECK(rep.zero_negatives());
    for (const auto& s : rep.samples) {
        CHECK(s.defined);
        CHECK(s.value == 1);
        CHECK(std::abs(s.raw - 1.0) < 1e-5);
        // Axisymmetric map + Both: the slice-degree route must also fire.
        CHECK(s.planar_defined);
        CHECK(s.planar_value == 1);
        CHECK(s.method_agree);
    }
}

TEST_CASE("property sweep: orientation-reversing control is all minus one") {
    PropertyLConfig cfg;
    cfg.map = make_linear_field(mat3_diag(1.0, 1.0, -1.0));
    cfg.n_a = 5;
    cfg.n_b = 5;
    cfg.n_curve = 128;
    cfg.seed = 4;
    cfg.method = SweepMethod::GaussOnly;
    const LinkProbeReport rep = run_property_l(cfg);
    REQUIRE(rep.samples.size() == 25);
    // The control sits outside the property hypotheses by design.
    CHECK_FALSE(rep.hypotheses_hold);
    CHECK(rep.n_defined == 25);
    CHECK(rep.n_negative == 25);
    for (const auto& s : rep.samples) CHECK(s.value == -1);
}

TEST_CASE("property sweep is reproducible and thread-count independent") {
    PropertyLConfig cfg;
    cfg.map = catalog_field("twist");
    cfg.n_a = 4;
    cfg.n_b = 4;
    cfg.n_curve = 64;
    cfg.seed = 9;
    cfg.method = SweepMethod::GaussOnly;

    cfg.threads = 1;
    const LinkProbeReport one = run_property_l(cfg);
    cfg.threads = 4;
    const LinkProbeReport four = run_property_l(cfg);

    std::ostringstream s1, s4;
    write_report_json(s1, cfg, one);
    write_report_json(s4, cfg, four);
    CHECK(s1.str() == s4.str()); // byte-identical regardless of scheduling

    cfg.threads = 1;
    const LinkProbeReport again = run_property_l(cfg);
    std::ostringstream s2;
    write_report_json(s2, cfg, again);
    CHECK(s1.str() == s2.str()); // and across repeated runs
}

TEST_CASE("report serialization has the documented shape") {
    PropertyLConfig cfg;
    cfg.map = catalog_field("identity");
    cfg.n_a = 3;
    cfg.n_b = 3;
    cfg.n_curve = 64;
    cfg.method = SweepMethod::GaussOnly;
    const LinkProbeReport rep = run_property_l(cfg);

    std::ostringstream json;
    write_report_json(json, cfg, rep);
    // One JSON object per line: 9 samples + 1 aggregate.
    int lines = 0;
    std::string line;
    std::istringstream in(json.str());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        ++lines;
    }
    CHECK(lines == 10);

    std::ostringstream csv;
    write_report_csv(csv, rep);
    std::istringstream cin2(csv.str());
    std::getline(cin2, line);
    CHECK(line == "a1,a2,b1,b2,defined,value,method_agree");
    int rows = 0;
    while (std::getline(cin2, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 9);
}

TEST_CASE("property sweep validates its configuration") {
    PropertyLConfig cfg;
    cfg.map = catalog_field("identity");
    cfg.n_a = 0;
    CHECK_THROWS_AS((void)run_property_l(cfg), ConfigError);
    cfg.n_a = 2;
    cfg.n_curve = 8; // below the documented floor of 16
    CHECK_THROWS_AS((void)run_property_l(cfg), ConfigError);
    cfg.n_curve = 64;
    cfg.r = 10.0; // far beyond R' of the family at (2, 0, 0)
    CHECK_THROWS_AS((void)run_property_l(cfg), ConfigError);
    cfg.r = 0.05;
    cfg.map = make_linear_field(mat3_diag(1.0, 1.0, -1.0));
    cfg.method = SweepMethod::PlanarDegreeOnly; // needs an axisymmetric map
    CHECK_THROWS_AS((void)run_property_l(cfg), ConfigError);
}

TEST_CASE("weak limit: constant sequence is flat in j") {
    WeakLimitConfig cfg;
    cfg.sequence = "constant";
    cfg.radii = {1e-4};
    cfg.js = {1, 3, 9};
    cfg.quad_n = 8;
    const WeakLimitReport rep = run_weak_limit(cfg);
    CHECK(rep.asserted);
    CHECK(rep.constant_in_j);
    CHECK(rep.sequence_ok);
    CHECK(rep.limit_jacobian_ok);
    REQUIRE(rep.entries.size() == 3);
}

TEST_CASE("weak limit: amplitude decay follows the frozen 1/j line") {
    WeakLimitConfig cfg;
    cfg.sequence = "amplitude-decay";
    cfg.radii = {1e-5};
    cfg.js = {1, 2, 4};
    cfg.quad_n = 32;
    const WeakLimitReport rep = run_weak_limit(cfg);
    CHECK(rep.asserted);
    CHECK(rep.monotone_decreasing);
    CHECK(rep.sequence_ok);
    REQUIRE(rep.entries.size() == 3);
    // Audit line: estimate = 313.229 / j at the smallest radius.
    CHECK(rep.entries[0].estimate == doctest::Approx(313.229).epsilon(5e-3));
    CHECK(rep.entries[1].estimate ==
          doctest::Approx(rep.entries[0].estimate / 2.0).epsilon(1e-6));
    CHECK(rep.entries[2].estimate ==
          doctest::Approx(rep.entries[0].estimate / 4.0).epsilon(1e-6));
}

TEST_CASE("weak limit: oscillation drops below delta^3 at the frozen index") {
    WeakLimitConfig cfg;
    cfg.sequence = "oscillation";
    cfg.radii = {1e-5};
    cfg.js = {19, 20};
    cfg.quad_n = 32;
    cfg.delta = 0.2;
    const WeakLimitReport rep = run_weak_limit(cfg);
    CHECK(rep.asserted);
    REQUIRE(rep.entries.size() == 2);
    CHECK(rep.delta_cubed == doctest::Approx(0.008));
    // Audit values: 0.0116 at j = 19 (above), 0.0064 at j = 20 (below).
    CHECK(rep.entries[0].estimate == doctest::Approx(0.0116063).epsilon(5e-3));
    CHECK(rep.entries[1].estimate == doctest::Approx(0.00639677).epsilon(5e-3));
    CHECK(rep.j0 == 20);
    CHECK(rep.j0_ok);
    CHECK(rep.limit_jacobian_ok);
    CHECK(rep.min_limit_jacobian > 0.5); // the limit is a diffeomorphism here
    CHECK(rep.sequence_ok);
}

TEST_CASE("weak limit: the slow 1/j modulation is reported but never asserted") {
    WeakLimitConfig cfg;
    cfg.sequence = "oscillation-slow";
    cfg.radii = {1e-5};
    cfg.js = {1, 64};
    cfg.quad_n = 8;
    const WeakLimitReport rep = run_weak_limit(cfg);
    CHECK_FALSE(rep.asserted);
    // The modulation sin(j z)/j linearizes at probe scale: the ladder sits
    // on a plateau instead of decaying, which is exactly why this tag is
    // excluded from assertions.
    REQUIRE(rep.entries.size() == 2);
    CHECK(rep.entries[1].estimate ==
          doctest::Approx(rep.entries[0].estimate).epsilon(1e-2));

    WeakLimitConfig bad = cfg;
    bad.sequence = "no-such-sequence";
    CHECK_THROWS_AS((void)run_weak_limit(bad), UnknownSequenceError);
}

TEST_CASE("good set: vanishing density makes every fiber good") {
    GoodSetConfig cfg;
    cfg.f_case = "zero";
    cfg.n_fibers = 200;
    cfg.n_per_fiber = 256;
    const GoodSetReport rep = run_good_set(cfg);
    CHECK(rep.hypothesis_integral);
    CHECK(rep.hypothesis_delta);
    CHECK(rep.n_good == rep.n_fibers);
    CHECK(rep.fraction == doctest::Approx(1.0));
    CHECK(rep.fraction_ok);
    CHECK(rep.required_fraction == doctest::Approx(0.75));
    CHECK(rep.bad_examples.empty());
}

TEST_CASE("good set: uniform sub-threshold density stays below every fiber cut") {
    GoodSetConfig cfg;
    cfg.f_case = "uniform";
    cfg.n_fibers = 200;
    cfg.n_per_fiber = 256;
    const GoodSetReport rep = run_good_set(cfg);
    CHECK(rep.hypothesis_integral);
    // The uniform value delta^3 / (2 vol B4) sits below m delta everywhere,
    // so no fiber sees any high-density arc at all.
    CHECK(rep.n_good == rep.n_fibers);
    CHECK(rep.fraction_ok);
}

TEST_CASE("good set: concentrated bump spoils only a thin parameter band") {
    GoodSetConfig cfg;
    cfg.f_case = "bump";
    cfg.n_fibers = 400;
    cfg.n_per_fiber = 2048;
    const GoodSetReport rep = run_good_set(cfg);
    // Frozen quadrature of the bump: 5.10633e-7 < delta^3 = 1e-6.
    CHECK(rep.integral_f == doctest::Approx(5.10633e-7).epsilon(1e-3));
    CHECK(rep.hypothesis_integral);
    CHECK(rep.hypothesis_delta);
    // Audit fraction 0.9925 at the full resolution; small-sample runs stay
    // close to it and far above the 0.75 requirement.
    CHECK(rep.fraction > 0.95);
    CHECK(rep.fraction < 1.0); // the bump really does spoil some fibers
    CHECK(rep.fraction_ok);
    CHECK_FALSE(rep.bad_examples.empty());

    GoodSetConfig bad = cfg;
    bad.f_case = "no-such-case";
    CHECK_THROWS_AS((void)run_good_set(bad), ConfigError);
}

TEST_CASE("coarea cross-check: horizontal fibration") {
    const CoareaReport rep = run_coarea_check(Fibration::Eta, 64);
    CHECK(rep.fibration == "eta");
    // Volume and fiber sides agree with each other and the closed form
    // 4 pi^2 (audited unit Jacobian).
    CHECK(rep.lhs_g1 == doctest::Approx(39.47841760435743).epsilon(1e-9));
    CHECK(rep.rhs_g1 == doctest::Approx(39.47841760435743).epsilon(1e-9));
    CHECK(rep.mismatch_g1 < 1e-9);
    CHECK(rep.mismatch_gx < 1e-6);
    // The claimed weight overshoots by the audit value 112.5%.
    CHECK(rep.claimed_mismatch_g1 == doctest::Approx(1.125).epsilon(1e-3));
    CHECK(rep.audit_flag);
    CHECK(rep.audited_ok);
}

TEST_CASE("coarea cross-check: cross-section fibration") {
    const CoareaReport rep = run_coarea_check(Fibration::XiTilde, 64);
    CHECK(rep.fibration == "xi_tilde");
    // Closed form 4 pi^2 / 3 with the audited s/r weight.
    CHECK(rep.lhs_g1 == doctest::Approx(13.159472534785811).epsilon(1e-9));
    CHECK(rep.rhs_g1 == doctest::Approx(13.159472534785811).epsilon(1e-9));
    CHECK(rep.mismatch_g1 < 1e-9);
    CHECK(rep.mismatch_gx < 1e-6);
    // Claimed weight (s/r)^2 misses by the audit value 58.85%.
    CHECK(rep.claimed_mismatch_g1 == doctest::Approx(0.5885).epsilon(2e-3));
    CHECK(rep.audit_flag);
    CHECK(rep.audited_ok);

    CHECK_THROWS_AS((void)run_coarea_check(Fibration::Eta, 16), ConfigError);
}

TEST_CASE("tag parsing and thread resolution") {
    CHECK(parse_sweep_method("both") == SweepMethod::Both);
    CHECK(parse_sweep_method("gauss-only") == SweepMethod::GaussOnly);
    CHECK(parse_sweep_method("planar-degree-only") == SweepMethod::PlanarDegreeOnly);
    CHECK(parse_fibration("eta") == Fibration::Eta);
    CHECK(parse_fibration("xi") == Fibration::XiTilde);
    CHECK(to_string(Fibration::XiTilde) == "xi_tilde");
    CHECK_THROWS_AS((void)parse_sweep_method("nope"), ConfigError);
    CHECK_THROWS_AS((void)parse_fibration("nope"), ConfigError);

    CHECK(resolve_thread_count(3) == 3);
    CHECK(resolve_thread_count(1000) == 64); // clamped
#if defined(_WIN32)
    // environment-variable path not exercised on Windows
#else
    unsetenv("LINKPROBE_THREADS");
    CHECK(resolve_thread_count(0) == 1);
    setenv("LINKPROBE_THREADS", "5", 1);
    CHECK(resolve_thread_count(0) == 5);
    unsetenv("LINKPROBE_THREADS");
#endif
}
