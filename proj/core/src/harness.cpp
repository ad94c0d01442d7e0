#include "linkprobe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "linkprobe/planar.hpp"
#include "linkprobe/quadrature.hpp"
#include "linkprobe/rng.hpp"

namespace linkprobe {

int resolve_thread_count(int requested) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("LINKPROBE_THREADS")) {
            n = std::atoi(env);
        }
    }
    if (n <= 0) n = 1;
    return std::min(n, 64);
}

SweepMethod parse_sweep_method(const std::string& tag) {
    if (tag == "both") return SweepMethod::Both;
    if (tag == "gauss-only") return SweepMethod::GaussOnly;
    if (tag == "planar-degree-only") return SweepMethod::PlanarDegreeOnly;
    throw ConfigError("unknown method '" + tag + "' (both | gauss-only | planar-degree-only)");
}

Fibration parse_fibration(const std::string& tag) {
    if (tag == "eta") return Fibration::Eta;
    if (tag == "xi" || tag == "xi_tilde" || tag == "xi-tilde") return Fibration::XiTilde;
    throw ConfigError("unknown fibration '" + tag + "' (eta | xi)");
}

std::string to_string(Fibration fibration) {
    return fibration == Fibration::Eta ? "eta" : "xi_tilde";
}

LinkProbeReport run_property_l(const PropertyLConfig& cfg) {
    if (cfg.n_a < 1 || cfg.n_b < 1) {
        throw ConfigError("n_a and n_b must be >= 1");
    }
    if (cfg.n_curve < 16) {
        throw ConfigError("n_curve must be >= 16");
    }
    if (!cfg.map.eval) {
        throw ConfigError("probe map has no evaluator");
    }
    const bool axisym = cfg.map.kind == MapField3::Kind::Axisym && cfg.map.profile != nullptr;
    if (cfg.method == SweepMethod::PlanarDegreeOnly && !axisym) {
        throw ConfigError("planar-degree-only requires an axisymmetric map");
    }

    const Point3 x0 = to_cartesian(cfg.x0);
    const ChartFamily fam = build_family(x0);
    if (!(cfg.r > 0.0) || cfg.r > fam.R_prime) {
        throw ConfigError("rescaling radius must lie in (0, R'] of the built chart family");
    }

    const auto v = [&cfg, &fam](const Point3& z) {
        return cfg.map.eval(chart_T_r(fam, cfg.r, z));
    };

    const long total = static_cast<long>(cfg.n_a) * cfg.n_b;
    LinkProbeReport report;
    report.hypotheses_hold = cfg.map.orientation_preserving && cfg.map.injective;
    report.samples.resize(static_cast<std::size_t>(total));

    const auto worker_body = [&](long idx) {
        LinkSample& s = report.samples[static_cast<std::size_t>(idx)];
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(idx));
        const LinkParamA a = sample_link_a(rng);
        const LinkParamB b = sample_link_b(rng);
        s.a = a.a;
        s.b = b.b;
        const CurveFn c1 = [&](double t) { return v(mu_a(a, t)); };
        const CurveFn c2 = [&](double t) { return v(nu_b(b, t)); };

        bool gauss_done = false;
        LinkResult gauss{};
        if (cfg.method != SweepMethod::PlanarDegreeOnly) {
            try {
                int n = cfg.n_curve;
                for (;;) {
                    gauss = linking_gauss(sample_curve(c1, n), sample_curve(c2, n));
                    if (gauss.defined || n >= 4096) break;
                    n *= 2; // ambiguous rounding or near-touch: refine
                }
                gauss_done = true;
            } catch (const Error& e) {
                s.note = e.what();
            }
        }
        bool planar_done = false;
        LinkResult planar{};
        if (axisym && cfg.method != SweepMethod::GaussOnly) {
            try {
                planar = linking_via_planar_degree(v, a, b, cfg.n_curve);
                planar_done = true;
            } catch (const Error& e) {
                if (!s.note.empty()) s.note += "; ";
                s.note += e.what();
            }
        }
        if (planar_done) {
            s.planar_defined = planar.defined;
            s.planar_value = planar.value;
        }
        const LinkResult& primary = gauss_done ? gauss : planar;
        if (gauss_done || planar_done) {
            s.defined = primary.defined;
            s.value = primary.value;
            s.raw = primary.raw;
        }
        if (gauss_done && planar_done && gauss.defined && planar.defined &&
            gauss.value != planar.value) {
            s.method_agree = false;
        }
    };

    const int threads = resolve_thread_count(cfg.threads);
    if (threads <= 1 || total < 2) {
        for (long i = 0; i < total; ++i) worker_body(i);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                for (long i = next++; i < total; i = next++) worker_body(i);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    for (const LinkSample& s : report.samples) {
        if (s.defined) {
            ++report.n_defined;
            if (s.value < 0) ++report.n_negative;
            if (s.value == 1) ++report.n_value_one;
        } else {
            ++report.n_undefined;
        }
        if (!s.method_agree) ++report.n_disagree;
    }
    return report;
}

void write_report_json(std::ostream& out, const PropertyLConfig& cfg,
                       const LinkProbeReport& report) {
    for (const LinkSample& s : report.samples) {
        const nlohmann::json j{
            {"a1", s.a.x},         {"a2", s.a.y},
            {"b1", s.b.x},         {"b2", s.b.y},
            {"defined", s.defined}, {"value", s.value},
            {"raw", s.raw},        {"planar_defined", s.planar_defined},
            {"planar_value", s.planar_value},
            {"method_agree", s.method_agree},
            {"note", s.note}};
        out << j.dump() << '\n';
    }
    const nlohmann::json agg{
        {"aggregate", true},
        {"map", cfg.map.name},
        {"seed", cfg.seed},
        {"r", cfg.r},
        {"n_curve", cfg.n_curve},
        {"n_samples", static_cast<long>(report.samples.size())},
        {"n_defined", report.n_defined},
        {"n_negative", report.n_negative},
        {"n_value_one", report.n_value_one},
        {"n_disagree", report.n_disagree},
        {"n_undefined", report.n_undefined},
        {"hypotheses_hold", report.hypotheses_hold}};
    out << agg.dump() << '\n';
}

void write_report_csv(std::ostream& out, const LinkProbeReport& report) {
    out << "a1,a2,b1,b2,defined,value,method_agree\n";
    out << std::setprecision(17);
    for (const LinkSample& s : report.samples) {
        out << s.a.x << ',' << s.a.y << ',' << s.b.x << ',' << s.b.y << ','
            << (s.defined ? 1 : 0) << ',' << s.value << ','
            << (s.method_agree ? 1 : 0) << '\n';
    }
}

namespace {

MapField3 make_sequence_member(const std::string& tag, int j) {
    AxisymProfile p;
    p.theta = [](double t) { return t; };
    p.theta_prime = [](double) { return 1.0; };
    p.u2 = [](double, double, double z) { return z; };
    p.orientation_preserving = true;
    p.injective = true;
    if (tag == "oscillation") {
        // Geometric amplitude decay: the envelope 2^{-j} dominates the
        // rescaled deviation once 2^{-j} falls below the chart radius scale.
        const double amp = std::pow(2.0, -j);
        p.name = "oscillation-" + std::to_string(j);
        p.u1 = [amp, j](double r, double, double z) {
            return r * (1.0 + amp * std::sin(j * z));
        };
    } else if (tag == "oscillation-slow") {
        // 1/j amplitude with frequency j: at desk-scale radii the rescaled
        // deviation plateaus (sin(j e z)/j ~ e z for j e << 1), so this tag
        // is reported, never asserted.
        p.name = "oscillation-slow-" + std::to_string(j);
        p.u1 = [j](double r, double, double z) {
            return r * (1.0 + std::sin(j * z) / j);
        };
    } else if (tag == "constant") {
        p.name = "identity-profile";
        p.u1 = [](double r, double, double) { return r; };
    } else if (tag == "amplitude-decay") {
        p.name = "amplitude-decay-" + std::to_string(j);
        p.u1 = [j](double r, double, double z) {
            return r * (1.0 + std::sin(z) / j);
        };
    } else {
        throw UnknownSequenceError("unknown sequence tag '" + tag +
                                   "' (oscillation | oscillation-slow | constant | amplitude-decay)");
    }
    return make_axisym_field(p);
}

} // namespace

WeakLimitReport run_weak_limit(const WeakLimitConfig& cfg) {
    if (cfg.radii.empty() || cfg.js.empty()) {
        throw ConfigError("weak-limit needs nonempty radius and j ladders");
    }
    for (int j : cfg.js) {
        if (j < 1) throw ConfigError("j ladder entries must be >= 1");
    }
    WeakLimitReport rep;
    rep.sequence = cfg.sequence;
    rep.asserted = cfg.sequence != "oscillation-slow";
    rep.delta_cubed = cfg.delta * cfg.delta * cfg.delta;

    const MapField3 limit = make_sequence_member("constant", 1); // also validates the tag grammar
    (void)make_sequence_member(cfg.sequence, 1);                 // reject unknown tags up front

    const ChartFamily fam = build_family(cfg.x0);
    for (double r : cfg.radii) {
        if (!(r > 0.0) || r > fam.R_prime) {
            throw ConfigError("weak-limit radius outside (0, R'] of the chart family");
        }
        for (int j : cfg.js) {
            rep.entries.push_back(
                {r, j, rescaled_deviation_l1(make_sequence_member(cfg.sequence, j), limit, fam, r,
                                             cfg.quad_n)});
        }
    }

    // Per-sequence statistics at the smallest radius.
    const double rmin = *std::min_element(cfg.radii.begin(), cfg.radii.end());
    std::vector<WeakLimitEntry> at_rmin;
    for (const WeakLimitEntry& e : rep.entries) {
        if (e.r == rmin) at_rmin.push_back(e);
    }
    std::sort(at_rmin.begin(), at_rmin.end(),
              [](const WeakLimitEntry& l, const WeakLimitEntry& r2) { return l.j < r2.j; });
    for (const WeakLimitEntry& e : at_rmin) {
        if (e.estimate < rep.delta_cubed) {
            rep.j0 = e.j;
            break;
        }
    }
    rep.j0_ok = rep.j0 >= 1 && rep.j0 <= 64;
    rep.monotone_decreasing = at_rmin.size() >= 2;
    double emax = 0.0, emin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < at_rmin.size(); ++i) {
        emax = std::max(emax, at_rmin[i].estimate);
        emin = std::min(emin, at_rmin[i].estimate);
        if (i > 0 && !(at_rmin[i].estimate < at_rmin[i - 1].estimate)) {
            rep.monotone_decreasing = false;
        }
    }
    rep.constant_in_j = (emax - emin) <= 1e-9 * std::max(emax, 1e-300);

    // Jacobian sign of the closed-form limit, sampled on a 32^3 grid of the
    // solid torus (cross-section polar coordinates, azimuth midpoints).
    double min_jac = std::numeric_limits<double>::infinity();
    const int n = 32;
    for (int i = 0; i < n; ++i) {
        const double s = 0.98 * (i + 0.5) / n;
        for (int jj = 0; jj < n; ++jj) {
            const double psi = kTwoPi * (jj + 0.5) / n;
            const double rho = kCoreRadius + s * std::cos(psi);
            const double zz = s * std::sin(psi);
            for (int k = 0; k < n; ++k) {
                const double th = kTwoPi * (k + 0.5) / n;
                const Point3 x{rho * std::cos(th), rho * std::sin(th), zz};
                min_jac = std::min(min_jac, axisym_jacobian(*limit.profile, x));
            }
        }
    }
    rep.min_limit_jacobian = min_jac;
    rep.limit_jacobian_ok = min_jac >= -1e-10;

    if (cfg.sequence == "oscillation") {
        rep.sequence_ok = rep.j0_ok && rep.limit_jacobian_ok;
    } else if (cfg.sequence == "constant") {
        rep.sequence_ok = rep.constant_in_j && rep.limit_jacobian_ok;
    } else if (cfg.sequence == "amplitude-decay") {
        rep.sequence_ok = rep.monotone_decreasing && rep.limit_jacobian_ok;
    } else { // oscillation-slow: ladder is informational
        rep.sequence_ok = rep.limit_jacobian_ok;
    }
    return rep;
}

GoodSetReport run_good_set(const GoodSetConfig& cfg) {
    if (!(cfg.m > 0.0) || !(cfg.delta > 0.0) || !(cfg.big_m > 0.0)) {
        throw ConfigError("m, M and delta must be positive");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    if (cfg.n_fibers < 1 || cfg.n_per_fiber < 64) {
        throw ConfigError("need n_fibers >= 1 and n_per_fiber >= 64");
    }

    GoodSetReport rep;
    rep.f_case = cfg.f_case;
    rep.delta_cubed = cfg.delta * cfg.delta * cfg.delta;

    std::function<double(const Point3&)> f;
    if (cfg.f_case == "zero") {
        f = [](const Point3&) { return 0.0; };
        rep.integral_f = 0.0;
    } else if (cfg.f_case == "uniform") {
        const double vol = 4.0 / 3.0 * kPi * 64.0;
        const double val = rep.delta_cubed / (2.0 * vol);
        f = [val](const Point3&) { return val; };
        double total = 0.0;
        for (const BallNode& node : ball_quadrature(4.0, 16, 16, 32)) total += node.w * val;
        rep.integral_f = total;
    } else if (cfg.f_case == "bump") {
        // Tall thin bump centered on one horizontal fiber: height 0.1,
        // support radius 0.02, smooth cubic profile.
        const double h = 0.1, w = 0.02;
        const Point3 center = mu_a({{0.03, 0.02}}, 0.0);
        f = [h, w, center](const Point3& x) {
            const double d2 = norm2(x - center);
            if (d2 >= w * w) return 0.0;
            const double q = 1.0 - d2 / (w * w);
            return h * q * q * q;
        };
        double total = 0.0;
        for (const BallNode& node : ball_quadrature(w, 16, 16, 32)) {
            total += node.w * f(center + node.p); // support is inside the radius-4 ball
        }
        rep.integral_f = total;
    } else {
        throw ConfigError("unknown f case '" + cfg.f_case + "' (zero | uniform | bump)");
    }

    rep.hypothesis_integral = rep.integral_f < rep.delta_cubed;
    const double area_e = kPi * 0.1 * 0.1; // horizontal parameter disk B_{1/10}
    rep.delta_threshold = 2.0 * cfg.m * cfg.alpha * area_e / cfg.big_m;
    rep.hypothesis_delta = cfg.delta < rep.delta_threshold;

    const double high = cfg.m * cfg.delta;
    rep.n_fibers = cfg.n_fibers;
    for (long i = 0; i < cfg.n_fibers; ++i) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
        const LinkParamA a = sample_link_a(rng);
        long count = 0;
        for (long k = 0; k < cfg.n_per_fiber; ++k) {
            const double t = kTwoPi * (k + 0.5) / static_cast<double>(cfg.n_per_fiber);
            if (f(mu_a(a, t)) >= high) ++count;
        }
        // Fiber measure of the high set: plain arclength (the horizontal
        // fibration's coarea weight is identically 1).
        const double h1 =
            (a.a.x + kCoreRadius) * kTwoPi * static_cast<double>(count) / cfg.n_per_fiber;
        if (h1 < 2.0 * cfg.delta) {
            ++rep.n_good;
        } else if (rep.bad_examples.size() < 10) {
            rep.bad_examples.push_back(a.a);
        }
    }
    rep.fraction = static_cast<double>(rep.n_good) / static_cast<double>(rep.n_fibers);
    rep.required_fraction = 1.0 - cfg.alpha;
    rep.fraction_ok = rep.fraction > rep.required_fraction;
    return rep;
}

CoareaReport run_coarea_check(Fibration fibration, int resolution) {
    if (resolution < 64) {
        throw ConfigError("coarea resolution must be >= 64");
    }
    const int n = resolution;
    const GaussLegendre gl = gauss_legendre(n);

    const auto g1 = [](const Point3&) { return 1.0; };
    const auto gx = [](const Point3& p) { return p.x1 * p.x1; };

    // Volume side: cross-section polar (s, psi), azimuth theta; the weight
    // passed in receives (point, s, rho) so the audited/claimed Jacobians
    // can be formed without re-deriving cylindrical data.
    const auto volume = [&](auto&& g, auto&& jac) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double s = 0.5 * (gl.nodes[static_cast<std::size_t>(i)] + 1.0);
            const double ws = 0.5 * gl.weights[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                const double psi = kTwoPi * (j + 0.5) / n;
                const double rho = kCoreRadius + s * std::cos(psi);
                const double zz = s * std::sin(psi);
                double ring = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double th = kTwoPi * (k + 0.5) / n;
                    const Point3 p{rho * std::cos(th), rho * std::sin(th), zz};
                    ring += g(p) * jac(s, rho);
                }
                total += ws * (kTwoPi / n) * (kTwoPi / n) * rho * s * ring;
            }
        }
        return total;
    };

    // Fiber side: parameter disk polar (u, beta), one fiber circle each.
    const auto fiber_side = [&](auto&& g) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = 0.5 * (gl.nodes[static_cast<std::size_t>(i)] + 1.0);
            const double wu = 0.5 * gl.weights[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                const double beta = kTwoPi * (j + 0.5) / n;
                double fiber = 0.0;
                if (fibration == Fibration::Eta) {
                    // eta = (r-2, x3) = u(cos beta, sin beta): the fiber is the
                    // horizontal circle of radius 2 + u cos beta at height u sin beta.
                    const double rad = kCoreRadius + u * std::cos(beta);
                    const double zz = u * std::sin(beta);
                    for (int k = 0; k < n; ++k) {
                        const double t = kTwoPi * (k + 0.5) / n;
                        fiber += g({rad * std::cos(t), rad * std::sin(t), zz}) * rad * (kTwoPi / n);
                    }
                } else {
                    // xi-tilde value u(cos beta, sin beta): the fiber is the
                    // cross-section circle of radius u in the half-plane at
                    // azimuth beta.
                    for (int k = 0; k < n; ++k) {
                        const double psi = kTwoPi * (k + 0.5) / n;
                        const double rad = kCoreRadius + u * std::cos(psi);
                        fiber += g({rad * std::cos(beta), rad * std::sin(beta), u * std::sin(psi)}) *
                                 u * (kTwoPi / n);
                    }
                }
                total += wu * (kTwoPi / n) * u * fiber;
            }
        }
        return total;
    };

    CoareaReport rep;
    rep.fibration = to_string(fibration);
    const auto jac_audited = [&](double s, double rho) {
        return fibration == Fibration::Eta ? 1.0 : s / rho;
    };
    const auto jac_claimed = [&](double s, double rho) {
        return fibration == Fibration::Eta ? rho : (s * s) / (rho * rho);
    };

    rep.lhs_g1 = volume(g1, jac_audited);
    rep.lhs_gx = volume(gx, jac_audited);
    rep.lhs_claimed_g1 = volume(g1, jac_claimed);
    rep.rhs_g1 = fiber_side(g1);
    rep.rhs_gx = fiber_side(gx);
    rep.target_g1 =
        fibration == Fibration::Eta ? 4.0 * kPi * kPi : 4.0 * kPi * kPi / 3.0;

    rep.mismatch_g1 = std::abs(rep.lhs_g1 - rep.rhs_g1) / std::abs(rep.rhs_g1);
    rep.mismatch_gx = std::abs(rep.lhs_gx - rep.rhs_gx) / std::abs(rep.rhs_gx);
    rep.claimed_mismatch_g1 = std::abs(rep.lhs_claimed_g1 - rep.rhs_g1) / std::abs(rep.rhs_g1);
    rep.audit_flag = rep.claimed_mismatch_g1 > 0.40;
    rep.audited_ok = rep.mismatch_g1 < 0.005 && rep.mismatch_gx < 0.005 &&
                     std::abs(rep.lhs_g1 - rep.target_g1) / rep.target_g1 < 0.005 &&
                     std::abs(rep.rhs_g1 - rep.target_g1) / rep.target_g1 < 0.005;
    return rep;
}

} // namespace linkprobe
