// linkprobe command-line driver.
//
// Subcommands:
//   link FILE1 FILE2            linking number of two stored polylines
//   canonical --a A1,A2 --b B1,B2
//                               linking of the canonical torus link pair
//   degree --map TAG --circle CX,CY,R --point PX,PY --method winding|preimage
//   axisym-check --profile FILE [--map TAG] --checks jacobian,divergence,...
//   property-l --config FILE [--out FILE]
//   weak-limit --sequence TAG [...]
//   good-set --config FILE
//   coarea --fibration eta|xi [--resolution N]
//
// Exit codes: 0 success, 1 assertion failure, 2 configuration/usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "linkprobe/axisym.hpp"
#include "linkprobe/chart_family.hpp"
#include "linkprobe/harness.hpp"
#include "linkprobe/linking.hpp"
#include "linkprobe/planar.hpp"
#include "linkprobe/quadrature.hpp"
#include "linkprobe/rng.hpp"
#include "linkprobe/torus.hpp"

namespace {

using namespace linkprobe;

std::vector<double> parse_csv_numbers(const std::string& text, std::size_t expected,
                                      const std::string& what) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            vals.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse '" + tok + "' in " + what);
        }
    }
    if (vals.size() != expected) {
        throw ConfigError(what + " needs " + std::to_string(expected) +
                          " comma-separated numbers, got " + std::to_string(vals.size()));
    }
    return vals;
}

Vec2 parse_vec2(const std::string& text, const std::string& what) {
    const auto v = parse_csv_numbers(text, 2, what);
    return {v[0], v[1]};
}

// Map tags accepted by property-l and axisym-check: the axisymmetric catalog
// profiles by name, plus two linear fields.
MapField3 resolve_map_tag(const std::string& tag) {
    for (const AxisymProfile& p : axisym_profile_catalog()) {
        if (p.name == tag) return make_axisym_field(p);
    }
    if (tag == "identity-linear") return make_identity_field();
    if (tag == "reverse-control") {
        MapField3 f = make_linear_field(mat3_diag(1.0, 1.0, -1.0));
        f.name = "reverse-control";
        return f;
    }
    std::string names;
    for (const AxisymProfile& p : axisym_profile_catalog()) names += p.name + " | ";
    throw ConfigError("unknown map tag '" + tag + "' (" + names +
                      "identity-linear | reverse-control)");
}

const PlanarMap& resolve_planar_tag(const std::vector<PlanarMap>& catalog,
                                    const std::string& tag) {
    for (const PlanarMap& m : catalog) {
        if (m.name == tag) return m;
    }
    std::string names;
    for (const PlanarMap& m : catalog) names += m.name + " ";
    throw ConfigError("unknown planar map tag '" + tag + "' (available: " + names + ")");
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config JSON parse error in " + path + ": " + e.what());
    }
}

int cmd_link(const std::string& file1, const std::string& file2) {
    const ClosedPolyline3 c1 = read_curve_file(file1);
    const ClosedPolyline3 c2 = read_curve_file(file2);
    const LinkResult res = linking_gauss(c1, c2);
    std::cout << "linking: " << res.value << "\n";
    if (!res.defined) {
        std::cerr << "warning: result not well-defined (raw " << res.raw << ", min separation "
                  << res.min_separation << ")\n";
        return 1;
    }
    return 0;
}

int cmd_canonical(const std::string& a_text, const std::string& b_text, int n_curve,
                  const std::string& method) {
    const LinkParamA a{parse_vec2(a_text, "--a")};
    const LinkParamB b{parse_vec2(b_text, "--b")};
    if (!valid_link_a(a)) throw ConfigError("--a outside the open disk of radius 1/10");
    if (!valid_link_b(b)) throw ConfigError("--b outside the admissible vertical-parameter set");
    const ClosedPolyline3 c1 = sample_curve([&](double t) { return mu_a(a, t); }, n_curve);
    const ClosedPolyline3 c2 = sample_curve([&](double t) { return nu_b(b, t); }, n_curve);

    std::optional<LinkResult> gauss, crossings;
    if (method == "gauss" || method == "both") gauss = linking_gauss(c1, c2);
    if (method == "crossings" || method == "both") crossings = linking_crossings_any(c1, c2);
    if (!gauss && !crossings) {
        throw ConfigError("unknown --method '" + method + "' (gauss | crossings | both)");
    }
    const LinkResult& primary = gauss ? *gauss : *crossings;
    std::cout << "linking: " << primary.value << "\n";
    if (!primary.defined) {
        std::cerr << "warning: result not well-defined\n";
        return 1;
    }
    if (gauss && crossings && gauss->value != crossings->value) {
        std::cerr << "method disagreement: gauss " << gauss->value << " vs crossings "
                  << crossings->value << "\n";
        return 1;
    }
    return 0;
}

int cmd_degree(const std::string& map_tag, const std::string& circle_text,
               const std::string& point_text, const std::string& method, int n) {
    const auto catalog = planar_map_catalog();
    const PlanarMap& w = resolve_planar_tag(catalog, map_tag);
    const auto cv = parse_csv_numbers(circle_text, 3, "--circle");
    const Circle2 circle{{cv[0], cv[1]}, cv[2]};
    if (!(circle.radius > 0.0)) throw ConfigError("--circle radius must be positive");
    const Vec2 y = parse_vec2(point_text, "--point");

    DegreeResult res;
    if (method == "winding") {
        res = winding_number(w, circle, y, n);
    } else if (method == "preimage") {
        res = preimage_count_degree(w, circle, y, n);
    } else {
        throw ConfigError("unknown --method '" + method + "' (winding | preimage)");
    }
    std::cout << "degree: " << res.value << "\n";
    if (!res.defined) {
        std::cerr << "warning: degree not well-defined (boundary clearance "
                  << res.boundary_clearance << ")\n";
        return 1;
    }
    return 0;
}

int cmd_axisym_check(const std::string& profile_file, const std::string& map_tag,
                     const std::string& checks_text, long n_pairs, std::uint64_t seed) {
    MapField3 field;
    if (!profile_file.empty()) {
        field = make_axisym_field(load_profile(profile_file));
    } else if (!map_tag.empty()) {
        field = resolve_map_tag(map_tag);
        if (field.kind != MapField3::Kind::Axisym) {
            throw ConfigError("axisym-check needs an axisymmetric map");
        }
    } else {
        throw ConfigError("axisym-check needs --profile FILE or --map TAG");
    }
    const AxisymProfile& prof = *field.profile;

    std::vector<std::string> checks;
    {
        std::stringstream ss(checks_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) checks.push_back(tok);
    }

    nlohmann::json out;
    out["profile"] = prof.name;
    bool all_ok = true;
    Rng rng(seed);

    for (const std::string& check : checks) {
        if (check == "jacobian") {
            // Cylindrical-frame determinant against a raw Cartesian
            // finite-difference determinant at random solid-torus points.
            double max_diff = 0.0, min_det = std::numeric_limits<double>::infinity();
            MapField3 no_jac = field;
            no_jac.jac = nullptr;
            for (int i = 0; i < 200; ++i) {
                const double s = 0.9 * std::sqrt(rng.uniform01());
                const double psi = rng.uniform(0.0, kTwoPi);
                const double th = rng.uniform(0.0, kTwoPi);
                const double rho = kCoreRadius + s * std::cos(psi);
                const Point3 x{rho * std::cos(th), rho * std::sin(th), s * std::sin(psi)};
                const double d_cyl = axisym_jacobian(prof, x);
                const double d_cart = mat3_det(field_jacobian(no_jac, x));
                max_diff = std::max(max_diff, std::abs(d_cyl - d_cart));
                min_det = std::min(min_det, d_cyl);
            }
            const bool ok = max_diff < 1e-4;
            out["jacobian"] = {{"max_frame_vs_cartesian_diff", max_diff},
                               {"min_det", min_det},
                               {"pass", ok}};
            all_ok = all_ok && ok;
        } else if (check == "divergence") {
            const PlanarMap w = restrict_to_halfplane(field, 0.7);
            double max_res = 0.0;
            for (const TestFunction& phi : test_function_catalog()) {
                for (const VectorField2& g : vector_field_catalog()) {
                    max_res = std::max(max_res,
                                       std::abs(divergence_identity_residual(w, phi, g, 128)));
                }
            }
            const bool ok = max_res < 1e-6;
            out["divergence"] = {{"max_residual", max_res}, {"pass", ok}};
            all_ok = all_ok && ok;
        } else if (check == "injectivity") {
            const Ball3 domain{to_cartesian({kCoreRadius, 0.0, 0.0}), 0.9};
            const InjectivityReport rep = injectivity_sample(field, domain, n_pairs, seed);
            const bool ok = rep.n_collisions == 0 || !field.injective;
            out["injectivity"] = {{"n_samples", rep.n_samples},
                                  {"n_candidate_pairs", rep.n_candidate_pairs},
                                  {"n_collisions", rep.n_collisions},
                                  {"flagged_injective", field.injective},
                                  {"pass", ok}};
            all_ok = all_ok && ok;
        } else if (check == "halfplane") {
            // The axial rotation by Theta(theta) must carry the image of the
            // half-plane at azimuth theta onto the planar restriction.
            double max_dev = 0.0;
            for (int i = 0; i < 100; ++i) {
                const double s = 0.9 * std::sqrt(rng.uniform01());
                const double psi = rng.uniform(0.0, kTwoPi);
                const double th = rng.uniform(0.0, kTwoPi);
                const double rho = kCoreRadius + s * std::cos(psi);
                const double zz = s * std::sin(psi);
                const Point3 x{rho * std::cos(th), rho * std::sin(th), zz};
                const Point3 rotated =
                    mat3_apply(rotation_for_halfplane(prof.theta(th)), field.eval(x));
                const PlanarMap w = restrict_to_halfplane(field, th);
                const Vec2 wxy = w.eval({rho, -zz});
                const Point3 diff = rotated - Point3{wxy.x, wxy.y, 0.0};
                max_dev = std::max(max_dev, norm(diff));
            }
            const bool ok = max_dev < 1e-10;
            out["halfplane"] = {{"max_deviation", max_dev}, {"pass", ok}};
            all_ok = all_ok && ok;
        } else {
            throw ConfigError("unknown check '" + check +
                              "' (jacobian | divergence | injectivity | halfplane)");
        }
    }
    out["pass"] = all_ok;
    std::cout << out.dump(2) << "\n";
    return all_ok ? 0 : 1;
}

int cmd_property_l(const std::string& config_file, const std::string& out_file, bool csv,
                   std::optional<std::uint64_t> seed_override, int threads) {
    const nlohmann::json j = load_json_file(config_file);
    PropertyLConfig cfg;
    cfg.map = resolve_map_tag(j.value("map", "identity"));
    if (j.contains("x0")) {
        const auto x0 = j.at("x0");
        if (!x0.is_array() || x0.size() != 3) {
            throw ConfigError("config x0 must be [r, theta, z] cylindrical");
        }
        cfg.x0 = {x0[0].get<double>(), x0[1].get<double>(), x0[2].get<double>()};
    }
    cfg.r = j.value("r", cfg.r);
    cfg.n_a = j.value("n_a", cfg.n_a);
    cfg.n_b = j.value("n_b", cfg.n_b);
    cfg.n_curve = j.value("n_curve", cfg.n_curve);
    cfg.seed = j.value("seed", cfg.seed);
    if (seed_override) cfg.seed = *seed_override;
    cfg.method = parse_sweep_method(j.value("method", "both"));
    cfg.threads = threads;

    const LinkProbeReport report = run_property_l(cfg);

    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw ConfigError("cannot open output file: " + out_file);
        if (csv) {
            write_report_csv(out, report);
        } else {
            write_report_json(out, cfg, report);
        }
    } else if (csv) {
        write_report_csv(std::cout, report);
    } else {
        write_report_json(std::cout, cfg, report);
    }

    const nlohmann::json agg{{"map", cfg.map.name},
                             {"n_defined", report.n_defined},
                             {"n_negative", report.n_negative},
                             {"n_value_one", report.n_value_one},
                             {"n_disagree", report.n_disagree},
                             {"n_undefined", report.n_undefined},
                             {"hypotheses_hold", report.hypotheses_hold}};
    if (!out_file.empty()) std::cout << agg.dump() << "\n";

    const bool fail = (report.hypotheses_hold && report.n_negative > 0) || report.n_disagree > 0;
    return fail ? 1 : 0;
}

int cmd_weak_limit(const std::string& sequence, std::vector<double> radii, std::vector<int> js,
                   int quad_n, double delta) {
    WeakLimitConfig cfg;
    cfg.sequence = sequence;
    if (!radii.empty()) cfg.radii = std::move(radii);
    if (!js.empty()) cfg.js = std::move(js);
    cfg.quad_n = quad_n;
    cfg.delta = delta;

    const WeakLimitReport rep = run_weak_limit(cfg);
    nlohmann::json out;
    out["sequence"] = rep.sequence;
    out["asserted"] = rep.asserted;
    out["delta_cubed"] = rep.delta_cubed;
    out["j0"] = rep.j0;
    out["min_limit_jacobian"] = rep.min_limit_jacobian;
    out["limit_jacobian_ok"] = rep.limit_jacobian_ok;
    out["sequence_ok"] = rep.sequence_ok;
    nlohmann::json entries = nlohmann::json::array();
    for (const WeakLimitEntry& e : rep.entries) {
        entries.push_back({{"r", e.r}, {"j", e.j}, {"estimate", e.estimate}});
    }
    out["entries"] = entries;
    std::cout << out.dump(2) << "\n";
    return (!rep.asserted || rep.sequence_ok) ? 0 : 1;
}

int cmd_good_set(const std::string& config_file, std::optional<std::uint64_t> seed_override) {
    const nlohmann::json j = load_json_file(config_file);
    GoodSetConfig cfg;
    cfg.f_case = j.value("f_case", cfg.f_case);
    cfg.m = j.value("m", cfg.m);
    cfg.big_m = j.value("M", cfg.big_m);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.n_fibers = j.value("n_fibers", cfg.n_fibers);
    cfg.n_per_fiber = j.value("n_per_fiber", cfg.n_per_fiber);
    cfg.seed = j.value("seed", cfg.seed);
    if (seed_override) cfg.seed = *seed_override;

    const GoodSetReport rep = run_good_set(cfg);
    nlohmann::json out{{"f_case", rep.f_case},
                       {"integral_f", rep.integral_f},
                       {"delta_cubed", rep.delta_cubed},
                       {"hypothesis_integral", rep.hypothesis_integral},
                       {"delta_threshold", rep.delta_threshold},
                       {"hypothesis_delta", rep.hypothesis_delta},
                       {"n_fibers", rep.n_fibers},
                       {"n_good", rep.n_good},
                       {"fraction", rep.fraction},
                       {"required_fraction", rep.required_fraction},
                       {"fraction_ok", rep.fraction_ok}};
    std::cout << out.dump(2) << "\n";
    return rep.fraction_ok ? 0 : 1;
}

int cmd_coarea(const std::string& fibration_tag, int resolution) {
    const CoareaReport rep = run_coarea_check(parse_fibration(fibration_tag), resolution);
    nlohmann::json out{{"fibration", rep.fibration},
                       {"lhs_g1", rep.lhs_g1},
                       {"rhs_g1", rep.rhs_g1},
                       {"target_g1", rep.target_g1},
                       {"mismatch_g1", rep.mismatch_g1},
                       {"lhs_gx", rep.lhs_gx},
                       {"rhs_gx", rep.rhs_gx},
                       {"mismatch_gx", rep.mismatch_gx},
                       {"lhs_claimed_g1", rep.lhs_claimed_g1},
                       {"claimed_mismatch_g1", rep.claimed_mismatch_g1},
                       {"audit_flag", rep.audit_flag},
                       {"audited_ok", rep.audited_ok}};
    std::cout << out.dump(2) << "\n";
    return (rep.audited_ok && rep.audit_flag) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linkprobe: topological linking diagnostics for axisymmetric maps"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool use_csv = false, use_json = false;
    app.add_option("--seed", seed, "override the experiment seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--threads", threads, "worker thread count (default: LINKPROBE_THREADS or 1)");
    app.add_flag("--csv", use_csv, "write reports as CSV");
    app.add_flag("--json", use_json, "write reports as JSON (default)");

    // link
    auto* link = app.add_subcommand("link", "linking number of two stored curve files");
    std::string file1, file2;
    link->add_option("file1", file1, "first curve file")->required();
    link->add_option("file2", file2, "second curve file")->required();

    // canonical
    auto* canonical = app.add_subcommand("canonical", "linking of the canonical link pair");
    std::string a_text, b_text, canonical_method = "gauss";
    int canonical_n = 512;
    canonical->add_option("--a", a_text, "horizontal parameter a1,a2")->required();
    canonical->add_option("--b", b_text, "vertical parameter b1,b2")->required();
    canonical->add_option("--n-curve", canonical_n, "polyline resolution");
    canonical->add_option("--method", canonical_method, "gauss | crossings | both");

    // degree
    auto* degree = app.add_subcommand("degree", "planar degree of a catalog map");
    std::string degree_map, circle_text, point_text, degree_method = "winding";
    int degree_n = 1024;
    degree->add_option("--map", degree_map, "planar catalog map tag")->required();
    degree->add_option("--circle", circle_text, "circle cx,cy,radius")->required();
    degree->add_option("--point", point_text, "target point px,py")->required();
    degree->add_option("--method", degree_method, "winding | preimage");
    degree->add_option("--n", degree_n, "circle samples / preimage grid resolution");

    // axisym-check
    auto* axisym = app.add_subcommand("axisym-check", "diagnostics for an axisymmetric profile");
    std::string profile_file, axisym_map;
    std::string checks = "jacobian,divergence,injectivity,halfplane";
    long n_pairs = 10000;
    axisym->add_option("--profile", profile_file, "profile JSON file");
    axisym->add_option("--map", axisym_map, "catalog profile tag (alternative to --profile)");
    axisym->add_option("--checks", checks, "comma-separated checks");
    axisym->add_option("--n-pairs", n_pairs, "injectivity sample count");

    // property-l
    auto* propl = app.add_subcommand("property-l", "linking sweep over the canonical family");
    std::string propl_config, propl_out;
    propl->add_option("--config", propl_config, "sweep config JSON file")->required();
    propl->add_option("--out", propl_out, "report output file (default stdout)");

    // weak-limit
    auto* weak = app.add_subcommand("weak-limit", "rescaled-deviation ladder for a sequence");
    std::string sequence;
    std::vector<double> wl_radii;
    std::vector<int> wl_js;
    int wl_quad_n = 32;
    double wl_delta = 0.2;
    weak->add_option("--sequence", sequence, "catalog sequence tag")->required();
    weak->add_option("--r", wl_radii, "radius ladder entries");
    weak->add_option("--j", wl_js, "j ladder entries");
    weak->add_option("--quad-n", wl_quad_n, "quadrature resolution");
    weak->add_option("--delta", wl_delta, "deviation threshold parameter");

    // good-set
    auto* goodset = app.add_subcommand("good-set", "good-parameter-set fraction estimate");
    std::string goodset_config;
    goodset->add_option("--config", goodset_config, "good-set config JSON file")->required();

    // coarea
    auto* coarea = app.add_subcommand("coarea", "coarea cross-check for a fibration");
    std::string fibration_tag;
    int resolution = 64;
    coarea->add_option("--fibration", fibration_tag, "eta | xi")->required();
    coarea->add_option("--resolution", resolution, "quadrature resolution per direction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    const std::optional<std::uint64_t> seed_override =
        seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt;

    try {
        if (link->parsed()) return cmd_link(file1, file2);
        if (canonical->parsed()) return cmd_canonical(a_text, b_text, canonical_n, canonical_method);
        if (degree->parsed())
            return cmd_degree(degree_map, circle_text, point_text, degree_method, degree_n);
        if (axisym->parsed())
            return cmd_axisym_check(profile_file, axisym_map, checks, n_pairs,
                                    seed_set ? seed : 42);
        if (propl->parsed())
            return cmd_property_l(propl_config, propl_out, use_csv, seed_override, threads);
        if (weak->parsed()) return cmd_weak_limit(sequence, wl_radii, wl_js, wl_quad_n, wl_delta);
        if (goodset->parsed()) return cmd_good_set(goodset_config, seed_override);
        if (coarea->parsed()) return cmd_coarea(fibration_tag, resolution);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
