#include "linkprobe/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "json.hpp"

namespace linkprobe {

void validate_profile(const AxisymProfile& p) {
    if (!p.theta || !p.u1 || !p.u2) {
        throw ConfigError("profile '" + p.name + "': theta, u1, u2 must all be set");
    }
    const double turn = p.theta(kTwoPi) - p.theta(0.0);
    if (std::abs(turn - kTwoPi) > 1e-12) {
        throw ConfigError("profile '" + p.name + "': Theta(2pi) - Theta(0) != 2pi");
    }
    const int net = 4096;
    double prev = p.theta(0.0);
    for (int k = 1; k <= net; ++k) {
        const double cur = p.theta(kTwoPi * static_cast<double>(k) / net);
        if (cur <= prev) {
            throw ConfigError("profile '" + p.name + "': Theta not strictly increasing");
        }
        prev = cur;
    }
    // u1 >= 0 on a sample of the solid-torus neighbourhood the library
    // actually evaluates maps on.
    for (int ir = 0; ir < 10; ++ir) {
        const double r = 0.01 + (4.0 - 0.01) * ir / 9.0;
        for (int it = 0; it < 12; ++it) {
            const double t = kTwoPi * it / 12.0;
            for (int iz = 0; iz < 9; ++iz) {
                const double z = -4.0 + 8.0 * iz / 8.0;
                if (p.u1(r, t, z) < 0.0) {
                    throw ConfigError("profile '" + p.name + "': u1 < 0 at a sample point");
                }
            }
        }
    }
}

double profile_theta_prime(const AxisymProfile& p, double t) {
    if (p.theta_prime) {
        return p.theta_prime(t);
    }
    const double h = 1e-7;
    return (p.theta(t + h) - p.theta(t - h)) / (2.0 * h);
}

Point3 axisym_eval(const AxisymProfile& p, const Point3& x) {
    const CylPoint3 c = to_cylindrical(x); // throws AxisPointError on the axis
    const double U1 = p.u1(c.r, c.theta, c.z);
    const double Th = p.theta(c.theta);
    return {U1 * std::cos(Th), U1 * std::sin(Th), p.u2(c.r, c.theta, c.z)};
}

double axisym_jacobian(const AxisymProfile& p, const Point3& x) {
    const CylPoint3 c = to_cylindrical(x);
    if (c.r < kDefaultAxisExclusion) {
        throw AxisPointError("inside the excluded axis tube r < 1e-3; Jacobian frame degenerate");
    }
    const auto img = [&](double r, double t, double z) -> Point3 {
        const double U1 = p.u1(r, t, z);
        const double Th = p.theta(t);
        return {U1 * std::cos(Th), U1 * std::sin(Th), p.u2(r, t, z)};
    };
    // Directional derivatives along the orthonormal cylindrical frame
    // (d/dr, (1/r) d/dtheta, d/dz); its determinant equals det Du because the
    // frame is orthonormal and right-handed.
    const double hr = 1e-6 * std::max(1.0, c.r);
    const double ht = 1e-6;
    const double hz = 1e-6 * std::max(1.0, std::abs(c.z));
    const Point3 col_r = (1.0 / (2.0 * hr)) * (img(c.r + hr, c.theta, c.z) - img(c.r - hr, c.theta, c.z));
    const Point3 col_t = (1.0 / (2.0 * ht * c.r)) * (img(c.r, c.theta + ht, c.z) - img(c.r, c.theta - ht, c.z));
    const Point3 col_z = (1.0 / (2.0 * hz)) * (img(c.r, c.theta, c.z + hz) - img(c.r, c.theta, c.z - hz));
    return mat3_det(mat3_from_cols(col_r, col_t, col_z));
}

MapField3 make_identity_field() {
    MapField3 f;
    f.name = "identity";
    f.kind = MapField3::Kind::Identity;
    f.eval = [](const Point3& x) { return x; };
    f.jac = [](const Point3&) { return mat3_identity(); };
    f.orientation_preserving = true;
    f.injective = true;
    return f;
}

MapField3 make_linear_field(const Mat3& m) {
    MapField3 f;
    const double det = mat3_det(m);
    f.name = "linear";
    f.kind = MapField3::Kind::Linear;
    f.eval = [m](const Point3& x) { return mat3_apply(m, x); };
    f.jac = [m](const Point3&) { return m; };
    f.orientation_preserving = det > 0.0;
    f.injective = std::abs(det) > kSingularTol;
    return f;
}

MapField3 make_axisym_field(const AxisymProfile& profile) {
    validate_profile(profile);
    MapField3 f;
    auto prof = std::make_shared<AxisymProfile>(profile);
    f.name = profile.name;
    f.kind = MapField3::Kind::Axisym;
    f.eval = [prof](const Point3& x) { return axisym_eval(*prof, x); };
    f.profile = prof;
    f.orientation_preserving = profile.orientation_preserving;
    f.injective = profile.injective;
    return f;
}

MapField3 make_composed_field(const MapField3& outer, const MapField3& inner) {
    MapField3 f;
    f.name = outer.name + "*" + inner.name;
    f.kind = MapField3::Kind::Composed;
    auto oe = outer.eval;
    auto ie = inner.eval;
    f.eval = [oe, ie](const Point3& x) { return oe(ie(x)); };
    if (outer.jac && inner.jac) {
        auto oj = outer.jac;
        auto ij = inner.jac;
        f.jac = [oe, ie, oj, ij](const Point3& x) { return oj(ie(x)) * ij(x); };
    }
    f.orientation_preserving = outer.orientation_preserving && inner.orientation_preserving;
    f.injective = outer.injective && inner.injective;
    return f;
}

MapField3 make_custom_field(std::string name,
                            std::function<Point3(const Point3&)> eval,
                            std::function<Mat3(const Point3&)> jac) {
    MapField3 f;
    f.name = std::move(name);
    f.kind = MapField3::Kind::Custom;
    f.eval = std::move(eval);
    f.jac = std::move(jac);
    return f;
}

Mat3 field_jacobian(const MapField3& m, const Point3& x) {
    if (m.jac) {
        return m.jac(x);
    }
    const double h = 1e-6 * std::max(1.0, norm(x));
    const Point3 dx = (1.0 / (2.0 * h)) * (m.eval({x.x1 + h, x.x2, x.x3}) - m.eval({x.x1 - h, x.x2, x.x3}));
    const Point3 dy = (1.0 / (2.0 * h)) * (m.eval({x.x1, x.x2 + h, x.x3}) - m.eval({x.x1, x.x2 - h, x.x3}));
    const Point3 dz = (1.0 / (2.0 * h)) * (m.eval({x.x1, x.x2, x.x3 + h}) - m.eval({x.x1, x.x2, x.x3 - h}));
    return mat3_from_cols(dx, dy, dz);
}

namespace {

// Pack three signed cell indices into one hash key (21 bits each).
inline std::uint64_t cell_key(long ix, long iy, long iz) {
    const std::uint64_t bias = 1u << 20;
    return ((static_cast<std::uint64_t>(ix) + bias) << 42) |
           ((static_cast<std::uint64_t>(iy) + bias) << 21) |
           (static_cast<std::uint64_t>(iz) + bias);
}

} // namespace

InjectivityReport injectivity_sample(const MapField3& m, const Ball3& domain,
                                     long n_pairs, std::uint64_t seed) {
    if (n_pairs < 10000) {
        throw ConfigError("injectivity_sample needs n_pairs >= 10000 for statistical power");
    }
    const long n = n_pairs;
    std::vector<Point3> xs(static_cast<std::size_t>(n));
    std::vector<Point3> ys(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        const Point3 dir = rng.unit_vec3();
        const double rho = domain.radius * std::cbrt(rng.uniform01());
        xs[static_cast<std::size_t>(i)] = domain.center + rho * dir;
        ys[static_cast<std::size_t>(i)] = m.eval(xs[static_cast<std::size_t>(i)]);
    }

    // Image-space scale from the bounding box diagonal.
    Point3 lo = ys[0], hi = ys[0];
    for (const Point3& y : ys) {
        lo = {std::min(lo.x1, y.x1), std::min(lo.x2, y.x2), std::min(lo.x3, y.x3)};
        hi = {std::max(hi.x1, y.x1), std::max(hi.x2, y.x2), std::max(hi.x3, y.x3)};
    }
    const double scale = std::max(norm(hi - lo), 1e-300);

    // Spatial hash sized to the expected nearest-image spacing
    // (bbox volume / n)^(1/3): a fold's mirrored sample pairs land within
    // about one spacing of each other, while an injective map leaves only
    // O(1) same-cell neighbours per sample.  Degenerate (flattened) images
    // get a floor on each extent so the cell stays positive.
    const Point3 ext = hi - lo;
    const double floor_ext = 1e-6 * scale;
    const double bbox_vol = std::max(ext.x1, floor_ext) * std::max(ext.x2, floor_ext) *
                            std::max(ext.x3, floor_ext);
    const double cell = std::cbrt(bbox_vol / static_cast<double>(n));
    std::unordered_map<std::uint64_t, std::vector<long>> grid;
    grid.reserve(static_cast<std::size_t>(n));
    const auto cell_of = [&](const Point3& y) {
        return std::array<long, 3>{static_cast<long>(std::floor(y.x1 / cell)),
                                   static_cast<long>(std::floor(y.x2 / cell)),
                                   static_cast<long>(std::floor(y.x3 / cell))};
    };
    for (long i = 0; i < n; ++i) {
        const auto c = cell_of(ys[static_cast<std::size_t>(i)]);
        grid[cell_key(c[0], c[1], c[2])].push_back(i);
    }

    InjectivityReport report;
    report.n_samples = n;
    report.image_scale = scale;
    const double collision_tol = 1e-9 * scale;
    const double domain_sep = 1e-3;

    // Damped Newton: from start x', solve m(x') = target.
    const auto polish = [&](Point3 start, const Point3& target) {
        Point3 x = start;
        double fn = norm(m.eval(x) - target);
        for (int iter = 0; iter < 25 && fn >= collision_tol * 0.1; ++iter) {
            Mat3 J;
            try {
                J = field_jacobian(m, x);
            } catch (const Error&) {
                return std::make_pair(false, x);
            }
            Point3 step;
            try {
                step = mat3_apply(mat3_inverse(J), m.eval(x) - target);
            } catch (const SingularError&) {
                return std::make_pair(false, x);
            }
            double lambda = 1.0;
            Point3 xn = x - step;
            double fnn = norm(m.eval(xn) - target);
            for (int bt = 0; bt < 8 && fnn >= fn; ++bt) {
                lambda *= 0.5;
                xn = x - lambda * step;
                fnn = norm(m.eval(xn) - target);
            }
            if (fnn >= fn) break;
            x = xn;
            fn = fnn;
        }
        return std::make_pair(fn < collision_tol, x);
    };

    for (long i = 0; i < n; ++i) {
        const Point3& yi = ys[static_cast<std::size_t>(i)];
        const auto c = cell_of(yi);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    const auto it = grid.find(cell_key(c[0] + dx, c[1] + dy, c[2] + dz));
                    if (it == grid.end()) continue;
                    for (const long j : it->second) {
                        if (j <= i) continue;
                        if (norm(yi - ys[static_cast<std::size_t>(j)]) > cell) continue;
                        const Point3& xi = xs[static_cast<std::size_t>(i)];
                        const Point3& xj = xs[static_cast<std::size_t>(j)];
                        if (norm(xi - xj) <= domain_sep) continue;
                        ++report.n_candidate_pairs;
                        const auto [hit, x_prime] = polish(xj, yi);
                        if (!hit) continue;
                        if (norm(x_prime - xi) <= domain_sep) continue;       // found xi itself
                        if (norm(x_prime - domain.center) > domain.radius) continue;
                        ++report.n_collisions;
                        if (report.examples.size() < 10) {
                            report.examples.push_back({xi, x_prime, norm(m.eval(x_prime) - yi)});
                        }
                    }
                }
    }
    return report;
}

PlanarMap restrict_to_halfplane(const MapField3& m, double theta) {
    if (m.kind != MapField3::Kind::Axisym || !m.profile) {
        throw NotAxisymmetricError();
    }
    auto prof = m.profile;
    PlanarMap w;
    w.name = m.name + "-halfplane";
    w.eval = [prof, theta](Vec2 xy) {
        // (x, y) parametrizes O_theta via rho = x, z = -y: the same frame
        // rotation_for_halfplane(Theta(theta)) maps the image into.
        return Vec2{prof->u1(xy.x, theta, -xy.y), -prof->u2(xy.x, theta, -xy.y)};
    };
    w.domain_center = {kCoreRadius, 0.0}; // solid-torus cross-section
    w.domain_radius = kTubeRadius;
    w.orientation_preserving = m.orientation_preserving;
    w.injective = m.injective;
    return w;
}

std::vector<AxisymProfile> axisym_profile_catalog() {
    std::vector<AxisymProfile> cat;

    AxisymProfile identity;
    identity.name = "identity";
    identity.theta = [](double t) { return t; };
    identity.theta_prime = [](double) { return 1.0; };
    identity.u1 = [](double r, double, double) { return r; };
    identity.u2 = [](double, double, double z) { return z; };
    identity.orientation_preserving = true;
    identity.injective = true;
    cat.push_back(identity);

    // Angular twist: Theta' = 1 + 0.3 cos t >= 0.7; (u1, u2) untouched.
    AxisymProfile twist;
    twist.name = "twist";
    twist.theta = [](double t) { return t + 0.3 * std::sin(t); };
    twist.theta_prime = [](double t) { return 1.0 + 0.3 * std::cos(t); };
    twist.u1 = [](double r, double, double) { return r; };
    twist.u2 = [](double, double, double z) { return z; };
    twist.orientation_preserving = true;
    twist.injective = true;
    cat.push_back(twist);

    // Radial exponential stretch: u1 = r e^z; det factor e^z > 0, invertible
    // layer by layer (z is preserved, then r recovered).
    AxisymProfile rexp;
    rexp.name = "radial-exp";
    rexp.theta = [](double t) { return t; };
    rexp.theta_prime = [](double) { return 1.0; };
    rexp.u1 = [](double r, double, double z) { return r * std::exp(z); };
    rexp.u2 = [](double, double, double z) { return z; };
    rexp.orientation_preserving = true;
    rexp.injective = true;
    cat.push_back(rexp);

    // Vertical shear: u2 = z + 0.1 r; triangular, det factor 1.
    AxisymProfile shear;
    shear.name = "vertical-shear";
    shear.theta = [](double t) { return t; };
    shear.theta_prime = [](double) { return 1.0; };
    shear.u1 = [](double r, double, double) { return r; };
    shear.u2 = [](double r, double, double z) { return z + 0.1 * r; };
    shear.orientation_preserving = true;
    shear.injective = true;
    cat.push_back(shear);

    return cat;
}

std::function<double(double)> monotone_cubic(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) {
        throw ConfigError("monotone cubic needs at least 2 knots");
    }
    std::sort(knots.begin(), knots.end());
    const std::size_t n = knots.size();
    std::vector<double> t(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = knots[k].first;
        y[k] = knots[k].second;
    }
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = t[k + 1] - t[k];
        if (h[k] <= 0.0) {
            throw ConfigError("monotone cubic: knot abscissae must be strictly increasing");
        }
        d[k] = (y[k + 1] - y[k]) / h[k];
        if (d[k] <= 0.0) {
            throw ConfigError("monotone cubic: knot values must be strictly increasing");
        }
    }
    // Fritsch-Carlson tangents: secant averages clamped so the interpolant
    // stays monotone on every interval.
    std::vector<double> slope(n);
    slope[0] = d[0];
    slope[n - 1] = d[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) slope[k] = 0.5 * (d[k - 1] + d[k]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double alpha = slope[k] / d[k];
        const double beta = slope[k + 1] / d[k];
        const double s2 = alpha * alpha + beta * beta;
        if (s2 > 9.0) {
            const double tau = 3.0 / std::sqrt(s2);
            slope[k] = tau * alpha * d[k];
            slope[k + 1] = tau * beta * d[k];
        }
    }
    return [t, y, slope](double x) {
        // Clamp-free Hermite evaluation; linear extension outside the knots.
        if (x <= t.front()) return y.front() + slope.front() * (x - t.front());
        if (x >= t.back()) return y.back() + slope.back() * (x - t.back());
        std::size_t lo = 0, hi = t.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (t[mid] <= x) lo = mid; else hi = mid;
        }
        const double hk = t[lo + 1] - t[lo];
        const double s = (x - t[lo]) / hk;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * y[lo] + h10 * hk * slope[lo] + h01 * y[lo + 1] + h11 * hk * slope[lo + 1];
    };
}

AxisymProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open profile file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("profile JSON parse error in " + path + ": " + e.what());
    }

    AxisymProfile p;
    p.name = j.value("name", "custom");

    const auto jt = j.value("theta", nlohmann::json{{"kind", "linear"}});
    const std::string kind = jt.value("kind", "linear");
    if (kind == "linear") {
        p.theta = [](double t) { return t; };
        p.theta_prime = [](double) { return 1.0; };
    } else if (kind == "sin") {
        const double amp = jt.value("amplitude", 0.0);
        if (std::abs(amp) >= 1.0) {
            throw ConfigError("theta kind 'sin': |amplitude| must be < 1 for monotonicity");
        }
        p.theta = [amp](double t) { return t + amp * std::sin(t); };
        p.theta_prime = [amp](double t) { return 1.0 + amp * std::cos(t); };
    } else if (kind == "table") {
        std::vector<std::pair<double, double>> knots;
        for (const auto& pt : jt.value("points", nlohmann::json::array())) {
            knots.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        }
        auto base = monotone_cubic(std::move(knots));
        // Extend the fundamental branch [0, 2pi] periodically.
        p.theta = [base](double t) {
            const double k = std::floor(t / kTwoPi);
            return base(t - k * kTwoPi) + k * kTwoPi;
        };
    } else {
        throw ConfigError("unknown theta kind: " + kind);
    }

    const auto ju1 = j.value("u1", nlohmann::json::object());
    const double r_scale = ju1.value("r_scale", 1.0);
    const double exp_z = ju1.value("exp_z", 0.0);
    if (r_scale <= 0.0) {
        throw ConfigError("u1.r_scale must be positive (u1 >= 0 required)");
    }
    p.u1 = [r_scale, exp_z](double r, double, double z) { return r_scale * r * std::exp(exp_z * z); };

    const auto ju2 = j.value("u2", nlohmann::json::object());
    const double z_scale = ju2.value("z_scale", 1.0);
    const double r_shear = ju2.value("r_shear", 0.0);
    p.u2 = [z_scale, r_shear](double r, double, double z) { return z_scale * z + r_shear * r; };

    // Conservative flags: the schema's triangular forms are injective and
    // orientation-preserving exactly when both diagonal factors are positive
    // and at most one coupling term is active.
    const bool triangular = (exp_z == 0.0) || (r_shear == 0.0);
    p.orientation_preserving = z_scale > 0.0 && triangular;
    p.injective = z_scale > 0.0 && triangular;

    validate_profile(p);
    return p;
}

} // namespace linkprobe
