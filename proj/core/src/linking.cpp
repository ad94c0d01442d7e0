#include "linkprobe/linking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "linkprobe/rng.hpp"

namespace linkprobe {

namespace {

// Signed area of the spherical triangle with unit-vector corners A, B, C
// (the van Oosterom-Strackee half-angle form; sign follows the corner order).
inline double spherical_triangle(const Point3& A, const Point3& B, const Point3& C) {
    const double num = dot(A, cross(B, C));
    const double den = 1.0 + dot(A, B) + dot(B, C) + dot(C, A);
    return 2.0 * std::atan2(num, den);
}

// Squared distance between segments [p1, p2] and [q1, q2] (clamped closest
// points; standard robust reduction of the quadratic minimization).
double seg_seg_dist2(const Point3& p1, const Point3& p2,
                     const Point3& q1, const Point3& q2) {
    const Point3 d1 = p2 - p1;
    const Point3 d2 = q2 - q1;
    const Point3 r = p1 - q1;
    const double a = dot(d1, d1);
    const double e = dot(d2, d2);
    const double f = dot(d2, r);
    const double c = dot(d1, r);
    const double b = dot(d1, d2);
    const double denom = a * e - b * b;

    double s = (denom > 0.0) ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
    double t = (b * s + f) / e;
    if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
    }
    const Point3 diff = (p1 + s * d1) - (q1 + t * d2);
    return dot(diff, diff);
}

// Unit directions from a fixed base point to every vertex of Q.
void direction_row(const Point3& base, const std::vector<Point3>& Q,
                   std::vector<Point3>& row) {
    row.resize(Q.size());
    for (std::size_t j = 0; j < Q.size(); ++j) {
        const Point3 d = Q[j] - base;
        const double n2v = norm2(d);
        if (n2v == 0.0) {
            throw CurvesTouchError("curves share a vertex; linking undefined");
        }
        row[j] = (1.0 / std::sqrt(n2v)) * d;
    }
}

} // namespace

void validate_polyline(const ClosedPolyline3& c) {
    const auto& V = c.vertices;
    if (V.size() < 3) {
        throw ConfigError("closed polyline needs at least 3 vertices");
    }
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (!is_finite(V[i])) {
            throw ConfigError("polyline vertex " + std::to_string(i) + " is not finite");
        }
        const Point3 step = V[(i + 1) % V.size()] - V[i];
        if (norm(step) < 1e-12) {
            throw ConfigError("polyline vertices " + std::to_string(i) + " and its successor coincide");
        }
    }
}

double polyline_diameter(const ClosedPolyline3& c) {
    const auto& V = c.vertices;
    double best = 0.0;
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = i + 1; j < V.size(); ++j)
            best = std::max(best, norm2(V[i] - V[j]));
    return std::sqrt(best);
}

double polyline_length(const ClosedPolyline3& c) {
    const auto& V = c.vertices;
    double len = 0.0;
    for (std::size_t i = 0; i < V.size(); ++i) len += norm(V[(i + 1) % V.size()] - V[i]);
    return len;
}

double polyline_separation(const ClosedPolyline3& c1, const ClosedPolyline3& c2) {
    const auto& P = c1.vertices;
    const auto& Q = c2.vertices;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < P.size(); ++i) {
        const Point3& a0 = P[i];
        const Point3& a1 = P[(i + 1) % P.size()];
        for (std::size_t j = 0; j < Q.size(); ++j) {
            best = std::min(best, seg_seg_dist2(a0, a1, Q[j], Q[(j + 1) % Q.size()]));
        }
    }
    return std::sqrt(best);
}

ClosedPolyline3 sample_curve(const CurveFn& curve, int n) {
    if (n < 3) {
        throw ConfigError("sample_curve needs n >= 3");
    }
    ClosedPolyline3 c;
    c.vertices.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        c.vertices.push_back(curve(kTwoPi * static_cast<double>(i) / static_cast<double>(n)));
    }
    return c;
}

LinkResult linking_gauss(const ClosedPolyline3& c1, const ClosedPolyline3& c2) {
    validate_polyline(c1);
    validate_polyline(c2);
    const auto& P = c1.vertices;
    const auto& Q = c2.vertices;
    const std::size_t n1 = P.size();
    const std::size_t n2 = Q.size();

    // Rows of unit directions from P[i] to every Q[j]; each row is shared by
    // the two segment bundles that start and end at P[i].
    std::vector<Point3> row0, row1;
    direction_row(P[0], Q, row0);

    double total = 0.0;
    double comp = 0.0; // Kahan compensation: the sum of ~n^2 angles must stay exact
    double min_d2 = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n1; ++i) {
        const Point3& a0 = P[i];
        const Point3& a1 = P[(i + 1) % n1];
        direction_row(a1, Q, row1);
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t jn = (j + 1) % n2;
            min_d2 = std::min(min_d2, seg_seg_dist2(a0, a1, Q[j], Q[jn]));
            // Signed area of the spherical quadrilateral v00 -> v01 -> v11 -> v10
            // swept by the normalized difference direction over this segment pair.
            const Point3& v00 = row0[j];
            const Point3& v01 = row0[jn];
            const Point3& v10 = row1[j];
            const Point3& v11 = row1[jn];
            const double omega =
                spherical_triangle(v00, v01, v11) + spherical_triangle(v00, v11, v10);
            const double y = omega - comp;
            const double t = total + y;
            comp = (t - total) - y;
            total = t;
        }
        std::swap(row0, row1);
    }

    LinkResult res;
    res.raw = total / (4.0 * kPi);
    res.min_separation = std::sqrt(min_d2);
    if (res.min_separation == 0.0) {
        throw CurvesTouchError();
    }
    res.value = static_cast<int>(std::lround(res.raw));
    const double touch_threshold = kTouchRel * std::max(polyline_diameter(c1), polyline_diameter(c2));
    res.defined = res.min_separation > touch_threshold &&
                  std::abs(res.raw - static_cast<double>(res.value)) < kRoundTol;
    return res;
}

LinkResult linking_crossings(const ClosedPolyline3& c1, const ClosedPolyline3& c2,
                             Point3 direction) {
    validate_polyline(c1);
    validate_polyline(c2);
    const double dn = norm(direction);
    if (dn < 1e-12) {
        throw ConfigError("projection direction must be nonzero");
    }
    const Point3 d = (1.0 / dn) * direction;
    // Right-handed view basis (e1, e2, d); crossing signs are read in the
    // (e1, e2) plane with heights measured along d.
    const Point3 tmp = (std::abs(d.x1) < 0.9) ? Point3{1.0, 0.0, 0.0} : Point3{0.0, 1.0, 0.0};
    const Point3 e1 = normalized(cross(tmp, d));
    const Point3 e2 = cross(d, e1);

    const auto project = [&](const std::vector<Point3>& V, std::vector<Vec2>& flat,
                             std::vector<double>& height) {
        flat.resize(V.size());
        height.resize(V.size());
        for (std::size_t i = 0; i < V.size(); ++i) {
            flat[i] = {dot(V[i], e1), dot(V[i], e2)};
            height[i] = dot(V[i], d);
        }
    };
    std::vector<Vec2> A, B;
    std::vector<double> hA, hB;
    project(c1.vertices, A, hA);
    project(c2.vertices, B, hB);

    const double scale = std::max(polyline_diameter(c1), polyline_diameter(c2));
    const double param_tol = 1e-9; // endpoint-coincidence guard in parameter units
    const std::size_t n1 = A.size();
    const std::size_t n2 = B.size();
    long total = 0;

    for (std::size_t i = 0; i < n1; ++i) {
        const Vec2 p = A[i];
        const Vec2 pn = A[(i + 1) % n1];
        const Vec2 r = pn - p;
        for (std::size_t j = 0; j < n2; ++j) {
            const Vec2 q = B[j];
            const Vec2 qn = B[(j + 1) % n2];
            const Vec2 s = qn - q;
            const double rxs = cross(r, s);
            const Vec2 qp = q - p;
            if (std::abs(rxs) <= 1e-14 * norm(r) * norm(s)) {
                // Near-parallel in projection: harmless unless the segments
                // could overlap, in which case the direction is not generic.
                if (std::abs(cross(qp, r)) <= 1e-12 * scale * std::max(norm(r), 1e-300)) {
                    throw DegenerateProjectionError();
                }
                continue;
            }
            const double t = cross(qp, s) / rxs;
            const double u = cross(qp, r) / rxs;
            if (t <= -param_tol || t >= 1.0 + param_tol || u <= -param_tol || u >= 1.0 + param_tol) {
                continue;
            }
            if (t < param_tol || t > 1.0 - param_tol || u < param_tol || u > 1.0 - param_tol) {
                // Crossing at (or numerically at) a projected vertex.
                throw DegenerateProjectionError();
            }
            const double height1 = hA[i] + t * (hA[(i + 1) % n1] - hA[i]);
            const double height2 = hB[j] + u * (hB[(j + 1) % n2] - hB[j]);
            if (std::abs(height1 - height2) <= 1e-12 * scale) {
                throw DegenerateProjectionError("curves meet at a projected crossing");
            }
            if (height1 < height2) {
                // c1 passes under c2: sign of (under direction) x (over direction).
                total += (cross(r, s) > 0.0) ? 1 : -1;
            }
        }
    }

    LinkResult res;
    res.raw = static_cast<double>(total);
    res.value = static_cast<int>(total);
    res.min_separation = polyline_separation(c1, c2);
    const double touch_threshold = kTouchRel * scale;
    res.defined = res.min_separation > touch_threshold;
    return res;
}

LinkResult linking_crossings_any(const ClosedPolyline3& c1, const ClosedPolyline3& c2,
                                 std::uint64_t seed) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(attempt));
        try {
            return linking_crossings(c1, c2, rng.unit_vec3());
        } catch (const DegenerateProjectionError&) {
            continue;
        }
    }
    throw DegenerateProjectionError("no generic projection direction found in 64 attempts");
}

double min_singular_net(const Mat3& m) {
    const auto g = [&](double theta, double phi) {
        const double st = std::sin(theta);
        const Point3 z{st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
        return norm2(mat3_apply(m, z));
    };

    // Coarse 60 x 60 spherical net (3600 points).
    double best_theta = 0.0, best_phi = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 60; ++i) {
        const double theta = (static_cast<double>(i) + 0.5) * kPi / 60.0;
        for (int j = 0; j < 60; ++j) {
            const double phi = (static_cast<double>(j) + 0.5) * kTwoPi / 60.0;
            const double v = g(theta, phi);
            if (v < best) {
                best = v;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    // 20 Newton refinement steps in the (theta, phi) chart with
    // finite-difference derivatives and backtracking.
    double th = best_theta, ph = best_phi;
    const double h = 1e-5;
    for (int step = 0; step < 20; ++step) {
        const double g0 = g(th, ph);
        const double gt = (g(th + h, ph) - g(th - h, ph)) / (2.0 * h);
        const double gp = (g(th, ph + h) - g(th, ph - h)) / (2.0 * h);
        const double gtt = (g(th + h, ph) - 2.0 * g0 + g(th - h, ph)) / (h * h);
        const double gpp = (g(th, ph + h) - 2.0 * g0 + g(th, ph - h)) / (h * h);
        const double gtp = (g(th + h, ph + h) - g(th + h, ph - h) -
                            g(th - h, ph + h) + g(th - h, ph - h)) / (4.0 * h * h);
        const double det = gtt * gpp - gtp * gtp;
        double dt, dp;
        if (det > 1e-18 && gtt > 0.0) {
            dt = (gpp * gt - gtp * gp) / det;
            dp = (gtt * gp - gtp * gt) / det;
        } else {
            dt = 0.1 * gt;
            dp = 0.1 * gp;
        }
        double scale_bt = 1.0;
        for (int bt = 0; bt < 12; ++bt) {
            if (g(th - scale_bt * dt, ph - scale_bt * dp) < g0) break;
            scale_bt *= 0.5;
        }
        th -= scale_bt * dt;
        ph -= scale_bt * dp;
        best = std::min(best, g(th, ph));
    }
    return std::sqrt(std::max(0.0, best));
}

LinkResult perturbed_linear_linking(const Mat3& m, const PerturbFn& perturbation,
                                    const LinkParamA& a, const LinkParamB& b, int n) {
    if (std::abs(mat3_det(m)) <= kSingularTol) {
        throw SingularError("perturbed_linear_linking requires det M != 0");
    }
    const double m_star = min_singular_net(m);
    const double budget = m_star / 10.0;

    const ClosedPolyline3 ring = sample_curve([&](double t) { return mu_a(a, t); }, n);
    const ClosedPolyline3 tube = sample_curve([&](double t) { return nu_b(b, t); }, n);

    const auto map_curve = [&](const ClosedPolyline3& c) {
        ClosedPolyline3 out;
        out.vertices.reserve(c.vertices.size());
        for (const Point3& x : c.vertices) {
            const Point3 p = perturbation ? perturbation(x) : Point3{0.0, 0.0, 0.0};
            if (norm(p) > budget * (1.0 + 1e-12)) {
                throw PerturbationTooLargeError();
            }
            out.vertices.push_back(mat3_apply(m, x) + p);
        }
        return out;
    };

    return linking_gauss(map_curve(ring), map_curve(tube));
}

ClosedPolyline3 read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open curve file: " + path);
    }
    ClosedPolyline3 c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x1, x2, x3;
        if (!(ls >> x1)) continue; // blank or comment-only line
        if (!(ls >> x2 >> x3)) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected three floats");
        }
        double extra;
        if (ls >> extra) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": more than three values");
        }
        c.vertices.push_back({x1, x2, x3});
    }
    validate_polyline(c);
    return c;
}

void write_curve_file(const std::string& path, const ClosedPolyline3& c) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open curve file for writing: " + path);
    }
    out << std::setprecision(17);
    out << "# closed polyline, one vertex per line; closure implicit\n";
    for (const Point3& v : c.vertices) {
        out << v.x1 << ' ' << v.x2 << ' ' << v.x3 << '\n';
    }
}

} // namespace linkprobe
