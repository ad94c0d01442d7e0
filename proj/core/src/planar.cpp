#include "linkprobe/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "linkprobe/quadrature.hpp"

namespace linkprobe {

Mat2 planar_jacobian(const PlanarMap& w, Vec2 x) {
    if (w.jac) {
        return w.jac(x);
    }
    const double h = 1e-6 * std::max(1.0, norm(x));
    const Vec2 fx1 = w.eval({x.x + h, x.y});
    const Vec2 fx0 = w.eval({x.x - h, x.y});
    const Vec2 fy1 = w.eval({x.x, x.y + h});
    const Vec2 fy0 = w.eval({x.x, x.y - h});
    return {(fx1.x - fx0.x) / (2.0 * h), (fy1.x - fy0.x) / (2.0 * h),
            (fx1.y - fx0.y) / (2.0 * h), (fy1.y - fy0.y) / (2.0 * h)};
}

DegreeResult winding_number(const PlanarMap& w, const Circle2& circle, Vec2 y, int n) {
    if (n < 8) {
        throw ConfigError("winding_number needs n >= 8");
    }
    double clearance = std::numeric_limits<double>::infinity();
    double image_scale = 0.0;

    const auto offset = [&](double t) {
        const Vec2 x{circle.center.x + circle.radius * std::cos(t),
                     circle.center.y + circle.radius * std::sin(t)};
        const Vec2 f = w.eval(x) - y;
        const double fn = norm(f);
        clearance = std::min(clearance, fn);
        image_scale = std::max(image_scale, fn);
        return f;
    };

    // Accumulated turning angle; each contribution |atan2(cross, dot)| must
    // stay below pi/2 or the interval is bisected (safe-winding criterion).
    std::function<double(double, double, Vec2, Vec2, int)> sweep =
        [&](double t0, double t1, Vec2 f0, Vec2 f1, int depth) -> double {
        const double step = std::atan2(cross(f0, f1), dot(f0, f1));
        if (std::abs(step) < 0.5 * kPi) {
            return step;
        }
        if (depth > 48) {
            throw BoundaryHitError("winding refinement did not settle; target on boundary image?");
        }
        const double tm = 0.5 * (t0 + t1);
        const Vec2 fm = offset(tm);
        return sweep(t0, tm, f0, fm, depth + 1) + sweep(tm, t1, fm, f1, depth + 1);
    };

    std::vector<Vec2> base(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        base[static_cast<std::size_t>(k)] = offset(kTwoPi * static_cast<double>(k) / n);
    }
    if (clearance <= 1e-14 * std::max(image_scale, 1e-300)) {
        throw BoundaryHitError();
    }
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t0 = kTwoPi * static_cast<double>(k) / n;
        const double t1 = kTwoPi * static_cast<double>(k + 1) / n;
        total += sweep(t0, t1, base[static_cast<std::size_t>(k)],
                       base[static_cast<std::size_t>((k + 1) % n)], 0);
    }

    DegreeResult res;
    const double raw = total / kTwoPi;
    res.value = static_cast<int>(std::lround(raw));
    res.boundary_clearance = clearance;
    res.defined = clearance > kDegreeClearanceRel * image_scale &&
                  std::abs(raw - static_cast<double>(res.value)) < 0.05;
    return res;
}

DegreeResult preimage_count_degree(const PlanarMap& w, const Circle2& disk, Vec2 y, int grid_n) {
    if (grid_n < 8) {
        throw ConfigError("preimage_count_degree needs grid_n >= 8");
    }
    // Boundary clearance first: the degree is only defined for y off the
    // boundary image.
    double clearance = std::numeric_limits<double>::infinity();
    double image_scale = 0.0;
    const int n_boundary = std::max(512, 4 * grid_n);
    for (int k = 0; k < n_boundary; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / n_boundary;
        const Vec2 x{disk.center.x + disk.radius * std::cos(t),
                     disk.center.y + disk.radius * std::sin(t)};
        const double fn = norm(w.eval(x) - y);
        clearance = std::min(clearance, fn);
        image_scale = std::max(image_scale, fn);
    }
    if (clearance <= 1e-12 * std::max(image_scale, 1e-300)) {
        throw BoundaryHitError();
    }

    const double root_tol = 1e-11 * std::max(1.0, image_scale);
    const double dedup_radius = 1e-8 * disk.radius;
    std::vector<Vec2> roots;

    const auto polish = [&](Vec2 x0) {
        // Damped Newton on F(x) = w(x) - y.
        Vec2 x = x0;
        double fn = norm(w.eval(x) - y);
        for (int iter = 0; iter < 40; ++iter) {
            if (fn < root_tol) break;
            const Mat2 J = planar_jacobian(w, x);
            const double det = mat2_det(J);
            if (std::abs(det) < 1e-16) return; // singular start; other starts cover it
            const Vec2 F = w.eval(x) - y;
            const Vec2 step{(J.d * F.x - J.b * F.y) / det, (-J.c * F.x + J.a * F.y) / det};
            double lambda = 1.0;
            Vec2 xn = x - step;
            double fnn = norm(w.eval(xn) - y);
            for (int bt = 0; bt < 8 && fnn >= fn; ++bt) {
                lambda *= 0.5;
                xn = x - lambda * step;
                fnn = norm(w.eval(xn) - y);
            }
            if (fnn >= fn) return; // stalled; not a basin of a root
            x = xn;
            fn = fnn;
        }
        if (fn >= root_tol) return;
        if (norm(x - disk.center) >= disk.radius * (1.0 - 1e-12)) return; // outside or on rim
        for (const Vec2& r : roots) {
            if (norm(r - x) < dedup_radius) return; // duplicate
        }
        roots.push_back(x);
    };

    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const Vec2 x{disk.center.x + disk.radius * (2.0 * (i + 0.5) / grid_n - 1.0),
                         disk.center.y + disk.radius * (2.0 * (j + 0.5) / grid_n - 1.0)};
            if (norm(x - disk.center) >= disk.radius) continue;
            polish(x);
        }
    }

    DegreeResult res;
    res.value = static_cast<int>(roots.size());
    res.boundary_clearance = clearance;
    res.defined = clearance > kDegreeClearanceRel * image_scale;
    return res;
}

LinkResult linking_via_planar_degree(const std::function<Point3(const Point3&)>& v,
                                     const LinkParamA& a, const LinkParamB& b, int n) {
    if (n < 8) {
        throw ConfigError("linking_via_planar_degree needs n >= 8");
    }
    const PlanarSlice sl = planar_slice(a, b);
    const double zp = sl.z_level;

    // Sample the image of the slice plane: the circle S_a plus the two
    // crossing points of nu_b.
    std::vector<Point3> img;
    img.reserve(static_cast<std::size_t>(n) + 2);
    for (int k = 0; k < n; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / n;
        img.push_back(v({sl.circle_radius * std::cos(t), sl.circle_radius * std::sin(t), zp}));
    }
    img.push_back(v({sl.p_ab.x, sl.p_ab.y, zp}));
    img.push_back(v({sl.q_ab.x, sl.q_ab.y, zp}));

    double scale = 1.0;
    for (const Point3& p : img) scale = std::max(scale, norm(p));
    const double flat_tol = 1e-9 * scale;

    // Does the image lie in a horizontal plane {x3 = const}?
    double zmin = img[0].x3, zmax = img[0].x3;
    for (const Point3& p : img) {
        zmin = std::min(zmin, p.x3);
        zmax = std::max(zmax, p.x3);
    }

    std::function<Vec2(Vec2)> weval;
    if (zmax - zmin <= flat_tol) {
        // Horizontal plane: the planar part is just the first two components.
        weval = [v, zp](Vec2 x) {
            const Point3 p = v({x.x, x.y, zp});
            return Vec2{p.x1, p.x2};
        };
    } else {
        // Try a plane through the x3-axis: all image points share one
        // azimuth (up to sign); rotate that plane onto {x3 = 0}.
        double theta_star = 0.0;
        bool found = false;
        for (const Point3& p : img) {
            if (std::hypot(p.x1, p.x2) > flat_tol) {
                theta_star = std::atan2(p.x2, p.x1);
                found = true;
                break;
            }
        }
        if (!found) {
            throw NotPlanarError("slice image degenerate: every point on the x3-axis");
        }
        const Point3 normal{-std::sin(theta_star), std::cos(theta_star), 0.0};
        for (const Point3& p : img) {
            if (std::abs(dot(normal, p)) > flat_tol) {
                throw NotPlanarError();
            }
        }
        const Mat3 rot = rotation_for_halfplane(theta_star);
        weval = [v, zp, rot](Vec2 x) {
            const Point3 p = mat3_apply(rot, v({x.x, x.y, zp}));
            return Vec2{p.x1, p.x2};
        };
    }

    PlanarMap w;
    w.name = "slice-restriction";
    w.eval = weval;
    w.domain_center = {0.0, 0.0};
    w.domain_radius = sl.circle_radius;
    const Circle2 S_a{{0.0, 0.0}, sl.circle_radius};

    DegreeResult deg_p, deg_q;
    try {
        deg_p = winding_number(w, S_a, weval(sl.p_ab), n);
        deg_q = winding_number(w, S_a, weval(sl.q_ab), n);
    } catch (const BoundaryHitError&) {
        throw ImagesTouchError();
    }

    LinkResult res;
    res.value = deg_p.value - deg_q.value;
    res.raw = static_cast<double>(res.value);
    res.min_separation = std::min(deg_p.boundary_clearance, deg_q.boundary_clearance);
    res.defined = deg_p.defined && deg_q.defined;
    return res;
}

double TestFunction::eval(Vec2 x) const {
    const double t = 1.0 - norm2(x - center) / (radius * radius);
    if (t <= 0.0) return 0.0;
    return t * t * t;
}

Vec2 TestFunction::grad(Vec2 x) const {
    const double t = 1.0 - norm2(x - center) / (radius * radius);
    if (t <= 0.0) return {0.0, 0.0};
    const double k = 3.0 * t * t * (-2.0 / (radius * radius));
    return k * (x - center);
}

namespace {
// Support radius of the wide bump enveloping every catalog vector field.
constexpr double kFieldSupportRadius = 40.0;
} // namespace

Vec2 VectorField2::eval(Vec2 u) const {
    const double t = 1.0 - norm2(u) / (kFieldSupportRadius * kFieldSupportRadius);
    if (t <= 0.0) return {0.0, 0.0};
    const double B = t * t * t;
    const double P = coef[0] + coef[1] * u.x + coef[2] * u.y + coef[3] * u.x * u.y +
                     coef[4] * u.x * u.x * u.y;
    const double Q = coef[5] + coef[6] * u.x + coef[7] * u.y + coef[8] * u.x * u.x +
                     coef[9] * u.y * u.y * u.x;
    return {B * P, B * Q};
}

double VectorField2::divergence(Vec2 u) const {
    const double t = 1.0 - norm2(u) / (kFieldSupportRadius * kFieldSupportRadius);
    if (t <= 0.0) return 0.0;
    const double B = t * t * t;
    const double dB = 3.0 * t * t * (-2.0 / (kFieldSupportRadius * kFieldSupportRadius));
    const double P = coef[0] + coef[1] * u.x + coef[2] * u.y + coef[3] * u.x * u.y +
                     coef[4] * u.x * u.x * u.y;
    const double Q = coef[5] + coef[6] * u.x + coef[7] * u.y + coef[8] * u.x * u.x +
                     coef[9] * u.y * u.y * u.x;
    const double Pu = coef[1] + coef[3] * u.y + 2.0 * coef[4] * u.x * u.y;
    const double Qv = coef[7] + 2.0 * coef[9] * u.y * u.x;
    return dB * u.x * P + B * Pu + dB * u.y * Q + B * Qv;
}

double divergence_identity_residual(const PlanarMap& w, const TestFunction& phi,
                                    const VectorField2& g, int quad_n) {
    if (quad_n < 64) {
        throw ConfigError("divergence_identity_residual needs quad_n >= 64");
    }
    const auto nodes = disk_quadrature(phi.center, phi.radius, quad_n, quad_n);
    double total = 0.0;
    double comp = 0.0;
    for (const DiskNode& node : nodes) {
        const Mat2 J = planar_jacobian(w, node.p);
        const Vec2 wx = w.eval(node.p);
        const double term1 = g.divergence(wx) * phi.eval(node.p) * mat2_det(J);
        const double term2 = dot(g.eval(wx), mat2_apply(mat2_cof(J), phi.grad(node.p)));
        const double y = node.w * (term1 + term2) - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    return total;
}

std::vector<PlanarMap> planar_map_catalog() {
    std::vector<PlanarMap> maps;

    PlanarMap identity;
    identity.name = "identity";
    identity.eval = [](Vec2 x) { return x; };
    identity.jac = [](Vec2) { return Mat2{1.0, 0.0, 0.0, 1.0}; };
    identity.orientation_preserving = true;
    identity.injective = true;
    maps.push_back(identity);

    PlanarMap shear;
    shear.name = "shear";
    shear.eval = [](Vec2 x) { return Vec2{x.x + 0.3 * x.y, x.y}; };
    shear.jac = [](Vec2) { return Mat2{1.0, 0.3, 0.0, 1.0}; };
    shear.orientation_preserving = true;
    shear.injective = true;
    maps.push_back(shear);

    PlanarMap rot;
    rot.name = "rotation";
    rot.eval = [](Vec2 x) {
        const double c = std::cos(0.7), s = std::sin(0.7);
        return Vec2{c * x.x - s * x.y, s * x.x + c * x.y};
    };
    rot.jac = [](Vec2) {
        const double c = std::cos(0.7), s = std::sin(0.7);
        return Mat2{c, -s, s, c};
    };
    rot.orientation_preserving = true;
    rot.injective = true;
    maps.push_back(rot);

    PlanarMap square;
    square.name = "complex-square";
    square.eval = [](Vec2 x) { return Vec2{x.x * x.x - x.y * x.y, 2.0 * x.x * x.y}; };
    square.jac = [](Vec2 x) { return Mat2{2.0 * x.x, -2.0 * x.y, 2.0 * x.y, 2.0 * x.x}; };
    square.orientation_preserving = true; // det = 4(x^2+y^2) > 0 off the origin
    square.injective = false;             // two-to-one
    maps.push_back(square);

    PlanarMap sinp;
    sinp.name = "sin-perturb";
    sinp.eval = [](Vec2 x) {
        return Vec2{x.x + 0.25 * std::sin(x.y), x.y + 0.25 * std::sin(x.x)};
    };
    sinp.jac = [](Vec2 x) {
        return Mat2{1.0, 0.25 * std::cos(x.y), 0.25 * std::cos(x.x), 1.0};
    };
    sinp.orientation_preserving = true; // det = 1 - 0.0625 cos x cos y >= 0.9375
    sinp.injective = true;              // Lipschitz-0.25 perturbation of the identity
    maps.push_back(sinp);

    PlanarMap flip;
    flip.name = "reflection";
    flip.eval = [](Vec2 x) { return Vec2{x.x, -x.y}; };
    flip.jac = [](Vec2) { return Mat2{1.0, 0.0, 0.0, -1.0}; };
    flip.orientation_preserving = false;
    flip.injective = true;
    maps.push_back(flip);

    return maps;
}

std::vector<PlanarMap> planar_map_catalog_smooth() {
    std::vector<PlanarMap> maps = planar_map_catalog();
    maps.erase(std::remove_if(maps.begin(), maps.end(),
                              [](const PlanarMap& m) { return m.name == "reflection"; }),
               maps.end());
    return maps;
}

std::vector<TestFunction> test_function_catalog() {
    return {
        {"bump-a", {0.1, -0.2}, 0.6},
        {"bump-b", {0.0, 0.0}, 0.7},
        {"bump-c", {0.3, 0.1}, 0.5},
    };
}

std::vector<VectorField2> vector_field_catalog() {
    return {
        {"cubic-0",
         {0.35166267596256362, -0.57135359752348469, -0.38109593823661658, 0.59893219354966631,
          0.99160419773093356, -0.7155363694398964, -0.84254893247600204, -0.63835237260629074,
          -0.28070621662129813, -0.66076150058590333}},
        {"cubic-1",
         {0.17751863107946031, 0.23361502764755615, -0.7892286405032487, 0.13146210205166109,
          -0.99074071334322844, -0.069761601182355415, 0.95124439525707527, 0.59885687690299383,
          0.19364473340823718, -0.34930068983455498}},
        {"cubic-2",
         {-0.58731217722893936, -0.11454886581432944, -0.4439172005159695, 0.74991568025244781,
          -0.57368530853206456, -0.45150999148943893, 0.61436397293571665, -0.46326934805004316,
          -0.46387426086474148, -0.85823643153968643}},
    };
}

} // namespace linkprobe
