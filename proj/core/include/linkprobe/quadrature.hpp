#ifndef LINKPROBE_QUADRATURE_HPP
#define LINKPROBE_QUADRATURE_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "linkprobe/geometry.hpp"

namespace linkprobe {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence from the Chebyshev initial guess.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(n));
    gl.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[static_cast<std::size_t>(i)] = x;
        gl.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

// Weighted node of a planar rule: integral of f over the region is
// sum of w_k f(p_k).
struct DiskNode {
    Vec2 p;
    double w;
};

// Product rule on the disk of radius `radius` about `center`:
// Gauss-Legendre in the radial direction (weight rho included), midpoint
// (trapezoid for periodic integrands) in the angle.  Spectrally accurate
// for smooth integrands.
inline std::vector<DiskNode> disk_quadrature(Vec2 center, double radius,
                                             int n_radial, int n_angular) {
    const GaussLegendre gl = gauss_legendre(n_radial);
    std::vector<DiskNode> nodes;
    nodes.reserve(static_cast<std::size_t>(n_radial) * static_cast<std::size_t>(n_angular));
    const double wt = kTwoPi / static_cast<double>(n_angular);
    for (int i = 0; i < n_radial; ++i) {
        const double rho = 0.5 * radius * (gl.nodes[static_cast<std::size_t>(i)] + 1.0);
        const double wr = 0.5 * radius * gl.weights[static_cast<std::size_t>(i)];
        for (int j = 0; j < n_angular; ++j) {
            const double th = (static_cast<double>(j) + 0.5) * kTwoPi / static_cast<double>(n_angular);
            nodes.push_back({{center.x + rho * std::cos(th), center.y + rho * std::sin(th)},
                             wr * wt * rho});
        }
    }
    return nodes;
}

struct BallNode {
    Point3 p;
    double w;
};

// Product rule on the ball of radius `radius` about the origin in R^3:
// Gauss-Legendre radially and in cos(polar angle), midpoint in the azimuth.
inline std::vector<BallNode> ball_quadrature(double radius, int n_radial,
                                             int n_polar, int n_azimuth) {
    const GaussLegendre glr = gauss_legendre(n_radial);
    const GaussLegendre glc = gauss_legendre(n_polar);
    std::vector<BallNode> nodes;
    nodes.reserve(static_cast<std::size_t>(n_radial) * static_cast<std::size_t>(n_polar) *
                  static_cast<std::size_t>(n_azimuth));
    const double wphi = kTwoPi / static_cast<double>(n_azimuth);
    for (int i = 0; i < n_radial; ++i) {
        const double rho = 0.5 * radius * (glr.nodes[static_cast<std::size_t>(i)] + 1.0);
        const double wr = 0.5 * radius * glr.weights[static_cast<std::size_t>(i)] * rho * rho;
        for (int j = 0; j < n_polar; ++j) {
            const double cth = glc.nodes[static_cast<std::size_t>(j)]; // cos(polar angle)
            const double wc = glc.weights[static_cast<std::size_t>(j)];
            const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
            for (int k = 0; k < n_azimuth; ++k) {
                const double phi = (static_cast<double>(k) + 0.5) * wphi;
                nodes.push_back({{rho * sth * std::cos(phi), rho * sth * std::sin(phi), rho * cth},
                                 wr * wc * wphi});
            }
        }
    }
    return nodes;
}

} // namespace linkprobe

#endif // LINKPROBE_QUADRATURE_HPP
