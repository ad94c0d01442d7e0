#ifndef LINKPROBE_LINKING_HPP
#define LINKPROBE_LINKING_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "linkprobe/geometry.hpp"
#include "linkprobe/torus.hpp"

namespace linkprobe {

// ---------------------------------------------------------------------------
// Linking numbers of oriented closed polylines by two independent methods:
//
//  * linking_gauss     — exact per-segment-pair solid angle (the Gauss
//                        integral evaluated in closed form on polylines),
//  * linking_crossings — signed undercrossing count in a generic projection.
//
// Orientation convention, fixed once for the whole library: the canonical
// pair (mu_0, nu_e1) with the parametrizations of torus.hpp has linking
// number +1.  The crossing-sign rule below is calibrated to match.
// ---------------------------------------------------------------------------

// An oriented closed curve as an ordered vertex list; the segment from the
// last vertex back to the first is implied.
struct ClosedPolyline3 {
    std::vector<Point3> vertices;
};

struct LinkResult {
    int value = 0;            // rounded linking number (meaningful iff defined)
    double raw = 0.0;         // pre-rounding Gauss value / crossing sum
    double min_separation = 0.0;
    bool defined = false;     // false when the curves (nearly) touch
};

// Curves whose minimum separation falls below kTouchRel x max(diameter)
// get defined = false: the linking number is numerically untrustworthy.
inline constexpr double kTouchRel = 1e-9;

// |raw - nearest integer| beyond this marks the result undefined.
inline constexpr double kRoundTol = 0.05;

// Invariant checks for polylines: >= 3 finite vertices, no two consecutive
// vertices closer than 1e-12, positive total length.  Throws ConfigError.
void validate_polyline(const ClosedPolyline3& c);

double polyline_diameter(const ClosedPolyline3& c);
double polyline_length(const ClosedPolyline3& c);

// Exact minimum distance between the two polylines (segment-segment).
double polyline_separation(const ClosedPolyline3& c1, const ClosedPolyline3& c2);

using CurveFn = std::function<Point3(double)>;

// Sample a 2pi-periodic curve at n equispaced parameters: vertex i is
// curve(2 pi i / n).  Requires n >= 3.
ClosedPolyline3 sample_curve(const CurveFn& curve, int n);

// Gauss linking number: for every segment pair, the signed area of the
// spherical quadrilateral swept by the normalized difference direction,
// evaluated exactly as two spherical-triangle excesses.  The sum over all
// pairs is 4 pi times an integer (machine-exact for well-separated curves).
// Throws CurvesTouchError when the curves actually intersect.
LinkResult linking_gauss(const ClosedPolyline3& c1, const ClosedPolyline3& c2);

// Signed undercrossing count of c1 beneath c2 in the projection along
// `direction`.  Throws DegenerateProjectionError when the projection has a
// borderline event (parallel overlap, endpoint coincidence, equal heights);
// the caller retries with a fresh direction.
LinkResult linking_crossings(const ClosedPolyline3& c1, const ClosedPolyline3& c2,
                             Point3 direction);

// Convenience wrapper: tries seeded random directions until one is generic
// (at most 64 attempts).
LinkResult linking_crossings_any(const ClosedPolyline3& c1, const ClosedPolyline3& c2,
                                 std::uint64_t seed = 12345);

// Smallest singular value m* = min_{|z|=1} |Mz|, computed per the published
// recipe: 3600-point spherical net followed by 20 Newton refinement steps in
// the angular chart.  Relative tolerance about 1e-6 (cross-checked against
// the closed-form eigenvalues of M^T M in the tests).
double min_singular_net(const Mat3& m);

using PerturbFn = std::function<Point3(const Point3&)>;

// Linking of the images of (mu_a, nu_b) under z -> M z + perturbation(z).
// The perturbation must stay below m*/10 in sup norm on both circles
// (checked on the sample vertices; PerturbationTooLargeError otherwise).
// For any such perturbation the result equals sgn(det M).
LinkResult perturbed_linear_linking(const Mat3& m, const PerturbFn& perturbation,
                                    const LinkParamA& a, const LinkParamB& b, int n);

// Curve file format: one vertex per line, three whitespace-separated floats,
// '#' starts a comment, closure implicit.  Throws ConfigError on bad input.
ClosedPolyline3 read_curve_file(const std::string& path);
void write_curve_file(const std::string& path, const ClosedPolyline3& c);

} // namespace linkprobe

#endif // LINKPROBE_LINKING_HPP
