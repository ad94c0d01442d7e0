#pragma once

// Experiment harness: linking sweeps over the canonical two-parameter link
// family composed with a rescaled map, weak-limit deviation ladders,
// good-parameter-set statistics, coarea cross-checks, and report
// serialization (JSON-lines / CSV).  All sweeps are deterministic: each
// sample draws from an independent substream derived from (seed, index), so
// results are identical regardless of thread count.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "linkprobe/axisym.hpp"
#include "linkprobe/chart_family.hpp"
#include "linkprobe/linking.hpp"
#include "linkprobe/torus.hpp"

namespace linkprobe {

enum class SweepMethod { Both, GaussOnly, PlanarDegreeOnly };

struct PropertyLConfig {
    MapField3 map;                 // map u under probe
    CylPoint3 x0{2.0, 0.0, 0.0};   // base point of the chart family
    double r = 0.05;               // rescaling radius, must be <= R'
    int n_a = 100;                 // horizontal-parameter sample count
    int n_b = 100;                 // vertical-parameter sample count
    int n_curve = 512;             // polyline resolution (doubled up to 4096
                                   // when rounding is ambiguous)
    std::uint64_t seed = 1;
    SweepMethod method = SweepMethod::Both;
    int threads = 0;               // 0: LINKPROBE_THREADS env var, else 1
};

struct LinkSample {
    Vec2 a{};
    Vec2 b{};
    bool defined = false;          // primary linking value defined
    int value = 0;
    double raw = 0.0;
    bool planar_defined = false;   // planar-degree route (axisymmetric maps)
    int planar_value = 0;
    bool method_agree = true;      // false only when both routes defined and differ
    std::string note;              // per-sample numerical failure, if any
};

struct LinkProbeReport {
    std::vector<LinkSample> samples;
    long n_defined = 0;
    long n_negative = 0;           // defined samples with value < 0
    long n_value_one = 0;          // defined samples with value == 1
    long n_disagree = 0;
    long n_undefined = 0;
    bool hypotheses_hold = false;  // map flagged orientation-preserving + injective
    bool zero_negatives() const { return n_negative == 0; }
};

// Samples a uniformly from the horizontal parameter disk and b by rejection
// from the admissible vertical parameter set, builds v = map composed with
// T_r, and records the linking number of the image curve pair per sample.
// Numerical failures are recorded per sample and never abort the sweep.
LinkProbeReport run_property_l(const PropertyLConfig& cfg);

// One JSON object per sample, then a trailing aggregate object.
void write_report_json(std::ostream& out, const PropertyLConfig& cfg,
                       const LinkProbeReport& report);
// Fixed column order: a1,a2,b1,b2,defined,value,method_agree.
void write_report_csv(std::ostream& out, const LinkProbeReport& report);

struct WeakLimitConfig {
    std::string sequence = "oscillation"; // oscillation | oscillation-slow |
                                          // constant | amplitude-decay
    Point3 x0{2.0, 0.0, 0.0};
    std::vector<double> radii{1e-3, 1e-4, 1e-5};
    std::vector<int> js{1, 2, 4, 8, 16, 20, 24, 32, 48, 64};
    int quad_n = 32;
    double delta = 0.2;
};

struct WeakLimitEntry {
    double r = 0.0;
    int j = 0;
    double estimate = 0.0;
};

struct WeakLimitReport {
    std::string sequence;
    bool asserted = false;          // false: ladder reported, not asserted
    std::vector<WeakLimitEntry> entries;
    double delta_cubed = 0.0;
    long j0 = -1;                   // smallest ladder j with estimate < delta^3
                                    // at the smallest radius (-1 if none)
    double min_limit_jacobian = 0.0;
    bool limit_jacobian_ok = false; // min over grid >= -1e-10
    bool j0_ok = false;             // j0 found and <= 64
    bool monotone_decreasing = false; // estimates decreasing in j at min radius
    bool constant_in_j = false;       // estimates independent of j at min radius
    bool sequence_ok = false;         // the per-sequence assertion outcome
};

// Evaluates the rescaled L^1 deviation of the tagged catalog sequence
// against its closed-form limit across the (radius, j) ladder and samples
// the limit's Jacobian sign on a 32^3 grid of the solid torus.
// Throws UnknownSequenceError for unrecognized tags.
WeakLimitReport run_weak_limit(const WeakLimitConfig& cfg);

struct GoodSetConfig {
    std::string f_case = "zero";   // zero | uniform | bump
    double m = 1.0;                // fiber threshold scale (f >= m delta is "high")
    double big_m = 1.0;            // M in the delta-threshold 2 m alpha L2(E)/M
    double delta = 0.01;
    double alpha = 0.25;
    long n_fibers = 2000;
    long n_per_fiber = 4096;
    std::uint64_t seed = 7;
};

struct GoodSetReport {
    std::string f_case;
    double integral_f = 0.0;       // quadrature of f over the radius-4 ball
    double delta_cubed = 0.0;
    bool hypothesis_integral = false; // integral_f < delta^3
    double delta_threshold = 0.0;     // 2 m alpha L2(E) / M
    bool hypothesis_delta = false;    // delta < threshold
    long n_fibers = 0;
    long n_good = 0;               // fibers with H1({f >= m delta}) < 2 delta
    double fraction = 0.0;
    double required_fraction = 0.0; // 1 - alpha
    bool fraction_ok = false;       // fraction > 1 - alpha
    std::vector<Vec2> bad_examples; // up to 10 bad fiber parameters
};

// Estimates the fraction of horizontal-family parameters whose fiber circle
// carries small measure of {f >= m delta}; the fiber measure is plain
// arclength (unit fibration Jacobian, audited).
GoodSetReport run_good_set(const GoodSetConfig& cfg);

enum class Fibration { Eta, XiTilde };

struct CoareaReport {
    std::string fibration;
    // Audited Jacobian, g == 1: volume side, fiber side, closed-form target.
    double lhs_g1 = 0.0;
    double rhs_g1 = 0.0;
    double target_g1 = 0.0;
    double mismatch_g1 = 0.0;      // relative |lhs - rhs| / rhs
    // Audited Jacobian, g == x1^2.
    double lhs_gx = 0.0;
    double rhs_gx = 0.0;
    double mismatch_gx = 0.0;
    // The claimed (uncorrected) Jacobian, g == 1 — the audit detector.
    double lhs_claimed_g1 = 0.0;
    double claimed_mismatch_g1 = 0.0;
    bool audit_flag = false;       // claimed mismatch > 40%
    bool audited_ok = false;       // audited sides within 0.5% of target and
                                   // of each other (both integrands)
};

// Cross-checks volume integrals over the solid torus against the
// fiber-decomposed form for the horizontal (eta) and cross-sectional
// (xi-tilde) fibrations, with both the audited and the claimed Jacobian
// weights.  resolution >= 64 nodes per quadrature direction.
CoareaReport run_coarea_check(Fibration fibration, int resolution);

SweepMethod parse_sweep_method(const std::string& tag);
Fibration parse_fibration(const std::string& tag);
std::string to_string(Fibration fibration);

// Thread count for sweeps: `requested` if positive, else the
// LINKPROBE_THREADS environment variable, else 1.  Clamped to [1, 64].
int resolve_thread_count(int requested);

} // namespace linkprobe
