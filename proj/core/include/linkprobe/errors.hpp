#ifndef LINKPROBE_ERRORS_HPP
#define LINKPROBE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace linkprobe {

// All recoverable failures are reported as exceptions derived from Error so
// callers (and the CLI) can distinguish "bad input / degenerate geometry"
// from genuine bugs.  Each class corresponds to one named error condition
// of the library interface.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Cylindrical coordinates are undefined on the x3-axis.
class AxisPointError : public Error {
public:
    explicit AxisPointError(const std::string& what = "point lies on the x3-axis; theta undefined")
        : Error(what) {}
};

// Matrix inversion requested for a (near-)singular matrix.
class SingularError : public Error {
public:
    explicit SingularError(const std::string& what = "matrix is singular or near-singular")
        : Error(what) {}
};

// Torus chart evaluated at xi = 0.
class ZeroXiError : public Error {
public:
    explicit ZeroXiError(const std::string& what = "xi = 0: torus chart undefined")
        : Error(what) {}
};

// Point not inside the closed solid torus.
class OutsideAnuloidError : public Error {
public:
    explicit OutsideAnuloidError(const std::string& what = "point lies outside the closed solid torus")
        : Error(what) {}
};

// The tilde chart is undefined on the core circle r = 2, z = 0.
class OnCoreCircleError : public Error {
public:
    explicit OnCoreCircleError(const std::string& what = "point lies on the core circle; tilde chart undefined")
        : Error(what) {}
};

// Planar slice: the vertical circle never meets the horizontal plane.
class NoIntersectionError : public Error {
public:
    explicit NoIntersectionError(const std::string& what = "curve does not intersect the requested plane")
        : Error(what) {}
};

// Planar slice: the vertical circle is tangent to the plane (null event).
class TangentialError : public Error {
public:
    explicit TangentialError(const std::string& what = "tangential intersection; slice ill-defined")
        : Error(what) {}
};

// Linking number requested for curves that (nearly) touch.
class CurvesTouchError : public Error {
public:
    explicit CurvesTouchError(const std::string& what = "curves touch or nearly touch; linking undefined")
        : Error(what) {}
};

// Crossing count: projection direction hits a degenerate configuration;
// the caller should retry with a perturbed direction.
class DegenerateProjectionError : public Error {
public:
    explicit DegenerateProjectionError(const std::string& what = "degenerate projection; retry with a new direction")
        : Error(what) {}
};

// Perturbed-linear linking experiment: perturbation exceeds its budget.
class PerturbationTooLargeError : public Error {
public:
    explicit PerturbationTooLargeError(const std::string& what = "perturbation exceeds the allowed bound")
        : Error(what) {}
};

// Winding number / preimage count: a sample landed on the target point.
class BoundaryHitError : public Error {
public:
    explicit BoundaryHitError(const std::string& what = "target point meets the boundary image; degree undefined")
        : Error(what) {}
};

// Planar-degree linking: the map does not send the slice into a plane.
class NotPlanarError : public Error {
public:
    explicit NotPlanarError(const std::string& what = "map does not send the slice into a single plane")
        : Error(what) {}
};

// Planar-degree linking: the two image curves touch.
class ImagesTouchError : public Error {
public:
    explicit ImagesTouchError(const std::string& what = "image curves touch; linking undefined")
        : Error(what) {}
};

// Planar restriction requested for a map that is not axisymmetric.
class NotAxisymmetricError : public Error {
public:
    explicit NotAxisymmetricError(const std::string& what = "map is not axisymmetric")
        : Error(what) {}
};

// Chart family: evaluation outside the valid chart ball.
class OutOfChartError : public Error {
public:
    explicit OutOfChartError(const std::string& what = "point outside the chart domain")
        : Error(what) {}
};

// Ball parametrization: radius not in (0, R'].
class RadiusOutOfRangeError : public Error {
public:
    explicit RadiusOutOfRangeError(const std::string& what = "radius outside (0, R']")
        : Error(what) {}
};

// Harness: unknown catalog tag.
class UnknownSequenceError : public Error {
public:
    explicit UnknownSequenceError(const std::string& what = "unknown catalog sequence tag")
        : Error(what) {}
};

// Configuration / input-file problems (CLI exit code 2).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace linkprobe

#endif // LINKPROBE_ERRORS_HPP
