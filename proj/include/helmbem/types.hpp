#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace helmbem {

using Complex = std::complex<double>;
using DenseComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

/// Plain 2D point/vector.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    /// Rotation by -90 degrees; maps a traversal tangent to the edge normal.
    Vec2 rot_minus90() const { return {y, -x}; }
    /// Rotation by +90 degrees; maps an edge normal back to the tangent.
    Vec2 rot_plus90() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AssemblyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AnalyticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpectraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace helmbem
