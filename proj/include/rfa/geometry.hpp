#pragma once

#include "rfa/tags.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace rfa {

/// Tolerance used for every geometric identity (unit norm, orthogonality, round trips).
inline constexpr double kGeomTolerance = 1e-9;

using Vec3 = std::array<double, 3>;

/// Raised when the arithmetic mean of a direction set is (numerically) the zero vector.
class DegenerateMean : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A direction on the unit sphere. Construction rejects inputs whose norm is not 1.
class UnitVector {
public:
    UnitVector(double x, double y, double z);
    explicit UnitVector(const Vec3& v) : UnitVector(v[0], v[1], v[2]) {}

    /// Scales (x, y, z) onto the sphere; throws DegenerateMean if the norm is below 1e-12.
    static UnitVector normalized(double x, double y, double z);
    static UnitVector normalized(const Vec3& v) { return normalized(v[0], v[1], v[2]); }

    static UnitVector x_axis() { return {1.0, 0.0, 0.0}; }
    static UnitVector y_axis() { return {0.0, 1.0, 0.0}; }
    static UnitVector z_axis() { return {0.0, 0.0, 1.0}; }

    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }
    const Vec3& components() const { return v_; }
    double operator[](std::size_t i) const { return v_[i]; }

    /// Bitwise component equality.
    bool operator==(const UnitVector&) const = default;

private:
    Vec3 v_;
};

double dot(const UnitVector& a, const UnitVector& b);

/// Euclidean chord distance ||a - b||, in [0, 2].
double distance(const UnitVector& a, const UnitVector& b);

/// Chord length of an arc of `angle` radians.
double chord_for_angle(double angle);

/// Rotates `v` by `angle` radians about a deterministic axis perpendicular to it.
UnitVector rotate_away(const UnitVector& v, double angle);

/// A node's private orthonormal frame. The rotation maps local coordinates to the
/// simulator's global coordinates: v_global = R * v_local.
class LocalFrame {
public:
    LocalFrame(); // identity

    /// From a (not necessarily normalised) quaternion w + xi + yj + zk.
    static LocalFrame from_quaternion(double w, double x, double y, double z);
    static LocalFrame about_axis(const UnitVector& axis, double angle);
    /// Checked construction from a row-major matrix; throws std::invalid_argument
    /// unless R^T R = I and det R = +1 within kGeomTolerance.
    static LocalFrame from_matrix(const std::array<double, 9>& row_major);

    UnitVector to_global(const UnitVector& local) const;
    UnitVector to_local(const UnitVector& global) const;

    /// Composition: (a * b) applies b first.
    LocalFrame operator*(const LocalFrame& other) const;

    const std::array<double, 9>& matrix() const { return r_; }
    double determinant() const;
    /// max |(R^T R - I)_ij|
    double orthogonality_error() const;

private:
    explicit LocalFrame(const std::array<double, 9>& r) : r_(r) {}
    std::array<double, 9> r_; // row-major
};

/// Re-expresses `v` (given in frame `from`) in frame `to`: to^-1 * from * v.
UnitVector to_frame(const UnitVector& v, const LocalFrame& from, const LocalFrame& to);

/// Normalised arithmetic mean. Throws DegenerateMean when the mean's norm is below 1e-9.
UnitVector cluster_center(std::span<const UnitVector> members);

class Rng;
/// Uniform on S^2 (Marsaglia's method; no transcendental calls, so it is portable).
UnitVector random_unit_vector(Rng& rng);
/// Haar-uniform on SO(3) via a uniform unit quaternion.
LocalFrame random_frame(Rng& rng);

std::string to_string(const UnitVector& v);

} // namespace rfa
