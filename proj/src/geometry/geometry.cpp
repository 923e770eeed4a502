#include "rfa/geometry.hpp"

#include "rfa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rfa {

namespace {

double norm3(double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); }

} // namespace

std::string_view tag_name(Tag tag)
{
    switch (tag) {
    case Tag::init: return "init";
    case Tag::echo: return "echo";
    case Tag::ready1: return "ready1";
    case Tag::ready2: return "ready2";
    case Tag::ic_payload: return "ic_payload";
    }
    return "?";
}

std::optional<Tag> parse_tag(std::string_view name)
{
    for (Tag t : {Tag::init, Tag::echo, Tag::ready1, Tag::ready2, Tag::ic_payload}) {
        if (tag_name(t) == name) return t;
    }
    return std::nullopt;
}

UnitVector::UnitVector(double x, double y, double z) : v_{x, y, z}
{
    const double n = norm3(x, y, z);
    if (!(std::abs(n - 1.0) <= kGeomTolerance)) {
        throw std::invalid_argument("UnitVector: norm " + std::to_string(n) + " is not 1");
    }
}

UnitVector UnitVector::normalized(double x, double y, double z)
{
    const double n = norm3(x, y, z);
    if (!(n >= 1e-12)) throw DegenerateMean("cannot normalise a (near) zero vector");
    return {x / n, y / n, z / n};
}

double dot(const UnitVector& a, const UnitVector& b) { return a.x() * b.x() + a.y() * b.y() + a.z() * b.z(); }

double distance(const UnitVector& a, const UnitVector& b)
{
    return norm3(a.x() - b.x(), a.y() - b.y(), a.z() - b.z());
}

double chord_for_angle(double angle) { return 2.0 * std::sin(angle / 2.0); }

UnitVector rotate_away(const UnitVector& v, double angle)
{
    // Axis: v x e, with e the coordinate axis least aligned with v.
    const double ax = std::abs(v.x()), ay = std::abs(v.y()), az = std::abs(v.z());
    Vec3 e{0, 0, 0};
    if (ax <= ay && ax <= az) e[0] = 1;
    else if (ay <= az) e[1] = 1;
    else e[2] = 1;
    const UnitVector axis = UnitVector::normalized(v.y() * e[2] - v.z() * e[1], v.z() * e[0] - v.x() * e[2],
                                                   v.x() * e[1] - v.y() * e[0]);
    return LocalFrame::about_axis(axis, angle).to_global(v);
}

LocalFrame::LocalFrame() : r_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

LocalFrame LocalFrame::from_quaternion(double w, double x, double y, double z)
{
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (!(n > 1e-12)) throw std::invalid_argument("LocalFrame: zero quaternion");
    w /= n;
    x /= n;
    y /= n;
    z /= n;
    return LocalFrame({1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
                       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
                       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)});
}

LocalFrame LocalFrame::about_axis(const UnitVector& axis, double angle)
{
    const double s = std::sin(angle / 2.0);
    return from_quaternion(std::cos(angle / 2.0), axis.x() * s, axis.y() * s, axis.z() * s);
}

LocalFrame LocalFrame::from_matrix(const std::array<double, 9>& row_major)
{
    LocalFrame f(row_major);
    if (f.orthogonality_error() > kGeomTolerance || std::abs(f.determinant() - 1.0) > kGeomTolerance) {
        throw std::invalid_argument("LocalFrame: matrix is not a proper rotation");
    }
    return f;
}

UnitVector LocalFrame::to_global(const UnitVector& v) const
{
    const auto& r = r_;
    return {r[0] * v.x() + r[1] * v.y() + r[2] * v.z(), r[3] * v.x() + r[4] * v.y() + r[5] * v.z(),
            r[6] * v.x() + r[7] * v.y() + r[8] * v.z()};
}

UnitVector LocalFrame::to_local(const UnitVector& v) const
{
    const auto& r = r_;
    return {r[0] * v.x() + r[3] * v.y() + r[6] * v.z(), r[1] * v.x() + r[4] * v.y() + r[7] * v.z(),
            r[2] * v.x() + r[5] * v.y() + r[8] * v.z()};
}

LocalFrame LocalFrame::operator*(const LocalFrame& o) const
{
    std::array<double, 9> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) out[3 * i + j] += r_[3 * i + k] * o.r_[3 * k + j];
    return LocalFrame(out);
}

double LocalFrame::determinant() const
{
    const auto& r = r_;
    return r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
           r[2] * (r[3] * r[7] - r[4] * r[6]);
}

double LocalFrame::orthogonality_error() const
{
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += r_[3 * k + i] * r_[3 * k + j];
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

UnitVector to_frame(const UnitVector& v, const LocalFrame& from, const LocalFrame& to)
{
    return to.to_local(from.to_global(v));
}

UnitVector cluster_center(std::span<const UnitVector> members)
{
    if (members.empty()) throw std::invalid_argument("cluster_center: empty member set");
    // The mean of identical directions is that direction; skip the rounding of a renormalisation.
    if (std::all_of(members.begin(), members.end(), [&](const UnitVector& m) { return m == members.front(); })) {
        return members.front();
    }
    double sx = 0, sy = 0, sz = 0;
    for (const auto& m : members) {
        sx += m.x();
        sy += m.y();
        sz += m.z();
    }
    const double k = static_cast<double>(members.size());
    sx /= k;
    sy /= k;
    sz /= k;
    const double n = norm3(sx, sy, sz);
    if (!(n >= 1e-9)) throw DegenerateMean("cluster_center: mean of the members is the zero vector");
    return {sx / n, sy / n, sz / n};
}

UnitVector random_unit_vector(Rng& rng)
{
    for (;;) {
        const double a = rng.uniform(-1.0, 1.0);
        const double b = rng.uniform(-1.0, 1.0);
        const double s = a * a + b * b;
        if (s >= 1.0) continue;
        const double r = 2.0 * std::sqrt(1.0 - s);
        return UnitVector::normalized(a * r, b * r, 1.0 - 2.0 * s);
    }
}

LocalFrame random_frame(Rng& rng)
{
    double x1, x2, s1, x3, x4, s2;
    do {
        x1 = rng.uniform(-1.0, 1.0);
        x2 = rng.uniform(-1.0, 1.0);
        s1 = x1 * x1 + x2 * x2;
    } while (s1 >= 1.0);
    do {
        x3 = rng.uniform(-1.0, 1.0);
        x4 = rng.uniform(-1.0, 1.0);
        s2 = x3 * x3 + x4 * x4;
    } while (s2 >= 1.0 || s2 == 0.0);
    const double f = std::sqrt((1.0 - s1) / s2);
    return LocalFrame::from_quaternion(x1, x2, x3 * f, x4 * f);
}

std::string to_string(const UnitVector& v)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.12g, %.12g, %.12g)", v.x(), v.y(), v.z());
    return buf;
}

} // namespace rfa
