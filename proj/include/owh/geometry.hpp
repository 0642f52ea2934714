#ifndef OWH_GEOMETRY_HPP
#define OWH_GEOMETRY_HPP

#include <cmath>

namespace owh {

// Planar position/displacement in km.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {x * k, y * k}; }
    bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
    Vec2 unit_or_zero() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Moves `from` toward `to` by at most `max_step`, stopping exactly at `to`.
inline Vec2 step_toward(Vec2 from, Vec2 to, double max_step) {
    Vec2 d = to - from;
    double n = d.norm();
    if (n <= max_step) return to;
    return from + d * (max_step / n);
}

// True if the segment a-b passes within `radius` of `center`.
inline bool segment_hits_circle(Vec2 a, Vec2 b, Vec2 center, double radius) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(center - a, ab) / len2 : 0.0;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    return distance(a + ab * t, center) <= radius;
}

} // namespace owh

#endif // OWH_GEOMETRY_HPP
