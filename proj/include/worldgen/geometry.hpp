#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace worldgen {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double norm2() const { return dot(*this); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0.0 ? (*this) / n : Vec3{};
  }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct Aabb3 {
  Vec3 min{std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
  Vec3 max{-std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};

  void expand(const Vec3& p) {
    min.x = std::min(min.x, p.x); min.y = std::min(min.y, p.y); min.z = std::min(min.z, p.z);
    max.x = std::max(max.x, p.x); max.y = std::max(max.y, p.y); max.z = std::max(max.z, p.z);
  }
  bool empty() const { return min.x > max.x; }
  Vec3 extent() const { return empty() ? Vec3{} : max - min; }
  Vec3 center() const { return (min + max) * 0.5; }
  bool overlaps(const Aabb3& o, double eps = 0.0) const {
    return min.x <= o.max.x + eps && max.x >= o.min.x - eps &&
           min.y <= o.max.y + eps && max.y >= o.min.y - eps &&
           min.z <= o.max.z + eps && max.z >= o.min.z - eps;
  }
};

// Indexed triangle soup. Part labels are optional: when part_names is
// non-empty, tri_part[t] indexes into it for every triangle.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> tri_part;               // per-triangle part index, or empty
  std::vector<std::string> part_names;

  bool has_parts() const { return !part_names.empty(); }

  Aabb3 bounds() const {
    Aabb3 b;
    for (const auto& v : vertices) b.expand(v);
    return b;
  }

  Vec3 triangle_normal(int t) const {
    const auto& tri = triangles[t];
    Vec3 a = vertices[tri[0]], b = vertices[tri[1]], c = vertices[tri[2]];
    return (b - a).cross(c - a);
  }

  double triangle_area(int t) const { return 0.5 * triangle_normal(t).norm(); }

  double total_area() const {
    double a = 0.0;
    for (int t = 0; t < (int)triangles.size(); ++t) a += triangle_area(t);
    return a;
  }

  // Appends another mesh, remapping indices and merging part tables.
  void append(const TriMesh& other);
};

// Uniform scale followed by translation: p' = p * scale + translation.
struct ScaleTranslate {
  double scale = 1.0;
  Vec3 translation{};

  Vec3 apply(const Vec3& p) const { return p * scale + translation; }
  ScaleTranslate inverse() const {
    return {1.0 / scale, translation * (-1.0 / scale)};
  }
};

// Proper rigid motion: p' = R p + t.
struct RigidTransform {
  std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3 translation{};

  Vec3 apply(const Vec3& p) const {
    return {rotation[0][0] * p.x + rotation[0][1] * p.y + rotation[0][2] * p.z + translation.x,
            rotation[1][0] * p.x + rotation[1][1] * p.y + rotation[1][2] * p.z + translation.y,
            rotation[2][0] * p.x + rotation[2][1] * p.y + rotation[2][2] * p.z + translation.z};
  }
  RigidTransform compose(const RigidTransform& inner) const;
  static RigidTransform rotation_z(double angle);
  double rotation_angle() const;  // angle of the rotation part, radians
};

// --- 2D polygon helpers (vertices CCW) ---

double polygon_area(const std::vector<Vec2>& poly);
Vec2 polygon_centroid(const std::vector<Vec2>& poly);
bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p);
// Clips a convex polygon against the half-plane n.dot(p) <= c.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c);
// Corners of a yaw-rotated rectangle centered at c with half extents (hx, hy).
std::array<Vec2, 4> oriented_rect(const Vec2& c, double hx, double hy, double yaw);
// Separating-axis overlap test for two convex polygons.
bool convex_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

}  // namespace worldgen
