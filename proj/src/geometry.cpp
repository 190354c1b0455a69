#include "worldgen/geometry.hpp"

namespace worldgen {

void TriMesh::append(const TriMesh& other) {
  int vbase = (int)vertices.size();
  int pbase = (int)part_names.size();
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles)
    triangles.push_back({t[0] + vbase, t[1] + vbase, t[2] + vbase});
  if (has_parts() || other.has_parts()) {
    // Fill any missing labels with a default part so both tables line up.
    if (tri_part.size() < triangles.size() - other.triangles.size()) {
      if (part_names.empty()) part_names.push_back("default");
      tri_part.resize(triangles.size() - other.triangles.size(), 0);
    }
    part_names.insert(part_names.end(), other.part_names.begin(), other.part_names.end());
    if (other.has_parts()) {
      for (int p : other.tri_part) tri_part.push_back(p + pbase);
    } else {
      part_names.push_back("default");
      tri_part.resize(triangles.size(), (int)part_names.size() - 1);
    }
  }
}

RigidTransform RigidTransform::compose(const RigidTransform& inner) const {
  RigidTransform out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += rotation[i][k] * inner.rotation[k][j];
      out.rotation[i][j] = s;
    }
  Vec3 t{inner.translation.x, inner.translation.y, inner.translation.z};
  out.translation = Vec3{rotation[0][0] * t.x + rotation[0][1] * t.y + rotation[0][2] * t.z,
                         rotation[1][0] * t.x + rotation[1][1] * t.y + rotation[1][2] * t.z,
                         rotation[2][0] * t.x + rotation[2][1] * t.y + rotation[2][2] * t.z} +
                    translation;
  return out;
}

RigidTransform RigidTransform::rotation_z(double angle) {
  RigidTransform r;
  double c = std::cos(angle), s = std::sin(angle);
  r.rotation = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
  return r;
}

double RigidTransform::rotation_angle() const {
  double tr = rotation[0][0] + rotation[1][1] + rotation[2][2];
  double c = std::clamp((tr - 1.0) * 0.5, -1.0, 1.0);
  return std::acos(c);
}

double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  int n = (int)poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    a += p.cross(q);
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
  double a = 0.0;
  Vec2 c{};
  int n = (int)poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    double w = p.cross(q);
    a += w;
    c.x += (p.x + q.x) * w;
    c.y += (p.y + q.y) * w;
  }
  if (std::abs(a) < 1e-30) return poly.empty() ? Vec2{} : poly[0];
  return {c.x / (3.0 * a), c.y / (3.0 * a)};
}

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  bool inside = false;
  int n = (int)poly.size();
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) &&
        p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      inside = !inside;
  }
  return inside;
}

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c) {
  std::vector<Vec2> out;
  int sz = (int)poly.size();
  for (int i = 0; i < sz; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % sz];
    double da = n.dot(a) - c;
    double db = n.dot(b) - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      double t = da / (da - db);
      out.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
    }
  }
  return out;
}

std::array<Vec2, 4> oriented_rect(const Vec2& c, double hx, double hy, double yaw) {
  double cs = std::cos(yaw), sn = std::sin(yaw);
  auto rot = [&](double x, double y) {
    return Vec2{c.x + x * cs - y * sn, c.y + x * sn + y * cs};
  };
  return {rot(-hx, -hy), rot(hx, -hy), rot(hx, hy), rot(-hx, hy)};
}

static bool separated_on_axes(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  int n = (int)a.size();
  for (int i = 0; i < n; ++i) {
    Vec2 e = a[(i + 1) % n] - a[i];
    Vec2 axis{-e.y, e.x};
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    for (const auto& p : a) {
      double d = axis.dot(p);
      amin = std::min(amin, d); amax = std::max(amax, d);
    }
    double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
    for (const auto& p : b) {
      double d = axis.dot(p);
      bmin = std::min(bmin, d); bmax = std::max(bmax, d);
    }
    if (amax < bmin || bmax < amin) return true;
  }
  return false;
}

bool convex_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  return !separated_on_axes(a, b) && !separated_on_axes(b, a);
}

}  // namespace worldgen
