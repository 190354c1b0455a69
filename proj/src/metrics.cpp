#include "worldgen/metrics.hpp"

#include <json.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "worldgen/blockout.hpp"
#include "worldgen/errors.hpp"

namespace worldgen {

KdTree3::KdTree3(const std::vector<Vec3>& points) : pts_(points) {
  if (pts_.empty()) return;
  std::vector<int> idx(pts_.size());
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(pts_.size());
  root_ = build(idx, 0, (int)idx.size(), 0);
}

int KdTree3::build(std::vector<int>& idx, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  int axis = depth % 3;
  int mid = (lo + hi) / 2;
  auto coord = [axis](const Vec3& v) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; };
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](int a, int b) { return coord(pts_[a]) < coord(pts_[b]); });
  int node = (int)nodes_.size();
  nodes_.push_back({idx[mid], axis, -1, -1});
  int left = build(idx, lo, mid, depth + 1);
  int right = build(idx, mid + 1, hi, depth + 1);
  nodes_[node].left = left;
  nodes_[node].right = right;
  return node;
}

void KdTree3::search(int node, const Vec3& q, int& best, double& best_d2) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3& p = pts_[n.point];
  double d2 = (p - q).norm2();
  if (d2 < best_d2 || (d2 == best_d2 && (best < 0 || n.point < best))) {
    best_d2 = d2;
    best = n.point;
  }
  double qc = n.axis == 0 ? q.x : n.axis == 1 ? q.y : q.z;
  double pc = n.axis == 0 ? p.x : n.axis == 1 ? p.y : p.z;
  double delta = qc - pc;
  int near = delta <= 0.0 ? n.left : n.right;
  int far = delta <= 0.0 ? n.right : n.left;
  search(near, q, best, best_d2);
  if (delta * delta <= best_d2) search(far, q, best, best_d2);
}

int KdTree3::nearest(const Vec3& query, double* dist) const {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  search(root_, query, best, best_d2);
  if (dist) *dist = std::sqrt(best_d2);
  return best;
}

namespace {

double mean_nn_distance(const PointCloud& from, const KdTree3& tree) {
  double sum = 0.0;
  for (const auto& p : from.points) {
    double d = 0.0;
    tree.nearest(p, &d);
    sum += d;
  }
  return sum / (double)from.points.size();
}

double coverage(const PointCloud& from, const KdTree3& tree, double tau) {
  int hit = 0;
  for (const auto& p : from.points) {
    double d = 0.0;
    tree.nearest(p, &d);
    if (d <= tau) ++hit;
  }
  return (double)hit / (double)from.points.size();
}

}  // namespace

double chamfer(const PointCloud& p, const PointCloud& q) {
  if (p.points.empty() || q.points.empty())
    throw EmptyCloudError("chamfer: empty point cloud");
  KdTree3 tp(p.points), tq(q.points);
  return 0.5 * (mean_nn_distance(p, tq) + mean_nn_distance(q, tp));
}

double fscore(const PointCloud& p, const PointCloud& q, double tau) {
  if (p.points.empty() || q.points.empty())
    throw EmptyCloudError("fscore: empty point cloud");
  if (tau <= 0.0) throw BadParamsError("fscore: tau must be positive");
  KdTree3 tp(p.points), tq(q.points);
  double precision = coverage(p, tq, tau);
  double recall = coverage(q, tp, tau);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

IcpResult icp_align(const PointCloud& p, const PointCloud& q, int max_iters, double tol) {
  if (p.points.size() < 3 || q.points.size() < 3)
    throw DegenerateCloudError("icp_align: need at least 3 points per cloud");

  // Initialization: centroid alignment.
  auto centroid = [](const std::vector<Vec3>& pts) {
    Vec3 c{};
    for (const auto& v : pts) c = c + v;
    return c / (double)pts.size();
  };
  Vec3 cp = centroid(p.points), cq = centroid(q.points);

  IcpResult res;
  res.transform.translation = cq - cp;

  KdTree3 tree(q.points);
  std::vector<Vec3> moved(p.points.size());
  double prev_rms = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iters; ++iter) {
    for (size_t i = 0; i < p.points.size(); ++i)
      moved[i] = res.transform.apply(p.points[i]);

    // Correspondences and RMS under the current transform.
    std::vector<int> corr(moved.size());
    double sq = 0.0;
    for (size_t i = 0; i < moved.size(); ++i) {
      double d = 0.0;
      corr[i] = tree.nearest(moved[i], &d);
      sq += d * d;
    }
    double rms = std::sqrt(sq / (double)moved.size());
    res.rms_history.push_back(rms);
    res.rms = rms;
    res.iterations = iter + 1;
    if (std::abs(prev_rms - rms) < tol) break;
    prev_rms = rms;

    // Closed-form rigid fit (orthogonal Procrustes on the cross
    // covariance), applied to the ORIGINAL points so the transform does
    // not accumulate roundoff.
    Vec3 cm = centroid(p.points);
    Vec3 cc{};
    for (size_t i = 0; i < corr.size(); ++i) cc = cc + q.points[corr[i]];
    cc = cc / (double)corr.size();

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (size_t i = 0; i < corr.size(); ++i) {
      Vec3 a = p.points[i] - cm;
      Vec3 b = q.points[corr[i]] - cc;
      Eigen::Vector3d ea(a.x, a.y, a.z), eb(b.x, b.y, b.z);
      h += ea * eb.transpose();
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
    if (r.determinant() < 0.0) {
      Eigen::Matrix3d v = svd.matrixV();
      v.col(2) *= -1.0;
      r = v * svd.matrixU().transpose();
    }
    Eigen::Vector3d ecm(cm.x, cm.y, cm.z), ecc(cc.x, cc.y, cc.z);
    Eigen::Vector3d t = ecc - r * ecm;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) res.transform.rotation[i][j] = r(i, j);
    res.transform.translation = {t(0), t(1), t(2)};
  }
  return res;
}

double mask_iou(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
  if (a.size() != b.size())
    throw DimensionMismatchError("mask_iou: mask dimensions differ");
  size_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    bool ba = a[i] != 0, bb = b[i] != 0;
    inter += ba && bb;
    uni += ba || bb;
  }
  if (uni == 0) return 1.0;
  return (double)inter / (double)uni;
}

void EvalReport::recompute_aggregates() {
  aggregates.clear();
  for (const auto& col : columns) {
    double sum = 0.0;
    size_t n = 0;
    for (const auto& row : rows) {
      auto it = row.find(col);
      if (it != row.end()) {
        sum += it->second;
        ++n;
      }
    }
    if (n > 0) aggregates[col] = sum / (double)n;
  }
}

void EvalReport::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw IoError("EvalReport: cannot open " + path);
  f << "item";
  for (const auto& c : columns) f << "," << c;
  f << "\n";
  char buf[64];
  for (size_t i = 0; i < rows.size(); ++i) {
    f << i;
    for (const auto& c : columns) {
      auto it = rows[i].find(c);
      if (it != rows[i].end()) {
        std::snprintf(buf, sizeof buf, "%.9g", it->second);
        f << "," << buf;
      } else {
        f << ",";
      }
    }
    f << "\n";
  }
  f << "mean";
  for (const auto& c : columns) {
    auto it = aggregates.find(c);
    if (it != aggregates.end()) {
      std::snprintf(buf, sizeof buf, "%.9g", it->second);
      f << "," << buf;
    } else {
      f << ",";
    }
  }
  f << "\n";
}

void EvalReport::write_json(const std::string& path) const {
  using nlohmann::json;
  json j;
  j["protocol"] = protocol;
  j["columns"] = columns;
  j["rows"] = json::array();
  for (const auto& row : rows) {
    json r = json::object();
    for (const auto& [k, v] : row) r[k] = v;
    j["rows"].push_back(r);
  }
  json agg = json::object();
  for (const auto& [k, v] : aggregates) agg[k] = v;
  j["aggregates"] = agg;
  if (!provenance_json.empty()) j["provenance"] = json::parse(provenance_json);
  std::ofstream f(path);
  if (!f) throw IoError("EvalReport: cannot open " + path);
  f << j.dump(2);
}

NavmeshCdResult navmesh_cd_protocol(const TriMesh& pred_scene, const TriMesh& gt_navmesh,
                                    const AgentParams& agent, int n_samples,
                                    double cell_size) {
  if (pred_scene.triangles.empty() || gt_navmesh.triangles.empty())
    throw EmptyMeshError("navmesh_cd_protocol: empty input");

  Aabb3 pred_bounds = pred_scene.bounds();
  Vec3 ext = pred_bounds.extent();
  double world_extent = std::max({ext.x, ext.y, ext.z});
  if (cell_size <= 0.0) cell_size = world_extent / 256.0;

  // Bake the prediction's navmesh in world units, then normalize the
  // pair; the ground truth normalizes against its own bounds.
  NavMesh pred_nav = bake_navmesh(pred_scene, agent, cell_size);
  if (pred_nav.empty()) throw EmptyResultError("navmesh_cd_protocol: no walkable surface");
  TriMesh pred_nav_mesh = pred_nav.to_mesh();
  TriMesh pred_copy = pred_scene;
  ScaleTranslate pred_xf = normalize_scene(pred_copy, pred_nav_mesh);

  TriMesh gt_copy = gt_navmesh;
  ScaleTranslate gt_xf = normalize_with_reference(gt_copy, gt_navmesh.bounds());

  PointCloud pred_pc = sample_surface(pred_nav_mesh, n_samples, mesh_content_seed(pred_nav_mesh));
  PointCloud gt_pc = sample_surface(gt_copy, n_samples, mesh_content_seed(gt_copy));

  // A rigidly displaced prediction normalizes at a different scale than
  // the ground truth (a rotated scene has a larger axis-aligned box), so
  // first equalize the centroid RMS radii of the two clouds; rigid ICP
  // cannot absorb a scale mismatch.
  Vec3 centroid{};
  for (const auto& p : pred_pc.points) centroid = centroid + p;
  centroid = centroid / (double)pred_pc.points.size();
  Vec3 gt_centroid{};
  for (const auto& p : gt_pc.points) gt_centroid = gt_centroid + p;
  gt_centroid = gt_centroid / (double)gt_pc.points.size();
  auto rms_radius = [](const PointCloud& c, const Vec3& m) {
    double s = 0.0;
    for (const auto& p : c.points) s += (p - m).dot(p - m);
    return std::sqrt(s / c.points.size());
  };
  double scale_fix = rms_radius(gt_pc, gt_centroid) / rms_radius(pred_pc, centroid);
  for (auto& p : pred_pc.points) p = centroid + (p - centroid) * scale_fix;
  // Point-to-point ICP from the centroid init alone can also stick in a
  // local minimum under a large yaw offset, so coarse-search canonical
  // yaws about the cloud centroid on a subsample and refine from the
  // best start.
  auto yaw_about_centroid = [&](double theta) {
    RigidTransform r = RigidTransform::rotation_z(theta);
    r.translation = centroid - r.apply(centroid);  // rotate about the centroid
    return r;
  };
  size_t stride = std::max<size_t>(1, pred_pc.points.size() / 2000);
  PointCloud gt_sub;
  for (size_t i = 0; i < gt_pc.points.size(); i += stride) gt_sub.points.push_back(gt_pc.points[i]);
  double best_theta = 0.0, best_rms = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 24; ++k) {
    double theta = 2.0 * M_PI * k / 24.0;
    RigidTransform pre = yaw_about_centroid(theta);
    PointCloud sub;
    for (size_t i = 0; i < pred_pc.points.size(); i += stride)
      sub.points.push_back(pre.apply(pred_pc.points[i]));
    IcpResult coarse = icp_align(sub, gt_sub, 20, 1e-7);
    if (coarse.rms < best_rms) {
      best_rms = coarse.rms;
      best_theta = theta;
    }
  }
  RigidTransform pre = yaw_about_centroid(best_theta);
  PointCloud pred_start;
  pred_start.points.reserve(pred_pc.points.size());
  for (const auto& p : pred_pc.points) pred_start.points.push_back(pre.apply(p));
  IcpResult icp = icp_align(pred_start, gt_pc);
  // Compose the refinement with the coarse yaw so the reported
  // transform maps the original prediction cloud onto the ground truth.
  {
    RigidTransform total;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        total.rotation[i][j] = 0.0;
        for (int k = 0; k < 3; ++k)
          total.rotation[i][j] += icp.transform.rotation[i][k] * pre.rotation[k][j];
      }
    total.translation = icp.transform.apply(pre.translation);
    icp.transform = total;
  }
  PointCloud aligned;
  aligned.points.reserve(pred_pc.points.size());
  for (const auto& p : pred_pc.points) aligned.points.push_back(icp.transform.apply(p));

  NavmeshCdResult out;
  out.chamfer_distance = chamfer(aligned, gt_pc);
  out.normalized_cell_size = cell_size * pred_xf.scale;

  out.report.protocol = "navmesh_cd";
  out.report.columns = {"navmesh_cd"};
  out.report.rows.push_back({{"navmesh_cd", out.chamfer_distance}});
  out.report.recompute_aggregates();
  nlohmann::json prov;
  prov["cell_size_world"] = cell_size;
  prov["cell_size_normalized"] = out.normalized_cell_size;
  prov["n_samples"] = n_samples;
  prov["agent"] = {{"radius", agent.radius},
                   {"height", agent.height},
                   {"max_climb", agent.max_climb},
                   {"max_slope_deg", agent.max_slope_deg}};
  prov["pred_scale"] = pred_xf.scale;
  prov["gt_scale"] = gt_xf.scale;
  prov["scale_correction"] = scale_fix;
  prov["icp_iterations"] = icp.iterations;
  prov["icp_rms"] = icp.rms;
  prov["chamfer_variant"] = "mean Euclidean, half-sum symmetrization";
  out.report.provenance_json = prov.dump();
  return out;
}

EvalReport part_match_eval(const PartSet& pred, const PartSet& gt,
                           const std::vector<double>& taus, int n_samples) {
  if (pred.parts.empty() || gt.parts.empty())
    throw EmptySetError("part_match_eval: empty part set");

  auto sample_part = [&](const Part& part) {
    TriMesh world = part.world_mesh();
    return sample_surface(world, n_samples, mesh_content_seed(world));
  };

  std::vector<PointCloud> pred_clouds;
  pred_clouds.reserve(pred.parts.size());
  for (const auto& p : pred.parts) pred_clouds.push_back(sample_part(p));

  EvalReport report;
  report.protocol = "part_match";
  report.columns.push_back("chamfer");
  char name[32];
  for (double tau : taus) {
    std::snprintf(name, sizeof name, "fscore@%g", tau);
    report.columns.push_back(name);
  }

  for (const auto& gp : gt.parts) {
    PointCloud gt_cloud = sample_part(gp);
    double best_cd = std::numeric_limits<double>::infinity();
    int best = -1;
    for (size_t i = 0; i < pred_clouds.size(); ++i) {
      double cd = chamfer(gt_cloud, pred_clouds[i]);
      if (cd < best_cd) {
        best_cd = cd;
        best = (int)i;
      }
    }
    std::map<std::string, double> row;
    row["chamfer"] = best_cd;
    for (double tau : taus) {
      std::snprintf(name, sizeof name, "fscore@%g", tau);
      row[name] = fscore(pred_clouds[best], gt_cloud, tau);
    }
    report.rows.push_back(std::move(row));
  }
  report.recompute_aggregates();
  nlohmann::json prov;
  prov["n_samples"] = n_samples;
  prov["taus"] = taus;
  prov["tau_units"] = "normalized-cube";
  prov["chamfer_variant"] = "mean Euclidean, half-sum symmetrization";
  report.provenance_json = prov.dump();
  return report;
}

}  // namespace worldgen
