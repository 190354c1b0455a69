#pragma once

#include <map>
#include <string>
#include <vector>

#include "worldgen/decompose.hpp"
#include "worldgen/geometry.hpp"
#include "worldgen/navmesh.hpp"
#include "worldgen/scene_spec.hpp"

namespace worldgen {

// Static kd-tree over 3D points for nearest-neighbor queries.
class KdTree3 {
 public:
  explicit KdTree3(const std::vector<Vec3>& points);
  // Returns index of nearest point and its distance.
  int nearest(const Vec3& query, double* dist = nullptr) const;

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1, right = -1;
  };
  int build(std::vector<int>& idx, int lo, int hi, int depth);
  void search(int node, const Vec3& q, int& best, double& best_d2) const;
  std::vector<Vec3> pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Symmetric mean nearest-neighbor (Euclidean, not squared) distance:
// CD = 0.5 * (mean_p min_q |p-q| + mean_q min_p |q-p|).
double chamfer(const PointCloud& p, const PointCloud& q);

// F-score at threshold tau from precision/recall of tau-coverage.
double fscore(const PointCloud& p, const PointCloud& q, double tau);

struct IcpResult {
  RigidTransform transform;  // maps P toward Q
  double rms = 0.0;
  int iterations = 0;
  std::vector<double> rms_history;  // non-increasing across iterations
};

IcpResult icp_align(const PointCloud& p, const PointCloud& q, int max_iters = 50,
                    double tol = 1e-9);

double mask_iou(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b);

struct EvalReport {
  std::string protocol;
  std::vector<std::string> columns;
  std::vector<std::map<std::string, double>> rows;  // keyed by column
  std::map<std::string, double> aggregates;         // mean per column
  std::string provenance_json;

  void recompute_aggregates();
  void write_csv(const std::string& path) const;
  void write_json(const std::string& path) const;
};

struct NavmeshCdResult {
  double chamfer_distance = 0.0;
  double normalized_cell_size = 0.0;  // bake cell size in normalized units
  EvalReport report;
};

// Navmesh comparison protocol: bake a navmesh from the predicted scene
// in world units, normalize both geometries to the [-1,1]^3 cube,
// sample both navmeshes, ICP-align, then Chamfer.
NavmeshCdResult navmesh_cd_protocol(const TriMesh& pred_scene, const TriMesh& gt_navmesh,
                                    const AgentParams& agent, int n_samples = 20000,
                                    double cell_size = -1.0);

// Part-matching protocol: for each ground-truth part, the prediction
// minimizing Chamfer; per-part CD and F-score at each tau, aggregated by
// mean. Sampling is seeded from each part's geometry, so identical parts
// produce identical clouds.
EvalReport part_match_eval(const PartSet& pred, const PartSet& gt,
                           const std::vector<double>& taus = {0.01, 0.02, 0.03, 0.05},
                           int n_samples = 20000);

}  // namespace worldgen
