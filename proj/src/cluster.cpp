#include "gridpart/cluster.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gridpart/rng.hpp"

namespace gridpart {

Linkage parse_linkage(const std::string& s) {
  if (s == "ward") return Linkage::Ward;
  if (s == "average") return Linkage::Average;
  if (s == "complete") return Linkage::Complete;
  throw InputError("unknown linkage '" + s + "'");
}

std::vector<std::vector<int>> ClusterModel::members() const {
  std::vector<std::vector<int>> out(k);
  for (size_t i = 0; i < labels.size(); ++i)
    out[labels[i]].push_back(static_cast<int>(i));
  return out;
}

namespace {

Eigen::MatrixXd feature_matrix(const ScenarioSet& s) {
  const int n = s.size();
  const int d = 2 * s.dim();
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i) {
    const Scenario& sc = s.scenarios[i];
    for (int j = 0; j < s.dim(); ++j) {
      X(i, j) = sc.dp[j];
      X(i, s.dim() + j) = sc.gp[j];
    }
  }
  return X;
}

// Agglomerative clustering, nearest-neighbor chain. Ward works on cluster
// centroids and sizes; average/complete carry a pairwise distance matrix.
std::vector<int> agglomerate(const Eigen::MatrixXd& P, int k, Linkage linkage) {
  const int n = static_cast<int>(P.rows());
  struct Cluster {
    bool alive = true;
    int size = 0;
    Eigen::VectorXd centroid;
    std::vector<int> items;
  };
  std::vector<Cluster> cl(n);
  for (int i = 0; i < n; ++i) {
    cl[i].size = 1;
    cl[i].centroid = P.row(i);
    cl[i].items = {i};
  }

  const bool need_matrix = linkage != Linkage::Ward;
  std::vector<std::vector<float>> dist;
  if (need_matrix) {
    dist.assign(n, std::vector<float>(n, 0.f));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const float d = static_cast<float>((P.row(i) - P.row(j)).norm());
        dist[i][j] = dist[j][i] = d;
      }
  }

  auto cluster_dist = [&](int a, int b) -> double {
    if (linkage == Linkage::Ward) {
      const double na = cl[a].size, nb = cl[b].size;
      return na * nb / (na + nb) *
             (cl[a].centroid - cl[b].centroid).squaredNorm();
    }
    return dist[a][b];
  };

  int alive = n;
  std::vector<int> chain;
  chain.reserve(n);
  while (alive > k) {
    if (chain.empty()) {
      for (int i = 0; i < n; ++i)
        if (cl[i].alive) {
          chain.push_back(i);
          break;
        }
    }
    const int top = chain.back();
    // Nearest alive neighbor; deterministic tie-break on index.
    int nn = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (!cl[j].alive || j == top) continue;
      const double d = cluster_dist(top, j);
      if (d < best - 1e-15 || (d < best + 1e-15 && (nn < 0 || j < nn))) {
        best = d;
        nn = j;
      }
    }
    if (chain.size() >= 2 && chain[chain.size() - 2] == nn) {
      // Reciprocal nearest neighbors: merge nn into top's slot (keep the
      // smaller index so labeling stays deterministic).
      chain.pop_back();
      chain.pop_back();
      const int a = std::min(top, nn), b = std::max(top, nn);
      if (linkage == Linkage::Average) {
        const double na = cl[a].size, nb = cl[b].size;
        for (int j = 0; j < n; ++j)
          if (cl[j].alive && j != a && j != b)
            dist[a][j] = dist[j][a] = static_cast<float>(
                (na * dist[a][j] + nb * dist[b][j]) / (na + nb));
      } else if (linkage == Linkage::Complete) {
        for (int j = 0; j < n; ++j)
          if (cl[j].alive && j != a && j != b)
            dist[a][j] = dist[j][a] = std::max(dist[a][j], dist[b][j]);
      }
      cl[a].centroid = (cl[a].centroid * cl[a].size + cl[b].centroid * cl[b].size) /
                       (cl[a].size + cl[b].size);
      cl[a].size += cl[b].size;
      cl[a].items.insert(cl[a].items.end(), cl[b].items.begin(),
                         cl[b].items.end());
      cl[b].alive = false;
      --alive;
    } else {
      chain.push_back(nn);
    }
  }

  // Renumber clusters by smallest member index.
  std::vector<std::pair<int, int>> order;  // (min item, cluster slot)
  for (int i = 0; i < n; ++i)
    if (cl[i].alive)
      order.push_back({*std::min_element(cl[i].items.begin(), cl[i].items.end()), i});
  std::sort(order.begin(), order.end());
  std::vector<int> labels(n, -1);
  for (size_t c = 0; c < order.size(); ++c)
    for (int item : cl[order[c].second].items) labels[item] = static_cast<int>(c);
  return labels;
}

}  // namespace

ClusterModel fit_clusters(const ScenarioSet& s, int k, int pca_dims,
                          Linkage linkage) {
  if (k < 1) throw InputError("fit_clusters: k must be >= 1");
  if (k > s.size())
    throw InputError("fit_clusters: k exceeds scenario count");
  if (pca_dims < 1) throw InputError("fit_clusters: pca_dims must be >= 1");

  const Eigen::MatrixXd X = feature_matrix(s);
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  pca_dims = std::min(pca_dims, d);

  ClusterModel model;
  model.k = k;
  Eigen::VectorXd mean = X.colwise().mean();
  model.mean.assign(mean.data(), mean.data() + d);
  Eigen::MatrixXd C = X.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = C.transpose() * C / std::max(1, n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd evals = eig.eigenvalues();  // ascending
  const double total_var = std::max(0.0, evals.sum());
  if (total_var <= 1e-14) {
    // Zero variance: single zero axis, flagged; clustering degenerates to
    // index-order merges.
    model.degenerate = true;
    model.principal_axes.assign(1, std::vector<double>(d, 0.0));
    model.projected.assign(n, std::vector<double>(1, 0.0));
    model.labels = agglomerate(Eigen::MatrixXd::Zero(n, 1), k, linkage);
    return model;
  }

  Eigen::MatrixXd axes(pca_dims, d);
  for (int a = 0; a < pca_dims; ++a) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - a);
    // Sign convention: largest-magnitude entry positive.
    int arg = 0;
    for (int j = 1; j < d; ++j)
      if (std::fabs(v[j]) > std::fabs(v[arg])) arg = j;
    if (v[arg] < 0) v = -v;
    axes.row(a) = v.transpose();
  }
  model.principal_axes.resize(pca_dims);
  for (int a = 0; a < pca_dims; ++a)
    model.principal_axes[a].assign(axes.row(a).data(),
                                   axes.row(a).data() + d);

  Eigen::MatrixXd proj = C * axes.transpose();  // n x pca_dims
  model.projected.resize(n);
  for (int i = 0; i < n; ++i)
    model.projected[i].assign(proj.row(i).data(),
                              proj.row(i).data() + pca_dims);

  model.labels = agglomerate(proj, k, linkage);
  return model;
}

ScenarioSet sample_stratified(const ScenarioSet& s, const ClusterModel& m,
                              int n, std::uint64_t seed) {
  if (n < 0) throw InputError("sample_stratified: negative count");
  if (m.k < 1) throw InputError("sample_stratified: empty cluster model");
  if (n % m.k != 0)
    throw InputError("sample_stratified: count " + std::to_string(n) +
                     " is not a multiple of " + std::to_string(m.k) +
                     " clusters");
  const auto groups = m.members();
  for (int c = 0; c < m.k; ++c)
    if (groups[c].empty())
      throw InputError("sample_stratified: cluster " + std::to_string(c) +
                       " is empty");
  ScenarioSet out;
  out.seed = seed;
  out.provenance = "stratified n=" + std::to_string(n) + " k=" +
                   std::to_string(m.k) + " of " + s.provenance;
  Rng rng(mix_seed(seed, 0x73747261));
  const int per = n / m.k;
  for (int c = 0; c < m.k; ++c)
    for (int i = 0; i < per; ++i) {
      const int pick = groups[c][rng.next_below(groups[c].size())];
      out.scenarios.push_back(s.scenarios[pick]);
    }
  return out;
}

double pca_reconstruction_error(const ScenarioSet& s, int pca_dims) {
  const Eigen::MatrixXd X = feature_matrix(s);
  const int d = static_cast<int>(X.cols());
  pca_dims = std::min(pca_dims, d);
  Eigen::VectorXd mean = X.colwise().mean();
  Eigen::MatrixXd C = X.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      C.transpose() * C / std::max(1, static_cast<int>(X.rows()) - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::MatrixXd axes(pca_dims, d);
  for (int a = 0; a < pca_dims; ++a)
    axes.row(a) = eig.eigenvectors().col(d - 1 - a).transpose();
  const Eigen::MatrixXd R = C - (C * axes.transpose()) * axes;
  return R.squaredNorm() / static_cast<double>(X.rows());
}

}  // namespace gridpart
