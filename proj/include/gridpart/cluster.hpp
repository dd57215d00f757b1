#ifndef GRIDPART_CLUSTER_HPP
#define GRIDPART_CLUSTER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gridpart/scenario.hpp"

namespace gridpart {

enum class Linkage { Ward, Average, Complete };

Linkage parse_linkage(const std::string& s);

// PCA projection plus agglomerative clustering of scenario features
// (concatenated dp and gp vectors).
struct ClusterModel {
  std::vector<double> mean;                      // feature mean
  std::vector<std::vector<double>> principal_axes;  // k rows, orthonormal
  std::vector<std::vector<double>> projected;    // per scenario, pca_dims
  std::vector<int> labels;                       // cluster id per scenario
  int k = 0;
  bool degenerate = false;  // zero-variance input

  std::vector<std::vector<int>> members() const;  // per-cluster indices
};

// Centers features, projects onto the top pca_dims principal axes of the
// covariance, then cuts an agglomerative dendrogram at k clusters.
// Cluster ids are renumbered by smallest member index.
ClusterModel fit_clusters(const ScenarioSet& s, int k, int pca_dims,
                          Linkage linkage = Linkage::Ward);

// n/k uniform draws with replacement from each cluster; n must be a
// multiple of k.
ScenarioSet sample_stratified(const ScenarioSet& s, const ClusterModel& m,
                              int n, std::uint64_t seed);

// Mean squared feature reconstruction error of the rank-d PCA model.
double pca_reconstruction_error(const ScenarioSet& s, int pca_dims);

}  // namespace gridpart

#endif  // GRIDPART_CLUSTER_HPP
