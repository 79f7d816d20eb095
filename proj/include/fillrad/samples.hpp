#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fillrad/metric_space.hpp"

namespace fillrad {

/// A finite metric space together with the geometric metadata the bound
/// checkers consume. Optional fields are unknown rather than zero.
struct ManifoldSample {
  FiniteMetricSpace space;
  int dim = 0;
  std::optional<double> inj;          // injectivity radius (length units)
  std::optional<double> delta;        // sectional curvature upper bound (1/length^2)
  std::optional<double> diam_true;    // exact diameter when known
  std::optional<double> fillrad_true; // exact filling radius when known
  bool orientable = true;
  std::string label;
  std::uint64_t seed = 0;
  double epsilon = 0;  // sampling mesh: max over points of nearest-neighbor distance
};

/// Total-space sample with a fiber partition over a base sample.
struct SubmersionSample {
  ManifoldSample total;
  ManifoldSample base;
  std::vector<int> proj;                 // total index -> base index
  std::vector<std::vector<int>> fibers;  // base index -> total indices
  double rho0 = 0;     // half the max extrinsic fiber diameter
  double epsilon = 0;  // measured equidistance / contraction defect
};

/// max over points of the distance to the nearest other point
double mesh_of(const FiniteMetricSpace& space);

/// Spec default for graph connectivity: ceil(2 ln n) + dim.
int default_graph_neighbors(int n, int dim);

/// n equally spaced points with the geodesic arc metric.
ManifoldSample sample_circle(double circumference, int n);

/// Quasi-uniform sample of the unit round sphere, dim 2 or 3. The seed
/// offsets the low-discrepancy lattice (Fibonacci for S^2, Kronecker triple
/// through the quaternion map for S^3); d = arccos of the inner product.
ManifoldSample sample_sphere(int dim, int n, std::uint64_t seed = 0);

/// 2m points forming m exact antipodal pairs on the round 2-sphere;
/// pair (i, i+m) sits at distance pi. Substrate for the projective quotient.
ManifoldSample sample_sphere_antipodal(int pairs, std::uint64_t seed = 0);

/// Product grid of two circles, geodesic product metric
/// d = sqrt(dx^2 + dy^2), projected onto the first factor.
SubmersionSample sample_flat_torus(double L, double l, int nL, int nl);

/// Submetry quotient: base points are the orbits, d_base = min over
/// representatives. Valid only for equidistant (isometry-orbit) partitions;
/// the result is validated and defects are measured onto epsilon.
SubmersionSample quotient_metric(const ManifoldSample& total,
                                 const std::vector<std::vector<int>>& orbits);

using LocalMetric =
    std::function<double(std::span<const double>, std::span<const double>)>;

/// Symmetric k-nearest-neighbor graph with edge lengths from local_metric;
/// d = all-pairs shortest paths. Throws DisconnectedGraph with the component
/// count if the graph does not come out connected.
FiniteMetricSpace graph_geodesics(const std::vector<std::vector<double>>& points,
                                  const LocalMetric& local_metric, int k);

/// RP^2 as the antipodal quotient of sample_sphere_antipodal, with the
/// projective metadata filled in on the base.
SubmersionSample sample_projective_plane(int pairs, std::uint64_t seed = 0);

/// Quotient of a circle sample by the cyclic rotation subgroup of the given
/// order (order must divide n); the base is a circle of circumference L/order.
SubmersionSample sample_circle_quotient(double circumference, int n, int order);

/// Berger-type rescaled 3-sphere: Hopf fibers sampled explicitly, vertical
/// directions shrunk by a, distances from a k-NN geodesic graph. The base is
/// the submetry quotient of the emitted sample.
SubmersionSample sample_berger_sphere(int base_n, int fiber_n, double a, int k,
                                      std::uint64_t seed = 0);

/// Weighted undirected graph as adjacency lists of (neighbor, length).
struct WeightedGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;
};

/// All-pairs shortest paths, Dijkstra per source (parallel over sources).
RawMatrix shortest_paths(const WeightedGraph& graph);

/// Reference implementation: Floyd-Warshall, serial. Kept for equivalence
/// tests and the kernel benchmark.
RawMatrix shortest_paths_floyd(const WeightedGraph& graph);

}  // namespace fillrad
