#include "fillrad/samples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>

namespace fillrad {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw; pinned here rather than std::uniform_real_distribution
  // so streams are identical across standard libraries.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double clamp_cos(double t) { return std::min(1.0, std::max(-1.0, t)); }

RawMatrix metric_from(int n, const std::function<double(int, int)>& dist) {
  RawMatrix m;
  m.n = n;
  m.d.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = dist(i, j);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

std::vector<std::array<double, 3>> fibonacci_sphere(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double u = uniform01(rng);
  const double v = uniform01(rng);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<std::array<double, 3>> pts(n);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + u) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * kPi * std::fmod(i * golden + v, 1.0);
    pts[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return pts;
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

double mesh_of(const FiniteMetricSpace& space) {
  const int n = space.size();
  if (n < 2) return 0.0;
  double mesh = 0.0;
  for (int i = 0; i < n; ++i) {
    double nn = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (j != i) nn = std::min(nn, space(i, j));
    mesh = std::max(mesh, nn);
  }
  return mesh;
}

int default_graph_neighbors(int n, int dim) {
  return static_cast<int>(std::ceil(2.0 * std::log(static_cast<double>(n)))) + dim;
}

ManifoldSample sample_circle(double circumference, int n) {
  if (!(circumference > 0)) throw Error(Errc::BadArguments, "circumference must be positive");
  if (n < 3) throw Error(Errc::TooFewPoints, "circle needs n >= 3, got " + std::to_string(n));
  const double step = circumference / n;
  RawMatrix m = metric_from(n, [&](int i, int j) {
    const int s = std::min(j - i, n - (j - i));
    return s * step;
  });
  ManifoldSample out;
  out.space = validate_metric(m);
  out.dim = 1;
  out.inj = circumference / 2;  // cut distance
  out.delta = 0.0;
  out.diam_true = circumference / 2;
  out.fillrad_true = circumference / 6;
  out.orientable = true;
  out.label = "circle";
  out.epsilon = mesh_of(out.space);
  return out;
}

ManifoldSample sample_sphere(int dim, int n, std::uint64_t seed) {
  if (dim != 2 && dim != 3) throw Error(Errc::BadArguments, "sphere dim must be 2 or 3");
  if (n < dim + 2)
    throw Error(Errc::TooFewPoints,
                "sphere" + std::to_string(dim) + " needs n >= " + std::to_string(dim + 2));

  RawMatrix m;
  if (dim == 2) {
    const auto pts = fibonacci_sphere(n, seed);
    m = metric_from(n, [&](int i, int j) { return std::acos(clamp_cos(dot3(pts[i], pts[j]))); });
  } else {
    // Kronecker sequence on the cube mapped through the uniform-quaternion
    // parametrization; gamma is the root of x^4 = x + 1.
    std::mt19937_64 rng(seed);
    const double off1 = uniform01(rng), off2 = uniform01(rng), off3 = uniform01(rng);
    const double gamma = 1.2207440846057594753616853491088319144324890862486352142882444530497100;
    const double a1 = 1.0 / gamma, a2 = 1.0 / (gamma * gamma), a3 = 1.0 / (gamma * gamma * gamma);
    std::vector<std::array<double, 4>> q(n);
    for (int i = 0; i < n; ++i) {
      const double u1 = std::fmod(0.5 + off1 + i * a1, 1.0);
      const double u2 = std::fmod(0.5 + off2 + i * a2, 1.0);
      const double u3 = std::fmod(0.5 + off3 + i * a3, 1.0);
      const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
      q[i] = {s1 * std::sin(2 * kPi * u2), s1 * std::cos(2 * kPi * u2),
              s2 * std::sin(2 * kPi * u3), s2 * std::cos(2 * kPi * u3)};
    }
    m = metric_from(n, [&](int i, int j) {
      const double t = q[i][0] * q[j][0] + q[i][1] * q[j][1] + q[i][2] * q[j][2] + q[i][3] * q[j][3];
      return std::acos(clamp_cos(t));
    });
  }

  ManifoldSample out;
  out.space = validate_metric(m);
  out.dim = dim;
  out.inj = kPi;
  out.delta = 1.0;
  out.diam_true = kPi;
  out.fillrad_true = 0.5 * std::acos(-1.0 / (dim + 1));
  out.orientable = true;
  out.label = "sphere" + std::to_string(dim);
  out.seed = seed;
  out.epsilon = mesh_of(out.space);
  return out;
}

ManifoldSample sample_sphere_antipodal(int pairs, std::uint64_t seed) {
  if (pairs < 3) throw Error(Errc::TooFewPoints, "need at least 3 antipodal pairs");
  const int m = pairs, n = 2 * m;
  const auto pts = fibonacci_sphere(m, seed);
  RawMatrix raw = metric_from(n, [&](int i, int j) {
    const int a = i % m, b = j % m;
    const bool flip = (i < m) != (j < m);
    if (flip && a == b) return kPi;  // exact antipode
    const double t = dot3(pts[a], pts[b]);
    return std::acos(clamp_cos(flip ? -t : t));
  });
  ManifoldSample out;
  out.space = validate_metric(raw);
  out.dim = 2;
  out.inj = kPi;
  out.delta = 1.0;
  out.diam_true = kPi;
  out.fillrad_true = 0.5 * std::acos(-1.0 / 3.0);
  out.orientable = true;
  out.label = "sphere2-antipodal";
  out.seed = seed;
  out.epsilon = mesh_of(out.space);
  return out;
}

SubmersionSample sample_flat_torus(double L, double l, int nL, int nl) {
  if (!(L >= l && l > 0)) throw Error(Errc::BadGrid, "need L >= l > 0");
  if (nL < 3 || nl < 3) throw Error(Errc::BadGrid, "grid counts must be >= 3");
  const int n = nL * nl;
  const double stepL = L / nL, stepl = l / nl;
  // Axis-aligned offsets stay exact so fibers are exactly equidistant.
  RawMatrix m = metric_from(n, [&](int p, int q) {
    const int a = p / nl, b = p % nl, a2 = q / nl, b2 = q % nl;
    const int sx = std::min(std::abs(a - a2), nL - std::abs(a - a2));
    const int sy = std::min(std::abs(b - b2), nl - std::abs(b - b2));
    const double dx = sx * stepL, dy = sy * stepl;
    if (sy == 0) return dx;
    if (sx == 0) return dy;
    return std::sqrt(dx * dx + dy * dy);
  });

  SubmersionSample sub;
  sub.total.space = validate_metric(m);
  sub.total.dim = 2;
  sub.total.inj = std::min(L, l) / 2;
  sub.total.delta = 0.0;
  sub.total.diam_true = std::hypot(L / 2, l / 2);
  sub.total.fillrad_true = std::min(L, l) / 6;
  sub.total.orientable = true;
  sub.total.label = "torus";
  sub.total.epsilon = mesh_of(sub.total.space);

  sub.base = sample_circle(L, nL);
  sub.base.label = "torus/base";

  sub.proj.resize(n);
  sub.fibers.assign(nL, {});
  for (int p = 0; p < n; ++p) {
    sub.proj[p] = p / nl;
    sub.fibers[p / nl].push_back(p);
  }

  double max_fiber_diam = 0.0;
  for (const auto& fiber : sub.fibers)
    for (size_t x = 0; x < fiber.size(); ++x)
      for (size_t y = x + 1; y < fiber.size(); ++y)
        max_fiber_diam = std::max(max_fiber_diam, sub.total.space(fiber[x], fiber[y]));
  sub.rho0 = 0.5 * max_fiber_diam;

  // Equidistance and contraction defects, exhaustive.
  double defect = 0.0;
  for (int z0 = 0; z0 < n; ++z0) {
    const int b0 = sub.proj[z0];
    for (int b1 = 0; b1 < nL; ++b1) {
      double dmin = std::numeric_limits<double>::infinity();
      for (int z1 : sub.fibers[b1]) dmin = std::min(dmin, z0 == z1 ? 0.0 : sub.total.space(z0, z1));
      defect = std::max(defect, std::abs(dmin - sub.base.space(b0, b1)));
    }
  }
  for (int z = 0; z < n; ++z)
    for (int w = 0; w < n; ++w)
      defect = std::max(defect, sub.base.space(sub.proj[z], sub.proj[w]) - sub.total.space(z, w));
  sub.epsilon = defect;
  return sub;
}

SubmersionSample quotient_metric(const ManifoldSample& total,
                                 const std::vector<std::vector<int>>& orbits) {
  const int n = total.space.size();
  const int b = static_cast<int>(orbits.size());
  std::vector<int> proj(n, -1);
  for (int o = 0; o < b; ++o) {
    if (orbits[o].empty()) throw Error(Errc::EmptyOrbit, "orbit " + std::to_string(o) + " is empty");
    for (int z : orbits[o]) {
      if (z < 0 || z >= n || proj[z] != -1)
        throw Error(Errc::BadArguments, "orbits do not partition the index set");
      proj[z] = o;
    }
  }
  for (int z = 0; z < n; ++z)
    if (proj[z] == -1) throw Error(Errc::BadArguments, "orbits do not partition the index set");

  RawMatrix raw;
  raw.n = b;
  raw.d.assign(static_cast<size_t>(b) * b, 0.0);
  for (int o = 0; o < b; ++o)
    for (int p = o + 1; p < b; ++p) {
      double dmin = std::numeric_limits<double>::infinity();
      for (int z : orbits[o])
        for (int w : orbits[p]) dmin = std::min(dmin, total.space(z, w));
      if (!(dmin > 0))
        throw Error(Errc::QuotientNotMetric,
                    "orbits " + std::to_string(o) + " and " + std::to_string(p) +
                        " are at distance zero");
      raw.at(o, p) = dmin;
      raw.at(p, o) = dmin;
    }

  SubmersionSample sub;
  try {
    sub.base.space = b == 1 ? FiniteMetricSpace::trusted(raw) : validate_metric(raw);
  } catch (const Error& e) {
    if (e.code() == Errc::TriangleViolation)
      throw Error(Errc::QuotientNotMetric,
                  std::string("orbit distances violate the triangle inequality (") + e.what() + ")",
                  e.context());
    throw;
  }
  sub.total = total;
  sub.base.dim = total.dim;
  sub.base.label = total.label + "/quotient";
  sub.base.seed = total.seed;
  sub.base.orientable = total.orientable;
  sub.base.epsilon = b > 1 ? mesh_of(sub.base.space) : 0.0;
  sub.proj = std::move(proj);
  sub.fibers = orbits;

  double max_fiber_diam = 0.0;
  for (const auto& fiber : sub.fibers)
    for (size_t x = 0; x < fiber.size(); ++x)
      for (size_t y = x + 1; y < fiber.size(); ++y)
        max_fiber_diam = std::max(max_fiber_diam, total.space(fiber[x], fiber[y]));
  sub.rho0 = 0.5 * max_fiber_diam;

  double defect = 0.0;
  for (int z0 = 0; z0 < n; ++z0) {
    const int b0 = sub.proj[z0];
    for (int b1 = 0; b1 < b; ++b1) {
      double dmin = std::numeric_limits<double>::infinity();
      for (int z1 : sub.fibers[b1]) dmin = std::min(dmin, z0 == z1 ? 0.0 : total.space(z0, z1));
      const double db = b0 == b1 ? 0.0 : sub.base.space(b0, b1);
      defect = std::max(defect, std::abs(dmin - db));
    }
  }
  sub.epsilon = defect;
  return sub;
}

RawMatrix shortest_paths(const WeightedGraph& graph) {
  const int n = graph.n;
  RawMatrix out;
  out.n = n;
  out.d.assign(static_cast<size_t>(n) * n, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic, 4)
  for (int s = 0; s < n; ++s) {
    double* dist = out.d.data() + static_cast<size_t>(s) * n;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[s] = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [dv, v] = heap.top();
      heap.pop();
      if (dv > dist[v]) continue;
      for (const auto& [w, len] : graph.adj[v]) {
        const double cand = dv + len;
        if (cand < dist[w]) {
          dist[w] = cand;
          heap.emplace(cand, w);
        }
      }
    }
  }
  return out;
}

RawMatrix shortest_paths_floyd(const WeightedGraph& graph) {
  const int n = graph.n;
  RawMatrix out;
  out.n = n;
  out.d.assign(static_cast<size_t>(n) * n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) out.at(i, i) = 0.0;
  for (int i = 0; i < n; ++i)
    for (const auto& [j, len] : graph.adj[i]) out.at(i, j) = std::min(out.at(i, j), len);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.at(i, j) = std::min(out.at(i, j), out.at(i, k) + out.at(k, j));
  return out;
}

FiniteMetricSpace graph_geodesics(const std::vector<std::vector<double>>& points,
                                  const LocalMetric& local_metric, int k) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw Error(Errc::TooFewPoints, "graph geodesics need at least 2 points");
  if (k < 1 || k >= n)
    throw Error(Errc::BadArguments, "neighbor count k must be in [1, n-1]");

  WeightedGraph g;
  g.n = n;
  g.adj.assign(n, {});
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  std::vector<std::pair<double, int>> cand;
  for (int i = 0; i < n; ++i) {
    cand.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand.emplace_back(local_metric(points[i], points[j]), j);
    }
    std::sort(cand.begin(), cand.end());
    for (int t = 0; t < k; ++t) {
      const auto [len, j] = cand[t];
      const int a = std::min(i, j), b = std::max(i, j);
      if (!present[a][b]) {
        present[a][b] = true;
        g.adj[a].emplace_back(b, len);
        g.adj[b].emplace_back(a, len);
      }
    }
  }

  // Connectivity check before running shortest paths.
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = ncomp;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& [w, len] : g.adj[v])
        if (comp[w] == -1) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
    }
    ++ncomp;
  }
  if (ncomp > 1)
    throw Error(Errc::DisconnectedGraph,
                "k-NN graph has " + std::to_string(ncomp) + " components",
                {{"components", std::to_string(ncomp)}});

  RawMatrix apsp = shortest_paths(g);
  // Dijkstra sums from the two endpoints can differ in the last bit; keep the min.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = std::min(apsp.at(i, j), apsp.at(j, i));
      apsp.at(i, j) = v;
      apsp.at(j, i) = v;
    }
  return validate_metric(apsp);
}

SubmersionSample sample_projective_plane(int pairs, std::uint64_t seed) {
  ManifoldSample total = sample_sphere_antipodal(pairs, seed);
  std::vector<std::vector<int>> orbits(pairs);
  for (int i = 0; i < pairs; ++i) orbits[i] = {i, i + pairs};
  SubmersionSample sub = quotient_metric(total, orbits);
  sub.base.dim = 2;
  sub.base.inj = kPi / 2;
  sub.base.delta = 1.0;
  sub.base.diam_true = kPi / 2;
  sub.base.fillrad_true.reset();
  sub.base.orientable = false;
  sub.base.label = "rp2";
  sub.base.seed = seed;
  return sub;
}

SubmersionSample sample_circle_quotient(double circumference, int n, int order) {
  if (order < 1 || n % order != 0)
    throw Error(Errc::BadArguments, "order must divide the point count");
  const int nb = n / order;
  if (nb < 3) throw Error(Errc::TooFewPoints, "quotient circle needs >= 3 points");
  ManifoldSample total = sample_circle(circumference, n);
  std::vector<std::vector<int>> orbits(nb);
  for (int r = 0; r < nb; ++r)
    for (int t = 0; t < order; ++t) orbits[r].push_back(r + t * nb);
  SubmersionSample sub = quotient_metric(total, orbits);
  sub.base.dim = 1;
  sub.base.inj = circumference / (2 * order);
  sub.base.delta = 0.0;
  sub.base.diam_true = circumference / (2 * order);
  sub.base.fillrad_true = circumference / (6 * order);
  sub.base.orientable = true;
  sub.base.label = "circle-quotient";
  return sub;
}

namespace {

std::array<double, 4> quat_mul(const std::array<double, 4>& p, const std::array<double, 4>& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

/// Unit quaternion p with p i p^-1 = (0, b); rotation from the i-axis to b.
std::array<double, 4> hopf_lift(const std::array<double, 3>& b) {
  const double bx = b[0];
  if (bx > 1.0 - 1e-12) return {1, 0, 0, 0};
  if (bx < -1.0 + 1e-12) return {0, 0, 0, 1};  // half-turn about the k-axis
  const double phi = std::acos(clamp_cos(bx));
  double ax = 0.0, ay = -b[2], az = b[1];  // i-hat cross b
  const double norm = std::hypot(ay, az);
  ay /= norm;
  az /= norm;
  const double s = std::sin(phi / 2), c = std::cos(phi / 2);
  return {c, s * ax, s * ay, s * az};
}

}  // namespace

SubmersionSample sample_berger_sphere(int base_n, int fiber_n, double a, int k,
                                      std::uint64_t seed) {
  if (base_n < 4 || fiber_n < 3) throw Error(Errc::TooFewPoints, "berger grid too small");
  if (!(a > 0)) throw Error(Errc::BadArguments, "berger parameter a must be positive");
  const auto base_pts = fibonacci_sphere(base_n, seed);
  const int n = base_n * fiber_n;

  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  std::vector<std::vector<int>> fibers(base_n);
  for (int bidx = 0; bidx < base_n; ++bidx) {
    const auto lift = hopf_lift(base_pts[bidx]);
    for (int t = 0; t < fiber_n; ++t) {
      const double th = 2.0 * kPi * t / fiber_n;
      const std::array<double, 4> rot{std::cos(th), std::sin(th), 0, 0};
      const auto q = quat_mul(lift, rot);
      fibers[bidx].push_back(static_cast<int>(pts.size()));
      pts.push_back({q[0], q[1], q[2], q[3]});
    }
  }

  const LocalMetric berger = [a](std::span<const double> p, std::span<const double> q) {
    const double t = clamp_cos(p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3]);
    const double theta = std::acos(t);
    if (theta < 1e-14) return 0.0;
    const double s = std::sin(theta);
    // unit tangent from p toward q, then its component along the fiber
    // direction p*i = (-x, w, z, -y)
    double v = 0.0;
    const double vert[4] = {-p[1], p[0], p[3], -p[2]};
    for (int c = 0; c < 4; ++c) v += (q[c] - t * p[c]) / s * vert[c];
    v = clamp_cos(v);
    return theta * std::sqrt(1.0 + (a * a - 1.0) * v * v);
  };

  ManifoldSample total;
  total.space = graph_geodesics(pts, berger, k);
  total.dim = 3;
  total.orientable = true;
  total.label = "berger";
  total.seed = seed;
  total.epsilon = mesh_of(total.space);

  SubmersionSample sub = quotient_metric(total, fibers);
  sub.base.dim = 2;
  sub.base.label = "berger/base";
  return sub;
}

}  // namespace fillrad
