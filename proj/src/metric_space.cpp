#include "fillrad/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace fillrad {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NonfiniteEntry: return "NonfiniteEntry";
    case Errc::AsymmetricInput: return "AsymmetricInput";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NonpositiveScale: return "NonpositiveScale";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::BadGrid: return "BadGrid";
    case Errc::QuotientNotMetric: return "QuotientNotMetric";
    case Errc::EmptyOrbit: return "EmptyOrbit";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::SimplexBudgetExceeded: return "SimplexBudgetExceeded";
    case Errc::IndexRangeExceeded: return "IndexRangeExceeded";
    case Errc::NoDominantBar: return "NoDominantBar";
    case Errc::DeathAtThreshold: return "DeathAtThreshold";
    case Errc::EmptyVicinity: return "EmptyVicinity";
    case Errc::StrictlyCloserPoint: return "StrictlyCloserPoint";
    case Errc::DimensionNotExceeded: return "DimensionNotExceeded";
    case Errc::NonpositiveInjectivityRadius: return "NonpositiveInjectivityRadius";
    case Errc::IoError: return "IoError";
    case Errc::BadArguments: return "BadArguments";
  }
  return "Unknown";
}

FiniteMetricSpace FiniteMetricSpace::trusted(RawMatrix raw) {
  FiniteMetricSpace s;
  s.n_ = raw.n;
  s.d_ = std::move(raw.d);
  s.max_d_ = s.d_.empty() ? 0.0 : *std::max_element(s.d_.begin(), s.d_.end());
  return s;
}

FiniteMetricSpace validate_metric(const RawMatrix& raw, double slack) {
  const int n = raw.n;
  if (n < 1 || raw.d.size() != static_cast<size_t>(n) * n)
    throw Error(Errc::NotSquare, "matrix is not square (n=" + std::to_string(n) +
                                     ", entries=" + std::to_string(raw.d.size()) + ")");
  for (size_t idx = 0; idx < raw.d.size(); ++idx)
    if (!std::isfinite(raw.d[idx]))
      throw Error(Errc::NonfiniteEntry, "entry " + std::to_string(idx) + " is not finite");

  for (int i = 0; i < n; ++i) {
    if (raw.at(i, i) != 0.0)
      throw Error(Errc::NonzeroDiagonal, "d[" + std::to_string(i) + "][" + std::to_string(i) + "] != 0",
                  {{"i", std::to_string(i)}});
    for (int j = i + 1; j < n; ++j) {
      if (raw.at(i, j) != raw.at(j, i))
        throw Error(Errc::AsymmetricInput,
                    "d[" + std::to_string(i) + "][" + std::to_string(j) + "] != d[" +
                        std::to_string(j) + "][" + std::to_string(i) + "]",
                    {{"i", std::to_string(i)}, {"j", std::to_string(j)}});
      if (!(raw.at(i, j) > 0.0))
        throw Error(Errc::DuplicatePoint,
                    "points " + std::to_string(i) + " and " + std::to_string(j) +
                        " are at distance " + std::to_string(raw.at(i, j)),
                    {{"i", std::to_string(i)}, {"j", std::to_string(j)}});
    }
  }

  // Full triangle sweep; keep the worst violating triple (d[i][k] > d[i][j] + d[j][k]).
  // Threads keep local worsts; the merge below is order-independent.
  double worst = 0.0;
  int wi = -1, wj = -1, wk = -1;
#pragma omp parallel
  {
    double lworst = 0.0;
    int li = -1, lj = -1, lk = -1;
#pragma omp for schedule(static) nowait
    for (int i = 0; i < n; ++i) {
      const double* di = raw.d.data() + static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double* dj = raw.d.data() + static_cast<size_t>(j) * n;
        const double dij = di[j];
        for (int k = 0; k < n; ++k) {
          const double gap = di[k] - (dij + dj[k]);
          if (gap > lworst) {  // lex order of the scan keeps the first triple on ties
            lworst = gap;
            li = i; lj = j; lk = k;
          }
        }
      }
    }
#pragma omp critical
    {
      if (lworst > worst || (lworst == worst && lworst > 0.0 &&
                             std::tuple(li, lj, lk) < std::tuple(wi, wj, wk))) {
        worst = lworst;
        wi = li; wj = lj; wk = lk;
      }
    }
  }
  if (worst > slack)
    throw Error(Errc::TriangleViolation,
                "d[" + std::to_string(wi) + "][" + std::to_string(wk) + "] exceeds d[" +
                    std::to_string(wi) + "][" + std::to_string(wj) + "] + d[" + std::to_string(wj) +
                    "][" + std::to_string(wk) + "] by " + std::to_string(worst),
                {{"i", std::to_string(wi)},
                 {"j", std::to_string(wj)},
                 {"k", std::to_string(wk)},
                 {"excess", std::to_string(worst)}});

  return FiniteMetricSpace::trusted(RawMatrix{n, raw.d});
}

FiniteMetricSpace scale_metric(const FiniteMetricSpace& space, double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(Errc::NonpositiveScale, "scale must be positive, got " + std::to_string(c));
  RawMatrix out = space.raw();
  for (double& v : out.d) v *= c;
  return FiniteMetricSpace::trusted(std::move(out));
}

double sup_distance(const AmbientFunction& f, const AmbientFunction& g) {
  if (f.size() != g.size())
    throw Error(Errc::LengthMismatch, "sup_distance over lengths " + std::to_string(f.size()) +
                                          " and " + std::to_string(g.size()));
  double m = 0.0;
  for (size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

KuratowskiFrame kuratowski_embed(const FiniteMetricSpace& space) { return KuratowskiFrame(space); }

VicinitySet vicinity_set(const KuratowskiFrame& frame, const AmbientFunction& f, double R) {
  if (f.size() != static_cast<size_t>(frame.size()))
    throw Error(Errc::LengthMismatch, "function length " + std::to_string(f.size()) +
                                          " vs sample size " + std::to_string(frame.size()));
  if (!(R >= 0.0))
    throw Error(Errc::BadArguments, "vicinity radius must be nonnegative");
  VicinitySet v{f, R, {}};
  for (int i = 0; i < frame.size(); ++i) {
    auto row = frame.vector(i);
    double s = 0.0;
    for (size_t z = 0; z < f.size(); ++z) s = std::max(s, std::abs(f[z] - row[z]));
    if (s <= R) v.members.push_back(i);
  }
  return v;
}

}  // namespace fillrad
