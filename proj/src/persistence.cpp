#include "fillrad/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace fillrad {

namespace {

/// Open-addressing map from row position to stored-column slot.
/// Keys are offset by one internally; 0 marks an empty cell.
class PivotMap {
 public:
  explicit PivotMap(size_t expected) {
    size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    table_.assign(cap, {0, 0});
    mask_ = cap - 1;
  }

  std::optional<std::uint32_t> find(std::uint32_t row) const {
    const std::uint64_t k = static_cast<std::uint64_t>(row) + 1;
    for (size_t h = hash(k);; h = (h + 1) & mask_) {
      if (table_[h].first == 0) return std::nullopt;
      if (table_[h].first == k) return table_[h].second;
    }
  }

  void insert(std::uint32_t row, std::uint32_t slot) {
    if (++size_ * 2 > table_.size()) grow();
    place(static_cast<std::uint64_t>(row) + 1, slot);
  }

 private:
  size_t hash(std::uint64_t k) const { return (k * 0x9e3779b97f4a7c15ull) & mask_; }

  void place(std::uint64_t k, std::uint32_t slot) {
    for (size_t h = hash(k);; h = (h + 1) & mask_) {
      if (table_[h].first == 0) {
        table_[h] = {k, slot};
        return;
      }
    }
  }

  void grow() {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> old;
    old.swap(table_);
    table_.assign(old.size() * 2, {0, 0});
    mask_ = table_.size() - 1;
    for (const auto& [k, s] : old)
      if (k != 0) place(k, s);
  }

  std::vector<std::pair<std::uint64_t, std::uint32_t>> table_;
  size_t mask_ = 0;
  size_t size_ = 0;
};

/// Working column as a max-heap of row positions with lazy mod-2
/// cancellation: equal entries annihilate when popped.
std::optional<std::uint32_t> pop_pivot(std::vector<std::uint32_t>& heap) {
  while (!heap.empty()) {
    const std::uint32_t top = heap.front();
    std::pop_heap(heap.begin(), heap.end());
    heap.pop_back();
    if (!heap.empty() && heap.front() == top) {
      std::pop_heap(heap.begin(), heap.end());
      heap.pop_back();
      continue;
    }
    return top;
  }
  return std::nullopt;
}

void heap_push(std::vector<std::uint32_t>& heap, std::uint32_t v) {
  heap.push_back(v);
  std::push_heap(heap.begin(), heap.end());
}

void sort_barcode(Barcode& bc) {
  std::sort(bc.pairs.begin(), bc.pairs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dim, a.birth, a.death) < std::tie(b.dim, b.birth, b.death);
  });
  std::sort(bc.essentials.begin(), bc.essentials.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dim, a.birth) < std::tie(b.dim, b.birth);
  });
}

}  // namespace

Barcode reduce(const Filtration& f) {
  Barcode bc;
  bc.maxdim_homology = f.maxdim - 1;
  bc.threshold = f.threshold;
  bc.simplex_count = f.size();

  const int n = f.n;
  std::vector<char> cleared;  // over columns of the current dimension
  std::vector<std::uint32_t> heap;
  std::vector<std::uint16_t> face(f.maxdim + 1);

  for (int d = f.maxdim; d >= 1; --d) {
    const auto& cols = f.keys[d];
    const auto& rows = f.keys[d - 1];
    std::vector<char> cleared_next(rows.size(), 0);

    PivotMap owner(cols.size() / 2 + 16);
    std::vector<std::uint32_t> entries;   // arena of stored reduced columns
    std::vector<std::uint64_t> col_off{0};

    for (size_t c = 0; c < cols.size(); ++c) {
      if (d < f.maxdim && cleared[c]) continue;

      heap.clear();
      const auto verts = f.simplex_vertices(d, c);
      for (int t = 0; t <= d; ++t) {
        int w = 0;
        for (int s = 0; s <= d; ++s)
          if (s != t) face[w++] = verts[s];
        std::uint32_t vid = 0;
        for (int x = 0; x < d; ++x)
          for (int y = x + 1; y < d; ++y) vid = std::max(vid, f.edge_value_id(face[x], face[y]));
        const std::uint64_t key = Filtration::pack(vid, lex_rank(f.binom, n, std::span(face.data(), static_cast<size_t>(d))));
        const auto it = std::lower_bound(rows.begin(), rows.end(), key);
        heap_push(heap, static_cast<std::uint32_t>(it - rows.begin()));
      }

      while (true) {
        const auto pivot = pop_pivot(heap);
        if (!pivot) {
          if (d <= f.maxdim - 1)
            bc.essentials.push_back({d, f.value_of(cols[c])});
          else
            ++bc.top_dim_unpaired;
          break;
        }
        if (const auto slot = owner.find(*pivot)) {
          for (std::uint64_t e = col_off[*slot]; e < col_off[*slot + 1]; ++e)
            heap_push(heap, entries[e]);
          continue;
        }
        // New pivot: record the pair and store the column remainder.
        const auto birth_vid = Filtration::value_id_of(rows[*pivot]);
        const auto death_vid = Filtration::value_id_of(cols[c]);
        if (birth_vid == death_vid)
          ++bc.dropped_zero_bars;
        else
          bc.pairs.push_back({d - 1, f.values[birth_vid], f.values[death_vid]});
        cleared_next[*pivot] = 1;
        while (const auto rest = pop_pivot(heap)) entries.push_back(*rest);
        col_off.push_back(entries.size());
        owner.insert(*pivot, static_cast<std::uint32_t>(col_off.size() - 2));
        break;
      }
    }
    cleared = std::move(cleared_next);
  }

  // Vertices never cleared by the edge round are essential components.
  for (int i = 0; i < n; ++i)
    if (!cleared[i]) bc.essentials.push_back({0, 0.0});

  sort_barcode(bc);
  return bc;
}

Barcode reduce_naive(const Filtration& f) {
  Barcode bc;
  bc.maxdim_homology = f.maxdim - 1;
  bc.threshold = f.threshold;
  bc.simplex_count = f.size();

  struct Entry {
    std::uint64_t key;
    int dim;
    std::uint64_t pos;
  };
  std::vector<Entry> order;
  order.reserve(bc.simplex_count);
  for (int d = 0; d <= f.maxdim; ++d)
    for (std::uint64_t p = 0; p < f.keys[d].size(); ++p) order.push_back({f.keys[d][p], d, p});
  std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    return std::tuple(Filtration::value_id_of(a.key), a.dim, Filtration::rank_of(a.key)) <
           std::tuple(Filtration::value_id_of(b.key), b.dim, Filtration::rank_of(b.key));
  });

  const std::uint64_t N = order.size();
  std::vector<std::vector<std::uint64_t>> global_of(f.maxdim + 1);
  for (int d = 0; d <= f.maxdim; ++d) global_of[d].resize(f.keys[d].size());
  for (std::uint64_t g = 0; g < N; ++g) global_of[order[g].dim][order[g].pos] = g;

  std::vector<std::vector<std::uint64_t>> R(N);
  std::vector<std::int64_t> owner_of_row(N, -1);
  std::vector<char> positive(N, 0);

  const int n = f.n;
  std::vector<std::uint16_t> face(f.maxdim + 1);
  std::vector<std::uint64_t> col, scratch;

  for (std::uint64_t g = 0; g < N; ++g) {
    const auto [key, dim, pos] = order[g];
    if (dim == 0) {
      positive[g] = 1;
      continue;
    }
    col.clear();
    const auto verts = f.simplex_vertices(dim, pos);
    for (int t = 0; t <= dim; ++t) {
      int w = 0;
      for (int s = 0; s <= dim; ++s)
        if (s != t) face[w++] = verts[s];
      std::uint32_t vid = 0;
      for (int x = 0; x < dim; ++x)
        for (int y = x + 1; y < dim; ++y) vid = std::max(vid, f.edge_value_id(face[x], face[y]));
      const std::uint64_t fkey =
          Filtration::pack(vid, lex_rank(f.binom, n, std::span(face.data(), static_cast<size_t>(dim))));
      const auto& rowkeys = f.keys[dim - 1];
      const auto it = std::lower_bound(rowkeys.begin(), rowkeys.end(), fkey);
      col.push_back(global_of[dim - 1][static_cast<std::uint64_t>(it - rowkeys.begin())]);
    }
    std::sort(col.begin(), col.end());

    while (!col.empty()) {
      const std::uint64_t low = col.back();
      if (owner_of_row[low] < 0) break;
      const auto& other = R[owner_of_row[low]];
      scratch.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch));
      col.swap(scratch);
    }
    if (col.empty()) {
      positive[g] = 1;
    } else {
      const std::uint64_t low = col.back();
      owner_of_row[low] = static_cast<std::int64_t>(g);
      R[g] = col;
      const auto birth_vid = Filtration::value_id_of(order[low].key);
      const auto death_vid = Filtration::value_id_of(key);
      if (birth_vid == death_vid)
        ++bc.dropped_zero_bars;
      else
        bc.pairs.push_back({dim - 1, f.values[birth_vid], f.values[death_vid]});
    }
  }

  for (std::uint64_t g = 0; g < N; ++g) {
    if (!positive[g] || owner_of_row[g] >= 0) continue;
    if (order[g].dim <= f.maxdim - 1)
      bc.essentials.push_back({order[g].dim, f.value_of(order[g].key)});
    else
      ++bc.top_dim_unpaired;
  }

  sort_barcode(bc);
  return bc;
}

namespace {

double resolve_threshold(const ManifoldSample& sample, int maxdim, const EstimateConfig& cfg,
                         std::uint64_t* count_out) {
  const FiniteMetricSpace& space = sample.space;
  if (cfg.r_max) {
    *count_out = count_vr_simplices(space, maxdim, *cfg.r_max);
    if (*count_out > cfg.simplex_budget)
      throw Error(Errc::SimplexBudgetExceeded,
                  std::to_string(*count_out) + " simplices at r_max=" + std::to_string(*cfg.r_max) +
                      " exceed the budget of " + std::to_string(cfg.simplex_budget));
    return *cfg.r_max;
  }
  const double diam = sample.diam_true.value_or(space.max_distance());
  double upper = diam / 3.0;  // Katz
  if (cfg.upper_bound) upper = std::min(upper, *cfg.upper_bound);
  const double cap = 1.1 * 2.0 * upper;

  double t = cap;
  for (int j = 0;; ++j) {
    if (j > 80)
      throw Error(Errc::SimplexBudgetExceeded, "no threshold fits the simplex budget");
    *count_out = count_vr_simplices(space, maxdim, t);
    if (*count_out <= cfg.simplex_budget) break;
    t *= 0.9;
  }
  return t;
}

}  // namespace

FillRadEstimate estimate_fillrad(const ManifoldSample& sample, int k, const EstimateConfig& cfg) {
  if (k < 1) throw Error(Errc::BadArguments, "homology degree k must be >= 1");
  if (sample.space.size() < 2 || sample.space.max_distance() <= 0)
    throw Error(Errc::NoDominantBar, "sample too small for degree-" + std::to_string(k) +
                                         " homology");
  const int maxdim = k + 1;

  std::uint64_t count = 0;
  const double threshold = resolve_threshold(sample, maxdim, cfg, &count);
  const double diam = sample.diam_true.value_or(sample.space.max_distance());
  double upper = diam / 3.0;
  if (cfg.upper_bound) upper = std::min(upper, *cfg.upper_bound);
  const double cap = cfg.r_max.value_or(1.1 * 2.0 * upper);

  const Filtration f = build_vr_filtration(sample.space, maxdim, threshold, cfg.simplex_budget);
  const Barcode bc = reduce(f);

  for (const auto& e : bc.essentials)
    if (e.dim == k) {
      if (threshold >= cap * (1.0 - 1e-12))
        throw Error(Errc::DeathAtThreshold,
                    "a degree-" + std::to_string(k) + " class born at " + std::to_string(e.birth) +
                        " survives past the threshold " + std::to_string(threshold) +
                        "; increase r_max",
                    {{"birth", std::to_string(e.birth)}, {"threshold", std::to_string(threshold)}});
      throw Error(Errc::SimplexBudgetExceeded,
                  "a degree-" + std::to_string(k) +
                      " class survives past the largest threshold fitting the budget (" +
                      std::to_string(threshold) + ")");
    }

  const PersistencePair* best = nullptr;
  double best_len = 0, second_len = 0;
  for (const auto& p : bc.pairs) {
    if (p.dim != k) continue;
    const double len = p.death - p.birth;
    if (len > best_len) {
      second_len = best_len;
      best_len = len;
      best = &p;
    } else if (len > second_len) {
      second_len = len;
    }
  }
  if (best == nullptr)
    throw Error(Errc::NoDominantBar, "no degree-" + std::to_string(k) + " bars below threshold " +
                                         std::to_string(threshold));
  const double gap = second_len > 0 ? best_len / second_len
                                    : std::numeric_limits<double>::infinity();
  if (gap < cfg.min_gap)
    throw Error(Errc::NoDominantBar,
                "longest degree-" + std::to_string(k) + " bar is not dominant (gap ratio " +
                    std::to_string(gap) + " < " + std::to_string(cfg.min_gap) + ")",
                {{"gap", std::to_string(gap)}});

  FillRadEstimate est;
  est.k = k;
  est.birth = best->birth;
  est.death = best->death;
  est.estimate = best->death / 2.0;
  est.confidence = gap;
  est.threshold = threshold;
  est.simplices = count;
  est.n = sample.space.size();
  return est;
}

ScalingReport scaling_check(const ManifoldSample& sample, double c, int k,
                            const EstimateConfig& cfg) {
  if (!(c > 0)) throw Error(Errc::NonpositiveScale, "scale must be positive");
  const FillRadEstimate base = estimate_fillrad(sample, k, cfg);

  ManifoldSample scaled = sample;
  scaled.space = scale_metric(sample.space, c);
  const auto rescale = [c](std::optional<double>& v) {
    if (v) *v = *v * c;
  };
  rescale(scaled.inj);
  rescale(scaled.diam_true);
  rescale(scaled.fillrad_true);
  if (scaled.delta) *scaled.delta = *scaled.delta / (c * c);
  scaled.epsilon = sample.epsilon * c;
  EstimateConfig scfg = cfg;
  if (scfg.r_max) *scfg.r_max = *scfg.r_max * c;
  if (scfg.upper_bound) *scfg.upper_bound = *scfg.upper_bound * c;
  const FillRadEstimate after = estimate_fillrad(scaled, k, scfg);

  ScalingReport rep;
  rep.c = c;
  rep.estimate = base.estimate;
  rep.scaled_estimate = after.estimate;
  rep.relative_error = std::abs(after.estimate - c * base.estimate) / (c * base.estimate);
  rep.pass = rep.relative_error <= 1e-9;
  return rep;
}

}  // namespace fillrad
