#include "fillrad/filtration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace fillrad {

BinomialTable::BinomialTable(int n, int kmax) : n_(n), kmax_(kmax) {
  c_.assign(static_cast<size_t>(n + 1) * (kmax + 1), 0);
  for (int m = 0; m <= n; ++m) {
    c_[static_cast<size_t>(m) * (kmax_ + 1)] = 1;
    for (int j = 1; j <= std::min(m, kmax_); ++j) {
      const std::uint64_t a = (*this)(m - 1, j - 1);
      const std::uint64_t b = (*this)(m - 1, j);
      c_[static_cast<size_t>(m) * (kmax_ + 1) + j] = a + b;
    }
  }
}

std::uint64_t lex_rank(const BinomialTable& binom, int n, std::span<const std::uint16_t> verts) {
  // Hockey-stick form of the standard combinatorial ranking: tuples starting
  // below verts[t] at slot t, given the prefix, contribute
  // C(n-1-prev, k-t) - C(n-verts[t], k-t) with k = verts.size().
  const int k = static_cast<int>(verts.size());
  std::uint64_t rank = 0;
  int prev = -1;
  for (int t = 0; t < k; ++t) {
    rank += binom(n - 1 - prev, k - t) - binom(n - verts[t], k - t);
    prev = verts[t];
  }
  return rank;
}

void lex_unrank(const BinomialTable& binom, int n, std::uint64_t rank,
                std::span<std::uint16_t> verts) {
  const int k = static_cast<int>(verts.size());
  int prev = -1;
  for (int t = 0; t < k; ++t) {
    int v = prev + 1;
    // Number of tuples whose slot-t coordinate is exactly v, given the prefix,
    // is C(n-1-v, k-t-1); advance while rank points past them.
    while (true) {
      const std::uint64_t here = binom(n - 1 - v, k - t - 1);
      if (rank < here) break;
      rank -= here;
      ++v;
    }
    verts[t] = static_cast<std::uint16_t>(v);
    prev = v;
  }
}

std::uint64_t Filtration::size() const {
  std::uint64_t s = 0;
  for (const auto& k : keys) s += k.size();
  return s;
}

namespace {

struct NeighborBits {
  int n = 0, words = 0;
  std::vector<std::uint64_t> bits;  // n rows of `words` words

  const std::uint64_t* row(int i) const { return bits.data() + static_cast<size_t>(i) * words; }
};

NeighborBits adjacency(const FiniteMetricSpace& space, double threshold) {
  NeighborBits nb;
  nb.n = space.size();
  nb.words = (nb.n + 63) / 64;
  nb.bits.assign(static_cast<size_t>(nb.n) * nb.words, 0);
  for (int i = 0; i < nb.n; ++i) {
    auto* r = nb.bits.data() + static_cast<size_t>(i) * nb.words;
    auto di = space.row(i);
    for (int j = 0; j < nb.n; ++j)
      if (j != i && di[j] <= threshold) r[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
  return nb;
}

std::uint64_t count_from(const std::uint64_t* row, int words, int from) {
  std::uint64_t c = 0;
  int w = from >> 6;
  if (w >= words) return 0;
  c += std::popcount(row[w] & (~std::uint64_t{0} << (from & 63)));
  for (++w; w < words; ++w) c += std::popcount(row[w]);
  return c;
}

template <class F>
void for_bits_from(const std::uint64_t* row, int words, int from, F&& f) {
  int w = from >> 6;
  if (w >= words) return;
  std::uint64_t cur = row[w] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    while (cur) {
      const int b = std::countr_zero(cur);
      cur &= cur - 1;
      f((w << 6) + b);
    }
    if (++w >= words) return;
    cur = row[w];
  }
}

void intersect(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, int words) {
  for (int w = 0; w < words; ++w) out[w] = a[w] & b[w];
}

/// Per-start-vertex simplex counts for dimensions 1..maxdim.
void count_for_vertex(const NeighborBits& nb, int maxdim, int i, std::uint64_t* out,
                      std::vector<std::uint64_t>& buf2, std::vector<std::uint64_t>& buf3,
                      std::vector<std::uint64_t>& buf4) {
  const int W = nb.words;
  out[0] = count_from(nb.row(i), W, i + 1);
  if (maxdim < 2) return;
  for_bits_from(nb.row(i), W, i + 1, [&](int j) {
    intersect(nb.row(i), nb.row(j), buf2.data(), W);
    out[1] += count_from(buf2.data(), W, j + 1);
    if (maxdim < 3) return;
    for_bits_from(buf2.data(), W, j + 1, [&](int k) {
      intersect(buf2.data(), nb.row(k), buf3.data(), W);
      out[2] += count_from(buf3.data(), W, k + 1);
      if (maxdim < 4) return;
      for_bits_from(buf3.data(), W, k + 1, [&](int m) {
        intersect(buf3.data(), nb.row(m), buf4.data(), W);
        out[3] += count_from(buf4.data(), W, m + 1);
      });
    });
  });
}

struct ValueTable {
  std::vector<double> values;             // unique simplex values, values[0] == 0
  std::vector<std::uint32_t> pair_id;     // n*n, sentinel for pairs beyond threshold
};

ValueTable make_value_table(const FiniteMetricSpace& space, double threshold) {
  const int n = space.size();
  ValueTable t;
  std::vector<double> uniq;
  uniq.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (space(i, j) <= threshold) uniq.push_back(space(i, j));
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  t.values.reserve(uniq.size() + 1);
  t.values.push_back(0.0);
  t.values.insert(t.values.end(), uniq.begin(), uniq.end());

  t.pair_id.assign(static_cast<size_t>(n) * n, std::uint32_t(-1));
  for (int i = 0; i < n; ++i) {
    t.pair_id[static_cast<size_t>(i) * n + i] = 0;
    for (int j = i + 1; j < n; ++j) {
      const double d = space(i, j);
      if (d > threshold) continue;
      const auto it = std::lower_bound(uniq.begin(), uniq.end(), d);
      const auto id = static_cast<std::uint32_t>(it - uniq.begin()) + 1;
      t.pair_id[static_cast<size_t>(i) * n + j] = id;
      t.pair_id[static_cast<size_t>(j) * n + i] = id;
    }
  }
  return t;
}

void check_limits(const FiniteMetricSpace& space, int maxdim, double threshold,
                  std::uint64_t n_values) {
  if (maxdim < 1 || maxdim > 4)
    throw Error(Errc::BadArguments, "maxdim must be in [1,4], got " + std::to_string(maxdim));
  if (!(threshold > 0))
    throw Error(Errc::BadArguments, "threshold must be positive");
  BinomialTable guard(space.size(), maxdim + 1);
  if (guard(space.size(), maxdim + 1) > kRankMask)
    throw Error(Errc::IndexRangeExceeded,
                "C(n, maxdim+1) exceeds the 42-bit rank range (n=" +
                    std::to_string(space.size()) + ", maxdim=" + std::to_string(maxdim) + ")");
  if (n_values >= (std::uint64_t{1} << (64 - kRankBits)))
    throw Error(Errc::IndexRangeExceeded, "too many distinct distance values");
}

/// Stable counting sort of (keys, verts) by value id; input is lex-rank
/// ascending, so the output realizes the (value, lex vertices) order.
void counting_sort_dim(std::vector<std::uint64_t>& keys, std::vector<std::uint16_t>& verts,
                       int vcount, std::uint32_t n_values) {
  const size_t cnt = keys.size();
  std::vector<std::uint64_t> off(n_values + 1, 0);
  for (const auto k : keys) ++off[Filtration::value_id_of(k) + 1];
  std::partial_sum(off.begin(), off.end(), off.begin());
  std::vector<std::uint64_t> out_keys(cnt);
  std::vector<std::uint16_t> out_verts(verts.size());
  for (size_t s = 0; s < cnt; ++s) {
    const auto vid = Filtration::value_id_of(keys[s]);
    const auto p = off[vid]++;
    out_keys[p] = keys[s];
    std::copy_n(verts.begin() + s * vcount, vcount, out_verts.begin() + p * vcount);
  }
  keys.swap(out_keys);
  verts.swap(out_verts);
}

}  // namespace

std::uint64_t count_vr_simplices(const FiniteMetricSpace& space, int maxdim, double threshold) {
  check_limits(space, maxdim, threshold, 1);
  const NeighborBits nb = adjacency(space, threshold);
  const int n = space.size();
  std::uint64_t total = n;
#pragma omp parallel reduction(+ : total)
  {
    std::vector<std::uint64_t> buf2(nb.words), buf3(nb.words), buf4(nb.words);
#pragma omp for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
      std::uint64_t cnt[4] = {0, 0, 0, 0};
      count_for_vertex(nb, maxdim, i, cnt, buf2, buf3, buf4);
      total += cnt[0] + cnt[1] + cnt[2] + cnt[3];
    }
  }
  return total;
}

namespace {

Filtration build_impl(const FiniteMetricSpace& space, int maxdim, double threshold,
                      std::uint64_t budget, bool parallel_fill) {
  const int n = space.size();
  ValueTable vt = make_value_table(space, threshold);
  check_limits(space, maxdim, threshold, vt.values.size());

  const NeighborBits nb = adjacency(space, threshold);

  // Pass 1: per-vertex counts, prefix offsets, budget check.
  std::vector<std::uint64_t> per_vertex(static_cast<size_t>(n) * 4, 0);
  {
    std::vector<std::uint64_t> buf2(nb.words), buf3(nb.words), buf4(nb.words);
    for (int i = 0; i < n; ++i)
      count_for_vertex(nb, maxdim, i, per_vertex.data() + static_cast<size_t>(i) * 4, buf2, buf3,
                       buf4);
  }
  std::uint64_t dim_total[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < 4; ++d) dim_total[d] += per_vertex[static_cast<size_t>(i) * 4 + d];
  std::uint64_t total = n;
  for (int d = 0; d < 4; ++d) total += dim_total[d];
  if (total > budget)
    throw Error(Errc::SimplexBudgetExceeded,
                std::to_string(total) + " simplices exceed the budget of " + std::to_string(budget),
                {{"count", std::to_string(total)}, {"budget", std::to_string(budget)}});

  Filtration f;
  f.n = n;
  f.maxdim = maxdim;
  f.threshold = threshold;
  f.values = std::move(vt.values);
  f.pair_value_id = std::move(vt.pair_id);
  f.binom = BinomialTable(n, maxdim + 1);
  f.keys.resize(maxdim + 1);
  f.verts.resize(maxdim + 1);

  f.keys[0].resize(n);
  f.verts[0].resize(n);
  for (int i = 0; i < n; ++i) {
    f.keys[0][i] = Filtration::pack(0, i);
    f.verts[0][i] = static_cast<std::uint16_t>(i);
  }
  for (int d = 1; d <= maxdim; ++d) {
    f.keys[d].resize(dim_total[d - 1]);
    f.verts[d].resize(dim_total[d - 1] * (d + 1));
  }

  // Per-vertex write offsets from the prefix sums.
  std::vector<std::uint64_t> offs(static_cast<size_t>(n) * 4, 0);
  {
    std::uint64_t run[4] = {0, 0, 0, 0};
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 4; ++d) {
        offs[static_cast<size_t>(i) * 4 + d] = run[d];
        run[d] += per_vertex[static_cast<size_t>(i) * 4 + d];
      }
  }

  const auto pid = [&](int a, int b) {
    return f.pair_value_id[static_cast<size_t>(a) * n + b];
  };

  // Pass 2: enumerate in ascending vertex-tuple order into disjoint slices.
  const int W = nb.words;
#pragma omp parallel if (parallel_fill)
  {
    std::vector<std::uint64_t> buf2(W), buf3(W), buf4(W);
#pragma omp for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
      std::uint64_t at[4];
      for (int d = 0; d < 4; ++d) at[d] = offs[static_cast<size_t>(i) * 4 + d];
      std::uint16_t tv[5];
      tv[0] = static_cast<std::uint16_t>(i);
      for_bits_from(nb.row(i), W, i + 1, [&](int j) {
        tv[1] = static_cast<std::uint16_t>(j);
        const std::uint32_t vid_ij = pid(i, j);
        const std::uint64_t rank = lex_rank(f.binom, n, std::span(tv, 2));
        f.keys[1][at[0]] = Filtration::pack(vid_ij, rank);
        std::copy_n(tv, 2, f.verts[1].begin() + at[0] * 2);
        ++at[0];
        if (maxdim < 2) return;
        intersect(nb.row(i), nb.row(j), buf2.data(), W);
        for_bits_from(buf2.data(), W, j + 1, [&](int k) {
          tv[2] = static_cast<std::uint16_t>(k);
          const std::uint32_t vid_ijk = std::max({vid_ij, pid(i, k), pid(j, k)});
          f.keys[2][at[1]] = Filtration::pack(vid_ijk, lex_rank(f.binom, n, std::span(tv, 3)));
          std::copy_n(tv, 3, f.verts[2].begin() + at[1] * 3);
          ++at[1];
          if (maxdim < 3) return;
          intersect(buf2.data(), nb.row(k), buf3.data(), W);
          for_bits_from(buf3.data(), W, k + 1, [&](int m) {
            tv[3] = static_cast<std::uint16_t>(m);
            const std::uint32_t vid4 = std::max({vid_ijk, pid(i, m), pid(j, m), pid(k, m)});
            f.keys[3][at[2]] = Filtration::pack(vid4, lex_rank(f.binom, n, std::span(tv, 4)));
            std::copy_n(tv, 4, f.verts[3].begin() + at[2] * 4);
            ++at[2];
            if (maxdim < 4) return;
            intersect(buf3.data(), nb.row(m), buf4.data(), W);
            for_bits_from(buf4.data(), W, m + 1, [&](int q) {
              tv[4] = static_cast<std::uint16_t>(q);
              const std::uint32_t vid5 =
                  std::max({vid4, pid(i, q), pid(j, q), pid(k, q), pid(m, q)});
              f.keys[4][at[3]] = Filtration::pack(vid5, lex_rank(f.binom, n, std::span(tv, 5)));
              std::copy_n(tv, 5, f.verts[4].begin() + at[3] * 5);
              ++at[3];
            });
          });
        });
      });
    }
  }

  for (int d = 1; d <= maxdim; ++d)
    counting_sort_dim(f.keys[d], f.verts[d], d + 1, static_cast<std::uint32_t>(f.values.size()));
  return f;
}

}  // namespace

Filtration build_vr_filtration(const FiniteMetricSpace& space, int maxdim, double threshold,
                               std::uint64_t budget) {
  return build_impl(space, maxdim, threshold, budget, true);
}

Filtration build_vr_filtration_naive(const FiniteMetricSpace& space, int maxdim, double threshold,
                                     std::uint64_t budget) {
  const int n = space.size();
  ValueTable vt = make_value_table(space, threshold);
  check_limits(space, maxdim, threshold, vt.values.size());

  Filtration f;
  f.n = n;
  f.maxdim = maxdim;
  f.threshold = threshold;
  f.values = std::move(vt.values);
  f.pair_value_id = std::move(vt.pair_id);
  f.binom = BinomialTable(n, maxdim + 1);
  f.keys.resize(maxdim + 1);
  f.verts.resize(maxdim + 1);

  for (int i = 0; i < n; ++i) {
    f.keys[0].push_back(Filtration::pack(0, i));
    f.verts[0].push_back(static_cast<std::uint16_t>(i));
  }

  std::uint64_t total = n;
  std::vector<std::uint16_t> tuple(maxdim + 1);
  const auto emit = [&](int d, std::uint32_t vid) {
    if (++total > budget)
      throw Error(Errc::SimplexBudgetExceeded,
                  "more than " + std::to_string(budget) + " simplices");
    f.keys[d].push_back(Filtration::pack(vid, lex_rank(f.binom, n, std::span(tuple.data(), d + 1))));
    f.verts[d].insert(f.verts[d].end(), tuple.begin(), tuple.begin() + d + 1);
  };
  const auto pid = [&](int a, int b) { return f.pair_value_id[static_cast<size_t>(a) * n + b]; };

  for (int i = 0; i < n; ++i) {
    tuple[0] = static_cast<std::uint16_t>(i);
    for (int j = i + 1; j < n; ++j) {
      if (space(i, j) > threshold) continue;
      tuple[1] = static_cast<std::uint16_t>(j);
      emit(1, pid(i, j));
      if (maxdim < 2) continue;
      for (int k = j + 1; k < n; ++k) {
        if (space(i, k) > threshold || space(j, k) > threshold) continue;
        tuple[2] = static_cast<std::uint16_t>(k);
        const std::uint32_t v3 = std::max({pid(i, j), pid(i, k), pid(j, k)});
        emit(2, v3);
        if (maxdim < 3) continue;
        for (int m = k + 1; m < n; ++m) {
          if (space(i, m) > threshold || space(j, m) > threshold || space(k, m) > threshold)
            continue;
          tuple[3] = static_cast<std::uint16_t>(m);
          const std::uint32_t v4 = std::max({v3, pid(i, m), pid(j, m), pid(k, m)});
          emit(3, v4);
          if (maxdim < 4) continue;
          for (int q = m + 1; q < n; ++q) {
            if (space(i, q) > threshold || space(j, q) > threshold || space(k, q) > threshold ||
                space(m, q) > threshold)
              continue;
            tuple[4] = static_cast<std::uint16_t>(q);
            emit(4, std::max({v4, pid(i, q), pid(j, q), pid(k, q), pid(m, q)}));
          }
        }
      }
    }
  }

  for (int d = 1; d <= maxdim; ++d) {
    const size_t cnt = f.keys[d].size();
    std::vector<std::uint32_t> perm(cnt);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::uint32_t a, std::uint32_t b) { return f.keys[d][a] < f.keys[d][b]; });
    std::vector<std::uint64_t> keys(cnt);
    std::vector<std::uint16_t> verts(cnt * (d + 1));
    for (size_t s = 0; s < cnt; ++s) {
      keys[s] = f.keys[d][perm[s]];
      std::copy_n(f.verts[d].begin() + static_cast<size_t>(perm[s]) * (d + 1), d + 1,
                  verts.begin() + s * (d + 1));
    }
    f.keys[d].swap(keys);
    f.verts[d].swap(verts);
  }
  return f;
}

}  // namespace fillrad
