#include "pmconv/randgen.hpp"

#include <algorithm>

namespace pmconv {

using exact::Matrix;

Interval random_half_open(Rng& rng, long long lo, long long hi) {
  long long a = rng.uniform(lo, hi - 1);
  long long b = rng.uniform(a + 1, hi);
  return Interval::half_open(Rat(a), Rat(b));
}

Barcode random_barcode(Rng& rng, size_t max_bars, long long lo, long long hi) {
  Barcode out;
  size_t k = static_cast<size_t>(rng.uniform(0, static_cast<long long>(max_bars)));
  for (size_t i = 0; i < k; ++i) out.add(random_half_open(rng, lo, hi));
  return out;
}

namespace {

Matrix random_invertible(Rng& rng, uint32_t p, size_t n) {
  while (true) {
    Matrix m(p, n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        m.set(i, j, static_cast<uint32_t>(rng.uniform(0, p - 1)));
    if (exact::rank(m) == n) return m;
  }
}

}  // namespace

PersistenceModule random_module(Rng& rng, std::shared_ptr<const Base> base, uint32_t p,
                                size_t max_intervals, bool conjugate) {
  const GridPoset& g = base->grid();
  return random_module_supported(rng, base, p, max_intervals, conjugate, g.lo(), g.hi());
}

PersistenceModule random_module_supported(Rng& rng, std::shared_ptr<const Base> base, uint32_t p,
                                          size_t max_intervals, bool conjugate,
                                          const Point& supp_lo, const Point& supp_hi) {
  if (!base->is_grid()) throw std::invalid_argument("random_module: grid bases only");
  const GridPoset& g = base->grid();
  PersistenceModule out = PersistenceModule::zero(base, p);
  size_t k = static_cast<size_t>(rng.uniform(0, static_cast<long long>(max_intervals)));
  std::vector<std::pair<Point, Point>> rects;
  for (size_t i = 0; i < k; ++i) {
    Point lo(g.dim()), hi(g.dim());
    for (size_t ax = 0; ax < g.dim(); ++ax) {
      lo[ax] = static_cast<int>(rng.uniform(supp_lo[ax], supp_hi[ax]));
      hi[ax] = static_cast<int>(rng.uniform(lo[ax], supp_hi[ax]));
    }
    rects.emplace_back(lo, hi);
  }
  auto alive = [&](const Point& q) {
    std::vector<size_t> ids;
    for (size_t i = 0; i < rects.size(); ++i)
      if (point_leq(rects[i].first, q) && point_leq(q, rects[i].second)) ids.push_back(i);
    return ids;
  };
  for (size_t idx = 0; idx < g.size(); ++idx) out.set_dim(idx, alive(g.point(idx)).size());
  for (auto [idx, ax] : g.covering_edges()) {
    Point from = g.point(idx);
    Point to = from;
    ++to[ax];
    auto af = alive(from), at = alive(to);
    Matrix mat(p, at.size(), af.size());
    for (size_t r = 0; r < at.size(); ++r)
      for (size_t c = 0; c < af.size(); ++c)
        if (at[r] == af[c]) mat.set(r, c, 1);
    out.set_edge_map(idx, g.index(to), std::move(mat));
  }
  if (conjugate) {
    std::vector<Matrix> change(g.size());
    for (size_t idx = 0; idx < g.size(); ++idx)
      change[idx] = random_invertible(rng, p, out.dim_at(idx));
    PersistenceModule twisted = PersistenceModule::zero(base, p);
    for (size_t idx = 0; idx < g.size(); ++idx) twisted.set_dim(idx, out.dim_at(idx));
    for (auto [idx, ax] : g.covering_edges()) {
      Point to = g.point(idx);
      ++to[ax];
      size_t ti = g.index(to);
      Matrix inv = change[idx].rows() ? exact::left_inverse(change[idx]) : Matrix(p, 0, 0);
      twisted.set_edge_map(idx, ti, change[ti].mul(out.edge_map(idx, ti)).mul(inv));
    }
    return twisted;
  }
  return out;
}

MonotoneMap random_monotone_map(Rng& rng, std::shared_ptr<const Base> source,
                                std::shared_ptr<const Base> target) {
  if (!source->is_grid() || !target->is_grid())
    throw std::invalid_argument("random_monotone_map: grid bases only");
  const GridPoset& gs = source->grid();
  const GridPoset& gt = target->grid();
  MonotoneMap f{source, target, std::vector<size_t>(gs.size())};
  // Random draft value per point, monotonized by joining over lower covers.
  std::vector<Point> val(gs.size());
  for (size_t idx = 0; idx < gs.size(); ++idx) {
    Point r(gt.dim());
    for (size_t ax = 0; ax < gt.dim(); ++ax)
      r[ax] = static_cast<int>(rng.uniform(gt.lo()[ax], gt.hi()[ax]));
    Point x = gs.point(idx);
    for (size_t ax = 0; ax < gs.dim(); ++ax) {
      if (x[ax] == gs.lo()[ax]) continue;
      Point below = x;
      --below[ax];
      r = join(r, val[gs.index(below)]);
    }
    val[idx] = r;
    f.assignment[idx] = gt.index(r);
  }
  return f;
}

MonotoneMap random_monotone_from(Rng& rng, std::shared_ptr<const Base> source,
                                 std::shared_ptr<const Base> target) {
  if (!target->is_grid()) throw std::invalid_argument("random_monotone_from: grid target only");
  const GridPoset& gt = target->grid();
  size_t n = source->size();
  std::vector<Point> val(n);
  for (size_t e = 0; e < n; ++e) {
    Point r(gt.dim());
    for (size_t ax = 0; ax < gt.dim(); ++ax)
      r[ax] = static_cast<int>(rng.uniform(gt.lo()[ax], gt.hi()[ax]));
    val[e] = r;
  }
  // Join-closure over the relation; values only grow and stay in the box.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        if (a == b || !source->leq(a, b)) continue;
        Point j = join(val[b], val[a]);
        if (j != val[b]) {
          val[b] = j;
          changed = true;
        }
      }
  }
  MonotoneMap f{source, target, std::vector<size_t>(n)};
  for (size_t e = 0; e < n; ++e) f.assignment[e] = gt.index(val[e]);
  return f;
}

SimplicialComplex random_complex(Rng& rng, size_t n_vertices, size_t max_simplices) {
  SimplicialComplex k;
  std::vector<std::vector<size_t>> have;
  for (size_t v = 0; v < n_vertices; ++v) have.push_back({v});
  auto contains = [&](const std::vector<size_t>& s) {
    return std::find(have.begin(), have.end(), s) != have.end();
  };
  size_t attempts = 4 * max_simplices;
  while (have.size() < max_simplices && attempts-- > 0) {
    size_t dim = rng.chance(0.6) ? 1 : 2;
    std::vector<size_t> s;
    while (s.size() < dim + 1) {
      size_t v = static_cast<size_t>(rng.uniform(0, static_cast<long long>(n_vertices - 1)));
      if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
    }
    std::sort(s.begin(), s.end());
    if (contains(s)) continue;
    if (s.size() == 3) {
      // All edges must be present before the triangle goes in.
      bool ok = true;
      for (size_t skip = 0; skip < 3 && ok; ++skip) {
        std::vector<size_t> e;
        for (size_t i = 0; i < 3; ++i)
          if (i != skip) e.push_back(s[i]);
        if (!contains(e)) ok = false;
      }
      if (!ok) continue;
    }
    have.push_back(s);
  }
  k.simplices = std::move(have);
  k.validate();
  return k;
}

}  // namespace pmconv
