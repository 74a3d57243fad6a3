#include "pmconv/distance.hpp"

#include <algorithm>
#include <functional>

#include "pmconv/decompose.hpp"

namespace pmconv {

using exact::Matrix;

namespace {

// ---------------------------------------------------------------------------
// Bottleneck matching
// ---------------------------------------------------------------------------

struct ExpandedBar {
  Endpoint l, r;
};

std::vector<ExpandedBar> expand(const Barcode& b) {
  std::vector<ExpandedBar> out;
  for (const auto& [bar, mult] : b.bars())
    for (size_t i = 0; i < mult; ++i) out.push_back({bar.left, bar.right});
  return out;
}

struct ExtCost {
  bool inf{false};
  Rat v{0};
  bool within(const Rat& eps) const { return !inf && v <= eps; }
};

ExtCost endpoint_gap(const Endpoint& a, const Endpoint& b) {
  if (a.kind != b.kind) return {true, Rat(0)};
  if (a.kind != Endpoint::Kind::Finite) return {false, Rat(0)};
  return {false, rat_abs(a.value - b.value)};
}

ExtCost match_cost(const ExpandedBar& x, const ExpandedBar& y) {
  ExtCost l = endpoint_gap(x.l, y.l), r = endpoint_gap(x.r, y.r);
  if (l.inf || r.inf) return {true, Rat(0)};
  return {false, std::max(l.v, r.v)};
}

ExtCost drop_cost(const ExpandedBar& x) {
  if (x.l.kind != Endpoint::Kind::Finite || x.r.kind != Endpoint::Kind::Finite)
    return {true, Rat(0)};
  return {false, (x.r.value - x.l.value) / 2};
}

struct MatchOutcome {
  bool feasible{false};
  std::vector<std::pair<size_t, size_t>> pairs;
  std::vector<size_t> dropped_a, dropped_b;
};

// Kuhn's augmenting paths on the doubled graph: left = a-bars + b-dummies,
// right = b-bars + a-dummies; feasible iff the matching is perfect.
MatchOutcome run_matching(size_t na, size_t nb,
                          const std::function<bool(size_t, size_t)>& can_match,
                          const std::function<bool(size_t)>& can_drop_a,
                          const std::function<bool(size_t)>& can_drop_b) {
  size_t left = na + nb, right = nb + na;
  std::vector<std::vector<size_t>> adj(left);
  for (size_t i = 0; i < na; ++i) {
    for (size_t j = 0; j < nb; ++j)
      if (can_match(i, j)) adj[i].push_back(j);
    if (can_drop_a(i)) adj[i].push_back(nb + i);
  }
  for (size_t j = 0; j < nb; ++j) {
    size_t dummy = na + j;
    if (can_drop_b(j)) adj[dummy].push_back(j);
    for (size_t i = 0; i < na; ++i) adj[dummy].push_back(nb + i);
  }
  std::vector<long long> match_r(right, -1), match_l(left, -1);
  std::vector<char> seen;
  std::function<bool(size_t)> augment = [&](size_t u) -> bool {
    for (size_t v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_r[v] < 0 || augment(static_cast<size_t>(match_r[v]))) {
        match_r[v] = static_cast<long long>(u);
        match_l[u] = static_cast<long long>(v);
        return true;
      }
    }
    return false;
  };
  size_t matched = 0;
  for (size_t u = 0; u < left; ++u) {
    seen.assign(right, 0);
    if (augment(u)) ++matched;
  }
  MatchOutcome out;
  if (matched != left) return out;
  out.feasible = true;
  for (size_t i = 0; i < na; ++i) {
    size_t v = static_cast<size_t>(match_l[i]);
    if (v < nb)
      out.pairs.emplace_back(i, v);
    else
      out.dropped_a.push_back(i);
  }
  for (size_t j = 0; j < nb; ++j)
    if (match_r[j] >= 0 && static_cast<size_t>(match_r[j]) >= na) out.dropped_b.push_back(j);
  return out;
}

MatchOutcome try_match(const std::vector<ExpandedBar>& a, const std::vector<ExpandedBar>& b,
                       const Rat& eps) {
  return run_matching(
      a.size(), b.size(), [&](size_t i, size_t j) { return match_cost(a[i], b[j]).within(eps); },
      [&](size_t i) { return drop_cost(a[i]).within(eps); },
      [&](size_t j) { return drop_cost(b[j]).within(eps); });
}

}  // namespace

std::string DistanceResult::value_string() const {
  return infinite ? "inf" : format_rational(value);
}

DistanceResult interleaving_distance_barcodes(const Barcode& a, const Barcode& b) {
  std::vector<ExpandedBar> ea = expand(a), eb = expand(b);
  std::vector<Rat> candidates{Rat(0)};
  for (const auto& x : ea) {
    ExtCost d = drop_cost(x);
    if (!d.inf) candidates.push_back(d.v);
  }
  for (const auto& y : eb) {
    ExtCost d = drop_cost(y);
    if (!d.inf) candidates.push_back(d.v);
  }
  for (const auto& x : ea)
    for (const auto& y : eb) {
      ExtCost l = endpoint_gap(x.l, y.l), r = endpoint_gap(x.r, y.r);
      if (!l.inf) candidates.push_back(l.v);
      if (!r.inf) candidates.push_back(r.v);
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  // The optimum lies in the candidate set and feasibility is monotone.
  size_t lo = 0, hi = candidates.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (try_match(ea, eb, candidates[mid]).feasible)
      hi = mid;
    else
      lo = mid + 1;
  }
  DistanceResult out;
  if (lo == candidates.size()) {
    out.infinite = true;
    return out;
  }
  out.value = candidates[lo];
  MatchOutcome mo = try_match(ea, eb, candidates[lo]);
  BarcodeMatching bm;
  bm.epsilon = out.value;
  bm.pairs = std::move(mo.pairs);
  bm.dropped_a = std::move(mo.dropped_a);
  bm.dropped_b = std::move(mo.dropped_b);
  out.matching = std::move(bm);
  return out;
}

// ---------------------------------------------------------------------------
// Grid interleavings
// ---------------------------------------------------------------------------

namespace {

bool triangles_hold(const EpsilonCertificate& c) {
  const PersistenceModule& m = *c.m;
  const PersistenceModule& n = *c.n;
  const GridPoset& g = m.base().grid();
  Point ev(g.dim(), static_cast<int>(c.epsilon));
  Point ev2(g.dim(), static_cast<int>(2 * c.epsilon));
  for (size_t idx = 0; idx < g.size(); ++idx) {
    Point x = g.point(idx);
    Point xm = point_sub(x, ev);
    for (size_t ax = 0; ax < g.dim(); ++ax) {
      Point y = x;
      ++y[ax];
      if (!g.contains(y)) continue;
      Point ym = point_sub(y, ev);
      if (!(n.transition_points(x, y).mul(c.f[idx]) ==
            c.f[g.index(y)].mul(m.transition_points(xm, ym))))
        return false;
      if (!(m.transition_points(x, y).mul(c.g[idx]) ==
            c.g[g.index(y)].mul(n.transition_points(xm, ym))))
        return false;
    }
    // Triangle identities; outside the box the shifted component reads as a
    // zero map of the policy shapes.
    Point x2 = point_sub(x, ev2);
    Matrix f_shift = g.contains(xm)
                         ? c.f[g.index(xm)]
                         : Matrix(m.p(), n.dim_at_point(xm), m.dim_at_point(x2));
    Matrix g_shift = g.contains(xm)
                         ? c.g[g.index(xm)]
                         : Matrix(m.p(), m.dim_at_point(xm), n.dim_at_point(x2));
    if (!(c.g[idx].mul(f_shift) == m.transition_points(x2, x))) return false;
    if (!(c.f[idx].mul(g_shift) == n.transition_points(x2, x))) return false;
  }
  return true;
}

void check_feasibility_inputs(const PersistenceModule& m, const PersistenceModule& n,
                              long long epsilon) {
  if (!m.base().is_grid() || !(m.base() == n.base()) || m.p() != n.p())
    throw std::invalid_argument("interleaving_feasible: modules on one grid required");
  if (epsilon < 0) throw std::invalid_argument("interleaving_feasible: epsilon >= 0 required");
  const GridPoset& g = m.base().grid();
  for (size_t ax = 0; ax < g.dim(); ++ax) {
    if (2 * epsilon > g.hi()[ax] - g.lo()[ax])
      throw std::invalid_argument("interleaving_feasible: epsilon exceeds the window");
    if (m.stabilized_left()[ax] || m.stabilized_right()[ax] || n.stabilized_left()[ax] ||
        n.stabilized_right()[ax])
      throw std::invalid_argument("interleaving_feasible: stabilized modules not supported");
  }
}

size_t position_in(const std::vector<size_t>& list, size_t value) {
  for (size_t i = 0; i < list.size(); ++i)
    if (list[i] == value) return i;
  throw std::logic_error("position_in: value not present");
}

std::optional<EpsilonCertificate> feasible_one_param(const PersistenceModule& m,
                                                     const PersistenceModule& n,
                                                     long long epsilon) {
  Decomposition dm = decompose(m), dn = decompose(n);
  size_t na = dm.bars.size(), nb = dn.bars.size();
  auto birth = [](const BarSummand& b) { return static_cast<long long>(b.birth); };
  auto death = [](const BarSummand& b) { return static_cast<long long>(b.death); };
  MatchOutcome mo = run_matching(
      na, nb,
      [&](size_t i, size_t j) {
        return std::abs(birth(dm.bars[i]) - birth(dn.bars[j])) <= epsilon &&
               std::abs(death(dm.bars[i]) - death(dn.bars[j])) <= epsilon;
      },
      [&](size_t i) { return death(dm.bars[i]) - birth(dm.bars[i]) <= 2 * epsilon; },
      [&](size_t j) { return death(dn.bars[j]) - birth(dn.bars[j]) <= 2 * epsilon; });
  if (!mo.feasible) return std::nullopt;

  const GridPoset& g = m.base().grid();
  const uint32_t p = m.p();
  const long long w = static_cast<long long>(g.size());
  EpsilonCertificate cert;
  cert.epsilon = epsilon;
  cert.m = std::make_shared<PersistenceModule>(m);
  cert.n = std::make_shared<PersistenceModule>(n);
  cert.f.resize(g.size());
  cert.g.resize(g.size());
  // Rank-one block: (column `col` of basis) x (row `row` of inverse).
  auto outer = [&](const Matrix& col_basis, size_t col, const Matrix& row_inv, size_t row,
                   Matrix& into) {
    for (size_t r = 0; r < into.rows(); ++r) {
      uint32_t cb = col_basis.at(r, col);
      if (!cb) continue;
      for (size_t c = 0; c < into.cols(); ++c) {
        uint32_t v = exact::fp_mul(cb, row_inv.at(row, c), p);
        into.set(r, c, exact::fp_add(into.at(r, c), v, p));
      }
    }
  };
  for (long long x = 0; x < w; ++x) {
    long long xs = x - epsilon;
    size_t dim_fs = xs >= 0 ? m.dim_at(static_cast<size_t>(xs)) : 0;
    size_t dim_gs = xs >= 0 ? n.dim_at(static_cast<size_t>(xs)) : 0;
    Matrix fx(p, n.dim_at(static_cast<size_t>(x)), dim_fs);
    Matrix gx(p, m.dim_at(static_cast<size_t>(x)), dim_gs);
    if (xs >= 0) {
      for (auto [i, j] : mo.pairs) {
        const BarSummand& A = dm.bars[i];
        const BarSummand& B = dn.bars[j];
        // Canonical map from A shifted right by eps into B; nonzero only
        // when the shifted support properly overlaps B.
        if (birth(A) <= xs && xs < death(A) && birth(B) <= x && x < death(B) &&
            birth(A) + epsilon < death(B)) {
          size_t row = position_in(dm.alive[static_cast<size_t>(xs)], i);
          size_t col = position_in(dn.alive[static_cast<size_t>(x)], j);
          outer(dn.basis[static_cast<size_t>(x)], col, dm.inverse[static_cast<size_t>(xs)], row,
                fx);
        }
        if (birth(B) <= xs && xs < death(B) && birth(A) <= x && x < death(A) &&
            birth(B) + epsilon < death(A)) {
          size_t row = position_in(dn.alive[static_cast<size_t>(xs)], j);
          size_t col = position_in(dm.alive[static_cast<size_t>(x)], i);
          outer(dm.basis[static_cast<size_t>(x)], col, dn.inverse[static_cast<size_t>(xs)], row,
                gx);
        }
      }
    }
    cert.f[static_cast<size_t>(x)] = std::move(fx);
    cert.g[static_cast<size_t>(x)] = std::move(gx);
  }
  if (!certificate_validate(cert))
    throw std::logic_error("interleaving_feasible: constructed certificate failed validation");
  return cert;
}

constexpr size_t kEnumerationCap = 18;

std::optional<EpsilonCertificate> feasible_multi_param(const PersistenceModule& m,
                                                       const PersistenceModule& n,
                                                       long long epsilon) {
  const GridPoset& g = m.base().grid();
  const uint32_t p = m.p();
  Point ev(g.dim(), static_cast<int>(epsilon));
  Point nev(g.dim(), static_cast<int>(-epsilon));
  PersistenceModule ms = m.shift(nev);  // stalk at x is M_{x-eps}
  PersistenceModule ns = n.shift(nev);
  std::vector<NaturalTransformation> fbasis = hom_basis(ms, n);
  std::vector<NaturalTransformation> gbasis = hom_basis(ns, m);
  // The triangle identities are bilinear in (f, g): enumerate the smaller
  // hom space, solve the remaining affine system for the other side.
  bool enumerate_g = gbasis.size() < fbasis.size();
  const auto& outer_basis = enumerate_g ? gbasis : fbasis;
  const auto& inner_basis = enumerate_g ? fbasis : gbasis;
  if (outer_basis.size() > kEnumerationCap)
    throw std::invalid_argument("interleaving_feasible: hom spaces exceed the enumeration cap");

  Point ev2(g.dim(), static_cast<int>(2 * epsilon));
  std::vector<Matrix> tau_m(g.size()), tau_n(g.size());
  for (size_t idx = 0; idx < g.size(); ++idx) {
    Point x = g.point(idx);
    tau_m[idx] = m.transition_points(point_sub(x, ev2), x);
    tau_n[idx] = n.transition_points(point_sub(x, ev2), x);
  }
  // f(-eps)_x = f_{x-eps} (a zero map of the policy shapes off the box).
  auto shifted_comp = [&](const std::vector<Matrix>& comps, const Point& x, bool is_f) -> Matrix {
    Point xs = point_sub(x, ev);
    if (g.contains(xs)) return comps[g.index(xs)];
    size_t rows = is_f ? n.dim_at_point(xs) : m.dim_at_point(xs);
    size_t cols = is_f ? m.dim_at_point(point_sub(xs, ev)) : n.dim_at_point(point_sub(xs, ev));
    return Matrix(p, rows, cols);
  };

  size_t total = 1;
  for (size_t i = 0; i < outer_basis.size(); ++i) {
    total *= p;
    if (total > (1u << 22))
      throw std::invalid_argument("interleaving_feasible: enumeration too large");
  }

  for (size_t code = 0; code < total; ++code) {
    std::vector<uint32_t> coef(outer_basis.size());
    size_t t = code;
    for (size_t i = 0; i < coef.size(); ++i) {
      coef[i] = static_cast<uint32_t>(t % p);
      t /= p;
    }
    std::vector<Matrix> outer_comp(g.size());
    for (size_t idx = 0; idx < g.size(); ++idx) {
      bool of = !enumerate_g;  // outer plays f?
      Matrix acc(p, of ? n.dim_at(idx) : m.dim_at(idx), of ? ms.dim_at(idx) : ns.dim_at(idx));
      for (size_t i = 0; i < coef.size(); ++i)
        if (coef[i]) acc = acc.add(outer_basis[i].components[idx].scaled(coef[i]));
      outer_comp[idx] = std::move(acc);
    }
    size_t nv = inner_basis.size();
    std::vector<std::vector<uint32_t>> rows;
    std::vector<uint32_t> rhs;
    auto add_rows = [&](const std::vector<Matrix>& lhs_per_var, const Matrix& target) {
      for (size_t r = 0; r < target.rows(); ++r)
        for (size_t c = 0; c < target.cols(); ++c) {
          std::vector<uint32_t> row(nv);
          for (size_t i = 0; i < nv; ++i) row[i] = lhs_per_var[i].at(r, c);
          rows.push_back(std::move(row));
          rhs.push_back(target.at(r, c));
        }
    };
    for (size_t idx = 0; idx < g.size(); ++idx) {
      Point x = g.point(idx);
      std::vector<Matrix> lhs_m(nv), lhs_n(nv);
      if (!enumerate_g) {
        Matrix fsh = shifted_comp(outer_comp, x, /*is_f=*/true);
        for (size_t i = 0; i < nv; ++i) {
          lhs_m[i] = inner_basis[i].components[idx].mul(fsh);  // g_x f(-eps)_x
          Matrix gsh = shifted_comp(inner_basis[i].components, x, /*is_f=*/false);
          lhs_n[i] = outer_comp[idx].mul(gsh);  // f_x g(-eps)_x
        }
      } else {
        Matrix gsh = shifted_comp(outer_comp, x, /*is_f=*/false);
        for (size_t i = 0; i < nv; ++i) {
          lhs_n[i] = inner_basis[i].components[idx].mul(gsh);  // f_x g(-eps)_x
          Matrix fsh = shifted_comp(inner_basis[i].components, x, /*is_f=*/true);
          lhs_m[i] = outer_comp[idx].mul(fsh);  // g_x f(-eps)_x
        }
      }
      add_rows(lhs_m, tau_m[idx]);
      add_rows(lhs_n, tau_n[idx]);
    }
    Matrix sys(p, rows.size(), nv);
    std::vector<uint32_t> b(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
      for (size_t c = 0; c < nv; ++c) sys.set(r, c, rows[r][c]);
      b[r] = rhs[r];
    }
    auto sol = exact::solve(sys, b);
    if (!sol) continue;
    std::vector<Matrix> inner_comp(g.size());
    for (size_t idx = 0; idx < g.size(); ++idx) {
      bool inner_is_f = enumerate_g;
      Matrix acc(p, inner_is_f ? n.dim_at(idx) : m.dim_at(idx),
                 inner_is_f ? ms.dim_at(idx) : ns.dim_at(idx));
      for (size_t i = 0; i < nv; ++i)
        if ((*sol)[i]) acc = acc.add(inner_basis[i].components[idx].scaled((*sol)[i]));
      inner_comp[idx] = std::move(acc);
    }
    EpsilonCertificate cert;
    cert.epsilon = epsilon;
    cert.m = std::make_shared<PersistenceModule>(m);
    cert.n = std::make_shared<PersistenceModule>(n);
    cert.f = enumerate_g ? inner_comp : outer_comp;
    cert.g = enumerate_g ? outer_comp : inner_comp;
    if (certificate_validate(cert)) return cert;
  }
  return std::nullopt;
}

}  // namespace

bool certificate_validate(const EpsilonCertificate& c) {
  if (!c.m || !c.n || c.epsilon < 0) return false;
  if (!c.m->base().is_grid() || !(c.m->base() == c.n->base())) return false;
  const GridPoset& g = c.m->base().grid();
  if (c.f.size() != g.size() || c.g.size() != g.size()) return false;
  Point ev(g.dim(), static_cast<int>(c.epsilon));
  for (size_t idx = 0; idx < g.size(); ++idx) {
    Point xs = point_sub(g.point(idx), ev);
    if (c.f[idx].rows() != c.n->dim_at(idx) || c.f[idx].cols() != c.m->dim_at_point(xs))
      return false;
    if (c.g[idx].rows() != c.m->dim_at(idx) || c.g[idx].cols() != c.n->dim_at_point(xs))
      return false;
  }
  return triangles_hold(c);
}

std::optional<EpsilonCertificate> interleaving_feasible(const PersistenceModule& m,
                                                        const PersistenceModule& n,
                                                        long long epsilon) {
  check_feasibility_inputs(m, n, epsilon);
  if (m.base().grid().dim() == 1) return feasible_one_param(m, n, epsilon);
  return feasible_multi_param(m, n, epsilon);
}

std::optional<long long> minimal_feasible_epsilon(const PersistenceModule& m,
                                                  const PersistenceModule& n, long long cap) {
  for (long long e = 0; e <= cap; ++e)
    if (interleaving_feasible(m, n, e)) return e;
  return std::nullopt;
}

DistanceResult convolution_distance(const GradedBarcode& x, const GradedBarcode& y) {
  std::vector<int> degrees;
  for (const auto& [d, bc] : x.degrees()) degrees.push_back(d);
  for (const auto& [d, bc] : y.degrees()) degrees.push_back(d);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  DistanceResult out;
  out.bound_only = degrees.size() > 1;
  for (int d : degrees) {
    DistanceResult piece = interleaving_distance_barcodes(x.at(d), y.at(d));
    if (piece.infinite) {
      out.infinite = true;
      out.matching.reset();
      return out;
    }
    if (piece.value > out.value) out.value = piece.value;
  }
  return out;
}

DistanceResult convolution_distance(const GradedModuleComplex& x, const GradedModuleComplex& y) {
  auto check_zero_diff = [](const GradedModuleComplex& c) {
    for (const auto& nt : c.d)
      for (const auto& comp : nt.components)
        if (!comp.is_zero())
          throw std::invalid_argument(
              "convolution_distance: only zero-differential complexes are computable");
  };
  check_zero_diff(x);
  check_zero_diff(y);
  GradedBarcode bx, by;
  for (size_t i = 0; i < x.terms.size(); ++i)
    bx.set(static_cast<int>(i), barcode_extract(x.terms[i]));
  for (size_t i = 0; i < y.terms.size(); ++i)
    by.set(static_cast<int>(i), barcode_extract(y.terms[i]));
  return convolution_distance(bx, by);
}

}  // namespace pmconv
