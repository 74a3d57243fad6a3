#include "pmconv/convolve.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmconv {

using exact::Matrix;

PersistenceModule external_tensor(const PersistenceModule& m, const PersistenceModule& n) {
  if (!m.base().is_grid() || !n.base().is_grid() || m.p() != n.p())
    throw std::invalid_argument("external_tensor: grid modules over one field required");
  const GridPoset& gm = m.base().grid();
  const GridPoset& gn = n.base().grid();
  Point lo = gm.lo(), hi = gm.hi();
  lo.insert(lo.end(), gn.lo().begin(), gn.lo().end());
  hi.insert(hi.end(), gn.hi().begin(), gn.hi().end());
  auto prod = std::make_shared<Base>(GridPoset(lo, hi));
  PersistenceModule out = PersistenceModule::zero(prod, m.p());
  std::vector<bool> sl(m.stabilized_left()), sr(m.stabilized_right());
  sl.insert(sl.end(), n.stabilized_left().begin(), n.stabilized_left().end());
  sr.insert(sr.end(), n.stabilized_right().begin(), n.stabilized_right().end());
  out.set_stabilized(sl, sr);
  const GridPoset& gp = prod->grid();
  size_t nm = gm.dim();
  auto split = [&](const Point& q) {
    Point a(q.begin(), q.begin() + nm), b(q.begin() + nm, q.end());
    return std::make_pair(a, b);
  };
  for (size_t idx = 0; idx < gp.size(); ++idx) {
    auto [a, b] = split(gp.point(idx));
    out.set_dim(idx, m.dim_at(gm.index(a)) * n.dim_at(gn.index(b)));
  }
  for (auto [idx, ax] : gp.covering_edges()) {
    auto [a, b] = split(gp.point(idx));
    Matrix mat;
    if (ax < nm) {
      Point a2 = a;
      ++a2[ax];
      mat = m.transition_points(a, a2).kron(Matrix::identity(n.p(), n.dim_at(gn.index(b))));
    } else {
      Point b2 = b;
      ++b2[ax - nm];
      mat = Matrix::identity(m.p(), m.dim_at(gm.index(a))).kron(n.transition_points(b, b2));
    }
    Point to = gp.point(idx);
    ++to[ax];
    out.set_edge_map(idx, gp.index(to), std::move(mat));
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Product-diagram stalk solver.
//
// For one window point x the diagram is {(a,b) | a + b >= x} (sheaf) or
// {a + b <= x} (cosheaf) over the supports of the two factors, with the
// boundary policy supplying zero stalks past unstabilized edges. Identity
// edges are contracted with a union-find, zero-adjacent classes are killed
// (kills propagate upward through limits and downward through colimits),
// and only the residual system goes to the elimination kernel.
// ---------------------------------------------------------------------------

struct FactorSupports {
  const PersistenceModule* m;
  const PersistenceModule* n;
  const GridPoset* box;
  size_t half;  // per-factor dimension
  GridPoset prod;
  std::vector<Point> supp_m, supp_n;

  FactorSupports(const PersistenceModule& mm, const PersistenceModule& nn)
      : m(&mm), n(&nn), box(&mm.base().grid()), half(box->dim()), prod([&] {
          Point lo = box->lo(), hi = box->hi();
          lo.insert(lo.end(), box->lo().begin(), box->lo().end());
          hi.insert(hi.end(), box->hi().begin(), box->hi().end());
          return GridPoset(lo, hi);
        }()) {
    box->for_each_point([&](const Point& a) {
      if (mm.dim_at(box->index(a)) > 0) supp_m.push_back(a);
    });
    box->for_each_point([&](const Point& b) {
      if (nn.dim_at(box->index(b)) > 0) supp_n.push_back(b);
    });
  }

  size_t dim_m(const Point& a) const { return m->dim_at(box->index(a)); }
  size_t dim_n(const Point& b) const { return n->dim_at(box->index(b)); }
};

struct LivePoint {
  size_t key;
  Point a, b;
  size_t dim;
};

struct ResidualEdge {
  size_t from, to;  // local live ids
  Matrix map;
};

bool is_identity(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j) != (i == j ? 1u % m.p() : 0u)) return false;
  return true;
}

struct ContractedDiagram {
  std::vector<LivePoint> live;
  std::vector<size_t> uf;
  std::vector<char> dead;  // by class root
  std::vector<ResidualEdge> edges;

  size_t find(size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  }
};

// Shared construction of live points, contraction, kills and propagation.
// `sheaf` selects the up-set diagram and upward death propagation.
//
// Grid point n stands for the cell [n, n+1) of the continuous line. A cell
// pair meets the region {s + t >= x} already when its sums exceed x - 1
// (the region clips the cell's upper corner), so the sheaf diagram at x is
// {a + b >= x - 1}. The down-set region {s + t <= x} catches exactly the
// closed lower corners, so the cosheaf diagram stays {a + b <= x}. With
// this reading the continuous interval formulas hold verbatim on the grid.
ContractedDiagram build_diagram(const FactorSupports& f, const Point& x_in, bool sheaf) {
  ContractedDiagram d;
  const size_t n = f.half;
  Point x = x_in;
  if (sheaf)
    for (size_t i = 0; i < n; ++i) --x[i];
  auto in_diagram = [&](const Point& sum) {
    return sheaf ? point_leq(x, sum) : point_leq(sum, x);
  };
  for (const Point& a : f.supp_m)
    for (const Point& b : f.supp_n) {
      Point sum = point_add(a, b);
      if (!in_diagram(sum)) continue;
      Point pq = a;
      pq.insert(pq.end(), b.begin(), b.end());
      d.live.push_back({f.prod.index(pq), a, b, f.dim_m(a) * f.dim_n(b)});
    }
  std::sort(d.live.begin(), d.live.end(),
            [](const LivePoint& l, const LivePoint& r) { return l.key < r.key; });
  auto local_id = [&](size_t key) -> std::optional<size_t> {
    auto it = std::lower_bound(d.live.begin(), d.live.end(), key,
                               [](const LivePoint& l, size_t k) { return l.key < k; });
    if (it == d.live.end() || it->key != key) return std::nullopt;
    return static_cast<size_t>(it - d.live.begin());
  };
  d.uf.resize(d.live.size());
  std::iota(d.uf.begin(), d.uf.end(), 0);
  std::vector<char> kill_seed(d.live.size(), 0);

  for (size_t i = 0; i < d.live.size(); ++i) {
    const LivePoint& v = d.live[i];
    Point sum = point_add(v.a, v.b);
    for (size_t ax = 0; ax < 2 * n; ++ax) {
      // Upward neighbor: a live-live edge or (cosheaf) a kill seed.
      {
        Point a2 = v.a, b2 = v.b;
        size_t k = ax < n ? ax : ax - n;
        if (ax < n)
          ++a2[k];
        else
          ++b2[k];
        Point s2 = sum;
        ++s2[k];
        if (in_diagram(s2)) {
          size_t up_dim = ax < n ? f.m->dim_at_point(a2) * f.dim_n(v.b)
                                 : f.dim_m(v.a) * f.n->dim_at_point(b2);
          if (up_dim == 0) {
            if (!sheaf && v.dim > 0) kill_seed[i] = 1;  // generator pushed into zero
          } else if (f.box->contains(ax < n ? a2 : b2)) {
            Point pq = a2;
            pq.insert(pq.end(), b2.begin(), b2.end());
            auto j = local_id(f.prod.index(pq));
            if (j) {
              Matrix mat = ax < n
                               ? f.m->transition_points(v.a, a2).kron(
                                     Matrix::identity(f.n->p(), f.dim_n(v.b)))
                               : Matrix::identity(f.m->p(), f.dim_m(v.a))
                                     .kron(f.n->transition_points(v.b, b2));
              if (is_identity(mat)) {
                size_t ri = d.find(i), rj = d.find(*j);
                if (ri != rj) d.uf[ri] = rj;
              } else {
                d.edges.push_back({i, *j, std::move(mat)});
              }
            }
          }
          // Out-of-box stabilized neighbors repeat edge data; they add no
          // constraints beyond the in-box ones.
        }
      }
      if (sheaf) {
        // Downward neighbor with a zero stalk forces this component to zero.
        Point a2 = v.a, b2 = v.b;
        size_t k = ax < n ? ax : ax - n;
        if (ax < n)
          --a2[k];
        else
          --b2[k];
        Point s2 = sum;
        --s2[k];
        if (!in_diagram(s2)) continue;
        size_t dn_dim = ax < n ? f.m->dim_at_point(a2) * f.dim_n(v.b)
                               : f.dim_m(v.a) * f.n->dim_at_point(b2);
        if (dn_dim == 0) kill_seed[i] = 1;
      }
    }
  }

  d.dead.assign(d.live.size(), 0);
  for (size_t i = 0; i < d.live.size(); ++i)
    if (kill_seed[i]) d.dead[d.find(i)] = 1;
  // Limits: a zero component forces everything above it to zero. Colimits:
  // a generator identified with zero pulls everything below with it.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const ResidualEdge& e : d.edges) {
      size_t cf = d.find(e.from), ct = d.find(e.to);
      if (sheaf && d.dead[cf] && !d.dead[ct]) {
        d.dead[ct] = 1;
        changed = true;
      }
      if (!sheaf && d.dead[ct] && !d.dead[cf]) {
        d.dead[cf] = 1;
        changed = true;
      }
    }
  }
  return d;
}

struct ClassLayout {
  std::vector<size_t> roots;            // live class roots
  std::vector<size_t> offset_by_root;   // indexed by live id, valid at roots
  size_t total{0};
};

ClassLayout layout_classes(ContractedDiagram& d) {
  ClassLayout l;
  l.offset_by_root.assign(d.live.size(), SIZE_MAX);
  for (size_t i = 0; i < d.live.size(); ++i) {
    size_t r = d.find(i);
    if (r != i || d.dead[r]) continue;
    l.offset_by_root[r] = l.total;
    l.roots.push_back(r);
    l.total += d.live[r].dim;
  }
  return l;
}

void ambient_layout(const ContractedDiagram& d, std::vector<size_t>& points,
                    std::vector<size_t>& offsets, size_t& ambient) {
  ambient = 0;
  for (const LivePoint& v : d.live) {
    points.push_back(v.key);
    offsets.push_back(ambient);
    ambient += v.dim;
  }
}

LimitData product_limit(const FactorSupports& f, const Point& x) {
  ContractedDiagram d = build_diagram(f, x, /*sheaf=*/true);
  ClassLayout l = layout_classes(d);
  uint32_t p = f.m->p();
  // Residual rows: map x_u - x_v per surviving edge, map x_u = 0 into dead.
  size_t rows = 0;
  for (const ResidualEdge& e : d.edges) {
    size_t cf = d.find(e.from);
    if (d.dead[cf]) continue;
    rows += e.map.rows();
  }
  Matrix sys(p, rows, l.total);
  size_t r0 = 0;
  auto accumulate = [&](size_t row0, size_t col0, const Matrix& mat, bool negate) {
    for (size_t i = 0; i < mat.rows(); ++i)
      for (size_t j = 0; j < mat.cols(); ++j) {
        uint32_t v = mat.at(i, j);
        if (!v) continue;
        if (negate) v = p - v;
        sys.set(row0 + i, col0 + j, exact::fp_add(sys.at(row0 + i, col0 + j), v, p));
      }
  };
  for (const ResidualEdge& e : d.edges) {
    size_t cf = d.find(e.from), ct = d.find(e.to);
    if (d.dead[cf]) continue;  // dead source already propagated its kill
    accumulate(r0, l.offset_by_root[cf], e.map, false);
    if (!d.dead[ct])
      accumulate(r0, l.offset_by_root[ct], Matrix::identity(p, e.map.rows()), true);
    r0 += e.map.rows();
  }
  Matrix reduced = exact::kernel_basis(sys.block(0, 0, r0, l.total));
  LimitData out;
  ambient_layout(d, out.points, out.offsets, out.ambient_dim);
  out.basis = Matrix(p, out.ambient_dim, reduced.cols());
  for (size_t i = 0; i < d.live.size(); ++i) {
    size_t r = d.find(i);
    if (d.dead[r]) continue;
    out.basis.place(out.offsets[i], 0,
                    reduced.block(l.offset_by_root[r], 0, d.live[i].dim, reduced.cols()));
  }
  return out;
}

ColimitData product_colimit(const FactorSupports& f, const Point& x) {
  ContractedDiagram d = build_diagram(f, x, /*sheaf=*/false);
  ClassLayout l = layout_classes(d);
  uint32_t p = f.m->p();
  size_t cols = 0;
  for (const ResidualEdge& e : d.edges) {
    size_t ct = d.find(e.to);
    if (d.dead[ct]) continue;  // backward propagation consumed these
    cols += e.map.cols();
  }
  Matrix rel(p, l.total, cols);
  size_t c0 = 0;
  auto accumulate = [&](size_t row0, size_t col0, const Matrix& mat, bool negate) {
    for (size_t i = 0; i < mat.rows(); ++i)
      for (size_t j = 0; j < mat.cols(); ++j) {
        uint32_t v = mat.at(i, j);
        if (!v) continue;
        if (negate) v = p - v;
        rel.set(row0 + i, col0 + j, exact::fp_add(rel.at(row0 + i, col0 + j), v, p));
      }
  };
  for (const ResidualEdge& e : d.edges) {
    size_t cf = d.find(e.from), ct = d.find(e.to);
    if (d.dead[ct]) continue;
    accumulate(l.offset_by_root[ct], c0, e.map, false);
    if (!d.dead[cf])
      accumulate(l.offset_by_root[cf], c0, Matrix::identity(p, e.map.cols()), true);
    c0 += e.map.cols();
  }
  Matrix proj_reduced = exact::cokernel_projection(rel.block(0, 0, l.total, c0));
  ColimitData out;
  ambient_layout(d, out.points, out.offsets, out.ambient_dim);
  out.proj = Matrix(p, proj_reduced.rows(), out.ambient_dim);
  for (size_t i = 0; i < d.live.size(); ++i) {
    size_t r = d.find(i);
    if (d.dead[r]) continue;
    for (size_t rr = 0; rr < proj_reduced.rows(); ++rr)
      for (size_t jj = 0; jj < d.live[i].dim; ++jj)
        out.proj.set(rr, out.offsets[i] + jj, proj_reduced.at(rr, l.offset_by_root[r] + jj));
  }
  return out;
}

void check_oracle_inputs(const PersistenceModule& m, const PersistenceModule& n,
                         const GridPoset& window) {
  if (!m.base().is_grid() || !(m.base() == n.base()) || m.p() != n.p())
    throw std::invalid_argument("convolve oracle: modules on one grid over one field required");
  const GridPoset& b = m.base().grid();
  if (window.dim() != b.dim()) throw std::invalid_argument("convolve oracle: window arity");
  for (size_t i = 0; i < b.dim(); ++i) {
    if (window.lo()[i] < 2 * b.lo()[i] + 1)
      throw SafeWindowError("window axis " + std::to_string(i) +
                            " undershoots the certified range (lower margin)");
    if (window.hi()[i] > 2 * b.hi()[i] - 1)
      throw SafeWindowError("window axis " + std::to_string(i) +
                            " overshoots the certified range (upper margin)");
  }
}

std::vector<bool> and_flags(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<bool> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

bool run_parallel(exact::Exec exec, size_t npoints) {
#ifdef _OPENMP
  if (exec == exact::Exec::Parallel) return true;
  if (exec == exact::Exec::Serial) return false;
  return npoints >= 8 && omp_get_max_threads() > 1;
#else
  (void)exec;
  (void)npoints;
  return false;
#endif
}

}  // namespace

SheafOracleData sheaf_convolve_oracle_full(const PersistenceModule& m, const PersistenceModule& n,
                                           const GridPoset& window, exact::Exec exec) {
  check_oracle_inputs(m, n, window);
  FactorSupports f(m, n);
  SheafOracleData out;
  out.window = std::make_shared<Base>(window);
  out.stalks.resize(window.size());
  if (run_parallel(exec, window.size())) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < static_cast<long long>(window.size()); ++i)
      out.stalks[static_cast<size_t>(i)] = product_limit(f, window.point(static_cast<size_t>(i)));
  } else {
    for (size_t i = 0; i < window.size(); ++i) out.stalks[i] = product_limit(f, window.point(i));
  }
  out.module = PersistenceModule::zero(out.window, m.p());
  out.module.set_stabilized(and_flags(m.stabilized_left(), n.stabilized_left()),
                            and_flags(m.stabilized_right(), n.stabilized_right()));
  for (size_t i = 0; i < window.size(); ++i) out.module.set_dim(i, out.stalks[i].dim());
  for (auto [idx, ax] : window.covering_edges()) {
    Point to = window.point(idx);
    ++to[ax];
    out.module.set_edge_map(idx, window.index(to),
                            restrict_limit(out.stalks[idx], out.stalks[window.index(to)]));
  }
  return out;
}

CosheafOracleData cosheaf_convolve_oracle_full(const PersistenceModule& m,
                                               const PersistenceModule& n,
                                               const GridPoset& window, exact::Exec exec) {
  check_oracle_inputs(m, n, window);
  FactorSupports f(m, n);
  CosheafOracleData out;
  out.window = std::make_shared<Base>(window);
  out.stalks.resize(window.size());
  if (run_parallel(exec, window.size())) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < static_cast<long long>(window.size()); ++i)
      out.stalks[static_cast<size_t>(i)] =
          product_colimit(f, window.point(static_cast<size_t>(i)));
  } else {
    for (size_t i = 0; i < window.size(); ++i) out.stalks[i] = product_colimit(f, window.point(i));
  }
  out.module = PersistenceModule::zero(out.window, m.p());
  out.module.set_stabilized(and_flags(m.stabilized_left(), n.stabilized_left()),
                            and_flags(m.stabilized_right(), n.stabilized_right()));
  for (size_t i = 0; i < window.size(); ++i) out.module.set_dim(i, out.stalks[i].dim());
  for (auto [idx, ax] : window.covering_edges()) {
    Point to = window.point(idx);
    ++to[ax];
    out.module.set_edge_map(idx, window.index(to),
                            corestrict_colimit(out.stalks[idx], out.stalks[window.index(to)]));
  }
  return out;
}

PersistenceModule sheaf_convolve_oracle(const PersistenceModule& m, const PersistenceModule& n,
                                        const GridPoset& window, exact::Exec exec) {
  return sheaf_convolve_oracle_full(m, n, window, exec).module;
}

PersistenceModule cosheaf_convolve_oracle(const PersistenceModule& m, const PersistenceModule& n,
                                          const GridPoset& window, exact::Exec exec) {
  return cosheaf_convolve_oracle_full(m, n, window, exec).module;
}

// ---------------------------------------------------------------------------
// Resolutions
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<size_t>> upper_covers(const Base& base) {
  std::vector<std::vector<size_t>> covers(base.size());
  if (base.is_grid()) {
    const GridPoset& g = base.grid();
    for (auto [idx, ax] : g.covering_edges()) {
      Point to = g.point(idx);
      ++to[ax];
      covers[idx].push_back(g.index(to));
    }
    return covers;
  }
  const FinitePreorder& q = base.preorder();
  if (!q.is_poset())
    throw ResolutionError("resolutions need a poset base; condense the preorder first");
  for (size_t i = 0; i < q.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) {
      if (i == j || !q.leq(i, j)) continue;
      bool cover = true;
      for (size_t k = 0; k < q.size() && cover; ++k)
        if (k != i && k != j && q.leq(i, k) && q.leq(k, j)) cover = false;
      if (cover) covers[i].push_back(j);
    }
  return covers;
}

std::vector<std::vector<size_t>> lower_covers(const Base& base) {
  auto up = upper_covers(base);
  std::vector<std::vector<size_t>> down(base.size());
  for (size_t i = 0; i < up.size(); ++i)
    for (size_t j : up[i]) down[j].push_back(i);
  return down;
}

void check_injective_input(const PersistenceModule& m) {
  if (!m.base().is_grid()) return;
  const GridPoset& g = m.base().grid();
  for (size_t ax = 0; ax < g.dim(); ++ax) {
    if (m.stabilized_right()[ax])
      throw ResolutionError("injective resolution: stabilized-right input not cofinitely "
                            "cogenerated on this box");
    if (m.stabilized_left()[ax]) continue;
    bool clear = true;
    g.for_each_point([&](const Point& q) {
      if (q[ax] == g.lo()[ax] && m.dim_at(g.index(q)) > 0) clear = false;
    });
    if (!clear)
      throw ResolutionError("injective resolution: support touches the unstabilized lower edge "
                            "of axis " + std::to_string(ax));
  }
}

void check_projective_input(const PersistenceModule& m) {
  if (!m.base().is_grid()) return;
  const GridPoset& g = m.base().grid();
  for (size_t ax = 0; ax < g.dim(); ++ax) {
    if (m.stabilized_left()[ax])
      throw ResolutionError("projective resolution: stabilized-left input is not finitely "
                            "generated on this box");
    if (m.stabilized_right()[ax]) continue;
    bool clear = true;
    g.for_each_point([&](const Point& q) {
      if (q[ax] == g.hi()[ax] && m.dim_at(g.index(q)) > 0) clear = false;
    });
    if (!clear)
      throw ResolutionError("projective resolution: support touches the unstabilized upper edge "
                            "of axis " + std::to_string(ax));
  }
}

size_t default_cap(const Base& base) {
  if (base.is_grid()) return 2 * base.grid().dim() + 1;
  return base.size() + 1;
}

struct EnvelopeStep {
  PersistenceModule term;               // the injective/projective term
  std::vector<Matrix> hook;             // theta_z (injective) or pi_z (projective)
  PersistenceModule next;               // coker (injective) or kernel (projective)
  std::vector<Matrix> next_presenter;   // q_z (coker projections) or kernel bases
};

// Builds E = (+) k[D_x]^{c_x} with c_x the socle dimensions, the embedding
// theta: M -> E, and coker(theta) with its pointwise projections.
EnvelopeStep injective_envelope(const PersistenceModule& m,
                                const std::vector<std::vector<size_t>>& covers) {
  const Base& base = m.base();
  uint32_t p = m.p();
  struct Summand {
    size_t at;
    Matrix psi;  // c x dim M_at, dual to the socle basis
  };
  std::vector<Summand> summands;
  for (size_t z = 0; z < base.size(); ++z) {
    if (m.dim_at(z) == 0) continue;
    std::vector<Matrix> blocks;
    size_t rows = 0;
    for (size_t w : covers[z]) {
      blocks.push_back(m.edge_map(z, w));
      rows += m.dim_at(w);
    }
    Matrix stacked = Matrix::vstack(blocks, p, m.dim_at(z));
    (void)rows;
    Matrix socle = exact::kernel_basis(stacked);
    if (socle.cols() == 0) continue;
    summands.push_back({z, exact::left_inverse(socle)});
  }
  EnvelopeStep step;
  step.term = PersistenceModule::zero(m.base_ptr(), p);
  if (base.is_grid())
    step.term.set_stabilized(std::vector<bool>(base.grid().dim(), true),
                             std::vector<bool>(base.grid().dim(), false));
  auto alive = [&](size_t z, const Summand& s) { return base.leq(z, s.at); };
  for (size_t z = 0; z < base.size(); ++z) {
    size_t d = 0;
    for (const Summand& s : summands)
      if (alive(z, s)) d += s.psi.rows();
    step.term.set_dim(z, d);
  }
  for (auto [u, v] : base.relation_edges()) {
    Matrix mat(p, step.term.dim_at(v), step.term.dim_at(u));
    size_t ro = 0, co = 0;
    for (const Summand& s : summands) {
      bool au = alive(u, s), av = alive(v, s);
      if (au && av) mat.place(ro, co, Matrix::identity(p, s.psi.rows()));
      if (au) co += s.psi.rows();
      if (av) ro += s.psi.rows();
    }
    step.term.set_edge_map(u, v, std::move(mat));
  }
  step.hook.resize(base.size());
  for (size_t z = 0; z < base.size(); ++z) {
    Matrix theta(p, step.term.dim_at(z), m.dim_at(z));
    size_t ro = 0;
    for (const Summand& s : summands) {
      if (!alive(z, s)) continue;
      theta.place(ro, 0, s.psi.mul(m.transition(z, s.at)));
      ro += s.psi.rows();
    }
    if (exact::rank(theta) != m.dim_at(z))
      throw ResolutionError("injective envelope: socle embedding is not injective");
    step.hook[z] = std::move(theta);
  }
  step.next = PersistenceModule::zero(m.base_ptr(), p);
  if (base.is_grid())
    step.next.set_stabilized(step.term.stabilized_left(), step.term.stabilized_right());
  step.next_presenter.resize(base.size());
  for (size_t z = 0; z < base.size(); ++z) {
    step.next_presenter[z] = exact::cokernel_projection(step.hook[z]);
    step.next.set_dim(z, step.next_presenter[z].rows());
  }
  for (auto [u, v] : base.relation_edges()) {
    const Matrix& qu = step.next_presenter[u];
    const Matrix& qv = step.next_presenter[v];
    if (qu.rows() == 0 || qv.rows() == 0) {
      step.next.set_edge_map(u, v, Matrix(p, qv.rows(), qu.rows()));
      continue;
    }
    step.next.set_edge_map(u, v, qv.mul(step.term.edge_map(u, v)).mul(exact::right_inverse(qu)));
  }
  return step;
}

EnvelopeStep projective_cover(const PersistenceModule& m,
                              const std::vector<std::vector<size_t>>& covers_down) {
  const Base& base = m.base();
  uint32_t p = m.p();
  struct Summand {
    size_t at;
    Matrix lift;  // dim M_at x g, representatives of the generators
  };
  std::vector<Summand> summands;
  for (size_t z = 0; z < base.size(); ++z) {
    if (m.dim_at(z) == 0) continue;
    std::vector<Matrix> blocks;
    for (size_t w : covers_down[z]) blocks.push_back(m.edge_map(w, z));
    Matrix incoming = Matrix::hstack(blocks, p, m.dim_at(z));
    Matrix q = exact::cokernel_projection(incoming);
    if (q.rows() == 0) continue;
    summands.push_back({z, exact::right_inverse(q)});
  }
  EnvelopeStep step;
  step.term = PersistenceModule::zero(m.base_ptr(), p);
  if (base.is_grid())
    step.term.set_stabilized(std::vector<bool>(base.grid().dim(), false),
                             std::vector<bool>(base.grid().dim(), true));
  auto alive = [&](size_t z, const Summand& s) { return base.leq(s.at, z); };
  for (size_t z = 0; z < base.size(); ++z) {
    size_t d = 0;
    for (const Summand& s : summands)
      if (alive(z, s)) d += s.lift.cols();
    step.term.set_dim(z, d);
  }
  for (auto [u, v] : base.relation_edges()) {
    Matrix mat(p, step.term.dim_at(v), step.term.dim_at(u));
    size_t ro = 0, co = 0;
    for (const Summand& s : summands) {
      bool au = alive(u, s), av = alive(v, s);
      if (au && av) mat.place(ro, co, Matrix::identity(p, s.lift.cols()));
      if (au) co += s.lift.cols();
      if (av) ro += s.lift.cols();
    }
    step.term.set_edge_map(u, v, std::move(mat));
  }
  step.hook.resize(base.size());
  for (size_t z = 0; z < base.size(); ++z) {
    Matrix pi(p, m.dim_at(z), step.term.dim_at(z));
    size_t co = 0;
    for (const Summand& s : summands) {
      if (!alive(z, s)) continue;
      pi.place(0, co, m.transition(s.at, z).mul(s.lift));
      co += s.lift.cols();
    }
    if (exact::rank(pi) != m.dim_at(z))
      throw ResolutionError("projective cover: generators fail to span");
    step.hook[z] = std::move(pi);
  }
  step.next = PersistenceModule::zero(m.base_ptr(), p);
  if (base.is_grid())
    step.next.set_stabilized(step.term.stabilized_left(), step.term.stabilized_right());
  step.next_presenter.resize(base.size());
  for (size_t z = 0; z < base.size(); ++z) {
    step.next_presenter[z] = exact::kernel_basis(step.hook[z]);
    step.next.set_dim(z, step.next_presenter[z].cols());
  }
  for (auto [u, v] : base.relation_edges()) {
    const Matrix& ku = step.next_presenter[u];
    const Matrix& kv = step.next_presenter[v];
    auto sol = exact::solve_matrix(kv, step.term.edge_map(u, v).mul(ku));
    if (!sol) throw ResolutionError("projective cover: kernel is not preserved");
    step.next.set_edge_map(u, v, *sol);
  }
  return step;
}

NaturalTransformation make_nt(const PersistenceModule& src, const PersistenceModule& tgt,
                              std::vector<Matrix> comps) {
  NaturalTransformation nt;
  nt.source = std::make_shared<PersistenceModule>(src);
  nt.target = std::make_shared<PersistenceModule>(tgt);
  nt.components = std::move(comps);
  return nt;
}

}  // namespace

Resolution injective_resolution(const PersistenceModule& m, size_t length_cap) {
  check_injective_input(m);
  if (length_cap == 0) length_cap = default_cap(m.base());
  auto covers = upper_covers(m.base());
  Resolution r;
  r.injective = true;
  PersistenceModule cur = m;
  std::vector<Matrix> prev_q;  // presents cur as a quotient of the last term
  while (true) {
    if (cur.is_zero_module() && !r.terms.empty()) break;
    if (r.terms.size() >= length_cap)
      throw ResolutionError("injective resolution: length cap exceeded");
    EnvelopeStep step = injective_envelope(cur, covers);
    if (r.terms.empty()) {
      r.augmentation = make_nt(m, step.term, step.hook);
    } else {
      // d = (embed next stage) o (project previous term)
      std::vector<Matrix> comps(m.base().size());
      for (size_t z = 0; z < m.base().size(); ++z) comps[z] = step.hook[z].mul(prev_q[z]);
      r.diffs.push_back(make_nt(r.terms.back(), step.term, std::move(comps)));
    }
    r.terms.push_back(step.term);
    prev_q = step.next_presenter;
    cur = step.next;
    if (cur.is_zero_module()) break;
  }
  return r;
}

Resolution projective_resolution(const PersistenceModule& m, size_t length_cap) {
  check_projective_input(m);
  if (length_cap == 0) length_cap = default_cap(m.base());
  auto covers_down = lower_covers(m.base());
  Resolution r;
  r.injective = false;
  PersistenceModule cur = m;
  std::vector<Matrix> prev_k;  // embeds cur into the last term
  while (true) {
    if (cur.is_zero_module() && !r.terms.empty()) break;
    if (r.terms.size() >= length_cap)
      throw ResolutionError("projective resolution: length cap exceeded");
    EnvelopeStep step = projective_cover(cur, covers_down);
    if (r.terms.empty()) {
      r.augmentation = make_nt(step.term, m, step.hook);
    } else {
      std::vector<Matrix> comps(m.base().size());
      for (size_t z = 0; z < m.base().size(); ++z) comps[z] = prev_k[z].mul(step.hook[z]);
      r.diffs.push_back(make_nt(step.term, r.terms.back(), std::move(comps)));
    }
    r.terms.push_back(step.term);
    prev_k = step.next_presenter;
    cur = step.next;
    if (cur.is_zero_module()) break;
  }
  return r;
}

bool resolution_is_exact(const PersistenceModule& m, const Resolution& r) {
  const Base& base = m.base();
  uint32_t p = m.p();
  for (size_t z = 0; z < base.size(); ++z) {
    std::vector<Matrix> seq;  // M_z -> E0_z -> E1_z -> ... (injective orientation)
    if (r.injective) {
      seq.push_back(r.augmentation.components[z]);
      for (const auto& d : r.diffs) seq.push_back(d.components[z]);
    } else {
      // Reverse a projective resolution into the same orientation:
      // 0 -> 0 -> ... -> P1_z -> P0_z -> M_z -> 0 read backwards.
      for (size_t i = r.diffs.size(); i-- > 0;) seq.push_back(r.diffs[i].components[z]);
      seq.push_back(r.augmentation.components[z]);
    }
    // Exactness along the chain: first map injective (injective case) /
    // last surjective (projective case), consecutive composites vanish,
    // and ker = im at every middle slot by rank counting.
    for (size_t i = 0; i + 1 < seq.size(); ++i)
      if (!seq[i + 1].mul(seq[i]).is_zero()) return false;
    if (r.injective) {
      if (exact::rank(seq[0]) != m.dim_at(z)) return false;  // augmentation embeds
      for (size_t i = 1; i < seq.size(); ++i) {
        size_t ker = seq[i].cols() - exact::rank(seq[i]);
        if (ker != exact::rank(seq[i - 1])) return false;
      }
      const Matrix& last = seq.back();
      if (exact::rank(last) != last.rows()) return false;  // final surjection
    } else {
      const Matrix& aug = seq.back();
      if (exact::rank(aug) != m.dim_at(z)) return false;  // augmentation surjects
      for (size_t i = 1; i < seq.size(); ++i) {
        size_t ker = seq[i].cols() - exact::rank(seq[i]);
        if (ker != exact::rank(seq[i - 1])) return false;
      }
      size_t first_ker = seq[0].cols() - exact::rank(seq[0]);
      if (first_ker != 0) return false;  // deepest term embeds
    }
  }
  (void)p;
  return true;
}

// ---------------------------------------------------------------------------
// Cohomology of complexes and the derived convolutions
// ---------------------------------------------------------------------------

CohomologyData cohomology_full(const GradedModuleComplex& c) {
  CohomologyData out;
  if (c.terms.empty()) return out;
  const Base& base = c.terms[0].base();
  uint32_t p = c.terms[0].p();
  size_t k = c.terms.size();
  out.kernels.assign(k, std::vector<Matrix>(base.size()));
  out.quotients.assign(k, std::vector<Matrix>(base.size()));
  for (size_t i = 0; i < k; ++i) {
    PersistenceModule h = PersistenceModule::zero(c.terms[i].base_ptr(), p);
    if (base.is_grid())
      h.set_stabilized(c.terms[i].stabilized_left(), c.terms[i].stabilized_right());
    for (size_t z = 0; z < base.size(); ++z) {
      Matrix ker = i < c.d.size() ? exact::kernel_basis(c.d[i].components[z])
                                  : Matrix::identity(p, c.terms[i].dim_at(z));
      Matrix im_coords(p, ker.cols(), 0);
      if (i > 0) {
        auto sol = exact::solve_matrix(ker, c.d[i - 1].components[z]);
        if (!sol) throw std::logic_error("cohomology: image escapes kernel");
        im_coords = *sol;
      }
      out.quotients[i][z] = exact::cokernel_projection(im_coords);
      out.kernels[i][z] = std::move(ker);
      h.set_dim(z, out.quotients[i][z].rows());
    }
    for (auto [u, v] : base.relation_edges()) {
      size_t hu = out.quotients[i][u].rows(), hv = out.quotients[i][v].rows();
      if (hu == 0 || hv == 0) {
        h.set_edge_map(u, v, Matrix(p, hv, hu));
        continue;
      }
      Matrix rep = out.kernels[i][u].mul(exact::right_inverse(out.quotients[i][u]));
      Matrix moved = c.terms[i].edge_map(u, v).mul(rep);
      auto coords = exact::solve_matrix(out.kernels[i][v], moved);
      if (!coords) throw std::logic_error("cohomology: transition escapes kernel");
      h.set_edge_map(u, v, out.quotients[i][v].mul(*coords));
    }
    out.modules.push_back(std::move(h));
  }
  return out;
}

std::vector<PersistenceModule> cohomology(const GradedModuleComplex& c) {
  return cohomology_full(c).modules;
}

exact::Matrix cohomology_map_at(const CohomologyData& src, const CohomologyData& tgt, size_t slot,
                                size_t src_z, size_t tgt_z, const exact::Matrix& chain_component) {
  uint32_t p = chain_component.p();
  size_t hs = src.quotients[slot][src_z].rows();
  size_t ht = tgt.quotients[slot][tgt_z].rows();
  if (hs == 0 || ht == 0) return Matrix(p, ht, hs);
  Matrix rep = src.kernels[slot][src_z].mul(exact::right_inverse(src.quotients[slot][src_z]));
  Matrix moved = chain_component.mul(rep);
  auto coords = exact::solve_matrix(tgt.kernels[slot][tgt_z], moved);
  if (!coords) throw std::logic_error("cohomology_map_at: image escapes kernel");
  return tgt.quotients[slot][tgt_z].mul(*coords);
}

namespace {

// Component of a transformation at an arbitrary ambient point, read through
// the shared boundary policy of its source/target.
Matrix nt_component_at_point(const NaturalTransformation& nt, const Point& q) {
  size_t sd = nt.source->dim_at_point(q);
  size_t td = nt.target->dim_at_point(q);
  if (sd == 0 || td == 0) return Matrix(nt.source->p(), td, sd);
  const GridPoset& g = nt.source->base().grid();
  Point c = q;
  for (size_t i = 0; i < g.dim(); ++i) {
    if (c[i] < g.lo()[i]) c[i] = g.lo()[i];
    if (c[i] > g.hi()[i]) c[i] = g.hi()[i];
  }
  return nt.components[g.index(c)];
}

struct ProductKeyView {
  GridPoset prod;
  size_t half;
  std::pair<Point, Point> split(size_t key) const {
    Point q = prod.point(key);
    return {Point(q.begin(), q.begin() + half), Point(q.begin() + half, q.end())};
  }
};

ProductKeyView product_view(const PersistenceModule& factor) {
  const GridPoset& b = factor.base().grid();
  Point lo = b.lo(), hi = b.hi();
  lo.insert(lo.end(), b.lo().begin(), b.lo().end());
  hi.insert(hi.end(), b.hi().begin(), b.hi().end());
  return {GridPoset(lo, hi), b.dim()};
}

// (1 (x) d) or (d (x) 1) pushed through per-point limits over one diagram.
Matrix induced_product_limit_map(const LimitData& src, const LimitData& tgt,
                                 const PersistenceModule& fixed,
                                 const NaturalTransformation& d, bool d_on_second,
                                 const ProductKeyView& view) {
  uint32_t p = fixed.p();
  Matrix mapped(p, tgt.ambient_dim, src.dim());
  for (size_t i = 0; i < tgt.points.size(); ++i) {
    auto [a, b] = view.split(tgt.points[i]);
    auto so = src.offset_of(tgt.points[i]);
    if (!so) continue;
    Matrix comp;
    if (d_on_second) {
      size_t fd = fixed.dim_at_point(a);
      comp = Matrix::identity(p, fd).kron(nt_component_at_point(d, b));
    } else {
      size_t fd = fixed.dim_at_point(b);
      comp = nt_component_at_point(d, a).kron(Matrix::identity(p, fd));
    }
    if (comp.cols() == 0) continue;
    mapped.place(tgt.offsets[i], 0, comp.mul(src.basis.block(*so, 0, comp.cols(), src.dim())));
  }
  auto sol = exact::solve_matrix(tgt.basis, mapped);
  if (!sol) throw std::logic_error("derived convolve: induced map escapes the limit");
  return *sol;
}

Matrix induced_product_colimit_map(const ColimitData& src, const ColimitData& tgt,
                                   const PersistenceModule& fixed,
                                   const NaturalTransformation& d, bool d_on_second,
                                   const ProductKeyView& view) {
  uint32_t p = fixed.p();
  Matrix amb(p, tgt.ambient_dim, src.ambient_dim);
  for (size_t i = 0; i < src.points.size(); ++i) {
    auto [a, b] = view.split(src.points[i]);
    auto to = tgt.offset_of(src.points[i]);
    if (!to) continue;
    Matrix comp;
    if (d_on_second) {
      size_t fd = fixed.dim_at_point(a);
      comp = Matrix::identity(p, fd).kron(nt_component_at_point(d, b));
    } else {
      size_t fd = fixed.dim_at_point(b);
      comp = nt_component_at_point(d, a).kron(Matrix::identity(p, fd));
    }
    amb.place(*to, src.offsets[i], comp);
  }
  if (src.proj.rows() == 0) return Matrix(p, tgt.dim(), 0);
  return tgt.proj.mul(amb).mul(exact::right_inverse(src.proj));
}

}  // namespace

std::vector<PersistenceModule> derived_sheaf_convolve(const PersistenceModule& m,
                                                      const PersistenceModule& n,
                                                      const GridPoset& window, ResolveSide side,
                                                      exact::Exec exec) {
  bool second = side == ResolveSide::Second;
  const PersistenceModule& fixed = second ? m : n;
  Resolution r = injective_resolution(second ? n : m);
  std::vector<SheafOracleData> data;
  data.reserve(r.terms.size());
  for (const auto& term : r.terms)
    data.push_back(second ? sheaf_convolve_oracle_full(fixed, term, window, exec)
                          : sheaf_convolve_oracle_full(term, fixed, window, exec));
  ProductKeyView view = product_view(fixed);
  GradedModuleComplex c;
  for (auto& dd : data) c.terms.push_back(dd.module);
  for (size_t i = 0; i + 1 < data.size(); ++i) {
    std::vector<Matrix> comps(window.size());
    for (size_t w = 0; w < window.size(); ++w)
      comps[w] = induced_product_limit_map(data[i].stalks[w], data[i + 1].stalks[w], fixed,
                                           r.diffs[i], second, view);
    c.d.push_back(make_nt(c.terms[i], c.terms[i + 1], std::move(comps)));
  }
  return cohomology(c);
}

std::vector<PersistenceModule> derived_cosheaf_convolve(const PersistenceModule& m,
                                                        const PersistenceModule& n,
                                                        const GridPoset& window, ResolveSide side,
                                                        exact::Exec exec) {
  bool second = side == ResolveSide::Second;
  const PersistenceModule& fixed = second ? m : n;
  Resolution r = projective_resolution(second ? n : m);
  size_t k = r.terms.size();
  std::vector<CosheafOracleData> data(k);
  for (size_t i = 0; i < k; ++i)
    data[i] = second ? cosheaf_convolve_oracle_full(fixed, r.terms[i], window, exec)
                     : cosheaf_convolve_oracle_full(r.terms[i], fixed, window, exec);
  ProductKeyView view = product_view(fixed);
  // Cochain slots run from the deep end of the resolution toward degree 0.
  GradedModuleComplex c;
  for (size_t i = 0; i < k; ++i) c.terms.push_back(data[k - 1 - i].module);
  for (size_t i = 0; i + 1 < k; ++i) {
    size_t src = k - 1 - i;  // resolution index of slot i
    std::vector<Matrix> comps(window.size());
    for (size_t w = 0; w < window.size(); ++w)
      comps[w] = induced_product_colimit_map(data[src].stalks[w], data[src - 1].stalks[w], fixed,
                                             r.diffs[src - 1], second, view);
    c.d.push_back(make_nt(c.terms[i], c.terms[i + 1], std::move(comps)));
  }
  std::vector<PersistenceModule> slots = cohomology(c);
  std::vector<PersistenceModule> out;
  for (size_t h = 0; h < k; ++h) out.push_back(slots[k - 1 - h]);
  return out;
}

// ---------------------------------------------------------------------------
// Barcodes of one-parameter modules
// ---------------------------------------------------------------------------

Barcode barcode_extract(const PersistenceModule& m) {
  if (!m.base().is_grid() || m.base().grid().dim() != 1)
    throw std::invalid_argument("barcode_extract: one-parameter grid modules only");
  const GridPoset& g = m.base().grid();
  const long long lo = g.lo()[0];
  const size_t w = g.size();
  bool sl = m.stabilized_left()[0], sr = m.stabilized_right()[0];
  // ranks[i][j - i] = rank of the transition from slot i to slot j
  std::vector<std::vector<size_t>> ranks(w);
  for (size_t i = 0; i < w; ++i) {
    ranks[i].resize(w - i);
    ranks[i][0] = m.dim_at(i);
    Matrix cur = Matrix::identity(m.p(), m.dim_at(i));
    for (size_t j = i + 1; j < w; ++j) {
      cur = m.edge_map(j - 1, j).mul(cur);
      ranks[i][j - i] = exact::rank(cur);
    }
  }
  // Extended ranks over virtual slots -1 (the stable left tail) and w (the
  // stable right tail); unstabilized tails are zero.
  const long long lw = static_cast<long long>(w);
  auto rext = [&](long long i, long long j) -> long long {
    if (i < -1 || j > lw) return 0;
    if (i == -1) {
      if (!sl) return 0;
      i = 0;
    }
    if (j == lw) {
      if (!sr) return 0;
      j = lw - 1;
    }
    if (j == -1) j = 0;  // virtual-left stalk, already redirected by sl
    return static_cast<long long>(ranks[static_cast<size_t>(i)][static_cast<size_t>(j - i)]);
  };
  Barcode out;
  for (long long i = -1; i < lw; ++i) {
    for (long long j = i + 1; j <= lw + 1; ++j) {
      long long mult = rext(i, j - 1) - rext(i - 1, j - 1) - rext(i, j) + rext(i - 1, j);
      if (mult < 0) throw std::invalid_argument("barcode_extract: module is not valid");
      if (mult == 0) continue;
      Endpoint l = (i == -1) ? Endpoint::neg_inf() : Endpoint::finite(Rat(lo + i), true);
      Endpoint rgt = (j == lw + 1) ? Endpoint::pos_inf() : Endpoint::finite(Rat(lo + j), false);
      out.add(Interval::make(l, rgt), static_cast<size_t>(mult));
    }
  }
  return out;
}

GradedBarcode barcodes_of(const std::vector<PersistenceModule>& graded) {
  GradedBarcode out;
  for (size_t i = 0; i < graded.size(); ++i) out.set(static_cast<int>(i), barcode_extract(graded[i]));
  return out;
}

PersistenceModule discretize_interval(const Interval& bar, std::shared_ptr<const Base> base,
                                      uint32_t p) {
  return realize_barcode(Barcode({{bar, 1}}), std::move(base), p);
}

PersistenceModule realize_barcode(const Barcode& bc, std::shared_ptr<const Base> base, uint32_t p) {
  if (!base->is_grid() || base->grid().dim() != 1)
    throw std::invalid_argument("realize_barcode: one-parameter grid required");
  const GridPoset& g = base->grid();
  long long lo = g.lo()[0], hi = g.hi()[0];
  struct Span {
    long long start, end;  // inclusive slots, start > end means empty
    bool to_neg_inf, to_pos_inf;
  };
  std::vector<std::pair<Span, size_t>> spans;
  bool any_sl = false, any_sr = false;
  auto slot_of = [&](const Rat& r) {
    if (r.denominator() != 1)
      throw std::invalid_argument("realize_barcode: integer endpoints required");
    return r.numerator();
  };
  for (const auto& [bar, mult] : bc.bars()) {
    Span s{};
    if (bar.left.kind == Endpoint::Kind::NegInf) {
      s.start = lo;
      s.to_neg_inf = true;
      any_sl = true;
    } else {
      s.start = slot_of(bar.left.value) + (bar.left.closed ? 0 : 1);
    }
    if (bar.right.kind == Endpoint::Kind::PosInf) {
      s.end = hi;
      s.to_pos_inf = true;
      any_sr = true;
    } else {
      s.end = slot_of(bar.right.value) - (bar.right.closed ? 0 : 1);
    }
    if (s.start > s.end) continue;
    if (s.start < lo || s.end > hi)
      throw std::invalid_argument("realize_barcode: bar leaves the box");
    spans.push_back({s, mult});
  }
  // With a stabilized edge in play, finite bars may not touch that edge or
  // the repeat-the-edge reading would change their meaning.
  for (const auto& [s, mult] : spans) {
    if (any_sl && !s.to_neg_inf && s.start == lo)
      throw std::invalid_argument("realize_barcode: finite bar touches the stabilized left edge");
    if (any_sr && !s.to_pos_inf && s.end == hi)
      throw std::invalid_argument("realize_barcode: finite bar touches the stabilized right edge");
  }
  PersistenceModule out = PersistenceModule::zero(base, p);
  out.set_stabilized({any_sl}, {any_sr});
  // Row order at each slot: bars in span order, each with its multiplicity.
  auto rows_at = [&](long long z) {
    std::vector<std::pair<size_t, size_t>> idx;
    for (size_t k = 0; k < spans.size(); ++k)
      if (spans[k].first.start <= z && z <= spans[k].first.end)
        for (size_t c = 0; c < spans[k].second; ++c) idx.emplace_back(k, c);
    return idx;
  };
  for (long long z = lo; z <= hi; ++z)
    out.set_dim(g.index({static_cast<int>(z)}), rows_at(z).size());
  for (long long z = lo; z < hi; ++z) {
    auto from = rows_at(z), to = rows_at(z + 1);
    Matrix mat(p, to.size(), from.size());
    for (size_t r = 0; r < to.size(); ++r)
      for (size_t c = 0; c < from.size(); ++c)
        if (to[r] == from[c]) mat.set(r, c, 1);
    out.set_edge_map(g.index({static_cast<int>(z)}), g.index({static_cast<int>(z + 1)}),
                     std::move(mat));
  }
  return out;
}

}  // namespace pmconv
