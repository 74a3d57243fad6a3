#include "pmconv/stability.hpp"

#include <algorithm>
#include <map>

namespace pmconv {

using exact::Matrix;

void SimplicialComplex::validate() const {
  std::vector<std::vector<size_t>> sorted = simplices;
  for (auto& s : sorted) {
    if (s.empty()) throw std::invalid_argument("simplicial complex: empty simplex");
    if (!std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("simplicial complex: vertices must be strictly ascending");
  }
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("simplicial complex: duplicate simplex");
  auto present = [&](const std::vector<size_t>& s) {
    return std::binary_search(sorted.begin(), sorted.end(), s);
  };
  for (const auto& s : simplices) {
    if (s.size() == 1) continue;
    for (size_t skip = 0; skip < s.size(); ++skip) {
      std::vector<size_t> face;
      for (size_t i = 0; i < s.size(); ++i)
        if (i != skip) face.push_back(s[i]);
      if (!present(face)) throw std::invalid_argument("simplicial complex: missing face");
    }
  }
}

size_t SimplicialComplex::vertex_count() const {
  size_t n = 0;
  for (const auto& s : simplices)
    for (size_t v : s) n = std::max(n, v + 1);
  return n;
}

Barcode sublevel_persistence(const SimplicialComplex& k, const VertexFunction& f, size_t degree,
                             uint32_t p) {
  k.validate();
  if (f.size() < k.vertex_count())
    throw std::invalid_argument("sublevel_persistence: function misses vertices");
  struct Cell {
    Rat value;
    std::vector<size_t> verts;
  };
  std::vector<Cell> cells;
  for (const auto& s : k.simplices) {
    Rat v = f[s[0]];
    for (size_t x : s) v = std::max(v, f[x]);
    cells.push_back({v, s});
  }
  // Filtration order: value, then dimension, then lexicographic vertices.
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.verts.size() != b.verts.size()) return a.verts.size() < b.verts.size();
    return a.verts < b.verts;
  });
  std::map<std::vector<size_t>, size_t> index_of;
  for (size_t i = 0; i < cells.size(); ++i) index_of[cells[i].verts] = i;

  // Sparse columns of the boundary matrix, reduced by the standard pairing.
  size_t n = cells.size();
  std::vector<std::map<size_t, uint32_t>> cols(n);
  for (size_t j = 0; j < n; ++j) {
    const auto& s = cells[j].verts;
    if (s.size() == 1) continue;
    uint32_t sign = 1;
    for (size_t skip = 0; skip < s.size(); ++skip) {
      std::vector<size_t> face;
      for (size_t i = 0; i < s.size(); ++i)
        if (i != skip) face.push_back(s[i]);
      cols[j][index_of.at(face)] = skip % 2 == 0 ? 1 % p : exact::fp_neg(1 % p, p);
      (void)sign;
    }
  }
  auto low = [&](size_t j) -> long long {
    return cols[j].empty() ? -1 : static_cast<long long>(cols[j].rbegin()->first);
  };
  std::vector<long long> owner(n, -1);  // owner[row] = column with that low
  for (size_t j = 0; j < n; ++j) {
    while (!cols[j].empty()) {
      long long l = low(j);
      if (owner[static_cast<size_t>(l)] < 0) break;
      size_t j2 = static_cast<size_t>(owner[static_cast<size_t>(l)]);
      uint32_t factor =
          exact::fp_mul(cols[j].rbegin()->second,
                        exact::fp_inv(cols[j2].rbegin()->second, p), p);
      for (const auto& [row, val] : cols[j2]) {
        uint32_t cur = 0;
        auto it = cols[j].find(row);
        if (it != cols[j].end()) cur = it->second;
        uint32_t next = exact::fp_sub(cur, exact::fp_mul(factor, val, p), p);
        if (next == 0)
          cols[j].erase(row);
        else
          cols[j][row] = next;
      }
    }
    if (!cols[j].empty()) owner[static_cast<size_t>(low(j))] = static_cast<long long>(j);
  }
  Barcode out;
  for (size_t j = 0; j < n; ++j) {
    if (!cols[j].empty()) {
      size_t i = static_cast<size_t>(low(j));
      if (cells[i].verts.size() - 1 != degree) continue;
      if (cells[i].value == cells[j].value) continue;  // zero-length
      out.add(Interval::make(Endpoint::finite(cells[i].value, true),
                             Endpoint::finite(cells[j].value, false)));
    } else if (owner[j] < 0 && cells[j].verts.size() - 1 == degree) {
      out.add(Interval::make(Endpoint::finite(cells[j].value, true), Endpoint::pos_inf()));
    }
  }
  return out;
}

StabilityReport stability_check(const SimplicialComplex& k, const VertexFunction& f,
                                const VertexFunction& g, size_t degree, uint32_t p) {
  if (f.size() != g.size())
    throw std::invalid_argument("stability_check: functions on different vertex sets");
  StabilityReport rep;
  rep.barcode_f = sublevel_persistence(k, f, degree, p);
  rep.barcode_g = sublevel_persistence(k, g, degree, p);
  rep.distance = interleaving_distance_barcodes(rep.barcode_f, rep.barcode_g);
  for (size_t v = 0; v < f.size(); ++v) rep.sup_norm = std::max(rep.sup_norm, rat_abs(f[v] - g[v]));
  rep.holds = !rep.distance.infinite && rep.distance.value <= rep.sup_norm;
  return rep;
}

PersistenceModule condense_module(const PersistenceModule& m,
                                  PreorderCondensation& cond) {
  if (m.base().is_grid()) throw std::invalid_argument("condense_module: preorder bases only");
  cond = m.base().preorder().condense();
  auto qbase = std::make_shared<Base>(cond.quotient);
  PersistenceModule out = PersistenceModule::zero(qbase, m.p());
  for (size_t c = 0; c < cond.reps.size(); ++c) out.set_dim(c, m.dim_at(cond.reps[c]));
  for (auto [u, v] : qbase->relation_edges())
    out.set_edge_map(u, v, m.transition(cond.reps[u], cond.reps[v]));
  return out;
}

namespace {

long long sup_norm_steps(const MonotoneMap& f, const MonotoneMap& g) {
  const GridPoset& grid = f.target->grid();
  long long e = 0;
  for (size_t q = 0; q < f.source->size(); ++q) {
    Point a = grid.point(f.assignment[q]);
    Point b = grid.point(g.assignment[q]);
    for (size_t i = 0; i < grid.dim(); ++i)
      e = std::max<long long>(e, std::llabs(static_cast<long long>(a[i]) - b[i]));
  }
  return e;
}

// f_* of each resolution term with the induced differentials, plus the raw
// limit presentations for building restriction maps afterwards.
struct PushedComplex {
  GradedModuleComplex complex;
  std::vector<std::vector<LimitData>> stalks;  // [term][target point]
};

PushedComplex push_resolution(const MonotoneMap& f, const Resolution& r) {
  PushedComplex out;
  for (const auto& term : r.terms) {
    SheafImageData data = direct_image_sheaf_full(f, term);
    // Below every image point the preimage is the whole source, so the
    // pushed module is constant there: honest stabilized-left reading.
    if (f.target->is_grid())
      data.module.set_stabilized(std::vector<bool>(f.target->grid().dim(), true),
                                 std::vector<bool>(f.target->grid().dim(), false));
    out.complex.terms.push_back(std::move(data.module));
    out.stalks.push_back(std::move(data.stalks));
  }
  for (size_t i = 0; i + 1 < r.terms.size(); ++i) {
    std::vector<Matrix> comps(f.target->size());
    for (size_t x = 0; x < f.target->size(); ++x)
      comps[x] = induced_limit_map(out.stalks[i][x], out.stalks[i + 1][x], r.diffs[i]);
    NaturalTransformation nt;
    nt.source = std::make_shared<PersistenceModule>(out.complex.terms[i]);
    nt.target = std::make_shared<PersistenceModule>(out.complex.terms[i + 1]);
    nt.components = std::move(comps);
    out.complex.d.push_back(std::move(nt));
  }
  return out;
}

}  // namespace

DirectImageStabilityReport direct_image_stability_check(const PersistenceModule& f_module,
                                                        const MonotoneMap& f,
                                                        const MonotoneMap& g) {
  if (!f.target || !g.target || !(*f.target == *g.target) || !f.target->is_grid())
    throw std::invalid_argument("direct_image_stability_check: maps must share a grid target");
  if (!(f_module.base() == *f.source) || !(f_module.base() == *g.source))
    throw std::invalid_argument("direct_image_stability_check: module not on the maps' source");
  DirectImageStabilityReport rep;
  rep.bound = sup_norm_steps(f, g);
  Resolution r = injective_resolution(f_module);
  PushedComplex pf = push_resolution(f, r);
  PushedComplex pg = push_resolution(g, r);
  CohomologyData hf = cohomology_full(pf.complex);
  CohomologyData hg = cohomology_full(pg.complex);
  const GridPoset& grid = f.target->grid();
  Point ev(grid.dim(), static_cast<int>(rep.bound));

  rep.certified = true;
  for (size_t slot = 0; slot < hf.modules.size(); ++slot) {
    // Phi_x restricts sections over f^{-1}(U_{x - eps}) to g^{-1}(U_x) and
    // Psi_x the other way round; both push to cohomology.
    EpsilonCertificate cert;
    cert.epsilon = rep.bound;
    cert.m = std::make_shared<PersistenceModule>(hf.modules[slot]);
    cert.n = std::make_shared<PersistenceModule>(hg.modules[slot]);
    cert.f.resize(grid.size());
    cert.g.resize(grid.size());
    bool ok = true;
    for (size_t xi = 0; xi < grid.size() && ok; ++xi) {
      Point x = grid.point(xi);
      Point xs = point_sub(x, ev);
      if (!grid.contains(xs)) {
        cert.f[xi] = Matrix(f_module.p(), hg.modules[slot].dim_at(xi), 0);
        cert.g[xi] = Matrix(f_module.p(), hf.modules[slot].dim_at(xi), 0);
        continue;
      }
      size_t si = grid.index(xs);
      Matrix phi_chain = restrict_limit(pf.stalks[slot][si], pg.stalks[slot][xi]);
      Matrix psi_chain = restrict_limit(pg.stalks[slot][si], pf.stalks[slot][xi]);
      cert.f[xi] = cohomology_map_at(hf, hg, slot, si, xi, phi_chain);
      cert.g[xi] = cohomology_map_at(hg, hf, slot, si, xi, psi_chain);
    }
    if (!ok || !certificate_validate(cert)) rep.certified = false;
    if (grid.dim() == 1) {
      DistanceResult d = interleaving_distance_barcodes(barcode_extract(hf.modules[slot]),
                                                        barcode_extract(hg.modules[slot]));
      rep.degreewise.push_back(d);
    }
  }
  rep.holds = rep.certified;
  for (const DistanceResult& d : rep.degreewise)
    if (d.infinite || d.value > Rat(rep.bound)) rep.holds = false;
  return rep;
}

DirectImageStabilityReport pullback_stability_check(const FinitePreorder& x,
                                                    const PersistenceModule& f_module,
                                                    const std::vector<Point>& f,
                                                    const std::vector<Point>& g) {
  if (f.size() != x.size() || g.size() != x.size())
    throw std::invalid_argument("pullback_stability_check: assignment size mismatch");
  if (!(f_module.base() == Base(x)))
    throw std::invalid_argument("pullback_stability_check: module not on the given preorder");
  // Refined preorder: related iff related in X and under both assignments.
  FinitePreorder refined(x.size());
  for (size_t a = 0; a < x.size(); ++a)
    for (size_t b = 0; b < x.size(); ++b)
      if (x.leq(a, b) && point_leq(f[a], f[b]) && point_leq(g[a], g[b])) refined.set_leq(a, b);
  auto refined_base = std::make_shared<Base>(refined);
  // Identity refinement is monotone toward the original preorder; pull the
  // module back along it.
  PersistenceModule pulled = PersistenceModule::zero(refined_base, f_module.p());
  for (size_t i = 0; i < x.size(); ++i) pulled.set_dim(i, f_module.dim_at(i));
  for (auto [u, v] : refined_base->relation_edges())
    pulled.set_edge_map(u, v, f_module.transition(u, v));
  // Resolutions need a poset, so work on the condensation.
  PreorderCondensation cond;
  PersistenceModule condensed = condense_module(pulled, cond);
  auto poset_base = condensed.base_ptr();
  // Target grid: bounding box padded so every shift by the bound stays in.
  long long pad = 1;
  for (size_t q = 0; q < x.size(); ++q)
    for (size_t i = 0; i < f[q].size(); ++i)
      pad = std::max<long long>(pad, std::llabs(static_cast<long long>(f[q][i]) - g[q][i]));
  Point lo = f[0], hi = f[0];
  for (size_t q = 0; q < x.size(); ++q) {
    lo = meet(meet(lo, f[q]), g[q]);
    hi = join(join(hi, f[q]), g[q]);
  }
  for (size_t i = 0; i < lo.size(); ++i) {
    lo[i] -= static_cast<int>(2 * pad);
    hi[i] += static_cast<int>(2 * pad);
  }
  auto target = std::make_shared<Base>(GridPoset(lo, hi));
  const GridPoset& tg = target->grid();
  MonotoneMap fm{poset_base, target, {}}, gm{poset_base, target, {}};
  for (size_t c = 0; c < cond.reps.size(); ++c) {
    fm.assignment.push_back(tg.index(f[cond.reps[c]]));
    gm.assignment.push_back(tg.index(g[cond.reps[c]]));
  }
  if (!fm.is_monotone() || !gm.is_monotone())
    throw std::logic_error("pullback_stability_check: refined maps failed monotonicity");
  return direct_image_stability_check(condensed, fm, gm);
}

}  // namespace pmconv
