#include "pmconv/module.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace pmconv {

using exact::Matrix;

namespace {

uint64_t pair_key(size_t a, size_t b, size_t n) { return static_cast<uint64_t>(a) * n + b; }

std::vector<size_t> sorted_unique(std::vector<size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

bool NaturalTransformation::validate() const {
  if (!source || !target) return false;
  if (!(source->base() == target->base()) || source->p() != target->p()) return false;
  const Base& base = source->base();
  if (components.size() != base.size()) return false;
  for (size_t z = 0; z < base.size(); ++z) {
    if (components[z].rows() != target->dim_at(z) || components[z].cols() != source->dim_at(z))
      return false;
  }
  for (auto [u, v] : base.relation_edges()) {
    Matrix lhs = target->edge_map(u, v).mul(components[u]);
    Matrix rhs = components[v].mul(source->edge_map(u, v));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

void PersistenceModule::init_storage() {
  dims_.assign(base_->size(), 0);
  if (base_->is_grid()) {
    grid_maps_.assign(base_->size() * base_->grid().dim(), Matrix(p_, 0, 0));
    stab_left_.assign(base_->grid().dim(), false);
    stab_right_.assign(base_->grid().dim(), false);
  }
}

PersistenceModule PersistenceModule::zero(std::shared_ptr<const Base> base, uint32_t p) {
  PersistenceModule m;
  m.base_ = std::move(base);
  m.p_ = p;
  m.init_storage();
  if (!m.base_->is_grid()) {
    for (auto [u, v] : m.base_->relation_edges()) m.pre_maps_[pair_key(u, v, m.base_->size())] = Matrix(p, 0, 0);
  }
  return m;
}

PersistenceModule PersistenceModule::interval(std::shared_ptr<const Base> base, uint32_t p,
                                              const std::vector<size_t>& elements) {
  if (!is_interval_set(*base, elements))
    throw std::invalid_argument("interval module: support is not an interval");
  PersistenceModule m = zero(base, p);
  std::vector<char> in(base->size(), 0);
  for (size_t e : elements) in[e] = 1;
  for (size_t e : elements) m.dims_[e] = 1;
  for (auto [u, v] : m.base_->relation_edges()) {
    Matrix mat(p, in[v] ? 1 : 0, in[u] ? 1 : 0);
    if (in[u] && in[v]) mat.set(0, 0, 1);
    m.set_edge_map(u, v, std::move(mat));
  }
  return m;
}

PersistenceModule PersistenceModule::principal_down(std::shared_ptr<const Base> base, uint32_t p,
                                                    size_t element) {
  std::vector<size_t> set;
  for (size_t i = 0; i < base->size(); ++i)
    if (base->leq(i, element)) set.push_back(i);
  PersistenceModule m = interval(base, p, set);
  if (base->is_grid()) m.stab_left_.assign(base->grid().dim(), true);
  return m;
}

PersistenceModule PersistenceModule::principal_up(std::shared_ptr<const Base> base, uint32_t p,
                                                  size_t element) {
  std::vector<size_t> set;
  for (size_t i = 0; i < base->size(); ++i)
    if (base->leq(element, i)) set.push_back(i);
  PersistenceModule m = interval(base, p, set);
  if (base->is_grid()) m.stab_right_.assign(base->grid().dim(), true);
  return m;
}

PersistenceModule PersistenceModule::constant(std::shared_ptr<const Base> base, uint32_t p) {
  std::vector<size_t> all(base->size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  PersistenceModule m = interval(base, p, all);
  if (base->is_grid()) {
    m.stab_left_.assign(base->grid().dim(), true);
    m.stab_right_.assign(base->grid().dim(), true);
  }
  return m;
}

size_t PersistenceModule::total_dim() const {
  size_t t = 0;
  for (size_t d : dims_) t += d;
  return t;
}

bool PersistenceModule::is_zero_module() const { return total_dim() == 0; }

void PersistenceModule::set_stabilized(std::vector<bool> left, std::vector<bool> right) {
  if (!base_->is_grid()) throw std::logic_error("stabilization flags are grid-only");
  if (left.size() != base_->grid().dim() || right.size() != base_->grid().dim())
    throw std::invalid_argument("set_stabilized: wrong arity");
  stab_left_ = std::move(left);
  stab_right_ = std::move(right);
}

const Matrix& PersistenceModule::edge_map(size_t from, size_t to) const {
  if (base_->is_grid()) {
    const GridPoset& g = base_->grid();
    Point a = g.point(from), b = g.point(to);
    for (size_t ax = 0; ax < g.dim(); ++ax) {
      if (b[ax] == a[ax] + 1) {
        Point chk = a;
        ++chk[ax];
        if (chk == b) return grid_maps_[from * g.dim() + ax];
      }
    }
    throw std::invalid_argument("edge_map: not a covering edge");
  }
  auto it = pre_maps_.find(pair_key(from, to, base_->size()));
  if (it == pre_maps_.end()) throw std::invalid_argument("edge_map: elements not related");
  return it->second;
}

void PersistenceModule::set_edge_map(size_t from, size_t to, Matrix m) {
  if (m.rows() != dims_[to] || m.cols() != dims_[from])
    throw std::invalid_argument("set_edge_map: shape mismatch");
  if (base_->is_grid()) {
    const GridPoset& g = base_->grid();
    Point a = g.point(from), b = g.point(to);
    for (size_t ax = 0; ax < g.dim(); ++ax) {
      Point chk = a;
      ++chk[ax];
      if (chk == b) {
        grid_maps_[from * g.dim() + ax] = std::move(m);
        return;
      }
    }
    throw std::invalid_argument("set_edge_map: not a covering edge");
  }
  if (!base_->leq(from, to)) throw std::invalid_argument("set_edge_map: elements not related");
  pre_maps_[pair_key(from, to, base_->size())] = std::move(m);
}

static std::optional<Point> clamp_with_policy(const GridPoset& g, const std::vector<bool>& stab_left,
                                              const std::vector<bool>& stab_right, const Point& q) {
  Point c = q;
  for (size_t i = 0; i < g.dim(); ++i) {
    if (q[i] < g.lo()[i]) {
      if (!stab_left[i]) return std::nullopt;
      c[i] = g.lo()[i];
    } else if (q[i] > g.hi()[i]) {
      if (!stab_right[i]) return std::nullopt;
      c[i] = g.hi()[i];
    }
  }
  return c;
}

size_t PersistenceModule::dim_at_point(const Point& q) const {
  const GridPoset& g = base_->grid();
  auto c = clamp_with_policy(g, stab_left_, stab_right_, q);
  return c ? dims_[g.index(*c)] : 0;
}

exact::Matrix PersistenceModule::policy_edge_matrix(const Point& at, size_t axis) const {
  // Map from `at` to `at + e_axis`, both already inside the box.
  const GridPoset& g = base_->grid();
  return grid_maps_[g.index(at) * g.dim() + axis];
}

Matrix PersistenceModule::transition_points(const Point& a, const Point& b) const {
  const GridPoset& g = base_->grid();
  if (!point_leq(a, b)) throw std::invalid_argument("transition_points: a <= b required");
  auto ca = clamp_with_policy(g, stab_left_, stab_right_, a);
  auto cb = clamp_with_policy(g, stab_left_, stab_right_, b);
  if (!ca || !cb) return Matrix(p_, cb ? dims_[g.index(*cb)] : 0, ca ? dims_[g.index(*ca)] : 0);
  Matrix cur = Matrix::identity(p_, dims_[g.index(*ca)]);
  Point pos = *ca;
  for (size_t ax = 0; ax < g.dim(); ++ax) {
    while (pos[ax] < (*cb)[ax]) {
      cur = policy_edge_matrix(pos, ax).mul(cur);
      ++pos[ax];
    }
  }
  return cur;
}

Matrix PersistenceModule::transition(size_t i, size_t j) const {
  if (base_->is_grid()) return transition_points(base_->grid().point(i), base_->grid().point(j));
  if (i == j) return Matrix::identity(p_, dims_[i]);
  return edge_map(i, j);
}

bool PersistenceModule::validate() const {
  const size_t n = base_->size();
  if (base_->is_grid()) {
    const GridPoset& g = base_->grid();
    for (auto [idx, ax] : g.covering_edges()) {
      const Matrix& m = grid_maps_[idx * g.dim() + ax];
      Point b = g.point(idx);
      ++b[ax];
      if (m.rows() != dims_[g.index(b)] || m.cols() != dims_[idx] || m.p() != p_) return false;
    }
    // Commuting squares suffice; composites of covers then commute too.
    for (size_t idx = 0; idx < n; ++idx) {
      Point x = g.point(idx);
      for (size_t i = 0; i < g.dim(); ++i) {
        if (x[i] >= g.hi()[i]) continue;
        for (size_t j = i + 1; j < g.dim(); ++j) {
          if (x[j] >= g.hi()[j]) continue;
          Point xi = x, xj = x;
          ++xi[i];
          ++xj[j];
          Matrix via_i = policy_edge_matrix(xi, j).mul(policy_edge_matrix(x, i));
          Matrix via_j = policy_edge_matrix(xj, i).mul(policy_edge_matrix(x, j));
          if (!(via_i == via_j)) return false;
        }
      }
    }
    return true;
  }
  const FinitePreorder& q = base_->preorder();
  for (auto [u, v] : base_->relation_edges()) {
    auto it = pre_maps_.find(pair_key(u, v, n));
    if (it == pre_maps_.end()) return false;
    if (it->second.rows() != dims_[v] || it->second.cols() != dims_[u] || it->second.p() != p_)
      return false;
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j || !q.leq(i, j)) continue;
      for (size_t k = 0; k < n; ++k) {
        if (k == j || k == i || !q.leq(j, k) || !q.leq(i, k)) continue;
        if (!(edge_map(j, k).mul(edge_map(i, j)) == edge_map(i, k))) return false;
      }
      if (q.leq(j, i)) {
        if (!(edge_map(j, i).mul(edge_map(i, j)) == Matrix::identity(p_, dims_[i]))) return false;
      }
    }
  return true;
}

PersistenceModule PersistenceModule::shift(const Point& a) const {
  if (!base_->is_grid()) throw std::logic_error("shift: grid bases only");
  const GridPoset& g = base_->grid();
  if (a.size() != g.dim()) throw std::invalid_argument("shift: wrong arity");
  PersistenceModule out = zero(base_, p_);
  out.stab_left_ = stab_left_;
  out.stab_right_ = stab_right_;
  for (size_t idx = 0; idx < g.size(); ++idx)
    out.dims_[idx] = dim_at_point(point_add(g.point(idx), a));
  for (auto [idx, ax] : g.covering_edges()) {
    Point from = point_add(g.point(idx), a);
    Point to = from;
    ++to[ax];
    out.grid_maps_[idx * g.dim() + ax] = transition_points(from, to);
  }
  return out;
}

PersistenceModule PersistenceModule::direct_sum(const PersistenceModule& other) const {
  if (!(base() == other.base()) || p_ != other.p_)
    throw std::invalid_argument("direct_sum: base/field mismatch");
  if (stab_left_ != other.stab_left_ || stab_right_ != other.stab_right_)
    throw std::invalid_argument("direct_sum: stabilization mismatch");
  PersistenceModule out = zero(base_, p_);
  out.stab_left_ = stab_left_;
  out.stab_right_ = stab_right_;
  for (size_t i = 0; i < dims_.size(); ++i) out.dims_[i] = dims_[i] + other.dims_[i];
  for (auto [u, v] : base_->relation_edges()) {
    Matrix blk(p_, out.dims_[v], out.dims_[u]);
    blk.place(0, 0, edge_map(u, v));
    blk.place(dims_[v], dims_[u], other.edge_map(u, v));
    out.set_edge_map(u, v, std::move(blk));
  }
  return out;
}

bool PersistenceModule::operator==(const PersistenceModule& o) const {
  if (!(base() == o.base()) || p_ != o.p_ || dims_ != o.dims_) return false;
  if (stab_left_ != o.stab_left_ || stab_right_ != o.stab_right_) return false;
  for (auto [u, v] : base_->relation_edges())
    if (!(edge_map(u, v) == o.edge_map(u, v))) return false;
  return true;
}

std::optional<size_t> LimitData::offset_of(size_t element) const {
  auto it = std::lower_bound(points.begin(), points.end(), element);
  if (it == points.end() || *it != element) return std::nullopt;
  return offsets[static_cast<size_t>(it - points.begin())];
}

std::optional<size_t> ColimitData::offset_of(size_t element) const {
  auto it = std::lower_bound(points.begin(), points.end(), element);
  if (it == points.end() || *it != element) return std::nullopt;
  return offsets[static_cast<size_t>(it - points.begin())];
}

LimitData limit_over(const PersistenceModule& m, const std::vector<size_t>& subset) {
  const Base& base = m.base();
  std::vector<size_t> sub = sorted_unique(subset);
  LimitData out;
  for (size_t s : sub) {
    if (m.dim_at(s) == 0) continue;
    out.points.push_back(s);
    out.offsets.push_back(out.ambient_dim);
    out.ambient_dim += m.dim_at(s);
  }
  // Elements forced to zero by an arrow from a zero stalk inside the subset.
  std::vector<char> killed(out.points.size(), 0);
  for (size_t i = 0; i < out.points.size(); ++i)
    for (size_t s : sub)
      if (s != out.points[i] && m.dim_at(s) == 0 && base.leq(s, out.points[i])) {
        killed[i] = 1;
        break;
      }
  size_t rows = 0;
  for (size_t i = 0; i < out.points.size(); ++i)
    if (killed[i]) rows += m.dim_at(out.points[i]);
  std::vector<std::pair<size_t, size_t>> pairs;  // indices into out.points
  for (size_t i = 0; i < out.points.size(); ++i)
    for (size_t j = 0; j < out.points.size(); ++j)
      if (i != j && base.leq(out.points[i], out.points[j])) {
        pairs.emplace_back(i, j);
        rows += m.dim_at(out.points[j]);
      }
  Matrix c(m.p(), rows, out.ambient_dim);
  size_t r0 = 0;
  for (size_t i = 0; i < out.points.size(); ++i) {
    if (!killed[i]) continue;
    size_t d = m.dim_at(out.points[i]);
    c.place(r0, out.offsets[i], Matrix::identity(m.p(), d));
    r0 += d;
  }
  for (auto [i, j] : pairs) {
    Matrix t = m.transition(out.points[i], out.points[j]);
    size_t dj = m.dim_at(out.points[j]);
    c.place(r0, out.offsets[i], t);
    Matrix neg = Matrix::identity(m.p(), dj).scaled(m.p() - 1);
    c.place(r0, out.offsets[j], neg);
    r0 += dj;
  }
  out.basis = exact::kernel_basis(c);
  return out;
}

ColimitData colimit_over(const PersistenceModule& m, const std::vector<size_t>& subset) {
  const Base& base = m.base();
  std::vector<size_t> sub = sorted_unique(subset);
  ColimitData out;
  for (size_t s : sub) {
    if (m.dim_at(s) == 0) continue;
    out.points.push_back(s);
    out.offsets.push_back(out.ambient_dim);
    out.ambient_dim += m.dim_at(s);
  }
  std::vector<char> killed(out.points.size(), 0);
  for (size_t i = 0; i < out.points.size(); ++i)
    for (size_t s : sub)
      if (s != out.points[i] && m.dim_at(s) == 0 && base.leq(out.points[i], s)) {
        killed[i] = 1;
        break;
      }
  size_t cols = 0;
  for (size_t i = 0; i < out.points.size(); ++i)
    if (killed[i]) cols += m.dim_at(out.points[i]);
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < out.points.size(); ++i)
    for (size_t j = 0; j < out.points.size(); ++j)
      if (i != j && base.leq(out.points[i], out.points[j])) {
        pairs.emplace_back(i, j);
        cols += m.dim_at(out.points[i]);
      }
  Matrix rel(m.p(), out.ambient_dim, cols);
  size_t c0 = 0;
  for (size_t i = 0; i < out.points.size(); ++i) {
    if (!killed[i]) continue;
    size_t d = m.dim_at(out.points[i]);
    rel.place(out.offsets[i], c0, Matrix::identity(m.p(), d));
    c0 += d;
  }
  for (auto [i, j] : pairs) {
    Matrix t = m.transition(out.points[i], out.points[j]);
    size_t di = m.dim_at(out.points[i]);
    rel.place(out.offsets[j], c0, t);
    Matrix neg = Matrix::identity(m.p(), di).scaled(m.p() - 1);
    rel.place(out.offsets[i], c0, neg);
    c0 += di;
  }
  out.proj = exact::cokernel_projection(rel);
  return out;
}

size_t sections(const PersistenceModule& m, const std::vector<size_t>& subset) {
  if (subset.empty()) throw std::invalid_argument("sections: empty subset");
  return limit_over(m, subset).dim();
}

size_t cosections(const PersistenceModule& m, const std::vector<size_t>& subset) {
  if (subset.empty()) throw std::invalid_argument("cosections: empty subset");
  return colimit_over(m, subset).dim();
}

exact::Matrix restrict_limit(const LimitData& big, const LimitData& small) {
  uint32_t p = big.basis.p();
  Matrix projected(p, small.ambient_dim, big.dim());
  for (size_t i = 0; i < small.points.size(); ++i) {
    auto src_off = big.offset_of(small.points[i]);
    if (!src_off) continue;
    size_t next = i + 1 < small.points.size() ? small.offsets[i + 1] : small.ambient_dim;
    size_t d = next - small.offsets[i];
    projected.place(small.offsets[i], 0, big.basis.block(*src_off, 0, d, big.dim()));
  }
  auto x = exact::solve_matrix(small.basis, projected);
  if (!x) throw std::logic_error("restrict_limit: restriction not in limit");
  return *x;
}

exact::Matrix corestrict_colimit(const ColimitData& small, const ColimitData& big) {
  uint32_t p = big.proj.p();
  Matrix incl(p, big.ambient_dim, small.ambient_dim);
  for (size_t i = 0; i < small.points.size(); ++i) {
    auto dst_off = big.offset_of(small.points[i]);
    if (!dst_off) continue;
    size_t next = i + 1 < small.points.size() ? small.offsets[i + 1] : small.ambient_dim;
    size_t d = next - small.offsets[i];
    incl.place(*dst_off, small.offsets[i], Matrix::identity(p, d));
  }
  if (small.proj.rows() == 0) return Matrix(p, big.dim(), 0);
  return big.proj.mul(incl).mul(exact::right_inverse(small.proj));
}

exact::Matrix induced_limit_map(const LimitData& src, const LimitData& tgt,
                                const NaturalTransformation& phi) {
  uint32_t p = phi.source->p();
  Matrix mapped(p, tgt.ambient_dim, src.dim());
  for (size_t i = 0; i < tgt.points.size(); ++i) {
    size_t e = tgt.points[i];
    auto src_off = src.offset_of(e);
    if (!src_off) continue;  // source stalk is zero there
    size_t sd = phi.source->dim_at(e);
    Matrix block = phi.components[e].mul(src.basis.block(*src_off, 0, sd, src.dim()));
    mapped.place(tgt.offsets[i], 0, block);
  }
  auto x = exact::solve_matrix(tgt.basis, mapped);
  if (!x) throw std::logic_error("induced_limit_map: image not in limit");
  return *x;
}

exact::Matrix induced_colimit_map(const ColimitData& src, const ColimitData& tgt,
                                  const NaturalTransformation& phi) {
  uint32_t p = phi.source->p();
  Matrix amb(p, tgt.ambient_dim, src.ambient_dim);
  for (size_t i = 0; i < src.points.size(); ++i) {
    size_t e = src.points[i];
    auto dst_off = tgt.offset_of(e);
    if (!dst_off) continue;
    amb.place(*dst_off, src.offsets[i], phi.components[e]);
  }
  if (src.proj.rows() == 0) return Matrix(p, tgt.dim(), 0);
  return tgt.proj.mul(amb).mul(exact::right_inverse(src.proj));
}

namespace {

struct HomLayout {
  std::vector<size_t> var_offset;  // SIZE_MAX when no variables at z
  size_t total{0};
};

HomLayout hom_layout(const PersistenceModule& m, const PersistenceModule& n) {
  HomLayout l;
  l.var_offset.assign(m.base().size(), SIZE_MAX);
  for (size_t z = 0; z < m.base().size(); ++z) {
    size_t nv = m.dim_at(z) * n.dim_at(z);
    if (nv == 0) continue;
    l.var_offset[z] = l.total;
    l.total += nv;
  }
  return l;
}

Matrix naturality_system(const PersistenceModule& m, const PersistenceModule& n,
                         const HomLayout& l) {
  size_t rows = 0;
  for (auto [u, v] : m.base().relation_edges()) rows += n.dim_at(v) * m.dim_at(u);
  Matrix sys(m.p(), rows, l.total);
  size_t r0 = 0;
  for (auto [u, v] : m.base().relation_edges()) {
    size_t block = n.dim_at(v) * m.dim_at(u);
    if (block == 0) continue;
    const Matrix& nm = n.edge_map(u, v);  // N_u -> N_v
    const Matrix& mm = m.edge_map(u, v);  // M_u -> M_v
    for (size_t r = 0; r < n.dim_at(v); ++r)
      for (size_t c = 0; c < m.dim_at(u); ++c) {
        size_t row = r0 + r * m.dim_at(u) + c;
        if (l.var_offset[u] != SIZE_MAX)
          for (size_t k = 0; k < n.dim_at(u); ++k) {
            size_t var = l.var_offset[u] + k * m.dim_at(u) + c;
            sys.set(row, var, exact::fp_add(sys.at(row, var), nm.at(r, k), m.p()));
          }
        if (l.var_offset[v] != SIZE_MAX)
          for (size_t lcol = 0; lcol < m.dim_at(v); ++lcol) {
            size_t var = l.var_offset[v] + r * m.dim_at(v) + lcol;
            sys.set(row, var, exact::fp_sub(sys.at(row, var), mm.at(lcol, c), m.p()));
          }
      }
    r0 += block;
  }
  return sys;
}

std::vector<uint32_t> vectorize_nt(const PersistenceModule& m, const PersistenceModule& n,
                                   const HomLayout& l, const std::vector<Matrix>& comps) {
  std::vector<uint32_t> v(l.total, 0);
  for (size_t z = 0; z < m.base().size(); ++z) {
    if (l.var_offset[z] == SIZE_MAX) continue;
    for (size_t r = 0; r < n.dim_at(z); ++r)
      for (size_t c = 0; c < m.dim_at(z); ++c)
        v[l.var_offset[z] + r * m.dim_at(z) + c] = comps[z].at(r, c);
  }
  return v;
}

void check_same_base(const PersistenceModule& m, const PersistenceModule& n) {
  if (!(m.base() == n.base()) || m.p() != n.p())
    throw std::invalid_argument("hom: base/field mismatch");
}

}  // namespace

size_t hom_space(const PersistenceModule& m, const PersistenceModule& n) {
  check_same_base(m, n);
  HomLayout l = hom_layout(m, n);
  if (l.total == 0) return 0;
  return l.total - exact::rank(naturality_system(m, n, l));
}

std::vector<NaturalTransformation> hom_basis(const PersistenceModule& m,
                                             const PersistenceModule& n) {
  check_same_base(m, n);
  HomLayout l = hom_layout(m, n);
  auto msrc = std::make_shared<PersistenceModule>(m);
  auto mtgt = std::make_shared<PersistenceModule>(n);
  std::vector<NaturalTransformation> out;
  if (l.total == 0) return out;
  Matrix basis = exact::kernel_basis(naturality_system(m, n, l));
  for (size_t col = 0; col < basis.cols(); ++col) {
    NaturalTransformation nt;
    nt.source = msrc;
    nt.target = mtgt;
    nt.components.reserve(m.base().size());
    for (size_t z = 0; z < m.base().size(); ++z) {
      Matrix t(m.p(), n.dim_at(z), m.dim_at(z));
      if (l.var_offset[z] != SIZE_MAX)
        for (size_t r = 0; r < n.dim_at(z); ++r)
          for (size_t c = 0; c < m.dim_at(z); ++c)
            t.set(r, c, basis.at(l.var_offset[z] + r * m.dim_at(z) + c, col));
      nt.components.push_back(std::move(t));
    }
    out.push_back(std::move(nt));
  }
  return out;
}

PersistenceModule internal_hom(const PersistenceModule& m, const PersistenceModule& n) {
  check_same_base(m, n);
  if (!m.base().is_grid()) throw std::logic_error("internal_hom: grid bases only");
  const GridPoset& g = m.base().grid();
  PersistenceModule out = PersistenceModule::zero(m.base_ptr(), m.p());
  out.set_stabilized(n.stabilized_left(), n.stabilized_right());
  std::vector<PersistenceModule> shifted(g.size());
  std::vector<std::vector<NaturalTransformation>> bases(g.size());
  for (size_t idx = 0; idx < g.size(); ++idx) {
    shifted[idx] = n.shift(g.point(idx));
    bases[idx] = hom_basis(m, shifted[idx]);
    out.set_dim(idx, bases[idx].size());
  }
  for (auto [idx, ax] : g.covering_edges()) {
    Point x = g.point(idx);
    Point y = x;
    ++y[ax];
    size_t yidx = g.index(y);
    HomLayout lt = hom_layout(m, shifted[yidx]);
    Matrix tgt_basis(m.p(), lt.total, bases[yidx].size());
    for (size_t c = 0; c < bases[yidx].size(); ++c) {
      auto v = vectorize_nt(m, shifted[yidx], lt, bases[yidx][c].components);
      for (size_t r = 0; r < v.size(); ++r) tgt_basis.set(r, c, v[r]);
    }
    Matrix cols(m.p(), lt.total, bases[idx].size());
    for (size_t c = 0; c < bases[idx].size(); ++c) {
      std::vector<Matrix> comps;
      comps.reserve(g.size());
      for (size_t z = 0; z < g.size(); ++z) {
        Point pz = g.point(z);
        Matrix post = n.transition_points(point_add(pz, x), point_add(pz, y));
        comps.push_back(post.mul(bases[idx][c].components[z]));
      }
      auto v = vectorize_nt(m, shifted[yidx], lt, comps);
      for (size_t r = 0; r < v.size(); ++r) cols.set(r, c, v[r]);
    }
    auto coords = exact::solve_matrix(tgt_basis, cols);
    if (!coords) throw std::logic_error("internal_hom: induced map escapes hom space");
    out.set_edge_map(idx, yidx, *coords);
  }
  return out;
}

namespace {

void check_map(const MonotoneMap& f, const PersistenceModule& m) {
  if (!f.source || !f.target || !(m.base() == *f.source))
    throw std::invalid_argument("direct/inverse image: module not on the map's source");
  if (!f.is_monotone()) throw std::invalid_argument("direct/inverse image: map is not monotone");
}

}  // namespace

SheafImageData direct_image_sheaf_full(const MonotoneMap& f, const PersistenceModule& m) {
  check_map(f, m);
  const Base& tgt = *f.target;
  SheafImageData out;
  out.module = PersistenceModule::zero(f.target, m.p());
  out.stalks.resize(tgt.size());
  for (size_t x = 0; x < tgt.size(); ++x) {
    std::vector<size_t> preimage;
    for (size_t q = 0; q < m.base().size(); ++q)
      if (tgt.leq(x, f.assignment[q])) preimage.push_back(q);
    out.stalks[x] = limit_over(m, preimage);
    out.module.set_dim(x, out.stalks[x].dim());
  }
  for (auto [x, y] : tgt.relation_edges())
    out.module.set_edge_map(x, y, restrict_limit(out.stalks[x], out.stalks[y]));
  return out;
}

PersistenceModule direct_image_sheaf(const MonotoneMap& f, const PersistenceModule& m) {
  return direct_image_sheaf_full(f, m).module;
}

PersistenceModule direct_image_cosheaf(const MonotoneMap& f, const PersistenceModule& m) {
  check_map(f, m);
  const Base& tgt = *f.target;
  PersistenceModule out = PersistenceModule::zero(f.target, m.p());
  std::vector<ColimitData> stalks(tgt.size());
  for (size_t x = 0; x < tgt.size(); ++x) {
    std::vector<size_t> preimage;
    for (size_t q = 0; q < m.base().size(); ++q)
      if (tgt.leq(f.assignment[q], x)) preimage.push_back(q);
    stalks[x] = colimit_over(m, preimage);
    out.set_dim(x, stalks[x].dim());
  }
  for (auto [x, y] : tgt.relation_edges())
    out.set_edge_map(x, y, corestrict_colimit(stalks[x], stalks[y]));
  return out;
}

PersistenceModule inverse_image(const MonotoneMap& f, const PersistenceModule& m) {
  if (!f.source || !f.target || !(m.base() == *f.target))
    throw std::invalid_argument("inverse_image: module not on the map's target");
  if (!f.is_monotone()) throw std::invalid_argument("inverse_image: map is not monotone");
  PersistenceModule out = PersistenceModule::zero(f.source, m.p());
  for (size_t i = 0; i < f.source->size(); ++i) out.set_dim(i, m.dim_at(f.assignment[i]));
  for (auto [u, v] : f.source->relation_edges())
    out.set_edge_map(u, v, m.transition(f.assignment[u], f.assignment[v]));
  return out;
}

bool is_interval_set(const Base& base, const std::vector<size_t>& elements) {
  std::vector<size_t> a = sorted_unique(elements);
  for (size_t e : a)
    if (e >= base.size()) throw std::out_of_range("is_interval_set: element out of range");
  if (a.empty()) return true;
  std::vector<char> in(base.size(), 0);
  for (size_t e : a) in[e] = 1;
  for (size_t i : a)
    for (size_t j : a) {
      if (!base.leq(i, j)) continue;
      for (size_t k = 0; k < base.size(); ++k)
        if (!in[k] && base.leq(i, k) && base.leq(k, j)) return false;
    }
  std::vector<size_t> comp(a.size());
  for (size_t i = 0; i < a.size(); ++i) comp[i] = i;
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (base.leq(a[i], a[j]) || base.leq(a[j], a[i])) comp[find(i)] = find(j);
  for (size_t i = 1; i < a.size(); ++i)
    if (find(i) != find(0)) return false;
  return true;
}

}  // namespace pmconv
