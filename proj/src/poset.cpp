#include "pmconv/poset.hpp"

#include <algorithm>
#include <stdexcept>

namespace pmconv {

std::string point_to_string(const Point& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

bool point_leq(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("point_leq: dimension mismatch");
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Point point_add(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("point_add: dimension mismatch");
  Point c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Point point_sub(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("point_sub: dimension mismatch");
  Point c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Point join(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("join: dimension mismatch");
  Point c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = std::max(a[i], b[i]);
  return c;
}

Point meet(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("meet: dimension mismatch");
  Point c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = std::min(a[i], b[i]);
  return c;
}

GridPoset::GridPoset(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size())
    throw std::invalid_argument("GridPoset: bad box dimensions");
  for (size_t i = 0; i < lo_.size(); ++i)
    if (lo_[i] > hi_[i]) throw std::invalid_argument("GridPoset: lo > hi");
  strides_.assign(lo_.size(), 1);
  size_ = 1;
  for (size_t i = lo_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= static_cast<size_t>(hi_[i] - lo_[i] + 1);
  }
}

bool GridPoset::contains(const Point& a) const {
  if (a.size() != lo_.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] < lo_[i] || a[i] > hi_[i]) return false;
  return true;
}

bool GridPoset::leq(const Point& a, const Point& b) const {
  if (!contains(a) || !contains(b)) throw std::out_of_range("GridPoset::leq: point outside box");
  return point_leq(a, b);
}

size_t GridPoset::index(const Point& a) const {
  if (!contains(a)) throw std::out_of_range("GridPoset::index: point outside box");
  size_t idx = 0;
  for (size_t i = 0; i < a.size(); ++i) idx += strides_[i] * static_cast<size_t>(a[i] - lo_[i]);
  return idx;
}

Point GridPoset::point(size_t idx) const {
  if (idx >= size_) throw std::out_of_range("GridPoset::point: index out of range");
  Point a(lo_.size());
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = lo_[i] + static_cast<int>(idx / strides_[i]);
    idx %= strides_[i];
  }
  return a;
}

void GridPoset::for_each_point(const std::function<void(const Point&)>& fn) const {
  for (size_t idx = 0; idx < size_; ++idx) fn(point(idx));
}

std::vector<std::pair<size_t, size_t>> GridPoset::covering_edges() const {
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t idx = 0; idx < size_; ++idx) {
    Point a = point(idx);
    for (size_t ax = 0; ax < dim(); ++ax) {
      if (a[ax] < hi_[ax]) edges.emplace_back(idx, ax);
    }
  }
  return edges;
}

std::vector<Point> principal_points(const GridPoset& p, const PrincipalSet& s) {
  std::vector<Point> out;
  p.for_each_point([&](const Point& a) {
    bool in = s.kind == PrincipalSet::Kind::Up ? point_leq(s.base, a) : point_leq(a, s.base);
    if (in) out.push_back(a);
  });
  return out;
}

bool is_interval(const GridPoset& p, const std::vector<Point>& set) {
  for (const Point& a : set)
    if (!p.contains(a)) throw std::out_of_range("is_interval: point outside box");
  if (set.empty()) return true;
  std::vector<Point> sorted = set;
  std::sort(sorted.begin(), sorted.end());
  auto member = [&](const Point& a) {
    return std::binary_search(sorted.begin(), sorted.end(), a);
  };
  // Convexity: a <= c <= b with a, b in A forces c in A.
  for (const Point& a : sorted)
    for (const Point& b : sorted) {
      if (!point_leq(a, b)) continue;
      Point c = a;
      // Walk the sub-box [a, b].
      std::function<bool(size_t)> walk = [&](size_t ax) -> bool {
        if (ax == c.size()) return member(c);
        for (c[ax] = a[ax]; c[ax] <= b[ax]; ++c[ax])
          if (!walk(ax + 1)) return false;
        c[ax] = a[ax];
        return true;
      };
      if (!walk(0)) return false;
    }
  // Connectivity: zigzag chains inside A = connectivity of the comparability
  // graph restricted to A.
  size_t n = sorted.size();
  std::vector<size_t> comp(n);
  for (size_t i = 0; i < n; ++i) comp[i] = i;
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (point_leq(sorted[i], sorted[j]) || point_leq(sorted[j], sorted[i]))
        comp[find(i)] = find(j);
  for (size_t i = 1; i < n; ++i)
    if (find(i) != find(0)) return false;
  return true;
}

FinitePreorder::FinitePreorder(size_t n) : n_(n), rel_(n * n, 0) {
  for (size_t i = 0; i < n; ++i) rel_[i * n + i] = 1;
}

FinitePreorder FinitePreorder::from_relation(size_t n,
                                             const std::vector<std::pair<size_t, size_t>>& rel) {
  FinitePreorder q(n);
  for (auto [a, b] : rel) {
    if (a >= n || b >= n) throw std::out_of_range("from_relation: element out of range");
    q.rel_[a * n + b] = 1;
  }
  q.close_transitively();
  return q;
}

void FinitePreorder::close_transitively() {
  for (size_t k = 0; k < n_; ++k)
    for (size_t i = 0; i < n_; ++i) {
      if (!rel_[i * n_ + k]) continue;
      for (size_t j = 0; j < n_; ++j)
        if (rel_[k * n_ + j]) rel_[i * n_ + j] = 1;
    }
}

bool FinitePreorder::is_reflexive() const {
  for (size_t i = 0; i < n_; ++i)
    if (!rel_[i * n_ + i]) return false;
  return true;
}

bool FinitePreorder::is_transitive() const {
  for (size_t i = 0; i < n_; ++i)
    for (size_t k = 0; k < n_; ++k) {
      if (!rel_[i * n_ + k]) continue;
      for (size_t j = 0; j < n_; ++j)
        if (rel_[k * n_ + j] && !rel_[i * n_ + j]) return false;
    }
  return true;
}

bool FinitePreorder::is_poset() const {
  if (!is_reflexive() || !is_transitive()) return false;
  for (size_t i = 0; i < n_; ++i)
    for (size_t j = i + 1; j < n_; ++j)
      if (rel_[i * n_ + j] && rel_[j * n_ + i]) return false;
  return true;
}

PreorderCondensation FinitePreorder::condense() const {
  PreorderCondensation c;
  c.cls.assign(n_, SIZE_MAX);
  for (size_t i = 0; i < n_; ++i) {
    if (c.cls[i] != SIZE_MAX) continue;
    size_t id = c.reps.size();
    c.cls[i] = id;
    c.reps.push_back(i);
    for (size_t j = i + 1; j < n_; ++j)
      if (leq(i, j) && leq(j, i)) c.cls[j] = id;
  }
  c.quotient = FinitePreorder(c.reps.size());
  for (size_t a = 0; a < c.reps.size(); ++a)
    for (size_t b = 0; b < c.reps.size(); ++b)
      if (leq(c.reps[a], c.reps[b])) c.quotient.set_leq(a, b);
  return c;
}

FinitePreorder pullback_preorder(size_t n_elements, const std::vector<std::vector<Point>>& maps) {
  for (const auto& m : maps)
    if (m.size() != n_elements) throw std::invalid_argument("pullback_preorder: map size mismatch");
  FinitePreorder q(n_elements);
  for (size_t x = 0; x < n_elements; ++x)
    for (size_t y = 0; y < n_elements; ++y) {
      bool rel = true;
      for (const auto& m : maps)
        if (!point_leq(m[x], m[y])) {
          rel = false;
          break;
        }
      if (rel) q.set_leq(x, y);
    }
  return q;
}

Base::Base(GridPoset g) : grid_(std::move(g)) {}
Base::Base(FinitePreorder q) : pre_(std::move(q)) {
  if (!pre_->is_reflexive() || !pre_->is_transitive())
    throw std::invalid_argument("Base: relation is not a preorder");
}

const GridPoset& Base::grid() const {
  if (!grid_) throw std::logic_error("Base: not a grid");
  return *grid_;
}

const FinitePreorder& Base::preorder() const {
  if (!pre_) throw std::logic_error("Base: not a preorder");
  return *pre_;
}

size_t Base::size() const { return grid_ ? grid_->size() : pre_->size(); }

bool Base::leq(size_t a, size_t b) const {
  if (grid_) return point_leq(grid_->point(a), grid_->point(b));
  return pre_->leq(a, b);
}

const std::vector<std::pair<size_t, size_t>>& Base::relation_edges() const {
  if (!edges_ready_) {
    if (grid_) {
      for (auto [idx, ax] : grid_->covering_edges()) {
        Point a = grid_->point(idx);
        ++a[ax];
        edges_.emplace_back(idx, grid_->index(a));
      }
    } else {
      for (size_t i = 0; i < pre_->size(); ++i)
        for (size_t j = 0; j < pre_->size(); ++j)
          if (i != j && pre_->leq(i, j)) edges_.emplace_back(i, j);
    }
    edges_ready_ = true;
  }
  return edges_;
}

std::string Base::describe(size_t idx) const {
  if (grid_) return point_to_string(grid_->point(idx));
  return "#" + std::to_string(idx);
}

bool Base::operator==(const Base& o) const {
  if (is_grid() != o.is_grid()) return false;
  return is_grid() ? grid() == o.grid() : preorder() == o.preorder();
}

bool MonotoneMap::is_monotone() const {
  if (!source || !target || assignment.size() != source->size()) return false;
  for (auto [a, b] : source->relation_edges())
    if (!target->leq(assignment[a], assignment[b])) return false;
  return true;
}

}  // namespace pmconv
