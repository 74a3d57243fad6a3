#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmconv {

using Point = std::vector<int>;

std::string point_to_string(const Point& a);

/// Componentwise comparison helpers on raw points (no box membership check).
bool point_leq(const Point& a, const Point& b);
Point point_add(const Point& a, const Point& b);
Point point_sub(const Point& a, const Point& b);
Point join(const Point& a, const Point& b);
Point meet(const Point& a, const Point& b);

/// Finite box in Z^n with the product order and ambient addition.
class GridPoset {
 public:
  GridPoset() = default;
  GridPoset(Point lo, Point hi);

  size_t dim() const { return lo_.size(); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  size_t size() const { return size_; }

  bool contains(const Point& a) const;
  /// Componentwise order; throws if either point is outside the box.
  bool leq(const Point& a, const Point& b) const;

  size_t index(const Point& a) const;
  Point point(size_t idx) const;

  /// Applies fn to every point of the box in index order.
  void for_each_point(const std::function<void(const Point&)>& fn) const;

  /// Covering edges (x, x + e_axis) as (index, axis) pairs, in index order.
  std::vector<std::pair<size_t, size_t>> covering_edges() const;

  bool operator==(const GridPoset& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

 private:
  Point lo_, hi_;
  size_t size_{0};
  std::vector<size_t> strides_;
};

struct PrincipalSet {
  enum class Kind { Up, Down };
  Point base;
  Kind kind;
};

/// Points of the box lying in the principal set.
std::vector<Point> principal_points(const GridPoset& p, const PrincipalSet& s);

/// Convex and zigzag-connected within the box (membership by sorted lookup).
bool is_interval(const GridPoset& p, const std::vector<Point>& set);

struct PreorderCondensation;

/// Finite preorder: reflexive, transitively closed relation on {0..n-1}.
class FinitePreorder {
 public:
  FinitePreorder() = default;
  explicit FinitePreorder(size_t n);
  /// Builds from an arbitrary relation; reflexive-transitive closure is taken.
  static FinitePreorder from_relation(size_t n, const std::vector<std::pair<size_t, size_t>>& rel);

  size_t size() const { return n_; }
  bool leq(size_t a, size_t b) const { return rel_[a * n_ + b]; }
  void set_leq(size_t a, size_t b) { rel_[a * n_ + b] = true; }
  void close_transitively();
  bool is_reflexive() const;
  bool is_transitive() const;
  bool is_poset() const;  // also antisymmetric

  /// Strongly connected classes (mutually related elements) and the induced
  /// poset on them.
  PreorderCondensation condense() const;

  bool operator==(const FinitePreorder& o) const { return n_ == o.n_ && rel_ == o.rel_; }

 private:
  size_t n_{0};
  std::vector<char> rel_;
};

/// `cls[i]` is the class id of element i; `reps` picks one member per class.
struct PreorderCondensation {
  FinitePreorder quotient;  // a poset
  std::vector<size_t> cls;
  std::vector<size_t> reps;
};

/// Specialization preorder of the topology generated by the preimages of
/// principal up-sets under the given assignments into grid points:
/// x <= y iff every assignment f has f(x) <= f(y).
FinitePreorder pullback_preorder(size_t n_elements, const std::vector<std::vector<Point>>& maps);

/// Index-level view shared by grids and preorders so modules can treat both
/// uniformly. Grid semantics (points, boundary policy) stay grid-only.
class Base {
 public:
  explicit Base(GridPoset g);
  explicit Base(FinitePreorder q);

  bool is_grid() const { return grid_.has_value(); }
  const GridPoset& grid() const;
  const FinitePreorder& preorder() const;

  size_t size() const;
  bool leq(size_t a, size_t b) const;
  /// Hasse edges for grids; for preorders, all related pairs a != b.
  const std::vector<std::pair<size_t, size_t>>& relation_edges() const;
  std::string describe(size_t idx) const;

  bool operator==(const Base& o) const;

 private:
  std::optional<GridPoset> grid_;
  std::optional<FinitePreorder> pre_;
  mutable std::vector<std::pair<size_t, size_t>> edges_;
  mutable bool edges_ready_{false};
};

/// Order-preserving map between bases, stored on element indices.
struct MonotoneMap {
  std::shared_ptr<const Base> source;
  std::shared_ptr<const Base> target;
  std::vector<size_t> assignment;  // source index -> target index

  bool is_monotone() const;
};

}  // namespace pmconv
