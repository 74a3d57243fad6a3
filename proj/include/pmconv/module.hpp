#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pmconv/matrix.hpp"
#include "pmconv/poset.hpp"

namespace pmconv {

class PersistenceModule;

/// Pointwise family of matrices source_z -> target_z commuting with the
/// structure maps.
struct NaturalTransformation {
  std::shared_ptr<const PersistenceModule> source;
  std::shared_ptr<const PersistenceModule> target;
  std::vector<exact::Matrix> components;  // by element index

  bool validate() const;
};

/// Functor from a finite poset (grid box or preorder) to F_p-vector spaces.
///
/// Grid modules carry per-axis stabilization flags: a read past a stabilized
/// edge repeats the edge stalk and the edge-parallel maps, a read past a
/// plain edge is zero. This is how k[a,oo), k(-oo,b) and the constant module
/// live on a finite box.
class PersistenceModule {
 public:
  PersistenceModule() = default;

  static PersistenceModule zero(std::shared_ptr<const Base> base, uint32_t p);
  /// dim 1 with identity maps on the given elements, 0 elsewhere.
  /// Throws unless the set is an interval (convex and zigzag-connected).
  static PersistenceModule interval(std::shared_ptr<const Base> base, uint32_t p,
                                    const std::vector<size_t>& elements);
  /// k[D_x]: principal down-set module; stabilized left on every axis when
  /// the base is a grid so it means the full down-set of the ambient poset.
  static PersistenceModule principal_down(std::shared_ptr<const Base> base, uint32_t p,
                                          size_t element);
  /// k[U_x], dually stabilized right.
  static PersistenceModule principal_up(std::shared_ptr<const Base> base, uint32_t p,
                                        size_t element);
  static PersistenceModule constant(std::shared_ptr<const Base> base, uint32_t p);

  const std::shared_ptr<const Base>& base_ptr() const { return base_; }
  const Base& base() const { return *base_; }
  uint32_t p() const { return p_; }

  size_t dim_at(size_t idx) const { return dims_[idx]; }
  void set_dim(size_t idx, size_t d) { dims_[idx] = d; }
  size_t total_dim() const;
  bool is_zero_module() const;

  const std::vector<bool>& stabilized_left() const { return stab_left_; }
  const std::vector<bool>& stabilized_right() const { return stab_right_; }
  void set_stabilized(std::vector<bool> left, std::vector<bool> right);

  /// Structure map along a relation edge (grid cover / preorder pair).
  const exact::Matrix& edge_map(size_t from, size_t to) const;
  void set_edge_map(size_t from, size_t to, exact::Matrix m);

  /// Stalk dimension at an arbitrary ambient grid point (boundary policy).
  size_t dim_at_point(const Point& q) const;
  /// Transition M_a -> M_b for arbitrary ambient points a <= b.
  exact::Matrix transition_points(const Point& a, const Point& b) const;
  /// Transition between in-base elements i <= j.
  exact::Matrix transition(size_t i, size_t j) const;

  /// Functor laws on covering squares (grid) or on all composable pairs
  /// (preorder), plus shape consistency.
  bool validate() const;

  /// M(a): x -> M_{x+a}, boundary policy resolving out-of-box reads.
  PersistenceModule shift(const Point& a) const;

  PersistenceModule direct_sum(const PersistenceModule& other) const;

  bool operator==(const PersistenceModule& o) const;

 private:
  void init_storage();
  exact::Matrix policy_edge_matrix(const Point& at, size_t axis) const;

  std::shared_ptr<const Base> base_;
  uint32_t p_{2};
  std::vector<size_t> dims_;
  // Grid: maps_[idx * dim + axis] is the map to the upper neighbor along
  // axis; preorder: keyed by from * size + to for every related pair.
  std::vector<exact::Matrix> grid_maps_;
  std::unordered_map<uint64_t, exact::Matrix> pre_maps_;
  std::vector<bool> stab_left_, stab_right_;
};

/// Limit of the stalk diagram over a subset, as a subspace of the direct sum
/// of the nonzero stalks (ambient coordinates).
struct LimitData {
  std::vector<size_t> points;   // elements with nonzero stalk, ascending
  std::vector<size_t> offsets;  // ambient offset per entry of `points`
  size_t ambient_dim{0};
  exact::Matrix basis;  // ambient_dim x dim(limit)

  size_t dim() const { return basis.cols(); }
  std::optional<size_t> offset_of(size_t element) const;
};

/// Colimit presented by a surjection from the same ambient sum.
struct ColimitData {
  std::vector<size_t> points;
  std::vector<size_t> offsets;
  size_t ambient_dim{0};
  exact::Matrix proj;  // dim(colim) x ambient_dim, full row rank

  size_t dim() const { return proj.rows(); }
  std::optional<size_t> offset_of(size_t element) const;
};

/// Limit over the comparable-pair diagram on S (any subset of the base).
LimitData limit_over(const PersistenceModule& m, const std::vector<size_t>& subset);
ColimitData colimit_over(const PersistenceModule& m, const std::vector<size_t>& subset);

/// dim Gamma(S; M) and dim L(S; M). Throw on empty S.
size_t sections(const PersistenceModule& m, const std::vector<size_t>& subset);
size_t cosections(const PersistenceModule& m, const std::vector<size_t>& subset);

/// Restriction of compatible families along S' <= S (S' a subset of S).
exact::Matrix restrict_limit(const LimitData& big, const LimitData& small);
/// Corestriction colim(S') -> colim(S) for S' a subset of S.
exact::Matrix corestrict_colimit(const ColimitData& small, const ColimitData& big);

/// Map on limits over the same subset induced by a pointwise module map.
exact::Matrix induced_limit_map(const LimitData& src, const LimitData& tgt,
                                const NaturalTransformation& phi);
exact::Matrix induced_colimit_map(const ColimitData& src, const ColimitData& tgt,
                                  const NaturalTransformation& phi);

size_t hom_space(const PersistenceModule& m, const PersistenceModule& n);
std::vector<NaturalTransformation> hom_basis(const PersistenceModule& m,
                                             const PersistenceModule& n);

/// Internal hom: stalk at x is Hom(M, N(x)), structure maps induced by the
/// transitions of N. Grid bases only.
PersistenceModule internal_hom(const PersistenceModule& m, const PersistenceModule& n);

/// f_* (stalkwise sections over preimages of principal up-sets).
PersistenceModule direct_image_sheaf(const MonotoneMap& f, const PersistenceModule& m);
/// f_dagger (stalkwise cosections over preimages of principal down-sets).
PersistenceModule direct_image_cosheaf(const MonotoneMap& f, const PersistenceModule& m);
PersistenceModule inverse_image(const MonotoneMap& f, const PersistenceModule& m);

/// Direct image together with the limit presentations of each stalk, for
/// pipelines that need induced maps on the images.
struct SheafImageData {
  PersistenceModule module;
  std::vector<LimitData> stalks;  // per target element
};
SheafImageData direct_image_sheaf_full(const MonotoneMap& f, const PersistenceModule& m);

bool is_interval_set(const Base& base, const std::vector<size_t>& elements);

}  // namespace pmconv
