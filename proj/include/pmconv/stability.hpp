#pragma once

#include "pmconv/distance.hpp"

namespace pmconv {

/// Finite abstract simplicial complex; every face of a simplex is listed.
struct SimplicialComplex {
  std::vector<std::vector<size_t>> simplices;  // ascending vertex lists

  void validate() const;
  size_t vertex_count() const;
};

/// Rational value per vertex id (total on the complex's vertices).
using VertexFunction = std::vector<Rat>;

/// Degree-n persistent homology of the lower-star filtration: a simplex
/// enters at the max of its vertex values; reduction over F_p.
Barcode sublevel_persistence(const SimplicialComplex& k, const VertexFunction& f, size_t degree,
                             uint32_t p = 2);

struct StabilityReport {
  Barcode barcode_f, barcode_g;
  DistanceResult distance;
  Rat sup_norm{0};
  bool holds{false};
};

/// Checks d_I(H_n f, H_n g) <= ||f - g||_inf on one complex.
StabilityReport stability_check(const SimplicialComplex& k, const VertexFunction& f,
                                const VertexFunction& g, size_t degree, uint32_t p = 2);

struct DirectImageStabilityReport {
  long long bound{0};  // ||f - g||_inf in grid steps
  bool certified{false};          // interleaving certificates validated degreewise
  std::vector<DistanceResult> degreewise;  // exact distances for 1-parameter targets
  bool holds{false};
};

/// Stability of derived direct images along two monotone maps into a grid:
/// resolves F injectively, pushes the resolution through both maps, takes
/// cohomology, and certifies the degreewise interleaving at the sup-norm
/// bound with the restriction maps of the two preimage systems. The
/// degreewise check is an upper bound for the convolution distance of the
/// derived images, so a pass certifies the inequality.
DirectImageStabilityReport direct_image_stability_check(const PersistenceModule& f_module,
                                                        const MonotoneMap& f,
                                                        const MonotoneMap& g);

/// Same check after refining the domain topology so both assignments become
/// continuous: builds the pullback preorder generated by the domain preorder
/// and both maps, transports the module along the identity refinement, and
/// delegates. Assignments are grid points per element.
DirectImageStabilityReport pullback_stability_check(const FinitePreorder& x,
                                                    const PersistenceModule& f_module,
                                                    const std::vector<Point>& f,
                                                    const std::vector<Point>& g);

/// Transports a module on a preorder to the condensation poset (stalks at
/// class representatives). Monotone maps constant on classes descend.
PersistenceModule condense_module(const PersistenceModule& m,
                                  PreorderCondensation& cond);

}  // namespace pmconv
