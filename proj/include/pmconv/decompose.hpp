#pragma once

#include "pmconv/module.hpp"

namespace pmconv {

/// One summand of a one-parameter module: alive on slots [birth, death),
/// death == size() meaning it survives to the right edge. `trail[i]` is the
/// summand's vector inside the stalk at slot birth + i.
struct BarSummand {
  size_t birth;
  size_t death;
  std::vector<std::vector<uint32_t>> trail;
};

/// Interval decomposition of a one-parameter grid module, with an adapted
/// basis: at every slot the trails of the bars alive there form a basis of
/// the stalk. Computed by a left-to-right sweep with oldest-birth reduction.
struct Decomposition {
  std::vector<BarSummand> bars;
  /// basis[z] has the alive bars' trail vectors as columns, in `bars` order;
  /// inverse[z] is its inverse, so row k of inverse[z] is the projection
  /// onto bar k's coordinate.
  std::vector<exact::Matrix> basis;
  std::vector<exact::Matrix> inverse;
  std::vector<std::vector<size_t>> alive;  // bar indices alive at each slot
};

Decomposition decompose(const PersistenceModule& m);

}  // namespace pmconv
