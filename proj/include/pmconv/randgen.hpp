#pragma once

#include <random>

#include "pmconv/convolve.hpp"
#include "pmconv/stability.hpp"

namespace pmconv {

/// Deterministic helpers for randomized checks; mt19937_64 with modular
/// reduction so a fixed seed reproduces byte-identical output everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  long long uniform(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(eng_() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool chance(double q) { return eng_() % 1000000 < static_cast<uint64_t>(q * 1000000); }
  uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

/// Random half-open bar with integer endpoints in [lo, hi].
Interval random_half_open(Rng& rng, long long lo, long long hi);

Barcode random_barcode(Rng& rng, size_t max_bars, long long lo, long long hi);

/// Direct sum of random interval modules over rectangles of the box, with an
/// optional random change of basis at every point (keeps functoriality,
/// hides the interval structure from the solvers).
PersistenceModule random_module(Rng& rng, std::shared_ptr<const Base> base, uint32_t p,
                                size_t max_intervals, bool conjugate);

/// Same with the rectangles confined to [supp_lo, supp_hi].
PersistenceModule random_module_supported(Rng& rng, std::shared_ptr<const Base> base, uint32_t p,
                                          size_t max_intervals, bool conjugate,
                                          const Point& supp_lo, const Point& supp_hi);

/// Monotone assignment from any finite base into a grid box, built along a
/// linear extension with cumulative joins.
MonotoneMap random_monotone_from(Rng& rng, std::shared_ptr<const Base> source,
                                 std::shared_ptr<const Base> target);

/// Componentwise monotone assignment between grid boxes.
MonotoneMap random_monotone_map(Rng& rng, std::shared_ptr<const Base> source,
                                std::shared_ptr<const Base> target);

/// Random downward-closed family on the vertex set {0..n-1} with at most
/// `max_simplices` simplices, always containing every vertex.
SimplicialComplex random_complex(Rng& rng, size_t n_vertices, size_t max_simplices);

}  // namespace pmconv
