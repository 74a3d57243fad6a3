#pragma once

#include <optional>

#include "pmconv/convolve.hpp"
#include "pmconv/interval.hpp"
#include "pmconv/module.hpp"

namespace pmconv {

/// Witness of an eps-interleaving between grid modules: f_x : M_{x-eps} -> N_x
/// and g_x : N_{x-eps} -> M_x with both composites equal to the canonical
/// 2eps transitions.
struct EpsilonCertificate {
  long long epsilon{0};  // in grid steps, applied to every axis
  std::shared_ptr<const PersistenceModule> m, n;
  std::vector<exact::Matrix> f;
  std::vector<exact::Matrix> g;
};

bool certificate_validate(const EpsilonCertificate& c);

/// Optimal barcode matching found by the bottleneck search.
struct BarcodeMatching {
  Rat epsilon{0};
  std::vector<std::pair<size_t, size_t>> pairs;  // indices into expanded bar lists
  std::vector<size_t> dropped_a, dropped_b;
};

struct DistanceResult {
  bool infinite{false};
  Rat value{0};
  bool bound_only{false};
  std::optional<BarcodeMatching> matching;

  std::string value_string() const;
};

/// Exact bottleneck distance over the finite candidate set of endpoint
/// differences and half-lengths; equals the interleaving distance for
/// interval-decomposable modules.
DistanceResult interleaving_distance_barcodes(const Barcode& a, const Barcode& b);

/// Decides eps-interleaving of grid modules. One-parameter modules go
/// through the interval decomposition and an eps-matching, which is complete
/// there; multi-parameter instances are searched over the hom-space of one
/// side with the other side solved linearly (throws when both hom spaces
/// exceed the enumeration cap). Certificates are validated before return.
std::optional<EpsilonCertificate> interleaving_feasible(const PersistenceModule& m,
                                                        const PersistenceModule& n,
                                                        long long epsilon);

/// Smallest feasible integer eps up to the cap, if any.
std::optional<long long> minimal_feasible_epsilon(const PersistenceModule& m,
                                                  const PersistenceModule& n, long long cap);

/// Degreewise interleaving distance of graded barcodes: the convolution
/// distance for complexes concentrated in a single common degree, an upper
/// bound otherwise (bound_only is set accordingly).
DistanceResult convolution_distance(const GradedBarcode& x, const GradedBarcode& y);

/// Same on complexes of one-parameter modules; differentials must be zero.
DistanceResult convolution_distance(const GradedModuleComplex& x, const GradedModuleComplex& y);

}  // namespace pmconv
