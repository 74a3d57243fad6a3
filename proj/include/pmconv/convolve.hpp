#pragma once

#include "pmconv/interval.hpp"
#include "pmconv/module.hpp"

namespace pmconv {

struct SafeWindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stalkwise tensor product on the product box: dim at (a,b) is
/// dim M_a * dim N_b, maps are Kronecker products.
PersistenceModule external_tensor(const PersistenceModule& m, const PersistenceModule& n);

/// Brute-force convolutions. The stalk at a window point x is the limit of
/// {M_a (x) N_b | a + b >= x} (sheaf) or the colimit over {a + b <= x}
/// (cosheaf), computed over the product diagram of the two supports with the
/// boundary policy supplying the zero constraints at the edges. Both modules
/// must live on the same grid box; the window must satisfy the safe range
/// 2*lo + 1 <= w <= 2*hi - 1 per axis.
PersistenceModule sheaf_convolve_oracle(const PersistenceModule& m, const PersistenceModule& n,
                                        const GridPoset& window,
                                        exact::Exec exec = exact::Exec::Auto);
PersistenceModule cosheaf_convolve_oracle(const PersistenceModule& m, const PersistenceModule& n,
                                          const GridPoset& window,
                                          exact::Exec exec = exact::Exec::Auto);

/// Oracle output together with the per-point limit/colimit presentations;
/// the derived pipeline uses these to push resolution differentials through.
struct SheafOracleData {
  std::shared_ptr<const Base> window;
  PersistenceModule module;
  std::vector<LimitData> stalks;
};
struct CosheafOracleData {
  std::shared_ptr<const Base> window;
  PersistenceModule module;
  std::vector<ColimitData> stalks;
};
SheafOracleData sheaf_convolve_oracle_full(const PersistenceModule& m, const PersistenceModule& n,
                                           const GridPoset& window,
                                           exact::Exec exec = exact::Exec::Auto);
CosheafOracleData cosheaf_convolve_oracle_full(const PersistenceModule& m,
                                               const PersistenceModule& n,
                                               const GridPoset& window,
                                               exact::Exec exec = exact::Exec::Auto);

/// Resolution by principal interval modules. Injective: terms are sums of
/// stabilized down-set modules, 0 -> M -> terms[0] -> terms[1] -> ...;
/// projective: sums of up-set modules, ... -> terms[1] -> terms[0] -> M -> 0.
struct Resolution {
  bool injective{true};
  std::vector<PersistenceModule> terms;
  /// diffs[i] maps terms[i] -> terms[i+1] (injective) or terms[i+1] ->
  /// terms[i] (projective).
  std::vector<NaturalTransformation> diffs;
  /// M -> terms[0] (injective) or terms[0] -> M (projective).
  NaturalTransformation augmentation;
};

Resolution injective_resolution(const PersistenceModule& m, size_t length_cap = 0);
Resolution projective_resolution(const PersistenceModule& m, size_t length_cap = 0);

/// Pointwise rank bookkeeping: augmentation injective/surjective and
/// homology vanishing at every term of the resolution.
bool resolution_is_exact(const PersistenceModule& m, const Resolution& r);

/// Bounded cochain complex of modules on a shared base:
/// d[i] : terms[i] -> terms[i+1].
struct GradedModuleComplex {
  std::vector<PersistenceModule> terms;
  std::vector<NaturalTransformation> d;
};

/// Pointwise cohomology with induced structure maps, one module per slot.
std::vector<PersistenceModule> cohomology(const GradedModuleComplex& c);

/// Cohomology together with its pointwise presentations: kernels[i][z] is a
/// basis of ker d[i]_z inside terms[i]_z and quotients[i][z] the projection
/// of its coordinates onto the cohomology. Chain maps push to cohomology
/// through these.
struct CohomologyData {
  std::vector<PersistenceModule> modules;
  std::vector<std::vector<exact::Matrix>> kernels;
  std::vector<std::vector<exact::Matrix>> quotients;
};
CohomologyData cohomology_full(const GradedModuleComplex& c);

/// Map induced on one cohomology slot by pointwise chain-map components
/// (source complex slot -> target complex slot, same base).
exact::Matrix cohomology_map_at(const CohomologyData& src, const CohomologyData& tgt, size_t slot,
                                size_t src_z, size_t tgt_z, const exact::Matrix& chain_component);

enum class ResolveSide { First, Second };

/// Cohomology modules of M *^R N: degree 0 equals the underived convolution.
std::vector<PersistenceModule> derived_sheaf_convolve(const PersistenceModule& m,
                                                      const PersistenceModule& n,
                                                      const GridPoset& window,
                                                      ResolveSide side = ResolveSide::Second,
                                                      exact::Exec exec = exact::Exec::Auto);
/// Homology modules of the derived graded tensor product, indexed by
/// homological degree; degree 0 equals the underived convolution.
std::vector<PersistenceModule> derived_cosheaf_convolve(const PersistenceModule& m,
                                                        const PersistenceModule& n,
                                                        const GridPoset& window,
                                                        ResolveSide side = ResolveSide::Second,
                                                        exact::Exec exec = exact::Exec::Auto);

/// Barcode of a one-parameter grid module by rank inclusion-exclusion.
/// Bars reaching a stabilized edge become infinite.
Barcode barcode_extract(const PersistenceModule& m);

/// Degreewise extraction; index in the vector is the degree.
GradedBarcode barcodes_of(const std::vector<PersistenceModule>& graded);

/// Integer-endpoint symbolic bar as a module on the given 1-parameter box.
PersistenceModule discretize_interval(const Interval& bar, std::shared_ptr<const Base> base,
                                      uint32_t p);
/// Direct sum of discretized bars.
PersistenceModule realize_barcode(const Barcode& bc, std::shared_ptr<const Base> base, uint32_t p);

}  // namespace pmconv
