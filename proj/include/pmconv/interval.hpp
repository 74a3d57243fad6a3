#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmconv/rational.hpp"

namespace pmconv {

/// Raised when a convolution formula is not available for an endpoint
/// combination; callers may fall back to the grid pipeline.
struct UnsupportedIntervalCase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Endpoint {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind{Kind::Finite};
  Rat value{0};
  bool closed{false};  // infinite endpoints are always open

  static Endpoint neg_inf() { return {Kind::NegInf, Rat(0), false}; }
  static Endpoint pos_inf() { return {Kind::PosInf, Rat(0), false}; }
  static Endpoint finite(Rat v, bool is_closed) { return {Kind::Finite, v, is_closed}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool operator==(const Endpoint& o) const {
    if (kind != o.kind) return false;
    if (kind != Kind::Finite) return true;
    return value == o.value && closed == o.closed;
  }
};

/// One bar. Invariant: nonempty, i.e. left < right, or left == right with
/// both endpoints closed (a singleton).
struct Interval {
  Endpoint left, right;

  static Interval half_open(Rat a, Rat b);   // [a, b)
  static Interval ray_up(Rat a);             // [a, oo)
  static Interval ray_down(Rat b);           // (-oo, b)
  static Interval line();                    // (-oo, oo)
  static Interval singleton(Rat a);          // [a, a]
  static Interval make(Endpoint l, Endpoint r);

  bool operator==(const Interval& o) const { return left == o.left && right == o.right; }
  bool operator<(const Interval& o) const;

  std::string to_string() const;
};

/// Multiset of intervals, kept sorted with merged multiplicities.
class Barcode {
 public:
  Barcode() = default;
  explicit Barcode(std::vector<std::pair<Interval, size_t>> bars);

  void add(const Interval& bar, size_t mult = 1);
  const std::vector<std::pair<Interval, size_t>>& bars() const { return bars_; }
  bool empty() const { return bars_.empty(); }
  size_t total_mult() const;

  bool operator==(const Barcode& o) const { return bars_ == o.bars_; }

  std::string to_string() const;

 private:
  std::vector<std::pair<Interval, size_t>> bars_;
};

/// Degree-indexed barcodes with finitely many nonzero degrees.
class GradedBarcode {
 public:
  GradedBarcode() = default;

  void add(int degree, const Interval& bar, size_t mult = 1);
  void set(int degree, Barcode b);
  Barcode at(int degree) const;  // empty barcode when absent
  const std::map<int, Barcode>& degrees() const { return degrees_; }

  bool operator==(const GradedBarcode& o) const;
  std::string to_string() const;

 private:
  std::map<int, Barcode> degrees_;  // empty barcodes are pruned
};

/// Closed convolution formulas for canonical bars: [a,b), [a,oo), (-oo,b)
/// and (-oo,oo). Unsupported endpoint combinations throw.
Barcode sheaf_convolve_underived(const Interval& i, const Interval& j);
GradedBarcode sheaf_convolve_derived(const Interval& i, const Interval& j);
Barcode cosheaf_convolve_underived(const Interval& i, const Interval& j);
GradedBarcode cosheaf_convolve_derived(const Interval& i, const Interval& j);

Barcode translate(const Barcode& b, const Rat& s);
GradedBarcode translate(const GradedBarcode& b, const Rat& s);

enum class ConvolveMode { Sheaf, Cosheaf };

/// Bilinear extension over all bar pairs with multiplicity products.
GradedBarcode convolve_barcodes(const Barcode& a, const Barcode& b, ConvolveMode mode,
                                bool derived);

}  // namespace pmconv
