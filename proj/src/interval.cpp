#include "pmconv/interval.hpp"

#include <algorithm>

namespace pmconv {

namespace {

int endpoint_class(const Endpoint& e) {
  switch (e.kind) {
    case Endpoint::Kind::NegInf:
      return -1;
    case Endpoint::Kind::Finite:
      return 0;
    case Endpoint::Kind::PosInf:
      return 1;
  }
  return 0;
}

// Order endpoints as positions on the extended line; for equal finite values
// a closed left endpoint starts before an open one would.
bool endpoint_less(const Endpoint& a, const Endpoint& b) {
  int ca = endpoint_class(a), cb = endpoint_class(b);
  if (ca != cb) return ca < cb;
  if (ca != 0) return false;
  if (a.value != b.value) return a.value < b.value;
  return !a.closed && b.closed;
}

}  // namespace

Interval Interval::half_open(Rat a, Rat b) {
  if (!(a < b)) throw std::invalid_argument("half_open: need a < b");
  return {Endpoint::finite(a, true), Endpoint::finite(b, false)};
}

Interval Interval::ray_up(Rat a) { return {Endpoint::finite(a, true), Endpoint::pos_inf()}; }
Interval Interval::ray_down(Rat b) { return {Endpoint::neg_inf(), Endpoint::finite(b, false)}; }
Interval Interval::line() { return {Endpoint::neg_inf(), Endpoint::pos_inf()}; }
Interval Interval::singleton(Rat a) {
  return {Endpoint::finite(a, true), Endpoint::finite(a, true)};
}

Interval Interval::make(Endpoint l, Endpoint r) {
  if (l.kind == Endpoint::Kind::PosInf || r.kind == Endpoint::Kind::NegInf)
    throw std::invalid_argument("Interval: endpoints out of order");
  if (l.kind == Endpoint::Kind::Finite && r.kind == Endpoint::Kind::Finite) {
    if (l.value > r.value) throw std::invalid_argument("Interval: left > right");
    if (l.value == r.value && !(l.closed && r.closed))
      throw std::invalid_argument("Interval: empty interval");
  }
  return {l, r};
}

bool Interval::operator<(const Interval& o) const {
  if (!(left == o.left)) return endpoint_less(left, o.left);
  if (!(right == o.right)) return endpoint_less(right, o.right);
  return false;
}

namespace {

std::string endpoint_left_string(const Endpoint& e) {
  if (e.kind == Endpoint::Kind::NegInf) return "(-inf";
  return (e.closed ? "[" : "(") + format_rational(e.value);
}

std::string endpoint_right_string(const Endpoint& e) {
  if (e.kind == Endpoint::Kind::PosInf) return "inf)";
  return format_rational(e.value) + (e.closed ? "]" : ")");
}

}  // namespace

std::string Interval::to_string() const {
  return endpoint_left_string(left) + "," + endpoint_right_string(right);
}

Barcode::Barcode(std::vector<std::pair<Interval, size_t>> bars) {
  for (auto& [bar, mult] : bars) add(bar, mult);
}

void Barcode::add(const Interval& bar, size_t mult) {
  if (mult == 0) return;
  auto it = std::lower_bound(bars_.begin(), bars_.end(), bar,
                             [](const auto& entry, const Interval& b) { return entry.first < b; });
  if (it != bars_.end() && it->first == bar)
    it->second += mult;
  else
    bars_.insert(it, {bar, mult});
}

size_t Barcode::total_mult() const {
  size_t t = 0;
  for (const auto& [bar, mult] : bars_) t += mult;
  return t;
}

std::string Barcode::to_string() const {
  std::string s = "{";
  for (size_t i = 0; i < bars_.size(); ++i) {
    if (i) s += ", ";
    s += bars_[i].first.to_string();
    if (bars_[i].second > 1) s += "x" + std::to_string(bars_[i].second);
  }
  return s + "}";
}

void GradedBarcode::add(int degree, const Interval& bar, size_t mult) {
  if (mult == 0) return;
  degrees_[degree].add(bar, mult);
}

void GradedBarcode::set(int degree, Barcode b) {
  if (b.empty())
    degrees_.erase(degree);
  else
    degrees_[degree] = std::move(b);
}

Barcode GradedBarcode::at(int degree) const {
  auto it = degrees_.find(degree);
  return it == degrees_.end() ? Barcode{} : it->second;
}

bool GradedBarcode::operator==(const GradedBarcode& o) const { return degrees_ == o.degrees_; }

std::string GradedBarcode::to_string() const {
  std::string s;
  for (const auto& [deg, bc] : degrees_) {
    if (!s.empty()) s += " ";
    s += "deg" + std::to_string(deg) + ":" + bc.to_string();
  }
  return s.empty() ? "0" : s;
}

namespace {

// Extended values for the endpoint formulas. The convolution formulas only
// ever add a left endpoint to a right endpoint; the ambiguous -inf + inf is
// resolved per mode (sheaf limits are killed from below, cosheaf colimits
// from above), matching the explicit infinite-interval computations.
struct Ext {
  int cls;  // -1, 0, +1
  Rat v;
};

Ext ext_add(const Ext& a, const Ext& b, int inf_clash) {
  if (a.cls == 0 && b.cls == 0) return {0, a.v + b.v};
  int lo = std::min(a.cls, b.cls), hi = std::max(a.cls, b.cls);
  if (lo == -1 && hi == 1) return {inf_clash, Rat(0)};
  return {lo == -1 ? -1 : 1, Rat(0)};
}

Ext ext_min(const Ext& a, const Ext& b) {
  if (a.cls != b.cls) return a.cls < b.cls ? a : b;
  if (a.cls != 0) return a;
  return a.v <= b.v ? a : b;
}

Ext ext_max(const Ext& a, const Ext& b) {
  if (a.cls != b.cls) return a.cls > b.cls ? a : b;
  if (a.cls != 0) return a;
  return a.v >= b.v ? a : b;
}

struct CanonicalBar {
  Ext a;  // left: finite (closed) or -inf
  Ext b;  // right: finite (open) or +inf
};

CanonicalBar canonicalize(const Interval& i) {
  CanonicalBar c{};
  if (i.left.kind == Endpoint::Kind::NegInf)
    c.a = {-1, Rat(0)};
  else if (i.left.closed)
    c.a = {0, i.left.value};
  else
    throw UnsupportedIntervalCase("open finite left endpoint: " + i.to_string());
  if (i.right.kind == Endpoint::Kind::PosInf)
    c.b = {1, Rat(0)};
  else if (!i.right.closed)
    c.b = {0, i.right.value};
  else
    throw UnsupportedIntervalCase("closed finite right endpoint: " + i.to_string());
  if (c.a.cls == 0 && c.b.cls == 0 && !(c.a.v < c.b.v))
    throw UnsupportedIntervalCase("degenerate interval: " + i.to_string());
  return c;
}

// Empty unless l < r on the extended line.
Barcode bar_from(const Ext& l, const Ext& r) {
  Barcode out;
  if (l.cls > r.cls) return out;
  if (l.cls == r.cls) {
    if (l.cls != 0 || !(l.v < r.v)) return out;
    out.add(Interval::half_open(l.v, r.v));
    return out;
  }
  if (l.cls == -1 && r.cls == 0) {
    out.add(Interval::ray_down(r.v));
  } else if (l.cls == 0 && r.cls == 1) {
    out.add(Interval::ray_up(l.v));
  } else {
    out.add(Interval::line());
  }
  return out;
}

struct FormulaParts {
  Ext ac, ad_bc_min, ad_bc_max, bd;
};

FormulaParts formula_parts(const Interval& i, const Interval& j, int inf_clash) {
  CanonicalBar m = canonicalize(i), n = canonicalize(j);
  FormulaParts f{};
  f.ac = ext_add(m.a, n.a, inf_clash);
  Ext ad = ext_add(m.a, n.b, inf_clash);
  Ext bc = ext_add(m.b, n.a, inf_clash);
  f.ad_bc_min = ext_min(ad, bc);
  f.ad_bc_max = ext_max(ad, bc);
  f.bd = ext_add(m.b, n.b, inf_clash);
  return f;
}

}  // namespace

Barcode sheaf_convolve_underived(const Interval& i, const Interval& j) {
  FormulaParts f = formula_parts(i, j, /*inf_clash=*/-1);
  return bar_from(f.ad_bc_max, f.bd);
}

GradedBarcode sheaf_convolve_derived(const Interval& i, const Interval& j) {
  FormulaParts f = formula_parts(i, j, /*inf_clash=*/-1);
  GradedBarcode out;
  out.set(0, bar_from(f.ad_bc_max, f.bd));
  out.set(1, bar_from(f.ac, f.ad_bc_min));
  return out;
}

Barcode cosheaf_convolve_underived(const Interval& i, const Interval& j) {
  FormulaParts f = formula_parts(i, j, /*inf_clash=*/1);
  return bar_from(f.ac, f.ad_bc_min);
}

GradedBarcode cosheaf_convolve_derived(const Interval& i, const Interval& j) {
  FormulaParts f = formula_parts(i, j, /*inf_clash=*/1);
  GradedBarcode out;
  out.set(0, bar_from(f.ac, f.ad_bc_min));
  out.set(1, bar_from(f.ad_bc_max, f.bd));
  return out;
}

namespace {

Endpoint shift_endpoint(const Endpoint& e, const Rat& s) {
  if (!e.is_finite()) return e;
  return Endpoint::finite(e.value + s, e.closed);
}

}  // namespace

Barcode translate(const Barcode& b, const Rat& s) {
  Barcode out;
  for (const auto& [bar, mult] : b.bars())
    out.add({shift_endpoint(bar.left, s), shift_endpoint(bar.right, s)}, mult);
  return out;
}

GradedBarcode translate(const GradedBarcode& b, const Rat& s) {
  GradedBarcode out;
  for (const auto& [deg, bc] : b.degrees()) out.set(deg, translate(bc, s));
  return out;
}

GradedBarcode convolve_barcodes(const Barcode& a, const Barcode& b, ConvolveMode mode,
                                bool derived) {
  GradedBarcode out;
  for (const auto& [bi, mi] : a.bars())
    for (const auto& [bj, mj] : b.bars()) {
      size_t mult = mi * mj;
      if (derived) {
        GradedBarcode g = mode == ConvolveMode::Sheaf ? sheaf_convolve_derived(bi, bj)
                                                      : cosheaf_convolve_derived(bi, bj);
        for (const auto& [deg, bc] : g.degrees())
          for (const auto& [bar, m] : bc.bars()) out.add(deg, bar, m * mult);
      } else {
        Barcode g = mode == ConvolveMode::Sheaf ? sheaf_convolve_underived(bi, bj)
                                                : cosheaf_convolve_underived(bi, bj);
        for (const auto& [bar, m] : g.bars()) out.add(0, bar, m * mult);
      }
    }
  return out;
}

}  // namespace pmconv
