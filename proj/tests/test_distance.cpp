#include <doctest.h>

#include "pmconv/distance.hpp"
#include "pmconv/randgen.hpp"

using namespace pmconv;

namespace {

Interval ho(long long a, long long b) { return Interval::half_open(Rat(a), Rat(b)); }

Barcode bc(std::initializer_list<std::pair<Interval, size_t>> bars) {
  return Barcode(std::vector<std::pair<Interval, size_t>>(bars));
}

std::shared_ptr<Base> box() { return std::make_shared<Base>(GridPoset({-2}, {22})); }

Barcode doubled(const Barcode& b) {
  Barcode out;
  for (const auto& [bar, mult] : b.bars())
    out.add(Interval::half_open(bar.left.value * 2, bar.right.value * 2), mult);
  return out;
}

}  // namespace

TEST_CASE("bottleneck distance basics") {
  Barcode a = bc({{ho(0, 2), 1}});
  CHECK(interleaving_distance_barcodes(a, a).value == Rat(0));
  DistanceResult d = interleaving_distance_barcodes(a, Barcode{});
  CHECK(d.value == Rat(1));
  CHECK(interleaving_distance_barcodes(bc({{ho(0, 4), 1}}), bc({{ho(1, 5), 1}})).value == Rat(1));
  // Infinite bars must be matched.
  Barcode inf1 = bc({{Interval::ray_up(Rat(0)), 1}});
  CHECK(interleaving_distance_barcodes(inf1, Barcode{}).infinite);
  CHECK(interleaving_distance_barcodes(inf1, bc({{Interval::ray_up(Rat(3)), 1}})).value == Rat(3));
}

TEST_CASE("bottleneck distance is a pseudometric on random triples") {
  Rng rng(51);
  for (int t = 0; t < 30; ++t) {
    Barcode a = random_barcode(rng, 4, 0, 10);
    Barcode b = random_barcode(rng, 4, 0, 10);
    Barcode c = random_barcode(rng, 4, 0, 10);
    DistanceResult ab = interleaving_distance_barcodes(a, b);
    DistanceResult ba = interleaving_distance_barcodes(b, a);
    DistanceResult ac = interleaving_distance_barcodes(a, c);
    DistanceResult cb = interleaving_distance_barcodes(c, b);
    REQUIRE(!ab.infinite);
    CHECK(ab.value == ba.value);
    CHECK(ab.value <= ac.value + cb.value);
  }
}

TEST_CASE("interleaving feasibility on grid modules") {
  auto b = box();
  auto m = realize_barcode(bc({{ho(0, 2), 1}}), b, 2);
  auto zero = PersistenceModule::zero(b, 2);

  auto self = interleaving_feasible(m, m, 0);
  REQUIRE(self.has_value());
  CHECK(certificate_validate(*self));

  CHECK(!interleaving_feasible(m, zero, 0).has_value());
  auto drop = interleaving_feasible(m, zero, 1);
  REQUIRE(drop.has_value());
  CHECK(certificate_validate(*drop));
  for (const auto& comp : drop->f) CHECK(comp.is_zero());
}

TEST_CASE("feasibility is monotone in epsilon") {
  auto b = box();
  Rng rng(52);
  for (int t = 0; t < 10; ++t) {
    auto m = realize_barcode(random_barcode(rng, 3, 0, 10), b, 2);
    auto n = realize_barcode(random_barcode(rng, 3, 0, 10), b, 2);
    bool prev = false;
    for (long long e = 0; e <= 11; ++e) {
      bool now = interleaving_feasible(m, n, e).has_value();
      if (prev) CHECK(now);
      prev = now;
    }
  }
}

TEST_CASE("grid feasibility matches the bottleneck value") {
  // Realize the barcodes with doubled endpoints so half-integer optima
  // become integer grid shifts.
  auto b = box();
  Rng rng(53);
  for (int t = 0; t < 10; ++t) {
    Barcode x = random_barcode(rng, 3, 0, 5);
    Barcode y = random_barcode(rng, 3, 0, 5);
    DistanceResult d = interleaving_distance_barcodes(x, y);
    REQUIRE(!d.infinite);
    auto mx = realize_barcode(doubled(x), b, 2);
    auto my = realize_barcode(doubled(y), b, 2);
    auto minimal = minimal_feasible_epsilon(mx, my, 12);
    REQUIRE(minimal.has_value());
    CHECK(Rat(*minimal, 2) == d.value);
  }
}

TEST_CASE("certificate validation rejects corrupted data") {
  auto b = box();
  auto m = realize_barcode(bc({{ho(2, 9), 1}}), b, 2);
  auto cert = interleaving_feasible(m, m, 1);
  REQUIRE(cert.has_value());
  CHECK(certificate_validate(*cert));
  // Zero out g against a nonzero transition: the triangle identity breaks.
  EpsilonCertificate broken = *cert;
  for (auto& comp : broken.g) comp = exact::Matrix(2, comp.rows(), comp.cols());
  CHECK(!certificate_validate(broken));
}

TEST_CASE("multi-parameter feasibility by enumeration") {
  auto b = std::make_shared<Base>(GridPoset({0, 0}, {4, 4}));
  const GridPoset& g = b->grid();
  std::vector<size_t> rect1, rect2;
  for (size_t i = 0; i < g.size(); ++i) {
    Point q = g.point(i);
    if (q[0] <= 1 && q[1] <= 1) rect1.push_back(i);
    if (q[0] >= 1 && q[0] <= 2 && q[1] >= 1 && q[1] <= 2) rect2.push_back(i);
  }
  auto m = PersistenceModule::interval(b, 2, rect1);
  auto n = PersistenceModule::interval(b, 2, rect2);
  CHECK(interleaving_feasible(m, m, 0).has_value());
  CHECK(!interleaving_feasible(m, n, 0).has_value());
  auto cert = interleaving_feasible(m, n, 1);
  REQUIRE(cert.has_value());
  CHECK(certificate_validate(*cert));
}

TEST_CASE("convolution distance") {
  GradedBarcode x, y;
  x.add(0, ho(0, 2));
  y.add(0, ho(0, 2));
  CHECK(convolution_distance(x, y).value == Rat(0));
  CHECK(!convolution_distance(x, y).bound_only);

  y.add(1, ho(5, 6));
  DistanceResult d = convolution_distance(x, y);
  CHECK(d.value == Rat(1, 2));
  CHECK(d.bound_only);

  // Concentrated in degree 0 it coincides with the barcode distance.
  Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    Barcode a = random_barcode(rng, 4, 0, 10);
    Barcode b2 = random_barcode(rng, 4, 0, 10);
    GradedBarcode ga, gb;
    ga.set(0, a);
    gb.set(0, b2);
    DistanceResult dc = convolution_distance(ga, gb);
    DistanceResult di = interleaving_distance_barcodes(a, b2);
    CHECK(dc.infinite == di.infinite);
    if (!dc.infinite) CHECK(dc.value == di.value);
    CHECK(!dc.bound_only);
  }
}

TEST_CASE("convolution distance on module complexes") {
  auto b = box();
  auto m = realize_barcode(bc({{ho(0, 3), 1}}), b, 2);
  auto n = realize_barcode(bc({{ho(1, 4), 1}}), b, 2);
  GradedModuleComplex cx{{m}, {}};
  GradedModuleComplex cy{{n}, {}};
  CHECK(convolution_distance(cx, cy).value == Rat(1));

  // Nonzero differentials are out of computable range.
  GradedModuleComplex bad;
  bad.terms = {m, m};
  NaturalTransformation ident;
  ident.source = std::make_shared<PersistenceModule>(m);
  ident.target = std::make_shared<PersistenceModule>(m);
  for (size_t i = 0; i < b->size(); ++i)
    ident.components.push_back(exact::Matrix::identity(2, m.dim_at(i)));
  bad.d = {ident};
  CHECK_THROWS(convolution_distance(bad, bad));
}
