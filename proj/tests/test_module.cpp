#include <doctest.h>

#include "pmconv/module.hpp"
#include "pmconv/randgen.hpp"

using namespace pmconv;
using exact::Matrix;

namespace {

std::shared_ptr<Base> line(int lo, int hi) {
  return std::make_shared<Base>(GridPoset({lo}, {hi}));
}

std::vector<size_t> range_idx(const Base& b, int lo, int hi) {
  std::vector<size_t> out;
  for (int x = lo; x <= hi; ++x) out.push_back(b.grid().index({x}));
  return out;
}

std::vector<size_t> all_idx(const Base& b) {
  std::vector<size_t> out(b.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

}  // namespace

TEST_CASE("interval module dims and validation") {
  auto b = line(0, 5);
  auto m = PersistenceModule::interval(b, 2, range_idx(*b, 2, 5));
  for (int x = 0; x <= 5; ++x) CHECK(m.dim_at(b->grid().index({x})) == (x >= 2 ? 1u : 0u));
  CHECK(m.validate());
  auto two = PersistenceModule::interval(b, 2, range_idx(*b, 2, 3));
  CHECK(two.edge_map(b->grid().index({2}), b->grid().index({3})) == Matrix::identity(2, 1));
  CHECK(PersistenceModule::interval(b, 2, {}).is_zero_module());
  CHECK_THROWS(PersistenceModule::interval(b, 2, {b->grid().index({1}), b->grid().index({3})}));
}

TEST_CASE("validate rejects a non-commuting square") {
  auto b = std::make_shared<Base>(GridPoset({0, 0}, {1, 1}));
  std::vector<size_t> all{0, 1, 2, 3};
  auto m = PersistenceModule::interval(b, 2, all);
  CHECK(m.validate());
  const GridPoset& g = b->grid();
  m.set_edge_map(g.index({0, 0}), g.index({0, 1}), Matrix::zero(2, 1, 1));
  CHECK(!m.validate());
  CHECK(PersistenceModule::zero(b, 2).validate());
}

TEST_CASE("shift reindexes with the boundary policy") {
  auto b = line(0, 5);
  auto m = PersistenceModule::interval(b, 2, range_idx(*b, 2, 3));  // k[{2,3}]
  auto sh = m.shift({-1});                                          // k[{3,4}]
  auto expect = PersistenceModule::interval(b, 2, range_idx(*b, 3, 4));
  CHECK(sh == expect);
  CHECK(m.shift({0}) == m);
  auto sh2 = m.shift({1}).shift({1});
  CHECK(sh2 == m.shift({2}));
  // Stabilized right: reads past the edge repeat it.
  auto up = PersistenceModule::principal_up(b, 2, b->grid().index({4}));
  CHECK(up.shift({3}).dim_at(b->grid().index({3})) == 1);
  CHECK(up.shift({3}).dim_at(b->grid().index({0})) == 0);
}

TEST_CASE("sections and cosections") {
  auto b = line(0, 5);
  auto m = PersistenceModule::interval(b, 2, range_idx(*b, 2, 5));  // k[U_2] support
  // Gamma(U_x; M) = M_x and L(D_x; M) = M_x at every point.
  for (int x = 0; x <= 5; ++x) {
    CHECK(sections(m, range_idx(*b, x, 5)) == m.dim_at(b->grid().index({x})));
    CHECK(cosections(m, range_idx(*b, 0, x)) == m.dim_at(b->grid().index({x})));
  }
  CHECK(sections(m, all_idx(*b)) == 0);    // zero stalk below 2 kills sections
  CHECK(cosections(m, all_idx(*b)) == 1);  // the box has a greatest element
  CHECK_THROWS(sections(m, {}));
  CHECK_THROWS(cosections(m, {}));
}

TEST_CASE("principal sections read off stalks on random modules") {
  Rng rng(404);
  auto b = std::make_shared<Base>(GridPoset({0, 0}, {2, 2}));
  for (int t = 0; t < 10; ++t) {
    auto m = random_module(rng, b, 2, 2, t % 2 == 1);
    REQUIRE(m.validate());
    for (size_t x = 0; x < b->size(); ++x) {
      std::vector<size_t> up, down;
      for (size_t y = 0; y < b->size(); ++y) {
        if (b->leq(x, y)) up.push_back(y);
        if (b->leq(y, x)) down.push_back(y);
      }
      CHECK(sections(m, up) == m.dim_at(x));
      CHECK(cosections(m, down) == m.dim_at(x));
    }
  }
}

TEST_CASE("hom spaces of interval modules") {
  auto b = line(0, 1);
  auto k01 = PersistenceModule::interval(b, 2, {0, 1});
  auto k0 = PersistenceModule::interval(b, 2, {0});
  auto k1 = PersistenceModule::interval(b, 2, {1});
  CHECK(hom_space(k01, k01) == 1);
  CHECK(hom_space(k0, k1) == 0);
  CHECK(hom_space(k1, k0) == 0);  // both constraints force zero
  CHECK(hom_space(k1, k01) == 1);
  CHECK(hom_space(k01, k0) == 1);
  auto sum = k01.direct_sum(k01);
  CHECK(hom_space(k01, sum) == 2 * hom_space(k01, k01));
  for (const auto& nt : hom_basis(k01, sum)) CHECK(nt.validate());
}

TEST_CASE("internal hom") {
  auto b = line(0, 5);
  std::vector<size_t> all = all_idx(*b);
  auto m = PersistenceModule::interval(b, 2, all);
  m.set_stabilized({false}, {true});  // k[U_0] on the box
  auto h = internal_hom(m, m);
  for (size_t i = 0; i < b->size(); ++i) CHECK(h.dim_at(i) == 1);
  CHECK(h.validate());
  // Stalk at 0 is Hom(M, N).
  CHECK(h.dim_at(b->grid().index({0})) == hom_space(m, m));
  auto z = PersistenceModule::zero(b, 2);
  CHECK(internal_hom(m, z).is_zero_module());
}

TEST_CASE("direct and inverse images") {
  auto src = line(0, 2);
  auto tgt = line(0, 1);
  // Collapse 0 -> 0, 1,2 -> 1.
  MonotoneMap f{src, tgt, {tgt->grid().index({0}), tgt->grid().index({1}), tgt->grid().index({1})}};
  REQUIRE(f.is_monotone());
  auto kk = PersistenceModule::interval(src, 2, range_idx(*src, 1, 2));
  auto pushed = direct_image_cosheaf(f, kk);
  auto expect = PersistenceModule::interval(tgt, 2, {tgt->grid().index({1})});
  CHECK(pushed == expect);

  // Identity maps leave modules alone.
  std::vector<size_t> ident(src->size());
  for (size_t i = 0; i < ident.size(); ++i) ident[i] = i;
  MonotoneMap idm{src, src, ident};
  CHECK(direct_image_sheaf(idm, kk) == kk);
  CHECK(direct_image_cosheaf(idm, kk) == kk);
  CHECK(inverse_image(idm, kk) == kk);

  // Constant map: inverse image is constant; sheaf image has empty-preimage
  // stalks above the target point.
  auto big = line(0, 3);
  std::vector<size_t> cst(src->size(), big->grid().index({1}));
  MonotoneMap cm{src, big, cst};
  auto g = PersistenceModule::interval(big, 2, range_idx(*big, 1, 3));
  auto pulled = inverse_image(cm, g);
  for (size_t i = 0; i < src->size(); ++i) CHECK(pulled.dim_at(i) == 1);
  auto fstar = direct_image_sheaf(cm, kk);
  size_t gamma = sections(kk, all_idx(*src));
  for (int x = 0; x <= 3; ++x)
    CHECK(fstar.dim_at(big->grid().index({x})) == (x <= 1 ? gamma : 0u));

  // Restriction along an inclusion reads off stalks.
  auto sub = line(0, 2);
  std::vector<size_t> incl;
  for (int x = 0; x <= 2; ++x) incl.push_back(big->grid().index({x}));
  MonotoneMap im{sub, big, incl};
  auto restricted = inverse_image(im, g);
  CHECK(restricted.dim_at(sub->grid().index({0})) == 0);
  CHECK(restricted.dim_at(sub->grid().index({1})) == 1);
  CHECK(restricted.dim_at(sub->grid().index({2})) == 1);
}

TEST_CASE("direct image adjunctions on random instances") {
  Rng rng(777);
  auto src = std::make_shared<Base>(GridPoset({0, 0}, {2, 1}));
  auto tgt = std::make_shared<Base>(GridPoset({0, 0}, {1, 2}));
  for (int t = 0; t < 12; ++t) {
    MonotoneMap f = random_monotone_map(rng, src, tgt);
    REQUIRE(f.is_monotone());
    auto fm = random_module(rng, src, 2, 2, t % 2 == 1);
    auto gm = random_module(rng, tgt, 2, 2, t % 3 == 1);
    REQUIRE(fm.validate());
    REQUIRE(gm.validate());
    CHECK(hom_space(inverse_image(f, gm), fm) == hom_space(gm, direct_image_sheaf(f, fm)));
    CHECK(hom_space(direct_image_cosheaf(f, fm), gm) == hom_space(fm, inverse_image(f, gm)));
  }
}

TEST_CASE("modules on preorders") {
  FinitePreorder q = FinitePreorder::from_relation(3, {{0, 1}, {1, 0}, {1, 2}});
  auto b = std::make_shared<Base>(q);
  auto m = PersistenceModule::interval(b, 3, {0, 1, 2});
  CHECK(m.validate());
  CHECK(sections(m, {0, 1, 2}) == 1);
  CHECK(cosections(m, {0, 1, 2}) == 1);
  auto d = PersistenceModule::principal_down(b, 3, 1);
  CHECK(d.dim_at(0) == 1);  // 0 ~ 1 so 0 <= 1
  CHECK(d.dim_at(2) == 0);
}

TEST_CASE("internal hom agrees with its limit formula on small instances") {
  // Cross-check of the direct definition Hom(M, N(x)) against the limit of
  // Hom_k(M_{-a}, N_b) over {a + b >= x}, built as a genuine module on the
  // product box (covariant in both slots: precompose / postcompose).
  Rng rng(901);
  auto b = line(-2, 3);
  const GridPoset& g = b->grid();
  for (int trial = 0; trial < 6; ++trial) {
    auto m = random_module_supported(rng, b, 2, 2, trial % 2 == 0, {0}, {2});
    auto n = random_module_supported(rng, b, 2, 2, trial % 3 == 0, {0}, {2});
    auto h = internal_hom(m, n);

    GridPoset prod({-3, -2}, {2, 3});  // a-axis mirrors the box of M
    auto pb = std::make_shared<Base>(prod);
    auto hom_diagram = PersistenceModule::zero(pb, 2);
    auto dim_m_neg = [&](int a) { return m.dim_at_point({-a}); };
    for (size_t idx = 0; idx < prod.size(); ++idx) {
      Point q = prod.point(idx);
      hom_diagram.set_dim(idx, dim_m_neg(q[0]) * n.dim_at_point({q[1]}));
    }
    for (auto [idx, ax] : prod.covering_edges()) {
      Point q = prod.point(idx);
      Point to = q;
      ++to[ax];
      exact::Matrix mat;
      if (ax == 0) {
        // Precompose with M_{-a-1 <= -a}: row-major vec(T S) = (I (x) S^T) vec(T).
        exact::Matrix s = m.transition_points({-to[0]}, {-q[0]});
        mat = exact::Matrix::identity(2, n.dim_at_point({q[1]})).kron(s.transpose());
      } else {
        exact::Matrix u = n.transition_points({q[1]}, {to[1]});
        mat = u.kron(exact::Matrix::identity(2, dim_m_neg(q[0])));
      }
      hom_diagram.set_edge_map(idx, prod.index(to), std::move(mat));
    }
    REQUIRE(hom_diagram.validate());
    for (int x = -1; x <= 3; ++x) {
      std::vector<size_t> upset;
      for (size_t idx = 0; idx < prod.size(); ++idx) {
        Point q = prod.point(idx);
        if (q[0] + q[1] >= x) upset.push_back(idx);
      }
      CHECK(limit_over(hom_diagram, upset).dim() == h.dim_at(g.index({x})));
    }
  }
}
