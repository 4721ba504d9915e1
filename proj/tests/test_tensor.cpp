#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_support.hpp"

using namespace cq;
using fixtures::single;

namespace {

DeformedTensor random_tensor(const BasisPtr& b, std::uint32_t arity,
                             std::mt19937& rng) {
  std::uniform_int_distribution<std::uint32_t> idx(
      0, static_cast<std::uint32_t>(b->size() - 1));
  std::uniform_int_distribution<int> num(-5, 5);
  DeformedTensor t(b, arity, 1);
  for (int n = 0; n < 4; ++n) {
    DeformedTensor::Key k;
    for (std::uint32_t s = 0; s < arity; ++s) k.push_back(idx(rng));
    t.add_term(k, Scalar::integer(num(rng)));
  }
  return t;
}

}  // namespace

TEST_CASE("basis construction and lookups") {
  auto b = fixtures::basis_sl2(fixtures::ctx_z());
  CHECK(b->size() == 3);
  CHECK(b->index_of("e") == 1);
  CHECK(b->degree(2) == GroupElement{1});
  CHECK_FALSE(b->has("q"));
  CHECK_THROWS_AS(b->index_of("q"), DomainError);
  CHECK_THROWS_AS(
      make_basis(fixtures::ctx_z(), {"a", "a"}, {{0}, {1}}), DomainError);
}

TEST_CASE("koszul flip") {
  auto s = super_context();
  auto b = fixtures::basis_gl11(s);
  std::uint32_t P = b->index_of("psi+"), M = b->index_of("psi-");

  auto t = single(b, 1, {P, M});
  auto f = t.flipped();
  CHECK(f == single(b, 1, {M, P}, Scalar::integer(-1)));

  auto z = fixtures::ctx_z();
  auto c = fixtures::basis_sl2(z);
  auto ef = single(c, 1, {c->index_of("e"), c->index_of("f")});
  CHECK(ef.flipped() == single(c, 1, {c->index_of("f"), c->index_of("e")}));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = random_tensor(b, 2, rng);
    CHECK(r.flipped().flipped() == r);
  }
  CHECK_THROWS_AS(t.koszul_flip(1), DomainError);
}

TEST_CASE("cyclic rotation with Koszul factor") {
  auto z = fixtures::ctx_z();
  auto c = fixtures::basis_sl2(z);
  std::uint32_t h = 0, e = 1, f = 2;
  CHECK(single(c, 1, {h, e, f}).cyclic_rotate() == single(c, 1, {e, f, h}));

  auto s = super_context();
  auto b = fixtures::basis_gl11(s);
  std::uint32_t P = 2, M = 3, N = 0;
  // eps(deg psi+, deg psi- + deg N) = eps(1, 1) = -1.
  CHECK(single(b, 1, {P, M, N}).cyclic_rotate() ==
        single(b, 1, {M, N, P}, Scalar::integer(-1)));

  std::mt19937 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = random_tensor(b, 3, rng);
    CHECK(r.cyclic_rotate().cyclic_rotate().cyclic_rotate() == r);
  }
}

TEST_CASE("braid relation on arity-3 tensors") {
  auto s = super_context();
  auto b = fixtures::basis_gl11(s);
  std::mt19937 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = random_tensor(b, 3, rng);
    auto lhs = r.koszul_flip(0).koszul_flip(1).koszul_flip(0);
    auto rhs = r.koszul_flip(1).koszul_flip(0).koszul_flip(1);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("graded maps apply with Koszul signs") {
  auto s = super_context();
  auto b = fixtures::basis_gl11(s);
  std::uint32_t N = 0, E = 1, P = 2, M = 3;

  auto id2 = std::vector<GradedMap>{GradedMap::identity(b, 1),
                                    GradedMap::identity(b, 1)};
  std::mt19937 rng(14);
  auto r = random_tensor(b, 2, rng);
  CHECK(koszul_apply_maps(id2, r) == r);

  // Odd map g: psi+ -> E past an odd first slot picks up -1.
  GradedMap g(b, {1}, 1);
  g.set_entry(P, E, Scalar::integer(1));
  auto t = single(b, 1, {M, P});
  auto applied = koszul_apply_maps({GradedMap::identity(b, 1), g}, t);
  CHECK(applied == single(b, 1, {M, E}, Scalar::integer(-1)));

  // Same map on an even first slot: no sign.
  auto t2 = single(b, 1, {N, P});
  CHECK(koszul_apply_maps({GradedMap::identity(b, 1), g}, t2) ==
        single(b, 1, {N, E}));

  // Degree bookkeeping is enforced at entry time.
  GradedMap bad(b, {0}, 1);
  CHECK_THROWS_AS(bad.set_entry(P, E, Scalar::integer(1)), DomainError);
}

TEST_CASE("homogeneity and arithmetic") {
  auto z = fixtures::ctx_z();
  auto c = fixtures::basis_sl2(z);
  std::uint32_t h = 0, e = 1, f = 2;

  DeformedTensor r(c, 2, 1);
  r.add_term({e, f}, Scalar::integer(1));
  r.add_term({h, h}, Scalar::rational(1, 4));
  CHECK(r.is_degree_zero());
  CHECK(r.term_count() == 2);

  DeformedTensor mixed = r;
  mixed.add_term({h, e}, Scalar::integer(1));
  CHECK_FALSE(mixed.is_degree_zero());
  CHECK(mixed.is_homogeneous_of({0}) == false);

  CHECK((r - r).is_zero());
  CHECK(r.scaled(Scalar::integer(2)).coeff({h, h}) ==
        TruncSeries::constant(1, Scalar::rational(1, 2)));

  auto prod = tensor_product(single(c, 1, {e}), single(c, 1, {f, h}));
  CHECK(prod == single(c, 1, {e, f, h}));

  CHECK_THROWS_AS(r += single(c, 1, {e}), DomainError);
  DeformedTensor wrong_order(c, 2, 3);
  CHECK_THROWS_AS(r += wrong_order, OrderMismatch);
}
