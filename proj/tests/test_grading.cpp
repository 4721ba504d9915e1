#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "colorquant/grading.hpp"

using namespace cq;

TEST_CASE("grading group arithmetic reduces torsion coordinates") {
  GradingGroup g{1, {3}};
  CHECK(g.rank() == 2);
  CHECK(g.reduce({5, -1}) == GroupElement{5, 2});
  CHECK(g.add({1, 2}, {1, 2}) == GroupElement{2, 1});
  CHECK(g.neg({2, 1}) == GroupElement{-2, 2});
  CHECK_THROWS_AS(g.reduce({1}), DomainError);
  GradingGroup bad{0, {1}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("trivial and super factors") {
  Ctx t = trivial_context(2);
  CHECK(t->eps_of({1, 0}, {0, 1}) == Scalar::integer(1));
  CHECK_FALSE(t->is_odd({1, 0}));

  Ctx s = super_context();
  CHECK(s->eps_of({1}, {1}) == Scalar::integer(-1));
  CHECK(s->eps_of({1}, {0}) == Scalar::integer(1));
  CHECK(s->eps_of({1}, {2}) == Scalar::integer(1));
  CHECK(s->is_odd({1}));
  CHECK_FALSE(s->is_odd({0}));
}

TEST_CASE("bicharacter over Z^2 with fourth roots of unity") {
  Scalar i = Scalar::zeta(4);
  std::vector<std::vector<Scalar>> m{{Scalar::integer(1), i},
                                     {i.inverse(), Scalar::integer(1)}};
  Ctx c = make_context(GradingGroup{2, {}}, m, 4);
  CHECK(c->eps_of({1, 0}, {0, 1}) == i);
  CHECK(c->eps_of({0, 1}, {1, 0}) == i.inverse());
  CHECK(c->eps_of({2, 0}, {0, 3}) == i.pow(6));
  CHECK(c->eps_of({1, 0}, {0, -1}) == i.inverse());
  // eps(a, b) * eps(b, a) == 1 on arbitrary pairs.
  GroupElement a{3, -2}, b{-1, 5};
  CHECK(c->eps_of(a, b) * c->eps_of(b, a) == Scalar::integer(1));
  CHECK_FALSE(c->is_odd({1, 1}));
}

TEST_CASE("validation rejects broken factors") {
  // Not antisymmetric: both off-diagonal entries equal i.
  Scalar i = Scalar::zeta(4);
  std::vector<std::vector<Scalar>> bad{{Scalar::integer(1), i},
                                       {i, Scalar::integer(1)}};
  CHECK_THROWS_AS(make_context(GradingGroup{2, {}}, bad, 4), DomainError);

  // eps(d, d) must be a sign: diagonal entry i fails.
  std::vector<std::vector<Scalar>> diag{{i}};
  CHECK_THROWS_AS(make_context(GradingGroup{1, {}}, diag, 4), DomainError);

  // Torsion coordinate of order 2 with an entry of order 4.
  std::vector<std::vector<Scalar>> tor{{Scalar::integer(1), i},
                                       {i.inverse(), Scalar::integer(1)}};
  CHECK_THROWS_AS(make_context(GradingGroup{1, {2}}, tor, 4), DomainError);

  // Wrong matrix shape.
  std::vector<std::vector<Scalar>> shape{{Scalar::integer(1)}};
  CHECK_THROWS_AS(make_context(GradingGroup{2, {}}, shape, 1), DomainError);
}
