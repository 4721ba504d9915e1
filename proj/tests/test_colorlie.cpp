#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_support.hpp"

using namespace cq;
using fixtures::single;

namespace {

// Independent Yang-Baxter oracle: closed per-pair formulas obtained by
// straightening the three slot commutators by hand. Valid for degree-0 input.
DeformedTensor cyb_oracle(const ColorLieAlgebra& alg, const DeformedTensor& r) {
  const auto& ctx = *alg.ctx();
  const auto& b = *alg.basis();
  DeformedTensor out(r.basis(), 3, r.order());
  for (const auto& [ki, ci] : r.terms())
    for (const auto& [kj, cj] : r.terms()) {
      std::uint32_t ai = ki[0], bi = ki[1], aj = kj[0], bj = kj[1];
      Scalar c = ci.coeff(0) * cj.coeff(0);
      Scalar eji = ctx.eps_of(b.degree(aj), b.degree(ai));
      for (const auto& [k, v] : alg.bracket_terms(ai, aj))
        out.add_term({k, bi, bj}, c * eji * v);
      for (const auto& [k, v] : alg.bracket_terms(bi, aj))
        out.add_term({ai, k, bj}, c * v);
      for (const auto& [k, v] : alg.bracket_terms(bi, bj))
        out.add_term({ai, aj, k}, c * eji * v);
    }
  return out;
}

DeformedTensor random_degree0_r(const BasisPtr& b, std::mt19937& rng) {
  const auto& group = b->ctx()->group;
  std::uniform_int_distribution<int> num(-3, 3);
  DeformedTensor r(b, 2, 1);
  for (std::uint32_t i = 0; i < b->size(); ++i)
    for (std::uint32_t j = 0; j < b->size(); ++j)
      if (group.add(b->degree(i), b->degree(j)) == group.zero())
        r.add_term({i, j}, Scalar::integer(num(rng)));
  return r;
}

}  // namespace

TEST_CASE("fixture algebras satisfy the color axioms") {
  CHECK(check_color_lie(fixtures::fix_c_algebra()).ok());
  CHECK(check_color_lie(fixtures::fix_d_algebra()).ok());
  CHECK(check_color_bialgebra(fixtures::fix_a()).ok());
  CHECK(check_color_bialgebra(fixtures::fix_b()).ok());
  CHECK(check_color_bialgebra(fixtures::fix_c()).ok());
  CHECK(check_color_bialgebra(fixtures::fix_t()).ok());
}

TEST_CASE("corrupted bracket is located") {
  ColorLieAlgebra alg(fixtures::basis_sl2(fixtures::ctx_z()));
  alg.set_bracket_pair(0, 1, {{1, Scalar::integer(2)}});
  alg.set_bracket_pair(0, 2, {{2, Scalar::integer(-2)}});
  // [e,f] = h + e instead of h.
  alg.set_bracket_pair(1, 2, {{0, Scalar::integer(1)}, {1, Scalar::integer(1)}});
  Report rep = check_color_lie(alg);
  CHECK_FALSE(rep.ok());
  bool jac_at_hef = false, degree_flagged = false;
  for (const auto& issue : rep.issues) {
    if (issue.check == "jacobi" && issue.location == "(h,e,f)") jac_at_hef = true;
    if (issue.check == "bracket_degree") degree_flagged = true;
  }
  CHECK(jac_at_hef);
  CHECK(degree_flagged);
}

TEST_CASE("corrupted cobracket is located") {
  ColorLieBialgebra bi = fixtures::fix_b();
  // Inject delta(x) = x(x)y - y(x)x: breaks degree-0 homogeneity of delta.
  bi.add_cobracket_term(0, 0, 1, Scalar::integer(1));
  bi.add_cobracket_term(0, 1, 0, Scalar::integer(-1));
  Report rep = check_color_bialgebra(bi);
  CHECK_FALSE(rep.ok());
  bool found = false;
  for (const auto& issue : rep.issues)
    if (issue.check == "cobracket_degree" && issue.location == "x") found = true;
  CHECK(found);

  // A genuine cocycle failure: sl2 with delta(e) = e^h, delta(f) = 0.
  ColorLieBialgebra bad(fixtures::fix_c_algebra());
  bad.add_cobracket_term(1, 1, 0, Scalar::integer(1));
  bad.add_cobracket_term(1, 0, 1, Scalar::integer(-1));
  Report rep2 = check_color_bialgebra(bad);
  bool cocycle = false;
  for (const auto& issue : rep2.issues)
    if (issue.check == "cocycle") cocycle = true;
  CHECK(cocycle);
}

TEST_CASE("adjoint action is a color derivation") {
  auto algc = fixtures::fix_c_algebra();
  auto bc = algc.basis();
  std::uint32_t h = 0, e = 1, f = 2;
  CHECK(adjoint_act(algc, h, single(bc, 1, {e, f})).is_zero());

  auto algd = fixtures::fix_d_algebra();
  auto bd = algd.basis();
  std::uint32_t N = 0, P = 2, M = 3;
  CHECK(adjoint_act(algd, N, single(bd, 1, {P, M})).is_zero());
  // psi+ . (psi+ (x) psi-) = [psi+,psi+] (x) psi- - psi+ (x) [psi+,psi-].
  CHECK(adjoint_act(algd, P, single(bd, 1, {P, M})) ==
        single(bd, 1, {P, 1}, Scalar::integer(-1)));

  // Leibniz split against independent slotwise assembly.
  std::mt19937 rng(31);
  std::uniform_int_distribution<std::uint32_t> idx(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::uint32_t x = idx(rng), u = idx(rng), v = idx(rng);
    auto whole = adjoint_act(algd, x, single(bd, 1, {u, v}));
    auto left = tensor_product(adjoint_act(algd, x, single(bd, 1, {u})),
                               single(bd, 1, {v}));
    Scalar eps = bd->ctx()->eps_of(bd->degree(x), bd->degree(u));
    auto right = tensor_product(single(bd, 1, {u}),
                                adjoint_act(algd, x, single(bd, 1, {v})))
                     .scaled(eps);
    CHECK(whole == left + right);
  }
}

TEST_CASE("yang-baxter residuals match the closed-form oracle") {
  auto alg = fixtures::fix_c_algebra();
  auto b = alg.basis();
  std::uint32_t h = 0, e = 1, f = 2;

  DeformedTensor zero_r(b, 2, 1);
  CHECK(cyb(alg, zero_r).is_zero());

  auto r = fixtures::fix_c_r(b);
  CHECK(cyb(alg, r).is_zero());
  CHECK(cyb_oracle(alg, r).is_zero());

  auto ef = single(b, 1, {e, f});
  auto expected = single(b, 1, {e, h, f}, Scalar::integer(-1));
  CHECK(cyb(alg, ef) == expected);
  CHECK(cyb_oracle(alg, ef) == expected);

  // Triangular borel candidate: both agree on zero.
  auto bi = fixtures::fix_t();
  CHECK(cyb(bi.algebra, *bi.rmatrix).is_zero());
  CHECK(cyb_oracle(bi.algebra, *bi.rmatrix).is_zero());

  // Random degree-0 tensors on the super fixture.
  auto algd = fixtures::fix_d_algebra();
  std::mt19937 rng(47);
  for (int trial = 0; trial < 15; ++trial) {
    auto rr = random_degree0_r(algd.basis(), rng);
    CHECK(cyb(algd, rr) == cyb_oracle(algd, rr));
  }

  // Inhomogeneous input is still fine when the quadratic words cancel.
  auto algb = fixtures::fix_b().algebra;
  DeformedTensor xy(algb.basis(), 2, 1);
  xy.add_term({0, 1}, Scalar::integer(1));
  xy.add_term({1, 0}, Scalar::integer(-1));
  CHECK(cyb(algb, xy).is_zero());

  DeformedTensor he(b, 2, 1);
  he.add_term({h, e}, Scalar::integer(1));
  CHECK(cyb(alg, he) == single(b, 1, {h, e, e}, Scalar::integer(-2)));
  CHECK(cyb_oracle(alg, he) == single(b, 1, {h, e, e}, Scalar::integer(-2)));

  // A residual that leaves the cubic basis layer is refused.
  DeformedTensor pn(algd.basis(), 2, 1);
  pn.add_term({2, 0}, Scalar::integer(1));
  CHECK_THROWS_AS(cyb(algd, pn), DomainError);
}

TEST_CASE("r-matrix classification") {
  auto c = fixtures::fix_c();
  auto cls = classify_r(c);
  CHECK(cls.cls == RClass::quasitriangular);
  CHECK(cls.report.ok());

  auto t = fixtures::fix_t();
  CHECK(classify_r(t).cls == RClass::triangular);

  // The graded borel algebra with the same antisymmetric candidate: r is
  // inhomogeneous there, but every classifier condition still holds.
  ColorLieBialgebra bb = fixtures::fix_b();
  DeformedTensor xy(bb.algebra.basis(), 2, 1);
  xy.add_term({0, 1}, Scalar::integer(1));
  xy.add_term({1, 0}, Scalar::integer(-1));
  bb.rmatrix = xy;
  CHECK(classify_r(bb).cls == RClass::triangular);

  // sl2 with r = e(x)f alone fails the Yang-Baxter equation.
  ColorLieBialgebra notqt(fixtures::fix_c_algebra());
  notqt.rmatrix = single(notqt.algebra.basis(), 1, {1, 2});
  auto bad = classify_r(notqt);
  CHECK(bad.cls == RClass::not_qt);
  CHECK_FALSE(bad.report.ok());

  // Zero r with zero cobracket is (vacuously) triangular.
  ColorLieBialgebra zero(fixtures::fix_a());
  zero.rmatrix = DeformedTensor(zero.algebra.basis(), 2, 1);
  CHECK(classify_r(zero).cls == RClass::triangular);

  ColorLieBialgebra none(fixtures::fix_a());
  CHECK_THROWS_AS(classify_r(none), DomainError);
}

TEST_CASE("double of the borel fixture matches the hand computation") {
  auto dbl = build_double(fixtures::fix_b());
  const auto& alg = dbl.bialgebra.algebra;
  const auto& basis = *alg.basis();
  REQUIRE(alg.dim() == 4);
  CHECK(basis.name(2) == "x*");
  CHECK(basis.degree(3) == GroupElement{-1});
  std::uint32_t x = 0, y = 1, xd = 2, yd = 3;

  auto expect = [&](std::uint32_t i, std::uint32_t j,
                    std::map<std::uint32_t, Scalar> want) {
    CHECK(alg.bracket_terms(i, j) == want);
  };
  expect(x, y, {{y, Scalar::integer(1)}});
  expect(xd, yd, {{yd, Scalar::integer(1)}});
  expect(x, xd, {});
  expect(x, yd, {{yd, Scalar::integer(-1)}});
  expect(y, xd, {{y, Scalar::integer(1)}});
  expect(y, yd, {{xd, Scalar::integer(1)}, {x, Scalar::integer(-1)}});

  CHECK(check_color_bialgebra(dbl.bialgebra).ok());
  for (std::uint32_t i = 0; i < 4; ++i)
    CHECK(adjoint_act(alg, i, dbl.omega).is_zero());
  CHECK(check_manin(alg, dbl.pairing, {0, 1}, {2, 3}).ok());
  CHECK(classify_r(dbl.bialgebra).cls == RClass::quasitriangular);
}

TEST_CASE("doubles of all fixtures pass the full axiom set") {
  auto run = [](ColorLieBialgebra bi) {
    auto dbl = build_double(bi);
    CHECK(check_color_bialgebra(dbl.bialgebra).ok());
    std::uint32_t n = static_cast<std::uint32_t>(dbl.bialgebra.algebra.dim());
    std::vector<std::uint32_t> plus, minus;
    for (std::uint32_t i = 0; i < dbl.dim_plus; ++i) plus.push_back(i);
    for (std::uint32_t i = dbl.dim_plus; i < n; ++i) minus.push_back(i);
    CHECK(check_manin(dbl.bialgebra.algebra, dbl.pairing, plus, minus).ok());
    for (std::uint32_t i = 0; i < n; ++i)
      CHECK(adjoint_act(dbl.bialgebra.algebra, i, dbl.omega).is_zero());
  };
  run(fixtures::fix_a());
  run(fixtures::fix_b());
  run(fixtures::fix_c());
  run(fixtures::fix_t());
}

TEST_CASE("double of a non-bialgebra surfaces a jacobi failure") {
  ColorLieBialgebra bad(fixtures::fix_c_algebra());
  bad.add_cobracket_term(1, 1, 0, Scalar::integer(1));
  bad.add_cobracket_term(1, 0, 1, Scalar::integer(-1));
  REQUIRE_FALSE(check_color_bialgebra(bad).ok());
  auto dbl = build_double(bad);
  Report rep = check_color_lie(dbl.bialgebra.algebra);
  CHECK_FALSE(rep.ok());
  bool jac = false;
  for (const auto& issue : rep.issues)
    if (issue.check == "jacobi") jac = true;
  CHECK(jac);
}

TEST_CASE("manin pairing negative controls") {
  auto dbl = build_double(fixtures::fix_b());
  const auto& alg = dbl.bialgebra.algebra;

  // Splitting that pairs each element with its own dual is not closed:
  // [y, y*] walks out of {y, y*}.
  Report rep = check_manin(alg, dbl.pairing, {0, 2}, {1, 3});
  CHECK_FALSE(rep.ok());
  bool closure = false;
  for (const auto& issue : rep.issues)
    if (issue.check.rfind("closure_", 0) == 0) closure = true;
  CHECK(closure);

  ManinPairing zero;
  zero.gram.assign(4, std::vector<Scalar>(4, Scalar::integer(0)));
  Report rep2 = check_manin(alg, zero, {0, 1}, {2, 3});
  bool nondeg = false;
  for (const auto& issue : rep2.issues)
    if (issue.check == "pairing_nondegenerate") nondeg = true;
  CHECK(nondeg);
}

TEST_CASE("bracket rescaling by a bicharacter") {
  auto alg = fixtures::fix_c_algebra();

  // sigma == 1 leaves everything alone.
  Bicharacter one(alg.ctx()->group, {{Scalar::integer(1)}});
  auto same = scheunert_twist(alg, one);
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 3; ++j)
      CHECK(same.bracket_terms(i, j) == alg.bracket_terms(i, j));

  // sigma(a,b) = 2^(ab) on Z: [e,f]' = h/2, [h,e]' = 2e, factor unchanged.
  Bicharacter sig2(alg.ctx()->group, {{Scalar::integer(2)}});
  auto tw = scheunert_twist(alg, sig2);
  CHECK(tw.bracket_terms(1, 2) ==
        std::map<std::uint32_t, Scalar>{{0, Scalar::rational(1, 2)}});
  CHECK(tw.bracket_terms(0, 1) ==
        std::map<std::uint32_t, Scalar>{{1, Scalar::integer(2)}});
  CHECK(check_color_lie(tw).ok());
  CHECK(tw.ctx()->eps_of({1}, {1}) == Scalar::integer(1));

  // Round trip restores the constants exactly.
  auto back = scheunert_twist(tw, sig2.inverted());
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 3; ++j)
      CHECK(back.bracket_terms(i, j) == alg.bracket_terms(i, j));

  // Super fixture with sigma(a,b) = i^(ab) at conductor 4.
  auto algd = fixtures::fix_d_algebra();
  Bicharacter sigi(algd.ctx()->group, {{Scalar::zeta(4)}});
  auto twd = scheunert_twist(algd, sigi);
  CHECK(check_color_lie(twd).ok());
  CHECK(twd.bracket_terms(2, 3) ==
        std::map<std::uint32_t, Scalar>{{1, Scalar::zeta(4)}});
  CHECK(twd.ctx()->eps_of({1}, {1}) == Scalar::integer(-1));
  auto backd = scheunert_twist(twd, sigi.inverted());
  for (std::uint32_t i = 0; i < 4; ++i)
    for (std::uint32_t j = 0; j < 4; ++j)
      CHECK(backd.bracket_terms(i, j) == algd.bracket_terms(i, j));
}

TEST_CASE("labeled r-matrix assembly") {
  auto alg = fixtures::fix_c_algebra();
  auto r = standard_r(alg.basis(), {{"e", "f", Scalar::integer(1)},
                                    {"h", "h", Scalar::rational(1, 4)}});
  CHECK(r == fixtures::fix_c_r(alg.basis()));

  auto cartan_only = standard_r(alg.basis(), {{"h", "h", Scalar::integer(1)}});
  CHECK(cyb(alg, cartan_only).is_zero());

  CHECK_THROWS_AS(standard_r(alg.basis(), {{"q", "f", Scalar::integer(1)}}),
                  DomainError);
}
