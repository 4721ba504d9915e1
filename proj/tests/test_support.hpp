#pragma once

// Shared desk fixtures used across the test binaries.

#include "colorquant/colorlie.hpp"

namespace fixtures {

using namespace cq;

// Z-graded with trivial factor.
inline Ctx ctx_z() {
  GradingGroup g{1, {}};
  std::vector<std::vector<Scalar>> m{{Scalar::integer(1)}};
  return make_context(std::move(g), std::move(m), 1);
}

// h (deg 0), e (deg -1), f (deg 1) over the trivial Z factor.
inline BasisPtr basis_sl2(Ctx c) {
  return make_basis(std::move(c), {"h", "e", "f"}, {{0}, {-1}, {1}});
}

// N, E even; psi+, psi- odd; super sign factor on Z/2.
inline BasisPtr basis_gl11(Ctx c) {
  return make_basis(std::move(c), {"N", "E", "psi+", "psi-"},
                    {{0}, {0}, {1}, {1}});
}

// x (deg 0), y (deg 1) over the trivial Z factor.
inline BasisPtr basis_borel2(Ctx c) {
  return make_basis(std::move(c), {"x", "y"}, {{0}, {1}});
}

inline DeformedTensor single(const BasisPtr& b, std::uint32_t order,
                             std::vector<std::uint32_t> key,
                             Scalar coeff = Scalar::integer(1)) {
  DeformedTensor t(b, static_cast<std::uint32_t>(key.size()), order);
  t.add_term(key, coeff);
  return t;
}

// Two-dimensional abelian bialgebra over the trivial group.
inline ColorLieBialgebra fix_a() {
  auto b = make_basis(trivial_context(0), {"u", "v"}, {{}, {}});
  return ColorLieBialgebra(ColorLieAlgebra(b));
}

// Borel of sl2: [x,y] = y, delta(y) = x(x)y - y(x)x.
inline ColorLieBialgebra fix_b() {
  ColorLieAlgebra alg(basis_borel2(ctx_z()));
  alg.set_bracket_pair(0, 1, {{1, Scalar::integer(1)}});
  ColorLieBialgebra bi(std::move(alg));
  bi.add_cobracket_term(1, 0, 1, Scalar::integer(1));
  bi.add_cobracket_term(1, 1, 0, Scalar::integer(-1));
  return bi;
}

inline ColorLieAlgebra fix_c_algebra() {
  ColorLieAlgebra alg(basis_sl2(ctx_z()));
  alg.set_bracket_pair(0, 1, {{1, Scalar::integer(2)}});
  alg.set_bracket_pair(0, 2, {{2, Scalar::integer(-2)}});
  alg.set_bracket_pair(1, 2, {{0, Scalar::integer(1)}});
  return alg;
}

inline DeformedTensor fix_c_r(const BasisPtr& b) {
  DeformedTensor r(b, 2, 1);
  r.add_term({1, 2}, Scalar::integer(1));
  r.add_term({0, 0}, Scalar::rational(1, 4));
  return r;
}

// sl2 with the cobracket induced by the standard r-matrix.
inline ColorLieBialgebra fix_c() {
  ColorLieAlgebra alg = fix_c_algebra();
  DeformedTensor r = fix_c_r(alg.basis());
  ColorLieBialgebra bi(std::move(alg));
  bi.set_cobracket_from_r(r);
  return bi;
}

inline ColorLieAlgebra fix_d_algebra() {
  ColorLieAlgebra alg(basis_gl11(super_context()));
  alg.set_bracket_pair(0, 2, {{2, Scalar::integer(1)}});
  alg.set_bracket_pair(0, 3, {{3, Scalar::integer(-1)}});
  alg.set_bracket_pair(2, 3, {{1, Scalar::integer(1)}});
  return alg;
}

// Triangular fixture: the nonabelian 2-dim algebra with trivial grading, the
// antisymmetric r = x(x)y - y(x)x and the cobracket it induces. The trivial
// grading keeps r homogeneous of degree 0.
inline ColorLieBialgebra fix_t() {
  auto ctx = trivial_context(0);
  auto basis = make_basis(ctx, {"x", "y"}, {{}, {}});
  ColorLieAlgebra alg(basis);
  alg.set_bracket_pair(0, 1, {{1, Scalar::integer(1)}});
  DeformedTensor r(alg.basis(), 2, 1);
  r.add_term({0, 1}, Scalar::integer(1));
  r.add_term({1, 0}, Scalar::integer(-1));
  ColorLieBialgebra bi(std::move(alg));
  bi.set_cobracket_from_r(r);
  return bi;
}

}  // namespace fixtures
