// Acceptance drive. Twelve independently stated guarantees, one verdict line
// each; exit code 0 only when every line reads PASS. Every comparison here is
// exact, and the reference values come from standalone oracles built inside
// this file, not from the library under test.

#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "colorquant/cartan.hpp"
#include "colorquant/quantize.hpp"
#include "test_support.hpp"

using namespace cq;

namespace {

int failures = 0;

template <typename Fn>
void criterion(int idx, const char* what, Fn&& fn) {
  bool ok = false;
  std::string note;
  try {
    ok = fn(note);
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  std::cout << (ok ? "PASS" : "FAIL") << ' ' << idx << ". " << what;
  if (!ok && !note.empty()) std::cout << "  [" << note << ']';
  std::cout << std::endl;
  if (!ok) ++failures;
}

// Independent expansion of the three bracket insertions in the classical
// Yang-Baxter combination, read straight off the structure constants. No
// crossing phases appear, so this is only a valid oracle over a trivial
// commutation factor; the sl2 fixture lives there.
DeformedTensor cyb_oracle(const ColorLieAlgebra& alg, const DeformedTensor& r) {
  DeformedTensor out(alg.basis(), 3, r.order());
  for (const auto& [ab, ca] : r.terms())
    for (const auto& [cd, cb] : r.terms()) {
      const TruncSeries prod = ca * cb;
      const std::uint32_t i = ab[0], j = ab[1], k = cd[0], l = cd[1];
      for (const auto& [m, s] : alg.bracket_terms(i, k))
        out.add_term({m, j, l}, prod.scaled(s));
      for (const auto& [m, s] : alg.bracket_terms(j, k))
        out.add_term({i, m, l}, prod.scaled(s));
      for (const auto& [m, s] : alg.bracket_terms(j, l))
        out.add_term({i, k, m}, prod.scaled(s));
    }
  return out;
}

// Number of words of length <= budget that are non-decreasing in the letter
// order, with letters of odd type used at most once. Each such multiset is
// one normal word, so this counts a basis of the color symmetric algebra.
std::size_t normal_word_count(const std::vector<bool>& odd, std::size_t at,
                              std::size_t budget) {
  if (at == odd.size()) return 1;
  const std::size_t cap = odd[at] ? std::min<std::size_t>(1, budget) : budget;
  std::size_t total = 0;
  for (std::size_t m = 0; m <= cap; ++m)
    total += normal_word_count(odd, at + 1, budget - m);
  return total;
}

Rational binom(unsigned a, unsigned b) {
  Rational r(1);
  for (unsigned k = 0; k < b; ++k) r *= Rational(a - k) / Rational(k + 1);
  return r;
}

CartanData rank1_even() { return {{{2}}, {}, {Rational(1)}}; }

CartanData rank1_isotropic() { return {{{0}}, {1}, {Rational(1)}}; }

CartanData a2() {
  return {{{2, -1}, {-1, 2}}, {}, {Rational(1), Rational(1)}};
}

CartanData b2() {
  return {{{2, -1}, {-2, 2}}, {2}, {Rational(1), Rational(1) / 2}};
}

bool same_lie_structure(const ColorLieAlgebra& a, const ColorLieAlgebra& b) {
  const std::uint32_t dim = static_cast<std::uint32_t>(a.basis()->size());
  if (b.basis()->size() != dim) return false;
  if (!a.basis()->same_content(*b.basis())) return false;
  if (a.ctx()->eps.matrix() != b.ctx()->eps.matrix()) return false;
  for (std::uint32_t i = 0; i < dim; ++i)
    for (std::uint32_t j = 0; j < dim; ++j)
      if (a.bracket_terms(i, j) != b.bracket_terms(i, j)) return false;
  return true;
}

struct QuantizedFixture {
  std::string name;
  DblPtr dbl;
  UEATensor twist;
  QuasiHopfData hopf;
};

}  // namespace

int main() {
  // The first three criteria all look at the order-2 quantization of the
  // doubles of the abelian pair, the borel, and the sl2 fixture; build those
  // once up front.
  std::vector<QuantizedFixture> quantized;
  std::string setup_note;
  try {
    std::vector<std::pair<std::string, ColorLieBialgebra>> base;
    base.emplace_back("abelian pair", fixtures::fix_a());
    base.emplace_back("borel", fixtures::fix_b());
    base.emplace_back("sl2", fixtures::fix_c());
    for (auto& [name, bi] : base) {
      DblPtr d = make_double_uea(bi);
      UEATensor j = compute_J(d, 2);
      QuasiHopfData q = twist_hopf(d->env(), j, d->structure().omega);
      quantized.push_back({name, d, std::move(j), std::move(q)});
    }
  } catch (const std::exception& e) {
    setup_note = std::string("setup failed: ") + e.what();
  }

  criterion(1, "order-2 twist equals 1 + (lambda/2) r on each fixture double",
            [&](std::string& note) {
              if (!setup_note.empty()) {
                note = setup_note;
                return false;
              }
              for (const auto& qf : quantized) {
                UEATensor expected = UEATensor::unit(qf.dbl->env(), 2, 2);
                expected = expected +
                           lift_to_uea(qf.dbl->env(), qf.dbl->structure().r, 2)
                               .scaled(TruncSeries::lambda(2))
                               .scaled(Scalar::rational(1, 2));
                if (!(qf.twist == expected)) {
                  note = qf.name;
                  return false;
                }
              }
              return true;
            });

  criterion(2,
            "twisted structure is quasitriangular, coassociative, and has "
            "R = 1 + lambda r at order 2",
            [&](std::string& note) {
              if (!setup_note.empty()) {
                note = setup_note;
                return false;
              }
              for (const auto& qf : quantized) {
                const EnvPtr& env = qf.dbl->env();
                Report rep = check_quasitriangular(qf.hopf, 2);
                if (!rep.ok()) {
                  note = qf.name + ": " + rep.str();
                  return false;
                }
                UEATensor expected = UEATensor::unit(env, 2, 2);
                expected = expected +
                           lift_to_uea(env, qf.dbl->structure().r, 2)
                               .scaled(TruncSeries::lambda(2));
                if (!(qf.hopf.R == expected)) {
                  note = qf.name + ": R differs from 1 + lambda r";
                  return false;
                }
                // Coassociativity of the twisted coproduct on generators,
                // checked term by term. The order-2 associator conjugation
                // is trivial here, so the two expansions must agree on the
                // nose.
                auto expand = [&](const Word& w) {
                  return qf.hopf.coproduct(env->from_word(w, 2));
                };
                const std::uint32_t dim =
                    static_cast<std::uint32_t>(env->algebra().basis()->size());
                for (std::uint32_t i = 0; i < dim; ++i) {
                  UEATensor d = qf.hopf.coproduct(env->gen(i, 2));
                  if (!(d.apply_slot_expansion(0, expand) ==
                        d.apply_slot_expansion(1, expand))) {
                    note = qf.name + ": coassociativity fails on " +
                           env->algebra().basis()->name(i);
                    return false;
                  }
                }
              }
              return true;
            });

  criterion(3,
            "skew part of the twisted coproduct recovers the declared "
            "cobracket at lambda^1",
            [&](std::string& note) {
              if (!setup_note.empty()) {
                note = setup_note;
                return false;
              }
              for (const auto& qf : quantized) {
                const EnvPtr& env = qf.dbl->env();
                const ColorLieBialgebra& dbi = qf.dbl->structure().bialgebra;
                const std::uint32_t dim =
                    static_cast<std::uint32_t>(env->algebra().basis()->size());
                for (std::uint32_t i = 0; i < dim; ++i) {
                  UEATensor delta = qf.hopf.coproduct(env->gen(i, 2));
                  UEATensor skew = delta - delta.flipped(0);
                  UEATensor expected =
                      lift_to_uea(env, dbi.cobracket_of(i), 2)
                          .scaled(TruncSeries::lambda(2));
                  if (!(skew == expected)) {
                    note = qf.name + ": mismatch on " +
                           env->algebra().basis()->name(i);
                    return false;
                  }
                }
              }
              return true;
            });

  criterion(4,
            "every fixture double passes the lie, bialgebra, and pairing "
            "checks and its casimir is invariant",
            [&](std::string& note) {
              std::vector<std::pair<std::string, ColorLieBialgebra>> all;
              all.emplace_back("abelian pair", fixtures::fix_a());
              all.emplace_back("borel", fixtures::fix_b());
              all.emplace_back("sl2", fixtures::fix_c());
              all.emplace_back("triangular borel", fixtures::fix_t());
              for (auto& [name, bi] : all) {
                DoubleStructure ds = build_double(bi);
                const ColorLieAlgebra& alg = ds.bialgebra.algebra;
                if (!check_color_lie(alg).ok()) {
                  note = name + ": lie axioms";
                  return false;
                }
                if (!check_color_bialgebra(ds.bialgebra).ok()) {
                  note = name + ": bialgebra axioms";
                  return false;
                }
                const std::uint32_t dim =
                    static_cast<std::uint32_t>(alg.basis()->size());
                std::vector<std::uint32_t> plus, minus;
                for (std::uint32_t i = 0; i < ds.dim_plus; ++i)
                  plus.push_back(i);
                for (std::uint32_t i = ds.dim_plus; i < dim; ++i)
                  minus.push_back(i);
                if (!check_manin(alg, ds.pairing, plus, minus).ok()) {
                  note = name + ": pairing";
                  return false;
                }
                for (std::uint32_t i = 0; i < dim; ++i)
                  if (!adjoint_act(alg, i, ds.omega).is_zero()) {
                    note = name + ": casimir moves under " +
                           alg.basis()->name(i);
                    return false;
                  }
              }
              return true;
            });

  criterion(5,
            "yang-baxter residual on sl2 matches the structure-constant "
            "oracle, including the negative control",
            [&](std::string& note) {
              ColorLieAlgebra alg = fixtures::fix_c_algebra();
              DeformedTensor good = fixtures::fix_c_r(alg.basis());
              DeformedTensor good_lib = cyb(alg, good);
              if (!good_lib.is_zero()) {
                note = "full r-matrix has nonzero residual";
                return false;
              }
              if (!(good_lib == cyb_oracle(alg, good))) {
                note = "oracle disagrees on the full r-matrix";
                return false;
              }
              DeformedTensor bad(alg.basis(), 2, 1);
              bad.add_term({1, 2}, Scalar::integer(1));  // e (x) f alone
              DeformedTensor bad_lib = cyb(alg, bad);
              if (!(bad_lib == cyb_oracle(alg, bad))) {
                note = "oracle disagrees on the truncated r-matrix";
                return false;
              }
              DeformedTensor expected(alg.basis(), 3, 1);
              expected.add_term({1, 0, 2}, Scalar::integer(-1));
              if (!(bad_lib == expected)) {
                note = "truncated residual is not -(e (x) h (x) f)";
                return false;
              }
              return true;
            });

  criterion(6,
            "normal word counts match the symmetric-algebra counter and the "
            "two straightening strategies agree",
            [&](std::string& note) {
              std::vector<std::pair<std::string, ColorLieAlgebra>> algs;
              algs.emplace_back("abelian pair", fixtures::fix_a().algebra);
              algs.emplace_back("borel", fixtures::fix_b().algebra);
              algs.emplace_back("sl2", fixtures::fix_c_algebra());
              algs.emplace_back("gl11", fixtures::fix_d_algebra());
              algs.emplace_back("triangular borel",
                                fixtures::fix_t().algebra);
              std::mt19937 rng(0x5eedu);
              for (auto& [name, alg] : algs) {
                EnvPtr env = make_envelope(alg);
                const std::uint32_t dim =
                    static_cast<std::uint32_t>(alg.basis()->size());
                std::vector<bool> odd;
                for (std::uint32_t i = 0; i < dim; ++i)
                  odd.push_back(alg.basis()->is_odd(i));
                const std::size_t want = normal_word_count(odd, 0, 4);
                const std::size_t got = env->normal_words_upto(4).size();
                if (got != want) {
                  note = name + ": counted " + std::to_string(got) +
                         " normal words, expected " + std::to_string(want);
                  return false;
                }
                std::uniform_int_distribution<int> len(0, 4);
                std::uniform_int_distribution<std::uint32_t> pick(0, dim - 1);
                const TruncSeries one = TruncSeries::constant(2, Scalar::integer(1));
                for (int trial = 0; trial < 200; ++trial) {
                  Word w;
                  const int l = len(rng);
                  for (int p = 0; p < l; ++p) w.push_back(pick(rng));
                  UEAElement left =
                      env->normalize(w, one, {}, RewriteStrategy::leftmost);
                  UEAElement right =
                      env->normalize(w, one, {}, RewriteStrategy::rightmost);
                  if (!(left == right)) {
                    note = name + ": strategies split on trial " +
                           std::to_string(trial);
                    return false;
                  }
                }
              }
              return true;
            });

  criterion(7, "hopf axioms hold on all basis words of length <= 3",
            [&](std::string& note) {
              std::vector<std::pair<std::string, ColorLieAlgebra>> algs;
              algs.emplace_back("sl2", fixtures::fix_c_algebra());
              algs.emplace_back("gl11", fixtures::fix_d_algebra());
              for (auto& [name, alg] : algs) {
                EnvPtr env = make_envelope(alg);
                Report rep = check_hopf(env, default_hopf(env), 3, 2);
                if (!rep.ok()) {
                  note = name + ": " + rep.str();
                  return false;
                }
              }
              return true;
            });

  criterion(8,
            "order-2 associator coefficient is exactly 1/24, is unique, and "
            "c = 0 breaks the hexagon at lambda^2",
            [&](std::string& note) {
              AssociatorOrder2 sol = solve_associator_order2();
              if (!(sol.c == Scalar::rational(1, 24))) {
                note = "solved coefficient is " + sol.c.str();
                return false;
              }
              if (!sol.pentagon_residual.is_zero() ||
                  !sol.hexagon1_residual.is_zero() ||
                  !sol.hexagon2_residual.is_zero()) {
                note = "residuals not all zero at the solution";
                return false;
              }
              if (!pentagon_defect(sol.c).is_zero() ||
                  !hexagon_defect(1, sol.c).is_zero() ||
                  !hexagon_defect(2, sol.c).is_zero()) {
                note = "recomputed defects not all zero at the solution";
                return false;
              }
              // Nontriviality witness: dropping the correction term leaves a
              // hexagon defect whose lowest surviving slice sits at lambda^2.
              TnElement at_zero = hexagon_defect(1, Scalar::integer(0));
              if (at_zero.is_zero()) {
                note = "hexagon holds even with no correction";
                return false;
              }
              bool quadratic = false;
              for (const auto& [word, series] : at_zero.terms()) {
                if (!series.coeff(0).is_zero() || !series.coeff(1).is_zero()) {
                  note = "defect at c = 0 leaks below lambda^2";
                  return false;
                }
                if (!series.coeff(2).is_zero()) quadratic = true;
              }
              if (!quadratic) {
                note = "defect at c = 0 has no lambda^2 part";
                return false;
              }
              if (hexagon_defect(1, Scalar::rational(1, 12)).is_zero()) {
                note = "a second coefficient also closes the hexagon";
                return false;
              }
              return true;
            });

  criterion(9,
            "gaussian binomials are symmetric and specialize to binomials "
            "for all m + n <= 8",
            [&](std::string& note) {
              for (unsigned m = 0; m <= 8; ++m)
                for (unsigned n = 0; m + n <= 8; ++n) {
                  LaurentPoly q = qbinom(m, n);
                  if (!q.is_symmetric() || !(q == qbinom(n, m))) {
                    note = "symmetry fails at (" + std::to_string(m) + ", " +
                           std::to_string(n) + ")";
                    return false;
                  }
                  if (!(q.at_one() == Scalar::rational(binom(m + n, n)))) {
                    note = "t = 1 value wrong at (" + std::to_string(m) +
                           ", " + std::to_string(n) + ")";
                    return false;
                  }
                }
              return true;
            });

  criterion(10,
            "deformed presentations restrict to the classical ones and the "
            "coproduct respects the relation ideal",
            [&](std::string& note) {
              std::vector<std::pair<std::string, CartanData>> cds;
              cds.emplace_back("rank-1 even", rank1_even());
              cds.emplace_back("rank-1 isotropic", rank1_isotropic());
              cds.emplace_back("a2", a2());
              cds.emplace_back("b2", b2());
              for (auto& [name, cd] : cds) {
                ClassicalLimitComparison cmp =
                    compare_classical_limit(build_dj_presentation(cd, 2));
                if (!cmp.report.ok()) {
                  note = name + ": " + cmp.report.str();
                  return false;
                }
              }
              CartanData r1 = rank1_even();
              Presentation dj = build_dj_presentation(r1, 2);
              CoproductMap delta = dj_coproduct_on_generators(r1, 2);
              if (!check_delta_respects_relations(dj, delta, 4, 2).ok()) {
                note = "deformed rank-1 coproduct fails on the relations";
                return false;
              }
              if (!check_delta_respects_relations(
                       build_classical_presentation(r1),
                       primitive_coproduct(r1, 1), 3, 1)
                       .ok()) {
                note = "classical rank-1 primitive coproduct fails";
                return false;
              }
              if (!check_delta_respects_relations(
                       build_classical_presentation(rank1_isotropic()),
                       primitive_coproduct(rank1_isotropic(), 1), 3, 1)
                       .ok()) {
                note = "classical isotropic rank-1 primitive coproduct fails";
                return false;
              }
              if (!check_delta_respects_relations(
                       build_classical_presentation(a2()),
                       primitive_coproduct(a2(), 1), 4, 1)
                       .ok()) {
                note = "classical a2 primitive coproduct fails";
                return false;
              }
              // Negative control: corrupt one generator image and require
              // the membership test to notice.
              CoproductMap broken = dj_coproduct_on_generators(r1, 2);
              FreeTensor2 img(broken.gens, 2);
              img.add_term({{1}, {}}, Scalar::integer(1));
              img.add_term({{}, {1}}, Scalar::integer(1));
              broken.images[1] = img;
              Report bad = check_delta_respects_relations(dj, broken, 4, 2);
              if (bad.ok()) {
                note = "corrupted coproduct slipped through";
                return false;
              }
              bool membership = false;
              for (const auto& issue : bad.issues)
                if (issue.check == "delta-membership") membership = true;
              if (!membership) {
                note = "corrupted coproduct failed for the wrong reason";
                return false;
              }
              return true;
            });

  criterion(11,
            "bicharacter twists keep the fixtures color lie algebras and "
            "invert exactly",
            [&](std::string& note) {
              {
                ColorLieAlgebra alg = fixtures::fix_c_algebra();
                Bicharacter sigma(alg.ctx()->group, {{Scalar::integer(3)}});
                ColorLieAlgebra twisted = scheunert_twist(alg, sigma);
                if (!check_color_lie(twisted).ok()) {
                  note = "twisted sl2 fails the lie axioms";
                  return false;
                }
                Bicharacter inverse(alg.ctx()->group,
                                    {{Scalar::rational(1, 3)}});
                ColorLieAlgebra back = scheunert_twist(twisted, inverse);
                if (!same_lie_structure(back, alg)) {
                  note = "sl2 round trip is not the identity";
                  return false;
                }
              }
              {
                ColorLieAlgebra alg = fixtures::fix_d_algebra();
                // Over the order-2 torsion group the sign bicharacter is its
                // own inverse.
                Bicharacter sigma(alg.ctx()->group, {{Scalar::integer(-1)}});
                ColorLieAlgebra twisted = scheunert_twist(alg, sigma);
                if (!check_color_lie(twisted).ok()) {
                  note = "twisted gl11 fails the lie axioms";
                  return false;
                }
                ColorLieAlgebra back = scheunert_twist(twisted, sigma);
                if (!same_lie_structure(back, alg)) {
                  note = "gl11 round trip is not the identity";
                  return false;
                }
              }
              return true;
            });

  criterion(12,
            "triangular pipeline yields R with R21 R = 1 at order 2",
            [&](std::string& note) {
              ColorLieBialgebra tri = fixtures::fix_t();
              TriangularQuantization tq = quantize_triangular(tri, 2);
              UEATensor unit2 = UEATensor::unit(tq.env, 2, 2);
              if (!(tq.R.flipped(0).mul(tq.R) == unit2)) {
                note = "R21 R is not the unit";
                return false;
              }
              UEATensor expected =
                  unit2 + lift_to_uea(tq.env, *tri.rmatrix, 2)
                              .scaled(TruncSeries::lambda(2));
              if (!(tq.R == expected)) {
                note = "R differs from 1 + lambda r";
                return false;
              }
              return true;
            });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
