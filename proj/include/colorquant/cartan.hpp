#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "colorquant/colorlie.hpp"

namespace cq {

// Sparse exact Laurent polynomial in one variable t.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly one();
  static LaurentPoly monomial(std::int64_t exponent, const Scalar& coeff);

  const std::map<std::int64_t, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(std::int64_t exponent) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly scaled(const Scalar& s) const;
  bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  // Exact division; throws DomainError when d does not divide this.
  LaurentPoly divided_by(const LaurentPoly& d) const;

  // Invariance under t -> t^-1.
  bool is_symmetric() const;
  // Value at t = 1.
  Scalar at_one() const;
  // Substitution t = exp(a * lambda), truncated.
  TruncSeries at_exponential(std::uint32_t order, const Scalar& a) const;

  std::string str() const;

 private:
  std::map<std::int64_t, Scalar> terms_;

  void insert(std::int64_t e, const Scalar& c);
};

// Gaussian binomial (m+n choose n) in the balanced form
// prod_{i=0}^{n-1} (t^{m+n-i} - t^{-m-n+i}) / (t^{i+1} - t^{-i-1}).
// Every denominator factor divides exactly; the result is symmetric under
// t -> t^-1 and specializes at t = 1 to binomial(m+n, n).
LaurentPoly qbinom(std::uint32_t m, std::uint32_t n);

// Integer Cartan matrix with a distinguished set of odd simple roots and
// exact symmetrizing weights. Generators h_i, e_i, f_i are graded over Z^s
// with deg f_i = z_i, deg e_i = -z_i, deg h_i = 0. The commutation factor on
// root coordinates is -1 whenever at least one of the two roots is odd.
struct CartanData {
  std::vector<std::vector<std::int64_t>> A;
  std::vector<std::uint32_t> tau;  // 1-based odd root indices, increasing
  std::vector<Rational> d;         // nonzero, d_i A_ij == d_j A_ji

  std::uint32_t rank() const { return static_cast<std::uint32_t>(A.size()); }
  bool odd_root(std::uint32_t i) const;  // 1-based
  // Throws DomainError on malformed input. Rank is capped at 3.
  void validate() const;
  // Z^rank context carrying the root-parity commutation factor.
  Ctx context() const;
};

// Tridiagonal type-B shape (doubled last subdiagonal entry A_{s,s-1} = -2)
// with exactly the last root odd.
bool is_type_b(const CartanData& cd);

using FreeWord = std::vector<std::uint32_t>;

// Element of the free associative algebra on a graded generator set, with
// truncated-series coefficients. Multiplication concatenates words; color
// signs enter only through brackets and the tensor-square product.
class FreeElement {
 public:
  FreeElement(BasisPtr gens, std::uint32_t order);

  static FreeElement unit(BasisPtr gens, std::uint32_t order);
  static FreeElement generator(BasisPtr gens, std::uint32_t order, std::uint32_t i);

  const BasisPtr& gens() const { return gens_; }
  std::uint32_t order() const { return order_; }
  const std::map<FreeWord, TruncSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const FreeWord& w, const TruncSeries& c);
  void add_term(const FreeWord& w, const Scalar& c);
  TruncSeries coeff(const FreeWord& w) const;

  FreeElement operator-() const;
  FreeElement& operator+=(const FreeElement& o);
  FreeElement& operator-=(const FreeElement& o);
  friend FreeElement operator+(FreeElement a, const FreeElement& b) { return a += b; }
  friend FreeElement operator-(FreeElement a, const FreeElement& b) { return a -= b; }
  FreeElement scaled(const Scalar& s) const;
  FreeElement scaled(const TruncSeries& s) const;
  FreeElement mul(const FreeElement& o) const;
  bool operator==(const FreeElement& o) const;
  bool operator!=(const FreeElement& o) const { return !(*this == o); }

  std::uint32_t max_word_length() const;
  // lambda^0 slice as an order-1 element.
  FreeElement constant_part() const;
  GroupElement word_degree(const FreeWord& w) const;
  // Common degree of all stored words; throws DomainError when mixed.
  GroupElement degree() const;

  std::string str() const;

 private:
  BasisPtr gens_;
  std::uint32_t order_;
  std::map<FreeWord, TruncSeries> terms_;

  void check_word(const FreeWord& w) const;
};

// x y - eps(deg x, deg y) y x; both arguments must be homogeneous.
FreeElement colored_bracket(const FreeElement& x, const FreeElement& y);

// Element of the tensor square of the free algebra. The product crosses the
// inner factors: (a (x) b)(c (x) d) = eps(deg b, deg c) ac (x) bd.
class FreeTensor2 {
 public:
  using Key = std::pair<FreeWord, FreeWord>;

  FreeTensor2(BasisPtr gens, std::uint32_t order);

  static FreeTensor2 unit(BasisPtr gens, std::uint32_t order);

  const BasisPtr& gens() const { return gens_; }
  std::uint32_t order() const { return order_; }
  const std::map<Key, TruncSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Key& k, const TruncSeries& c);
  void add_term(const Key& k, const Scalar& c);
  TruncSeries coeff(const Key& k) const;

  FreeTensor2 operator-() const;
  FreeTensor2& operator+=(const FreeTensor2& o);
  FreeTensor2& operator-=(const FreeTensor2& o);
  friend FreeTensor2 operator+(FreeTensor2 a, const FreeTensor2& b) { return a += b; }
  friend FreeTensor2 operator-(FreeTensor2 a, const FreeTensor2& b) { return a -= b; }
  FreeTensor2 scaled(const Scalar& s) const;
  FreeTensor2 scaled(const TruncSeries& s) const;
  FreeTensor2 mul(const FreeTensor2& o) const;
  bool operator==(const FreeTensor2& o) const;
  bool operator!=(const FreeTensor2& o) const { return !(*this == o); }

  std::uint32_t max_total_length() const;

  std::string str() const;

 private:
  BasisPtr gens_;
  std::uint32_t order_;
  std::map<Key, TruncSeries> terms_;
};

enum class PresentationFlavor { classical, drinfeld_jimbo };

// Reading of the printed pairing family. The standard reading couples e_i
// with f_j; the literal reading couples e_i with e_j (and f_i with f_j) as
// displayed in the source relation list, kept for mechanical comparison.
enum class EfReading { standard, literal };

struct PresRelation {
  std::string name;
  FreeElement element;
  // Alternative printed form carried next to its corrected sibling; never
  // used to generate ideals, only compared in reports.
  bool literal_variant = false;
};

struct Presentation {
  CartanData data;
  BasisPtr gens;  // h_1..h_s, e_1..e_s, f_1..f_s
  std::uint32_t order = 1;
  PresentationFlavor flavor = PresentationFlavor::classical;
  EfReading reading = EfReading::standard;
  std::vector<PresRelation> relations;

  std::uint32_t rank() const { return data.rank(); }
  std::uint32_t h_index(std::uint32_t i) const;  // 1-based
  std::uint32_t e_index(std::uint32_t i) const;
  std::uint32_t f_index(std::uint32_t i) const;
};

// Chevalley relations, pairing relations per the chosen reading, squares of
// isotropic generators, zero brackets of disconnected roots, Serre relations
// for even roots, the quartic relation at isotropic interior roots, and both
// printed forms of the special relation on a type-B tail. All brackets are
// colored by the root-parity factor of cd.
Presentation build_classical_presentation(const CartanData& cd,
                                          EfReading reading = EfReading::standard);

// Quantized counterpart at the given series order: pairing relations divide
// a group-like difference in h_i by the exact deformed weight factor,
// Serre coefficients specialize Gaussian binomials at the weighted
// deformation parameter, and the quartic and type-B families carry their
// printed series coefficients. The constant slice of every relation is the
// classical one.
Presentation build_dj_presentation(const CartanData& cd, std::uint32_t order,
                                   EfReading reading = EfReading::standard);

// Generator images of a coproduct, plus the generator counits.
struct CoproductMap {
  BasisPtr gens;
  std::uint32_t order = 1;
  std::vector<FreeTensor2> images;
  std::vector<TruncSeries> counits;
};

// Deformed coproduct on generators: h_i primitive, e_i paired with the
// group-like weight factor on the right leg, f_i with its inverse on the
// left leg, counits zero.
CoproductMap dj_coproduct_on_generators(const CartanData& cd, std::uint32_t order);

// x -> x (x) 1 + 1 (x) x on every generator.
CoproductMap primitive_coproduct(const CartanData& cd, std::uint32_t order);

// Multiplicative extension of the generator images to an element.
FreeTensor2 apply_coproduct(const CoproductMap& delta, const FreeElement& el);

// For each relation rho, tests membership of delta(rho) in the degree-bounded
// slice of the two-sided ideal generated by {relations} (x) words and
// words (x) {relations}, by exact row reduction per lambda power.
// Monomials of delta(rho) beyond the degree bound are reported distinctly
// ("delta-degree-bound") from genuine residuals ("delta-membership").
// Literal-variant relations are excluded. degree_bound is capped at 5.
Report check_delta_respects_relations(const Presentation& p,
                                      const CoproductMap& delta,
                                      std::uint32_t degree_bound,
                                      std::uint32_t order);

// Rescales every relation monomial x_1...x_k by
// prod_{a<b} sigma(deg x_a, deg x_b)^{-1}, sigma(a, b) = prod eps_consts[i][j]^(a_i b_j),
// then renormalizes so the leading monomial keeps its coefficient. The result
// lives over the twisted factor eps'(a,b) eps0(a,b) with
// eps'(a,b) = sigma(a,b) sigma(b,a)^{-1}. Identities of the original algebra
// become identities of the twisted one under this direction.
Presentation apply_bicharacter_twist_to_presentation(
    const Presentation& p, const std::vector<std::vector<Scalar>>& eps_consts);

// Generators forced to vanish by a relation whose constant slice is a
// nonzero multiple of a single generator. Nonempty marks a degenerate
// presentation (the literal pairing reading produces these).
std::vector<std::string> degenerate_generators(const Presentation& p);

struct ClassicalLimitComparison {
  // Mismatches among corrected-form relations.
  Report report;
  // Outcome per literal-variant relation: does its constant slice reproduce
  // the classical relation as well?
  std::map<std::string, bool> literal_matches;
};

// Compares the constant slice of every quantized relation against the
// same-named classical relation. The quartic family is compared modulo the
// squares and zero brackets of its three roots (its printed quantum form
// merges monomials that the classical bracket expansion keeps apart); all
// other families must match exactly.
ClassicalLimitComparison compare_classical_limit(const Presentation& quantized);

}  // namespace cq
