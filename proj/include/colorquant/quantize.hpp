#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colorquant/colorlie.hpp"
#include "colorquant/uea.hpp"

namespace cq {

// Horizontal chord algebra on n strands: noncommutative polynomials in the
// symmetric generators t_{ij} (1 <= i < j <= n) with TruncSeries
// coefficients. Products are free; the defining relations (locality for
// disjoint index pairs, [t_ij, t_ik + t_jk] = 0) are available through
// tn_reduce, which computes a canonical representative modulo their span.
class TnElement {
 public:
  using Gen = std::pair<std::uint32_t, std::uint32_t>;  // normalized i < j
  using TnWord = std::vector<Gen>;

  TnElement(std::uint32_t slots, std::uint32_t order);
  static TnElement unit(std::uint32_t slots, std::uint32_t order);
  // coeff . t_{ij}
  static TnElement gen(std::uint32_t slots, std::uint32_t order,
                       std::uint32_t i, std::uint32_t j,
                       const TruncSeries& coeff);

  std::uint32_t slots() const { return slots_; }
  std::uint32_t order() const { return order_; }
  const std::map<TnWord, TruncSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  TruncSeries coeff(const TnWord& w) const;

  void add_term(const TnWord& w, const TruncSeries& coeff);
  TnElement operator+(const TnElement& o) const;
  TnElement operator-(const TnElement& o) const;
  TnElement scaled(const TruncSeries& s) const;
  TnElement scaled(const Scalar& s) const;
  TnElement mul(const TnElement& o) const;
  // requires zero constant-in-lambda part
  TnElement exp() const;
  bool operator==(const TnElement& o) const;

  // Maps strand i of this element to the group legs[i-1] of an algebra on
  // new_slots strands: t_ij -> sum over the two groups. Permutations are the
  // singleton case.
  TnElement substitute_legs(const std::vector<std::vector<std::uint32_t>>& legs,
                            std::uint32_t new_slots) const;

  std::string str() const;

 private:
  std::uint32_t slots_;
  std::uint32_t order_;
  std::map<TnWord, TruncSeries> terms_;
};

// Canonical representative modulo the chord relations, computed per
// lambda-coefficient and per word length by linear reduction against the
// span of relation multiples.
TnElement tn_reduce(const TnElement& x);

// Places an arity-2 single-letter tensor into slots (i, j) of an arity-wide
// identity, 0-based. Intermediate slots hold units, so no crossing signs
// arise.
UEATensor embed_pair(const UEATensor& t, std::uint32_t arity, std::uint32_t i,
                     std::uint32_t j);

// t_ij -> omega placed in slots (i, j). Requires omega symmetric under the
// Koszul flip and invariant under the adjoint action; the substituted images
// then satisfy the chord relations.
UEATensor tn_substitute(const EnvPtr& env, const TnElement& x,
                        const DeformedTensor& omega, std::uint32_t order);

// Braiding of the deformed module category: exp(lambda omega/2) on slots
// (slot, slot+1) followed by the Koszul flip of those slots.
VermaTensor beta_map(const VermaTensor& v, std::uint32_t slot);

// The twist, evaluated from its defining composition on the four-fold
// Verma tensor and pulled back through the module isomorphism on each pair.
// Orders above 2 need the order-2 associator coefficient.
UEATensor compute_J(const DblPtr& dbl, std::uint32_t order,
                    std::optional<Scalar> assoc_c = std::nullopt);
UEATensor compute_J(const ColorLieBialgebra& b, std::uint32_t order,
                    std::optional<Scalar> assoc_c = std::nullopt);

// Hopf data on U(D(g)) twisted by J: coproduct J^{-1} d0(.) J, antipode
// Q^{-1} S0(.) Q with Q = mul(S0 (x) id)(J), braiding (J21)^{-1}
// exp(lambda omega/2) J. The associator is trivial below order 3.
struct QuasiHopfData {
  EnvPtr env;
  std::uint32_t order;
  UEATensor J;
  UEATensor Jinv;
  UEATensor R;
  DeformedTensor omega;
  std::optional<Scalar> assoc_c;
  UEAElement Q;
  UEAElement Qinv;

  UEATensor coproduct(const UEAElement& a) const;
  UEAElement antipode(const UEAElement& a) const;
  TruncSeries counit(const UEAElement& a) const;
  // Associator with its three legs placed in the given slot groups (1-based
  // strand names over the target arity).
  UEATensor assoc(const std::vector<std::vector<std::uint32_t>>& legs,
                  std::uint32_t arity) const;
};

QuasiHopfData twist_hopf(const EnvPtr& env, const UEATensor& J,
                         const DeformedTensor& omega,
                         std::optional<Scalar> assoc_c = std::nullopt);

// Counit applied to one slot, Koszul-free since the counit is degree 0.
UEAElement contract_counit(const UEATensor& t, std::uint32_t slot);

// Braiding axioms on normal words of length <= word_bound: coproduct
// exchange R d^op = d R, both associator-dressed coproduct identities,
// quasi-coassociativity, and the counit normalizations of R and J.
Report check_quasitriangular(const QuasiHopfData& q, std::size_t word_bound);

// First-order shadow of the deformation: the lambda-linear part of
// d - d^op on every generator must equal the declared cobracket, and
// R must be 1 (x) 1 + lambda r mod lambda^2.
Report check_classical_limit(const QuasiHopfData& q, const DoubleStructure& d);

// Contraction of one leg of R against a graded functional on the span of
// its words; side plus contracts the second leg, side minus the first.
UEAElement polarize(const UEATensor& R,
                    const std::function<TruncSeries(const Word&)>& functional,
                    Side side);

// Order-2 associator over the three-strand chord algebra with braiding
// exp(lambda t12/2): ansatz 1 + lambda^2 c [t12, t23].
TnElement pentagon_defect(const Scalar& c);
TnElement hexagon_defect(int which, const Scalar& c);  // which = 1 or 2

struct AssociatorOrder2 {
  Scalar c;
  TnElement pentagon_residual;   // reduced, at the solved c
  TnElement hexagon1_residual;
  TnElement hexagon2_residual;
};

AssociatorOrder2 solve_associator_order2();

// Full pipeline for a triangular classical structure: quantize the double,
// push the twist along the projection D(g) -> g (identity on g, duals sent
// through the r-matrix contraction), and assemble R = (J21)^{-1} J on U(g).
struct TriangularQuantization {
  EnvPtr env;   // over the base algebra
  UEATensor J;
  UEATensor R;
};

TriangularQuantization quantize_triangular(
    const ColorLieBialgebra& b, std::uint32_t order,
    std::optional<Scalar> assoc_c = std::nullopt);

}  // namespace cq
