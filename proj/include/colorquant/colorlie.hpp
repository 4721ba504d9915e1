#pragma once

#include <optional>
#include <utility>

#include "colorquant/tensor.hpp"

namespace cq {

struct CheckIssue {
  std::string check;
  std::string location;
  std::string detail;
};

struct Report {
  std::vector<CheckIssue> issues;

  bool ok() const { return issues.empty(); }
  void add(std::string check, std::string location, std::string detail = "") {
    issues.push_back({std::move(check), std::move(location), std::move(detail)});
  }
  void merge(const Report& o) {
    issues.insert(issues.end(), o.issues.begin(), o.issues.end());
  }
  std::string str() const;
};

// Color Lie algebra as structure constants over a graded basis:
// [x_i, x_j] = sum_k c[i][j][k] x_k.
class ColorLieAlgebra {
 public:
  explicit ColorLieAlgebra(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  const Ctx& ctx() const { return basis_->ctx(); }
  std::size_t dim() const { return basis_->size(); }

  void add_bracket_term(std::uint32_t i, std::uint32_t j, std::uint32_t k,
                        const Scalar& coeff);
  // Sets [x_i, x_j] to the given terms and fills [x_j, x_i] by
  // eps-antisymmetry (skipped when i == j).
  void set_bracket_pair(std::uint32_t i, std::uint32_t j,
                        const std::map<std::uint32_t, Scalar>& terms);
  const std::map<std::uint32_t, Scalar>& bracket_terms(std::uint32_t i,
                                                       std::uint32_t j) const;

  // Bracket of arity-1 tensors (linear combinations of basis elements).
  DeformedTensor bracket(const DeformedTensor& a, const DeformedTensor& b) const;
  DeformedTensor basis_element(std::uint32_t i, std::uint32_t order = 1) const;

 private:
  BasisPtr basis_;
  std::vector<std::vector<std::map<std::uint32_t, Scalar>>> bracket_;
};

// Leibniz action of basis element x_i across all slots of t, with the Koszul
// sign eps(deg x_i, degrees passed over) per slot.
DeformedTensor adjoint_act(const ColorLieAlgebra& alg, std::uint32_t i,
                           const DeformedTensor& t);

struct ColorLieBialgebra {
  ColorLieAlgebra algebra;
  // delta(x_i) = sum d[i][(j, k)] x_j (x) x_k
  std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, Scalar>> cobracket;
  std::optional<DeformedTensor> rmatrix;  // arity 2, order 1
  bool cobracket_from_r = false;

  explicit ColorLieBialgebra(ColorLieAlgebra alg);

  void add_cobracket_term(std::uint32_t i, std::uint32_t j, std::uint32_t k,
                          const Scalar& coeff);
  DeformedTensor cobracket_of(std::uint32_t i, std::uint32_t order = 1) const;
  // Replaces the cobracket with delta(x) = x . r and records the provenance.
  void set_cobracket_from_r(const DeformedTensor& r);
};

Report check_color_lie(const ColorLieAlgebra& alg);
Report check_color_bialgebra(const ColorLieBialgebra& b);

// Classical Yang-Baxter residual [r12,r13] + [r12,r23] + [r13,r23], computed
// by expanding the slot-embedded products in the enveloping algebra and
// straightening; requires r of degree 0 (termwise).
DeformedTensor cyb(const ColorLieAlgebra& alg, const DeformedTensor& r);

enum class RClass { not_qt, quasitriangular, triangular };

struct RClassification {
  RClass cls;
  Report report;  // residual diagnostics for failed conditions
};
RClassification classify_r(const ColorLieBialgebra& b);

// eps-symmetric invariant pairing given by its Gram matrix on the basis.
struct ManinPairing {
  std::vector<std::vector<Scalar>> gram;
};

Report check_manin(const ColorLieAlgebra& alg, const ManinPairing& pairing,
                   const std::vector<std::uint32_t>& plus_part,
                   const std::vector<std::uint32_t>& minus_part);

struct DoubleStructure {
  ColorLieBialgebra bialgebra;  // over the concatenated basis g then g^*
  std::uint32_t dim_plus;       // first dim_plus indices form g
  DeformedTensor r;             // canonical element sum x_i (x) a^i
  DeformedTensor omega;         // r + flip(r)
  ManinPairing pairing;         // natural evaluation pairing
};

// Builds g + g^* with: dual degrees -deg x_i, dual bracket read off the
// cobracket, mixed brackets from invariance of the natural pairing, canonical
// r, and cobracket delta(v) = v . r.
DoubleStructure build_double(const ColorLieBialgebra& b);

// Bracket rescaling [x,y]' = sigma(x,y)[x,y] with the commutation factor
// replaced by eps'(a,b) eps(a,b), eps'(a,b) = sigma(a,b) sigma(b,a)^{-1}.
// Returns an algebra over a fresh context.
ColorLieAlgebra scheunert_twist(const ColorLieAlgebra& alg,
                                const Bicharacter& sigma);

// Assembles sum coeff . (first (x) second) from labeled terms.
DeformedTensor standard_r(
    const BasisPtr& basis,
    const std::vector<std::tuple<std::string, std::string, Scalar>>& terms);

}  // namespace cq
