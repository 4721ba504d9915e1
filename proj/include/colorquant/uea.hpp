#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "colorquant/colorlie.hpp"

namespace cq {

// A word is a sequence of basis indices; normal words are non-decreasing in
// the active total order, with odd-type letters appearing at most once.
using Word = std::vector<std::uint32_t>;

enum class RewriteStrategy { leftmost, rightmost };

class UEAElement {
 public:
  UEAElement() : order_(1) {}
  explicit UEAElement(std::uint32_t order) : order_(order) {}

  std::uint32_t order() const { return order_; }
  const std::map<Word, TruncSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& w, const TruncSeries& c);
  void add_term(const Word& w, const Scalar& c);
  TruncSeries coeff(const Word& w) const;

  UEAElement operator+(const UEAElement& o) const;
  UEAElement operator-(const UEAElement& o) const;
  UEAElement scaled(const TruncSeries& c) const;
  UEAElement scaled(const Scalar& c) const;
  bool operator==(const UEAElement& o) const;
  bool operator!=(const UEAElement& o) const { return !(*this == o); }

 private:
  std::uint32_t order_;
  std::map<Word, TruncSeries> terms_;
};

class UEATensor;

// U(g) for a fixed color Lie algebra; the basis order is declaration order.
class Envelope : public std::enable_shared_from_this<Envelope> {
 public:
  explicit Envelope(ColorLieAlgebra alg) : alg_(std::move(alg)) {}

  const ColorLieAlgebra& algebra() const { return alg_; }
  const BasisPtr& basis() const { return alg_.basis(); }
  const Ctx& ctx() const { return alg_.ctx(); }

  UEAElement zero(std::uint32_t order) const { return UEAElement(order); }
  UEAElement one(std::uint32_t order) const;
  UEAElement gen(std::uint32_t i, std::uint32_t order) const;

  // Straightens a word against an arbitrary rank vector (rank[i] = position
  // of basis index i in the total order). The empty rank means declaration
  // order. Strategy picks which critical pair is rewritten first; the
  // results must coincide (fixtures are valid Lie data).
  UEAElement normalize(const Word& w, const TruncSeries& c,
                       const std::vector<std::uint32_t>& rank = {},
                       RewriteStrategy st = RewriteStrategy::leftmost) const;
  UEAElement from_word(const Word& w, std::uint32_t order,
                       RewriteStrategy st = RewriteStrategy::leftmost) const;

  UEAElement mul(const UEAElement& a, const UEAElement& b,
                 RewriteStrategy st = RewriteStrategy::leftmost) const;

  GroupElement word_degree(const Word& w) const;
  bool is_normal_word(const Word& w) const;
  std::vector<Word> normal_words_upto(std::size_t max_len) const;

  TruncSeries counit(const UEAElement& a) const;
  // Koszul-signed reversing anti-automorphism with S(x) = -x on generators.
  UEAElement antipode0(const UEAElement& a) const;
  // Multiplicative extension of x -> x(x)1 + 1(x)x.
  UEATensor coproduct0(const UEAElement& a) const;

  std::string str(const UEAElement& a) const;

 private:
  ColorLieAlgebra alg_;
};

using EnvPtr = std::shared_ptr<const Envelope>;
EnvPtr make_envelope(ColorLieAlgebra alg);

// Sparse element of U(g)^(x)arity with the slot-embedded color product.
class UEATensor {
 public:
  using Key = std::vector<Word>;

  UEATensor(EnvPtr env, std::uint32_t arity, std::uint32_t order);
  static UEATensor unit(EnvPtr env, std::uint32_t arity, std::uint32_t order);

  const EnvPtr& env() const { return env_; }
  std::uint32_t arity() const { return arity_; }
  std::uint32_t order() const { return order_; }
  const std::map<Key, TruncSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Key& k, const TruncSeries& c);
  void add_term(const Key& k, const Scalar& c);
  TruncSeries coeff(const Key& k) const;

  UEATensor operator+(const UEATensor& o) const;
  UEATensor operator-(const UEATensor& o) const;
  UEATensor scaled(const TruncSeries& c) const;
  UEATensor scaled(const Scalar& c) const;
  bool operator==(const UEATensor& o) const;
  bool operator!=(const UEATensor& o) const { return !(*this == o); }

  UEATensor mul(const UEATensor& o) const;
  // Koszul swap of slots (slot, slot+1).
  UEATensor flipped(std::uint32_t slot) const;
  // Geometric-series inverse; requires the lambda^0 part to be the unit.
  UEATensor inverse() const;
  // exp of an element with zero lambda^0 part.
  UEATensor exp() const;
  // Replaces slot contents through a linear word map of degree 0; the
  // image arity replaces the slot (coproduct legs, counit legs, ...).
  UEATensor apply_slot_expansion(
      std::uint32_t slot,
      const std::function<UEATensor(const Word&)>& fn) const;
  // Multiplies all slots together left to right into a single element.
  UEAElement collapse() const;

  GroupElement key_degree(const Key& k) const;
  bool is_degree_zero() const;

  std::string str() const;

 private:
  EnvPtr env_;
  std::uint32_t arity_;
  std::uint32_t order_;
  std::map<Key, TruncSeries> terms_;
};

// Lifts an arity-k Lie-level tensor into single-letter words.
UEATensor lift_to_uea(EnvPtr env, const DeformedTensor& t,
                      std::uint32_t order);

struct HopfData {
  std::function<UEATensor(const UEAElement&)> coproduct;
  std::function<TruncSeries(const UEAElement&)> counit;
  std::function<UEAElement(const UEAElement&)> antipode;
};

HopfData default_hopf(EnvPtr env);

// Coassociativity, counit laws, both antipode identities, and primitivity of
// single letters, over all normal words of length <= max_len.
Report check_hopf(EnvPtr env, const HopfData& hopf, std::size_t max_len,
                  std::uint32_t order);

enum class Side { plus, minus };

// A Verma vector: words over the half that acts freely (duals for plus side,
// original letters for minus side).
struct VermaElement {
  Side side;
  UEAElement el;
};

class VermaTensor;

// U(D(g)) together with the two Verma modules over the double's halves.
class DoubleUEA : public std::enable_shared_from_this<DoubleUEA> {
 public:
  explicit DoubleUEA(DoubleStructure dbl);

  const DoubleStructure& structure() const { return dbl_; }
  const EnvPtr& env() const { return env_; }
  std::uint32_t dim_plus() const { return dbl_.dim_plus; }
  std::uint32_t dim() const {
    return static_cast<std::uint32_t>(env_->basis()->size());
  }
  bool kills_vacuum(std::uint32_t letter, Side side) const;

  VermaElement vacuum(Side side, std::uint32_t order) const;
  // Left action of a word (then of a general element) on a Verma vector.
  VermaElement act(const Word& w, const VermaElement& v) const;
  VermaElement act(const UEAElement& u, const VermaElement& v) const;

  // u . (1+ (x) 1-): the module isomorphism U(D) -> M+ (x) M-.
  VermaTensor phi(const UEAElement& u) const;
  // Inverse by back-substitution along the word-length filtration.
  UEAElement phi_inv(const VermaTensor& t) const;

  // Verma comultiplication: u.1(pm) -> coproduct0(u).(1(pm) (x) 1(pm)).
  VermaTensor verma_coproduct(const VermaElement& v) const;

 private:
  const std::vector<std::uint32_t>& rank_for(Side side) const;

  DoubleStructure dbl_;
  EnvPtr env_;
  std::vector<std::uint32_t> plus_rank_;   // duals first, then originals
  std::vector<std::uint32_t> minus_rank_;  // declaration order
};

using DblPtr = std::shared_ptr<const DoubleUEA>;
DblPtr make_double_uea(const ColorLieBialgebra& bi);

// Tensor of Verma vectors with per-slot sides; a module over UEATensor
// operators of matching arity.
class VermaTensor {
 public:
  using Key = std::vector<Word>;

  VermaTensor(DblPtr dbl, std::vector<Side> sides, std::uint32_t order);
  static VermaTensor vacuum(DblPtr dbl, std::vector<Side> sides,
                            std::uint32_t order);

  const DblPtr& dbl() const { return dbl_; }
  const std::vector<Side>& sides() const { return sides_; }
  std::uint32_t arity() const {
    return static_cast<std::uint32_t>(sides_.size());
  }
  std::uint32_t order() const { return order_; }
  const std::map<Key, TruncSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Key& k, const TruncSeries& c);
  TruncSeries coeff(const Key& k) const;

  VermaTensor operator+(const VermaTensor& o) const;
  VermaTensor operator-(const VermaTensor& o) const;
  VermaTensor scaled(const TruncSeries& c) const;
  bool operator==(const VermaTensor& o) const;
  bool operator!=(const VermaTensor& o) const { return !(*this == o); }

  // Slot-embedded action of an operator tensor over U(D); Koszul crossing
  // signs from operator legs passing module slots.
  VermaTensor apply(const UEATensor& op) const;
  // Koszul swap of slots (slot, slot+1), swapping their sides too.
  VermaTensor flipped(std::uint32_t slot) const;
  // Replaces one slot through a degree-0 linear map into a Verma pair.
  VermaTensor apply_slot_expansion(
      std::uint32_t slot,
      const std::function<VermaTensor(const Word&)>& fn) const;

  std::string str() const;

 private:
  GroupElement word_degree(const Word& w) const;

  DblPtr dbl_;
  std::vector<Side> sides_;
  std::uint32_t order_;
  std::map<Key, TruncSeries> terms_;
};

}  // namespace cq
