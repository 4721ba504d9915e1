#pragma once

#include <map>
#include <string>
#include <vector>

#include "colorquant/grading.hpp"

namespace cq {

// Finite homogeneous basis of a color vector space.
class GradedBasis {
 public:
  GradedBasis(Ctx ctx, std::vector<std::string> names,
              std::vector<GroupElement> degrees);

  const Ctx& ctx() const { return ctx_; }
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::uint32_t i) const;
  const GroupElement& degree(std::uint32_t i) const;
  std::uint32_t index_of(const std::string& name) const;
  bool has(const std::string& name) const;
  bool is_odd(std::uint32_t i) const { return ctx_->is_odd(degree(i)); }

  bool same_content(const GradedBasis& o) const;

 private:
  Ctx ctx_;
  std::vector<std::string> names_;
  std::vector<GroupElement> degrees_;
  std::map<std::string, std::uint32_t> index_;
};

using BasisPtr = std::shared_ptr<const GradedBasis>;

BasisPtr make_basis(Ctx ctx, std::vector<std::string> names,
                    std::vector<GroupElement> degrees);

// Sparse element of V^(tensor k) with TruncSeries coefficients, keyed by
// index tuples. Zero coefficients are never stored.
class DeformedTensor {
 public:
  using Key = std::vector<std::uint32_t>;

  DeformedTensor(BasisPtr basis, std::uint32_t arity, std::uint32_t order);

  const BasisPtr& basis() const { return basis_; }
  std::uint32_t arity() const { return arity_; }
  std::uint32_t order() const { return order_; }
  const std::map<Key, TruncSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Key& key, const TruncSeries& coeff);
  void add_term(const Key& key, const Scalar& coeff);
  TruncSeries coeff(const Key& key) const;

  DeformedTensor operator-() const;
  DeformedTensor& operator+=(const DeformedTensor& o);
  DeformedTensor& operator-=(const DeformedTensor& o);
  friend DeformedTensor operator+(DeformedTensor a, const DeformedTensor& b) {
    return a += b;
  }
  friend DeformedTensor operator-(DeformedTensor a, const DeformedTensor& b) {
    return a -= b;
  }
  DeformedTensor scaled(const Scalar& s) const;
  DeformedTensor scaled(const TruncSeries& s) const;
  bool operator==(const DeformedTensor& o) const;
  bool operator!=(const DeformedTensor& o) const { return !(*this == o); }

  GroupElement key_degree(const Key& key) const;
  // True if every stored key has the same degree sum d.
  bool is_homogeneous_of(const GroupElement& d) const;
  bool is_degree_zero() const;

  // Swaps slots `slot` and `slot + 1` (0-based), scaling each term by
  // eps of the two swapped degrees.
  DeformedTensor koszul_flip(std::uint32_t slot) const;
  // Arity 2 convenience: full flip.
  DeformedTensor flipped() const;
  // Arity 3 cyclic rotation a(x)b(x)c -> eps(a, b+c) b(x)c(x)a.
  DeformedTensor cyclic_rotate() const;

  std::string str() const;

 private:
  BasisPtr basis_;
  std::uint32_t arity_;
  std::uint32_t order_;
  std::map<Key, TruncSeries> terms_;

  void check_compatible(const DeformedTensor& o) const;
};

// Plain juxtaposition a (x) b; no Koszul sign (nothing crosses).
DeformedTensor tensor_product(const DeformedTensor& a, const DeformedTensor& b);

// Graded linear map between elements of one basis, homogeneous of a fixed
// degree: nonzero entry i -> j requires deg x_j = deg x_i + degree.
class GradedMap {
 public:
  GradedMap(BasisPtr basis, GroupElement degree, std::uint32_t order);

  static GradedMap identity(BasisPtr basis, std::uint32_t order);

  const GroupElement& degree() const { return degree_; }
  std::uint32_t order() const { return order_; }
  const BasisPtr& basis() const { return basis_; }
  void set_entry(std::uint32_t from, std::uint32_t to, const TruncSeries& c);
  void set_entry(std::uint32_t from, std::uint32_t to, const Scalar& c);
  const std::map<std::uint32_t, std::map<std::uint32_t, TruncSeries>>& entries()
      const {
    return entries_;
  }

 private:
  BasisPtr basis_;
  GroupElement degree_;
  std::uint32_t order_;
  std::map<std::uint32_t, std::map<std::uint32_t, TruncSeries>> entries_;
};

// Applies maps[s] to slot s of t. Each map carries the Koszul sign picked up
// by moving past the slots to its left: eps(deg maps[s], deg x_0 + ... +
// deg x_{s-1}) per term.
DeformedTensor koszul_apply_maps(const std::vector<GradedMap>& maps,
                                 const DeformedTensor& t);

}  // namespace cq
