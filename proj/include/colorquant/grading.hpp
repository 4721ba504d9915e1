#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "colorquant/scalars.hpp"

namespace cq {

// Degree in Z^r x Z/n_1 x ... x Z/n_t, torsion coordinates stored reduced.
using GroupElement = std::vector<std::int64_t>;

struct GradingGroup {
  std::uint32_t free_rank = 0;
  std::vector<std::int64_t> torsion_orders;

  std::size_t rank() const { return free_rank + torsion_orders.size(); }
  GroupElement zero() const { return GroupElement(rank(), 0); }
  GroupElement reduce(GroupElement g) const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  void validate() const;
};

// sigma(a, b) = prod_{i,j} S[i][j]^(a_i * b_j): biadditive by construction,
// no antisymmetry requirement. Evaluation uses canonical (reduced)
// representatives of torsion coordinates.
class Bicharacter {
 public:
  Bicharacter() = default;
  Bicharacter(GradingGroup group, std::vector<std::vector<Scalar>> matrix);

  const GradingGroup& group() const { return group_; }
  const std::vector<std::vector<Scalar>>& matrix() const { return matrix_; }
  Scalar eval(const GroupElement& a, const GroupElement& b) const;
  Bicharacter inverted() const;

 private:
  GradingGroup group_;
  std::vector<std::vector<Scalar>> matrix_;
};

// eps(a, b) = prod_{i,j} B[i][j]^(a_i * b_j) for roots of unity B[i][j].
class CommutationFactor {
 public:
  CommutationFactor() = default;
  CommutationFactor(GradingGroup group, std::vector<std::vector<Scalar>> matrix);

  const GradingGroup& group() const { return group_; }
  const std::vector<std::vector<Scalar>>& matrix() const { return matrix_; }
  Scalar eval(const GroupElement& a, const GroupElement& b) const;

  // Enforces antisymmetry B[i][j]*B[j][i] == 1 (so eps(a,a) is +-1) and
  // torsion consistency B[i][j]^n == 1 whenever coordinate i or j has order n.
  void validate() const;

 private:
  GradingGroup group_;
  std::vector<std::vector<Scalar>> matrix_;
};

struct ColorContext {
  GradingGroup group;
  CommutationFactor eps;
  std::uint32_t conductor = 1;

  Scalar eps_of(const GroupElement& a, const GroupElement& b) const {
    return eps.eval(a, b);
  }
  // Sign of a degree under the factor: eps(d, d) must be 1 (even) or -1 (odd).
  bool is_odd(const GroupElement& d) const;
};

using Ctx = std::shared_ptr<const ColorContext>;

Ctx make_context(GradingGroup group, std::vector<std::vector<Scalar>> matrix,
                 std::uint32_t conductor);

// Trivial factor eps == 1 on Z^free_rank.
Ctx trivial_context(std::uint32_t free_rank);

// Z/2-graded sign factor eps(a, b) = (-1)^(a*b).
Ctx super_context();

}  // namespace cq
