#include "colorquant/grading.hpp"

#include <string>

namespace cq {

GroupElement GradingGroup::reduce(GroupElement g) const {
  if (g.size() != rank())
    throw DomainError("degree has rank " + std::to_string(g.size()) +
                      ", expected " + std::to_string(rank()));
  for (std::size_t i = 0; i < torsion_orders.size(); ++i) {
    std::int64_t n = torsion_orders[i];
    std::int64_t& c = g[free_rank + i];
    c %= n;
    if (c < 0) c += n;
  }
  return g;
}

GroupElement GradingGroup::add(const GroupElement& a, const GroupElement& b) const {
  if (a.size() != rank() || b.size() != rank())
    throw DomainError("degree rank mismatch in addition");
  GroupElement r(rank());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return reduce(std::move(r));
}

GroupElement GradingGroup::neg(const GroupElement& a) const {
  if (a.size() != rank()) throw DomainError("degree rank mismatch in negation");
  GroupElement r(rank());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = -a[i];
  return reduce(std::move(r));
}

void GradingGroup::validate() const {
  for (std::int64_t n : torsion_orders)
    if (n < 2) throw DomainError("torsion order must be at least 2");
}

Bicharacter::Bicharacter(GradingGroup group,
                         std::vector<std::vector<Scalar>> matrix)
    : group_(std::move(group)), matrix_(std::move(matrix)) {
  group_.validate();
  if (matrix_.size() != group_.rank())
    throw DomainError("bicharacter matrix must be square of the group rank");
  for (const auto& row : matrix_) {
    if (row.size() != group_.rank())
      throw DomainError("bicharacter matrix must be square of the group rank");
    for (const auto& entry : row)
      if (entry.is_zero())
        throw DomainError("bicharacter entries must be invertible scalars");
  }
}

Scalar Bicharacter::eval(const GroupElement& a, const GroupElement& b) const {
  GroupElement ra = group_.reduce(a), rb = group_.reduce(b);
  Scalar r = Scalar::integer(1);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i] == 0) continue;
    for (std::size_t j = 0; j < rb.size(); ++j) {
      if (rb[j] == 0) continue;
      r *= matrix_[i][j].pow(ra[i] * rb[j]);
    }
  }
  return r;
}

Bicharacter Bicharacter::inverted() const {
  auto m = matrix_;
  for (auto& row : m)
    for (auto& entry : row) entry = entry.inverse();
  return Bicharacter(group_, std::move(m));
}

CommutationFactor::CommutationFactor(GradingGroup group,
                                     std::vector<std::vector<Scalar>> matrix)
    : group_(std::move(group)), matrix_(std::move(matrix)) {
  group_.validate();
  if (matrix_.size() != group_.rank())
    throw DomainError("bicharacter matrix must be square of the group rank");
  for (const auto& row : matrix_)
    if (row.size() != group_.rank())
      throw DomainError("bicharacter matrix must be square of the group rank");
}

Scalar CommutationFactor::eval(const GroupElement& a, const GroupElement& b) const {
  if (a.size() != group_.rank() || b.size() != group_.rank())
    throw DomainError("degree rank mismatch in commutation factor");
  Scalar r = Scalar::integer(1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      r *= matrix_[i][j].pow(a[i] * b[j]);
    }
  }
  return r;
}

void CommutationFactor::validate() const {
  const Scalar one = Scalar::integer(1);
  std::size_t n = group_.rank();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix_[i][j].is_zero())
        throw DomainError("bicharacter entry (" + std::to_string(i) + "," +
                          std::to_string(j) + ") is zero");
      if (matrix_[i][j] * matrix_[j][i] != one)
        throw DomainError("bicharacter fails antisymmetry at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  for (std::size_t t = 0; t < group_.torsion_orders.size(); ++t) {
    std::size_t i = group_.free_rank + t;
    std::int64_t ord = group_.torsion_orders[t];
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix_[i][j].pow(ord) != one || matrix_[j][i].pow(ord) != one)
        throw DomainError("bicharacter entry involving torsion coordinate " +
                          std::to_string(i) + " is not an order-" +
                          std::to_string(ord) + " root of unity");
    }
  }
}

bool ColorContext::is_odd(const GroupElement& d) const {
  Scalar s = eps_of(d, d);
  if (s == Scalar::integer(1)) return false;
  if (s == Scalar::integer(-1)) return true;
  throw DomainError("eps(d, d) is not +-1 for a degree; factor is invalid");
}

Ctx make_context(GradingGroup group, std::vector<std::vector<Scalar>> matrix,
                 std::uint32_t conductor) {
  auto ctx = std::make_shared<ColorContext>();
  ctx->eps = CommutationFactor(std::move(group), std::move(matrix));
  ctx->group = ctx->eps.group();
  ctx->conductor = conductor;
  ctx->eps.validate();
  return ctx;
}

Ctx trivial_context(std::uint32_t free_rank) {
  GradingGroup g{free_rank, {}};
  std::vector<std::vector<Scalar>> m(
      free_rank, std::vector<Scalar>(free_rank, Scalar::integer(1)));
  return make_context(std::move(g), std::move(m), 1);
}

Ctx super_context() {
  GradingGroup g{0, {2}};
  std::vector<std::vector<Scalar>> m{{Scalar::integer(-1)}};
  return make_context(std::move(g), std::move(m), 1);
}

}  // namespace cq
