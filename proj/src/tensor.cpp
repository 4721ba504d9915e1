#include "colorquant/tensor.hpp"

#include <algorithm>

namespace cq {

GradedBasis::GradedBasis(Ctx ctx, std::vector<std::string> names,
                         std::vector<GroupElement> degrees)
    : ctx_(std::move(ctx)), names_(std::move(names)), degrees_(std::move(degrees)) {
  if (!ctx_) throw DomainError("basis requires a color context");
  if (names_.size() != degrees_.size())
    throw DomainError("basis names and degrees differ in length");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw DomainError("empty basis label");
    degrees_[i] = ctx_->group.reduce(degrees_[i]);
    if (!index_.emplace(names_[i], static_cast<std::uint32_t>(i)).second)
      throw DomainError("duplicate basis label: " + names_[i]);
  }
}

const std::string& GradedBasis::name(std::uint32_t i) const {
  if (i >= names_.size()) throw DomainError("basis index out of range");
  return names_[i];
}

const GroupElement& GradedBasis::degree(std::uint32_t i) const {
  if (i >= degrees_.size()) throw DomainError("basis index out of range");
  return degrees_[i];
}

std::uint32_t GradedBasis::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw DomainError("unknown basis label: " + name);
  return it->second;
}

bool GradedBasis::has(const std::string& name) const {
  return index_.count(name) != 0;
}

bool GradedBasis::same_content(const GradedBasis& o) const {
  return names_ == o.names_ && degrees_ == o.degrees_;
}

BasisPtr make_basis(Ctx ctx, std::vector<std::string> names,
                    std::vector<GroupElement> degrees) {
  return std::make_shared<GradedBasis>(std::move(ctx), std::move(names),
                                       std::move(degrees));
}

DeformedTensor::DeformedTensor(BasisPtr basis, std::uint32_t arity,
                               std::uint32_t order)
    : basis_(std::move(basis)), arity_(arity), order_(order) {
  if (!basis_) throw DomainError("tensor requires a basis");
  if (order_ == 0) throw DomainError("tensor order must be positive");
}

void DeformedTensor::add_term(const Key& key, const TruncSeries& coeff) {
  if (key.size() != arity_) throw DomainError("tensor key arity mismatch");
  if (coeff.order() != order_)
    throw OrderMismatch("tensor coefficient order mismatch");
  for (std::uint32_t i : key)
    if (i >= basis_->size()) throw DomainError("tensor key index out of range");
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(key, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

void DeformedTensor::add_term(const Key& key, const Scalar& coeff) {
  add_term(key, TruncSeries::constant(order_, coeff));
}

TruncSeries DeformedTensor::coeff(const Key& key) const {
  auto it = terms_.find(key);
  if (it == terms_.end()) return TruncSeries(order_);
  return it->second;
}

void DeformedTensor::check_compatible(const DeformedTensor& o) const {
  if (arity_ != o.arity_) throw DomainError("tensor arity mismatch");
  if (order_ != o.order_) throw OrderMismatch("tensor order mismatch");
  if (basis_ != o.basis_ && !basis_->same_content(*o.basis_))
    throw DomainError("tensor basis mismatch");
}

DeformedTensor DeformedTensor::operator-() const {
  DeformedTensor r(basis_, arity_, order_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

DeformedTensor& DeformedTensor::operator+=(const DeformedTensor& o) {
  check_compatible(o);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

DeformedTensor& DeformedTensor::operator-=(const DeformedTensor& o) {
  check_compatible(o);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

DeformedTensor DeformedTensor::scaled(const Scalar& s) const {
  return scaled(TruncSeries::constant(order_, s));
}

DeformedTensor DeformedTensor::scaled(const TruncSeries& s) const {
  DeformedTensor r(basis_, arity_, order_);
  for (const auto& [k, c] : terms_) r.add_term(k, c * s);
  return r;
}

bool DeformedTensor::operator==(const DeformedTensor& o) const {
  check_compatible(o);
  return terms_ == o.terms_;
}

GroupElement DeformedTensor::key_degree(const Key& key) const {
  const auto& group = basis_->ctx()->group;
  GroupElement d = group.zero();
  for (std::uint32_t i : key) d = group.add(d, basis_->degree(i));
  return d;
}

bool DeformedTensor::is_homogeneous_of(const GroupElement& d) const {
  GroupElement target = basis_->ctx()->group.reduce(d);
  for (const auto& [k, c] : terms_)
    if (key_degree(k) != target) return false;
  return true;
}

bool DeformedTensor::is_degree_zero() const {
  return is_homogeneous_of(basis_->ctx()->group.zero());
}

DeformedTensor DeformedTensor::koszul_flip(std::uint32_t slot) const {
  if (arity_ < 2 || slot + 1 >= arity_)
    throw DomainError("flip slot out of range");
  const auto& ctx = *basis_->ctx();
  DeformedTensor r(basis_, arity_, order_);
  for (const auto& [k, c] : terms_) {
    Scalar sign = ctx.eps_of(basis_->degree(k[slot]), basis_->degree(k[slot + 1]));
    Key nk = k;
    std::swap(nk[slot], nk[slot + 1]);
    r.add_term(nk, c.scaled(sign));
  }
  return r;
}

DeformedTensor DeformedTensor::flipped() const {
  if (arity_ != 2) throw DomainError("flipped() requires arity 2");
  return koszul_flip(0);
}

DeformedTensor DeformedTensor::cyclic_rotate() const {
  if (arity_ != 3) throw DomainError("cyclic rotation requires arity 3");
  const auto& ctx = *basis_->ctx();
  const auto& group = ctx.group;
  DeformedTensor r(basis_, arity_, order_);
  for (const auto& [k, c] : terms_) {
    GroupElement bc = group.add(basis_->degree(k[1]), basis_->degree(k[2]));
    Scalar sign = ctx.eps_of(basis_->degree(k[0]), bc);
    Key nk{k[1], k[2], k[0]};
    r.add_term(nk, c.scaled(sign));
  }
  return r;
}

std::string DeformedTensor::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")*";
    if (k.empty()) out += "1";
    for (std::size_t s = 0; s < k.size(); ++s) {
      if (s > 0) out += "(x)";
      out += basis_->name(k[s]);
    }
  }
  return out;
}

DeformedTensor tensor_product(const DeformedTensor& a, const DeformedTensor& b) {
  if (a.basis() != b.basis() && !a.basis()->same_content(*b.basis()))
    throw DomainError("tensor basis mismatch");
  if (a.order() != b.order()) throw OrderMismatch("tensor order mismatch");
  DeformedTensor r(a.basis(), a.arity() + b.arity(), a.order());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      DeformedTensor::Key k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      r.add_term(k, ca * cb);
    }
  return r;
}

GradedMap::GradedMap(BasisPtr basis, GroupElement degree, std::uint32_t order)
    : basis_(std::move(basis)), order_(order) {
  if (!basis_) throw DomainError("graded map requires a basis");
  if (order_ == 0) throw DomainError("graded map order must be positive");
  degree_ = basis_->ctx()->group.reduce(std::move(degree));
}

GradedMap GradedMap::identity(BasisPtr basis, std::uint32_t order) {
  GradedMap m(basis, basis->ctx()->group.zero(), order);
  for (std::uint32_t i = 0; i < m.basis_->size(); ++i)
    m.set_entry(i, i, Scalar::integer(1));
  return m;
}

void GradedMap::set_entry(std::uint32_t from, std::uint32_t to,
                          const TruncSeries& c) {
  if (from >= basis_->size() || to >= basis_->size())
    throw DomainError("graded map index out of range");
  if (c.order() != order_) throw OrderMismatch("graded map coefficient order");
  const auto& group = basis_->ctx()->group;
  if (!c.is_zero() &&
      group.add(basis_->degree(from), degree_) != basis_->degree(to))
    throw DomainError("graded map entry violates its declared degree");
  if (c.is_zero())
    entries_[from].erase(to);
  else
    entries_[from][to] = c;
}

void GradedMap::set_entry(std::uint32_t from, std::uint32_t to, const Scalar& c) {
  set_entry(from, to, TruncSeries::constant(order_, c));
}

DeformedTensor koszul_apply_maps(const std::vector<GradedMap>& maps,
                                 const DeformedTensor& t) {
  if (maps.size() != t.arity())
    throw DomainError("need exactly one map per tensor slot");
  for (const auto& m : maps) {
    if (m.basis() != t.basis() && !m.basis()->same_content(*t.basis()))
      throw DomainError("graded map basis mismatch");
    if (m.order() != t.order()) throw OrderMismatch("graded map order mismatch");
  }
  const auto& ctx = *t.basis()->ctx();
  const auto& group = ctx.group;
  DeformedTensor result(t.basis(), t.arity(), t.order());
  for (const auto& [key, coeff] : t.terms()) {
    // Sign from moving each map past the slots left of its own.
    Scalar sign = Scalar::integer(1);
    GroupElement left = group.zero();
    for (std::uint32_t s = 0; s < t.arity(); ++s) {
      if (s > 0) left = group.add(left, t.basis()->degree(key[s - 1]));
      sign *= ctx.eps_of(maps[s].degree(), left);
    }
    // Expand the product of images slot by slot.
    std::vector<std::pair<DeformedTensor::Key, TruncSeries>> partial{
        {{}, coeff.scaled(sign)}};
    for (std::uint32_t s = 0; s < t.arity(); ++s) {
      auto row = maps[s].entries().find(key[s]);
      std::vector<std::pair<DeformedTensor::Key, TruncSeries>> next;
      if (row != maps[s].entries().end()) {
        for (const auto& [to, c] : row->second)
          for (const auto& [pk, pc] : partial) {
            DeformedTensor::Key nk = pk;
            nk.push_back(to);
            next.emplace_back(std::move(nk), pc * c);
          }
      }
      partial = std::move(next);
      if (partial.empty()) break;
    }
    for (const auto& [k, c] : partial) result.add_term(k, c);
  }
  return result;
}

}  // namespace cq
