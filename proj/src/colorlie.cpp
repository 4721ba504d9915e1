#include "colorquant/colorlie.hpp"

#include <algorithm>

namespace cq {

namespace {

std::string loc1(const GradedBasis& b, std::uint32_t i) { return b.name(i); }

std::string loc2(const GradedBasis& b, std::uint32_t i, std::uint32_t j) {
  return "(" + b.name(i) + "," + b.name(j) + ")";
}

std::string loc3(const GradedBasis& b, std::uint32_t i, std::uint32_t j,
                 std::uint32_t k) {
  return "(" + b.name(i) + "," + b.name(j) + "," + b.name(k) + ")";
}

std::uint32_t merge_conductor(std::uint32_t a, std::uint32_t b) {
  if (a == b || b == 1) return a;
  if (a == 1) return b;
  throw ConductorMismatch("conductor mismatch: " + std::to_string(a) + " vs " +
                          std::to_string(b));
}

}  // namespace

std::string Report::str() const {
  if (issues.empty()) return "ok";
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.check + " at " + issue.location;
    if (!issue.detail.empty()) out += ": " + issue.detail;
  }
  return out;
}

ColorLieAlgebra::ColorLieAlgebra(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw DomainError("algebra requires a basis");
  bracket_.assign(basis_->size(),
                  std::vector<std::map<std::uint32_t, Scalar>>(basis_->size()));
}

void ColorLieAlgebra::add_bracket_term(std::uint32_t i, std::uint32_t j,
                                       std::uint32_t k, const Scalar& coeff) {
  if (i >= dim() || j >= dim() || k >= dim())
    throw DomainError("bracket index out of range");
  auto& slot = bracket_[i][j];
  auto it = slot.find(k);
  if (it == slot.end()) {
    if (!coeff.is_zero()) slot.emplace(k, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) slot.erase(it);
}

void ColorLieAlgebra::set_bracket_pair(
    std::uint32_t i, std::uint32_t j,
    const std::map<std::uint32_t, Scalar>& terms) {
  if (i >= dim() || j >= dim()) throw DomainError("bracket index out of range");
  bracket_[i][j].clear();
  for (const auto& [k, c] : terms) add_bracket_term(i, j, k, c);
  if (i == j) return;
  bracket_[j][i].clear();
  Scalar sign = -ctx()->eps_of(basis_->degree(j), basis_->degree(i));
  for (const auto& [k, c] : terms) add_bracket_term(j, i, k, sign * c);
}

const std::map<std::uint32_t, Scalar>& ColorLieAlgebra::bracket_terms(
    std::uint32_t i, std::uint32_t j) const {
  if (i >= dim() || j >= dim()) throw DomainError("bracket index out of range");
  return bracket_[i][j];
}

DeformedTensor ColorLieAlgebra::basis_element(std::uint32_t i,
                                              std::uint32_t order) const {
  DeformedTensor t(basis_, 1, order);
  t.add_term({i}, TruncSeries::constant(order, Scalar::integer(1)));
  return t;
}

DeformedTensor ColorLieAlgebra::bracket(const DeformedTensor& a,
                                        const DeformedTensor& b) const {
  if (a.arity() != 1 || b.arity() != 1)
    throw DomainError("element bracket requires arity-1 tensors");
  if (a.order() != b.order()) throw OrderMismatch("bracket order mismatch");
  DeformedTensor r(basis_, 1, a.order());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms())
      for (const auto& [k, c] : bracket_[ka[0]][kb[0]])
        r.add_term({k}, (ca * cb).scaled(c));
  return r;
}

DeformedTensor adjoint_act(const ColorLieAlgebra& alg, std::uint32_t i,
                           const DeformedTensor& t) {
  if (t.basis() != alg.basis() && !t.basis()->same_content(*alg.basis()))
    throw DomainError("adjoint action basis mismatch");
  const auto& ctx = *alg.ctx();
  const auto& group = ctx.group;
  const GroupElement& dx = alg.basis()->degree(i);
  DeformedTensor result(t.basis(), t.arity(), t.order());
  for (const auto& [key, coeff] : t.terms()) {
    GroupElement passed = group.zero();
    for (std::uint32_t s = 0; s < t.arity(); ++s) {
      Scalar sign = ctx.eps_of(dx, passed);
      for (const auto& [k, c] : alg.bracket_terms(i, key[s])) {
        DeformedTensor::Key nk = key;
        nk[s] = k;
        result.add_term(nk, coeff.scaled(sign * c));
      }
      passed = group.add(passed, alg.basis()->degree(key[s]));
    }
  }
  return result;
}

ColorLieBialgebra::ColorLieBialgebra(ColorLieAlgebra alg)
    : algebra(std::move(alg)), cobracket(algebra.dim()) {}

void ColorLieBialgebra::add_cobracket_term(std::uint32_t i, std::uint32_t j,
                                           std::uint32_t k, const Scalar& coeff) {
  if (i >= algebra.dim() || j >= algebra.dim() || k >= algebra.dim())
    throw DomainError("cobracket index out of range");
  auto& slot = cobracket[i];
  auto key = std::make_pair(j, k);
  auto it = slot.find(key);
  if (it == slot.end()) {
    if (!coeff.is_zero()) slot.emplace(key, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) slot.erase(it);
}

DeformedTensor ColorLieBialgebra::cobracket_of(std::uint32_t i,
                                               std::uint32_t order) const {
  if (i >= algebra.dim()) throw DomainError("cobracket index out of range");
  DeformedTensor t(algebra.basis(), 2, order);
  for (const auto& [jk, c] : cobracket[i])
    t.add_term({jk.first, jk.second}, TruncSeries::constant(order, c));
  return t;
}

void ColorLieBialgebra::set_cobracket_from_r(const DeformedTensor& r) {
  rmatrix = r;
  cobracket_from_r = true;
  for (std::uint32_t i = 0; i < algebra.dim(); ++i) {
    cobracket[i].clear();
    DeformedTensor d = adjoint_act(algebra, i, r);
    for (const auto& [key, coeff] : d.terms())
      add_cobracket_term(i, key[0], key[1], coeff.coeff(0));
  }
}

Report check_color_lie(const ColorLieAlgebra& alg) {
  Report rep;
  const auto& b = *alg.basis();
  const auto& ctx = *alg.ctx();
  const auto& group = ctx.group;
  std::uint32_t n = static_cast<std::uint32_t>(alg.dim());

  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      GroupElement dij = group.add(b.degree(i), b.degree(j));
      for (const auto& [k, c] : alg.bracket_terms(i, j)) {
        (void)c;
        if (b.degree(k) != dij)
          rep.add("bracket_degree", loc2(b, i, j),
                  "component " + b.name(k) + " breaks degree additivity");
      }
    }

  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i; j < n; ++j) {
      // [x_i,x_j] + eps(i,j)[x_j,x_i] must vanish.
      Scalar eps = ctx.eps_of(b.degree(i), b.degree(j));
      std::map<std::uint32_t, Scalar> acc(alg.bracket_terms(i, j));
      if (i == j) {
        for (auto& [k, c] : acc) c += eps * c;
      } else {
        for (const auto& [k, c] : alg.bracket_terms(j, i)) {
          auto it = acc.find(k);
          if (it == acc.end())
            acc.emplace(k, eps * c);
          else
            it->second += eps * c;
        }
      }
      for (const auto& [k, c] : acc)
        if (!c.is_zero()) {
          rep.add("bracket_antisymmetry", loc2(b, i, j),
                  "residual component " + b.name(k));
          break;
        }
    }

  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i; j < n; ++j)
      for (std::uint32_t k = j; k < n; ++k) {
        auto xa = alg.basis_element(i), xb = alg.basis_element(j),
             xc = alg.basis_element(k);
        Scalar e_ca = ctx.eps_of(b.degree(k), b.degree(i));
        Scalar e_ab = ctx.eps_of(b.degree(i), b.degree(j));
        Scalar e_bc = ctx.eps_of(b.degree(j), b.degree(k));
        DeformedTensor jac =
            alg.bracket(xa, alg.bracket(xb, xc)).scaled(e_ca) +
            alg.bracket(xb, alg.bracket(xc, xa)).scaled(e_ab) +
            alg.bracket(xc, alg.bracket(xa, xb)).scaled(e_bc);
        if (!jac.is_zero())
          rep.add("jacobi", loc3(b, i, j, k), "residual " + jac.str());
      }
  return rep;
}

Report check_color_bialgebra(const ColorLieBialgebra& bi) {
  Report rep = check_color_lie(bi.algebra);
  const auto& alg = bi.algebra;
  const auto& b = *alg.basis();
  const auto& ctx = *alg.ctx();
  const auto& group = ctx.group;
  std::uint32_t n = static_cast<std::uint32_t>(alg.dim());

  for (std::uint32_t i = 0; i < n; ++i) {
    for (const auto& [jk, c] : bi.cobracket[i]) {
      (void)c;
      if (group.add(b.degree(jk.first), b.degree(jk.second)) != b.degree(i))
        rep.add("cobracket_degree", loc1(b, i),
                "component " + loc2(b, jk.first, jk.second) +
                    " breaks degree additivity");
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    DeformedTensor d = bi.cobracket_of(i);
    if (!(d + d.flipped()).is_zero())
      rep.add("cobracket_antisymmetry", loc1(b, i),
              "residual " + (d + d.flipped()).str());
  }

  // (id + sigma + sigma^2)(delta (x) id)(delta(x_i)) = 0.
  for (std::uint32_t i = 0; i < n; ++i) {
    DeformedTensor t3(alg.basis(), 3, 1);
    for (const auto& [jk, c] : bi.cobracket[i])
      for (const auto& [pq, c2] : bi.cobracket[jk.first])
        t3.add_term({pq.first, pq.second, jk.second}, c * c2);
    DeformedTensor total = t3 + t3.cyclic_rotate() +
                           t3.cyclic_rotate().cyclic_rotate();
    if (!total.is_zero())
      rep.add("cojacobi", loc1(b, i), "residual " + total.str());
  }

  // delta([x_i,x_j]) = x_i . delta(x_j) - eps(i,j) x_j . delta(x_i).
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i; j < n; ++j) {
      DeformedTensor lhs(alg.basis(), 2, 1);
      for (const auto& [k, c] : alg.bracket_terms(i, j))
        lhs += bi.cobracket_of(k).scaled(c);
      Scalar eps = ctx.eps_of(b.degree(i), b.degree(j));
      DeformedTensor rhs = adjoint_act(alg, i, bi.cobracket_of(j)) -
                           adjoint_act(alg, j, bi.cobracket_of(i)).scaled(eps);
      if (!(lhs - rhs).is_zero())
        rep.add("cocycle", loc2(b, i, j), "residual " + (lhs - rhs).str());
    }
  return rep;
}

namespace {

// Minimal straightening of 3-slot tensors whose slot words have length <= 2,
// used only by the Yang-Baxter residual. Words longer than one letter that
// survive straightening must cancel; anything left over is an internal error.
using SWord = std::vector<std::uint32_t>;
using SKey = std::vector<SWord>;
using STerms = std::map<SKey, Scalar>;

GroupElement word_degree(const GradedBasis& b, const SWord& w) {
  GroupElement d = b.ctx()->group.zero();
  for (std::uint32_t i : w) d = b.ctx()->group.add(d, b.degree(i));
  return d;
}

void s_add(STerms& m, const SKey& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = m.find(k);
  if (it == m.end()) {
    m.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) m.erase(it);
}

STerms s_mul(const GradedBasis& b, const STerms& A, const STerms& B) {
  const auto& ctx = *b.ctx();
  STerms out;
  for (const auto& [ka, ca] : A)
    for (const auto& [kb, cb] : B) {
      Scalar sign = Scalar::integer(1);
      for (std::size_t t = 1; t < 3; ++t)
        for (std::size_t s = 0; s < t; ++s)
          sign *= ctx.eps_of(word_degree(b, ka[t]), word_degree(b, kb[s]));
      SKey k(3);
      for (std::size_t s = 0; s < 3; ++s) {
        k[s] = ka[s];
        k[s].insert(k[s].end(), kb[s].begin(), kb[s].end());
      }
      s_add(out, k, ca * cb * sign);
    }
  return out;
}

STerms s_straighten(const ColorLieAlgebra& alg, STerms terms) {
  const auto& b = *alg.basis();
  const auto& ctx = *alg.ctx();
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      const SKey& key = it->first;
      for (std::size_t s = 0; s < 3; ++s) {
        const SWord& w = key[s];
        if (w.size() != 2) continue;
        std::uint32_t p = w[0], q = w[1];
        bool descending = p > q;
        bool odd_square = (p == q) && ctx.is_odd(b.degree(p));
        if (!descending && !odd_square) continue;
        Scalar c = it->second;
        SKey base = key;
        terms.erase(it);
        if (descending) {
          SKey swapped = base;
          swapped[s] = {q, p};
          s_add(terms, swapped,
                c * ctx.eps_of(b.degree(p), b.degree(q)));
          for (const auto& [k2, c2] : alg.bracket_terms(p, q)) {
            SKey reduced = base;
            reduced[s] = {k2};
            s_add(terms, reduced, c * c2);
          }
        } else {
          for (const auto& [k2, c2] : alg.bracket_terms(p, p)) {
            SKey reduced = base;
            reduced[s] = {k2};
            s_add(terms, reduced, c * c2 * Scalar::rational(1, 2));
          }
        }
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return terms;
}

}  // namespace

DeformedTensor cyb(const ColorLieAlgebra& alg, const DeformedTensor& r) {
  if (r.arity() != 2) throw DomainError("yang-baxter input must have arity 2");
  const auto& b = *alg.basis();

  STerms r12, r13, r23;
  for (const auto& [key, coeff] : r.terms()) {
    Scalar c = coeff.coeff(0);
    s_add(r12, {{key[0]}, {key[1]}, {}}, c);
    s_add(r13, {{key[0]}, {}, {key[1]}}, c);
    s_add(r23, {{}, {key[0]}, {key[1]}}, c);
  }
  auto commutator = [&](const STerms& A, const STerms& B) {
    STerms ab = s_mul(b, A, B);
    for (const auto& [k, c] : s_mul(b, B, A)) s_add(ab, k, -c);
    return ab;
  };
  STerms total = commutator(r12, r13);
  for (const auto& [k, c] : commutator(r12, r23)) s_add(total, k, c);
  for (const auto& [k, c] : commutator(r13, r23)) s_add(total, k, c);
  total = s_straighten(alg, std::move(total));

  // Commutator combinatorics guarantee single-letter slots whenever r is
  // termwise degree 0; other inputs may leave a residual outside the span
  // of the basis, which this representation cannot carry.
  DeformedTensor out(r.basis(), 3, r.order());
  for (const auto& [key, c] : total) {
    if (key[0].size() != 1 || key[1].size() != 1 || key[2].size() != 1)
      throw DomainError("yang-baxter residual leaves the basis span");
    out.add_term({key[0][0], key[1][0], key[2][0]},
                 TruncSeries::constant(r.order(), c));
  }
  return out;
}

RClassification classify_r(const ColorLieBialgebra& bi) {
  if (!bi.rmatrix) throw DomainError("no r-matrix declared");
  const DeformedTensor& r = *bi.rmatrix;
  Report rep;
  DeformedTensor residual = cyb(bi.algebra, r);
  if (!residual.is_zero())
    rep.add("yang_baxter", "r", "residual " + residual.str());
  DeformedTensor omega = r + r.flipped();
  for (std::uint32_t i = 0; i < bi.algebra.dim(); ++i) {
    DeformedTensor act = adjoint_act(bi.algebra, i, omega);
    if (!act.is_zero())
      rep.add("omega_invariance", loc1(*bi.algebra.basis(), i),
              "residual " + act.str());
  }
  if (bi.cobracket_from_r) {
    for (std::uint32_t i = 0; i < bi.algebra.dim(); ++i) {
      DeformedTensor expect = adjoint_act(bi.algebra, i, r);
      if (!(expect - bi.cobracket_of(i)).is_zero())
        rep.add("cobracket_from_r", loc1(*bi.algebra.basis(), i),
                "declared cobracket differs from x . r");
    }
  }
  if (!rep.ok()) return {RClass::not_qt, rep};
  if (omega.is_zero()) return {RClass::triangular, rep};
  return {RClass::quasitriangular, rep};
}

Report check_manin(const ColorLieAlgebra& alg, const ManinPairing& pairing,
                   const std::vector<std::uint32_t>& plus_part,
                   const std::vector<std::uint32_t>& minus_part) {
  Report rep;
  const auto& b = *alg.basis();
  const auto& ctx = *alg.ctx();
  const auto& group = ctx.group;
  std::uint32_t n = static_cast<std::uint32_t>(alg.dim());

  if (pairing.gram.size() != n) {
    rep.add("pairing_shape", "gram", "matrix is not square of the dimension");
    return rep;
  }
  for (const auto& row : pairing.gram)
    if (row.size() != n) {
      rep.add("pairing_shape", "gram", "matrix is not square of the dimension");
      return rep;
    }

  std::vector<int> side(n, -1);
  for (std::uint32_t i : plus_part)
    if (i >= n || side[i] != -1)
      rep.add("partition", loc1(b, std::min(i, n - 1)), "bad plus part");
    else
      side[i] = 0;
  for (std::uint32_t i : minus_part)
    if (i >= n || side[i] != -1)
      rep.add("partition", loc1(b, std::min(i, n - 1)), "bad minus part");
    else
      side[i] = 1;
  for (std::uint32_t i = 0; i < n; ++i)
    if (side[i] == -1) rep.add("partition", loc1(b, i), "element in no part");
  if (!rep.ok()) return rep;

  const auto& g = pairing.gram;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      if (!g[i][j].is_zero() &&
          group.add(b.degree(i), b.degree(j)) != group.zero())
        rep.add("pairing_degree", loc2(b, i, j), "pairing is not degree 0");
      Scalar sym = g[i][j] - ctx.eps_of(b.degree(i), b.degree(j)) * g[j][i];
      if (!sym.is_zero())
        rep.add("pairing_symmetry", loc2(b, i, j), "residual " + sym.str());
    }

  // Nondegeneracy by Gaussian elimination.
  {
    auto m = g;
    std::uint32_t rank = 0;
    for (std::uint32_t col = 0; col < n && rank < n; ++col) {
      std::uint32_t pivot = n;
      for (std::uint32_t row = rank; row < n; ++row)
        if (!m[row][col].is_zero()) {
          pivot = row;
          break;
        }
      if (pivot == n) continue;
      std::swap(m[pivot], m[rank]);
      Scalar inv = m[rank][col].inverse();
      for (auto& v : m[rank]) v *= inv;
      for (std::uint32_t row = 0; row < n; ++row) {
        if (row == rank || m[row][col].is_zero()) continue;
        Scalar f = m[row][col];
        for (std::uint32_t c2 = 0; c2 < n; ++c2)
          m[row][c2] -= f * m[rank][c2];
      }
      ++rank;
    }
    if (rank != n)
      rep.add("pairing_nondegenerate", "gram",
              "rank " + std::to_string(rank) + " of " + std::to_string(n));
  }

  auto pair_elem = [&](const DeformedTensor& a, std::uint32_t j) {
    Scalar acc = Scalar::integer(0);
    for (const auto& [key, c] : a.terms()) acc += c.coeff(0) * g[key[0]][j];
    return acc;
  };

  // ([x_i,x_j], x_k) + eps(i,j) (x_j, [x_i,x_k]) = 0.
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      for (std::uint32_t k = 0; k < n; ++k) {
        Scalar lhs = pair_elem(
            alg.bracket(alg.basis_element(i), alg.basis_element(j)), k);
        Scalar rhs = Scalar::integer(0);
        for (const auto& [k2, c] : alg.bracket_terms(i, k))
          rhs += c * g[j][k2];
        Scalar total = lhs + ctx.eps_of(b.degree(i), b.degree(j)) * rhs;
        if (!total.is_zero())
          rep.add("pairing_invariance", loc3(b, i, j, k),
                  "residual " + total.str());
      }

  auto check_half = [&](const std::vector<std::uint32_t>& part,
                        const std::string& label) {
    for (std::uint32_t i : part)
      for (std::uint32_t j : part) {
        if (!g[i][j].is_zero())
          rep.add("isotropy_" + label, loc2(b, i, j),
                  "pairing value " + g[i][j].str());
        for (const auto& [k, c] : alg.bracket_terms(i, j)) {
          (void)c;
          bool inside = std::find(part.begin(), part.end(), k) != part.end();
          if (!inside)
            rep.add("closure_" + label, loc2(b, i, j),
                    "bracket escapes through " + b.name(k));
        }
      }
  };
  check_half(plus_part, "plus");
  check_half(minus_part, "minus");
  return rep;
}

DoubleStructure build_double(const ColorLieBialgebra& bi) {
  const auto& alg = bi.algebra;
  const auto& b = *alg.basis();
  const auto& ctx = *alg.ctx();
  std::uint32_t n = static_cast<std::uint32_t>(alg.dim());

  std::vector<std::string> names;
  std::vector<GroupElement> degrees;
  for (std::uint32_t i = 0; i < n; ++i) {
    names.push_back(b.name(i));
    degrees.push_back(b.degree(i));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    names.push_back(b.name(i) + "*");
    degrees.push_back(ctx.group.neg(b.degree(i)));
  }
  BasisPtr dbasis = make_basis(alg.ctx(), std::move(names), std::move(degrees));

  ColorLieAlgebra dalg(dbasis);
  auto d = [&](std::uint32_t i) { return b.degree(i); };
  auto eps = [&](const GroupElement& a, const GroupElement& bb) {
    return ctx.eps_of(a, bb);
  };

  // g-g block: original constants.
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      for (const auto& [k, c] : alg.bracket_terms(i, j))
        dalg.add_bracket_term(i, j, k, c);

  // Dual-dual block, read off the cobracket through the evaluation pairing.
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      Scalar pref = eps(d(i), d(j));
      for (std::uint32_t v = 0; v < n; ++v) {
        auto it = bi.cobracket[v].find({i, j});
        if (it == bi.cobracket[v].end()) continue;
        dalg.add_bracket_term(n + i, n + j, n + v, pref * it->second);
      }
    }

  // Mixed block [x_a, dual_b]: the part in g^* pairs against g, the part in g
  // pairs against g^*; both forced by invariance of the natural pairing.
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t bb = 0; bb < n; ++bb) {
      for (std::uint32_t v = 0; v < n; ++v) {
        auto it = alg.bracket_terms(a, v).find(bb);
        if (it != alg.bracket_terms(a, v).end()) {
          Scalar pv = -(eps(d(bb), d(a)) * eps(d(bb), d(bb)) *
                        eps(d(v), d(v)) * it->second);
          dalg.add_bracket_term(a, n + bb, n + v, pv);
        }
      }
      for (std::uint32_t w = 0; w < n; ++w) {
        auto it = bi.cobracket[a].find({bb, w});
        if (it == bi.cobracket[a].end()) continue;
        Scalar qw = eps(d(bb), d(w)) * it->second;
        dalg.add_bracket_term(a, n + bb, w, qw);
      }
      // Opposite order by antisymmetry.
      Scalar sign = -eps(dbasis->degree(n + bb), d(a));
      for (const auto& [k, c] : dalg.bracket_terms(a, n + bb))
        dalg.add_bracket_term(n + bb, a, k, sign * c);
    }

  DeformedTensor r(dbasis, 2, 1);
  for (std::uint32_t i = 0; i < n; ++i)
    r.add_term({i, n + i}, Scalar::integer(1));

  ColorLieBialgebra dbi(std::move(dalg));
  dbi.set_cobracket_from_r(r);

  ManinPairing pairing;
  pairing.gram.assign(2 * n, std::vector<Scalar>(2 * n, Scalar::integer(0)));
  for (std::uint32_t i = 0; i < n; ++i) {
    pairing.gram[i][n + i] = Scalar::integer(1);
    pairing.gram[n + i][i] = eps(d(i), d(i));
  }

  DeformedTensor omega = r + r.flipped();
  return DoubleStructure{std::move(dbi), n, std::move(r), std::move(omega),
                         std::move(pairing)};
}

ColorLieAlgebra scheunert_twist(const ColorLieAlgebra& alg,
                                const Bicharacter& sigma) {
  const auto& b = *alg.basis();
  const auto& ctx = *alg.ctx();
  if (sigma.group().rank() != ctx.group.rank())
    throw DomainError("twist bicharacter group rank mismatch");

  std::uint32_t conductor = ctx.conductor;
  std::size_t rank = ctx.group.rank();
  std::vector<std::vector<Scalar>> factor(rank, std::vector<Scalar>(rank));
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      const Scalar& s_ij = sigma.matrix()[i][j];
      const Scalar& s_ji = sigma.matrix()[j][i];
      conductor = merge_conductor(conductor, s_ij.conductor());
      factor[i][j] = s_ij * s_ji.inverse() * ctx.eps.matrix()[i][j];
    }
  Ctx new_ctx = make_context(ctx.group, std::move(factor), conductor);

  std::vector<std::string> names;
  std::vector<GroupElement> degrees;
  for (std::uint32_t i = 0; i < b.size(); ++i) {
    names.push_back(b.name(i));
    degrees.push_back(b.degree(i));
  }
  BasisPtr nb = make_basis(new_ctx, std::move(names), std::move(degrees));
  ColorLieAlgebra out(nb);
  for (std::uint32_t i = 0; i < b.size(); ++i)
    for (std::uint32_t j = 0; j < b.size(); ++j) {
      Scalar factor_ij = sigma.eval(b.degree(i), b.degree(j));
      for (const auto& [k, c] : alg.bracket_terms(i, j))
        out.add_bracket_term(i, j, k, factor_ij * c);
    }
  return out;
}

DeformedTensor standard_r(
    const BasisPtr& basis,
    const std::vector<std::tuple<std::string, std::string, Scalar>>& terms) {
  DeformedTensor r(basis, 2, 1);
  for (const auto& [first, second, coeff] : terms)
    r.add_term({basis->index_of(first), basis->index_of(second)}, coeff);
  return r;
}

}  // namespace cq
