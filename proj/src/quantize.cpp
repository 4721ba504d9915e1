#include "colorquant/quantize.hpp"

#include <algorithm>
#include <sstream>

namespace cq {

namespace {

TnElement::Gen tn_gen_pair(std::uint32_t slots, std::uint32_t i,
                           std::uint32_t j) {
  if (i == j || i == 0 || j == 0 || i > slots || j > slots)
    throw DomainError("bad chord generator indices");
  if (i > j) std::swap(i, j);
  return {i, j};
}

std::string gen_str(const TnElement::Gen& g) {
  std::ostringstream os;
  os << "t" << g.first << g.second;
  return os.str();
}

}  // namespace

TnElement::TnElement(std::uint32_t slots, std::uint32_t order)
    : slots_(slots), order_(order) {
  if (slots < 2) throw DomainError("chord algebra needs at least two strands");
  if (order == 0) throw DomainError("bad series order");
}

TnElement TnElement::unit(std::uint32_t slots, std::uint32_t order) {
  TnElement t(slots, order);
  t.add_term({}, TruncSeries::constant(order, Scalar::integer(1)));
  return t;
}

TnElement TnElement::gen(std::uint32_t slots, std::uint32_t order,
                         std::uint32_t i, std::uint32_t j,
                         const TruncSeries& coeff) {
  TnElement t(slots, order);
  t.add_term({tn_gen_pair(slots, i, j)}, coeff);
  return t;
}

TruncSeries TnElement::coeff(const TnWord& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? TruncSeries(order_) : it->second;
}

void TnElement::add_term(const TnWord& w, const TruncSeries& coeff) {
  for (const auto& g : w) tn_gen_pair(slots_, g.first, g.second);
  if (coeff.order() != order_) throw OrderMismatch("chord coefficient order");
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(w, coeff);
    return;
  }
  it->second = it->second + coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

TnElement TnElement::operator+(const TnElement& o) const {
  if (slots_ != o.slots_ || order_ != o.order_)
    throw OrderMismatch("chord element shapes differ");
  TnElement out = *this;
  for (const auto& [w, c] : o.terms_) out.add_term(w, c);
  return out;
}

TnElement TnElement::operator-(const TnElement& o) const {
  return *this + o.scaled(Scalar::integer(-1));
}

TnElement TnElement::scaled(const TruncSeries& s) const {
  TnElement out(slots_, order_);
  for (const auto& [w, c] : terms_) out.add_term(w, c * s);
  return out;
}

TnElement TnElement::scaled(const Scalar& s) const {
  return scaled(TruncSeries::constant(order_, s));
}

TnElement TnElement::mul(const TnElement& o) const {
  if (slots_ != o.slots_ || order_ != o.order_)
    throw OrderMismatch("chord element shapes differ");
  TnElement out(slots_, order_);
  for (const auto& [wa, ca] : terms_)
    for (const auto& [wb, cb] : o.terms_) {
      TnWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  return out;
}

TnElement TnElement::exp() const {
  for (const auto& [w, c] : terms_)
    if (!c.coeff(0).is_zero())
      throw DomainError("exponential needs a vanishing constant term");
  TnElement acc = unit(slots_, order_);
  TnElement pow = unit(slots_, order_);
  Scalar kfact = Scalar::integer(1);
  for (std::uint32_t k = 1; k < order_; ++k) {
    pow = pow.mul(*this);
    kfact = kfact * Scalar::integer(static_cast<long>(k));
    if (pow.is_zero()) break;
    acc = acc + pow.scaled(kfact.inverse());
  }
  return acc;
}

bool TnElement::operator==(const TnElement& o) const {
  return slots_ == o.slots_ && order_ == o.order_ && terms_ == o.terms_;
}

TnElement TnElement::substitute_legs(
    const std::vector<std::vector<std::uint32_t>>& legs,
    std::uint32_t new_slots) const {
  if (legs.size() != slots_) throw DomainError("leg count must match strands");
  std::vector<bool> seen(new_slots + 1, false);
  for (const auto& group : legs) {
    if (group.empty()) throw DomainError("empty leg group");
    for (auto s : group) {
      if (s == 0 || s > new_slots || seen[s])
        throw DomainError("leg groups must partition distinct strands");
      seen[s] = true;
    }
  }
  TnElement out(new_slots, order_);
  for (const auto& [w, c] : terms_) {
    std::map<TnWord, TruncSeries> acc{{TnWord{}, c}};
    for (const auto& g : w) {
      std::map<TnWord, TruncSeries> next;
      for (const auto& [pw, pc] : acc)
        for (auto a : legs[g.first - 1])
          for (auto b : legs[g.second - 1]) {
            TnWord nw = pw;
            nw.push_back(tn_gen_pair(new_slots, a, b));
            auto it = next.find(nw);
            if (it == next.end())
              next.emplace(nw, pc);
            else
              it->second = it->second + pc;
          }
      acc = std::move(next);
    }
    for (const auto& [nw, nc] : acc) out.add_term(nw, nc);
  }
  return out;
}

std::string TnElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (const auto& g : w) os << "." << gen_str(g);
  }
  return os.str();
}

namespace {

using TnWord = TnElement::TnWord;
using SparseVec = std::map<TnWord, Scalar>;

// Forward-substitution eliminator over the exact scalar field; rows are
// keyed by their smallest monomial, normalized to leading coefficient 1.
class Eliminator {
 public:
  SparseVec reduce(SparseVec v) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto row = rows_.find(it->first);
      if (row == rows_.end()) {
        ++it;
        continue;
      }
      Scalar c = it->second;
      TnWord pivot = it->first;
      v.erase(it);
      for (const auto& [w, rc] : row->second) {
        if (w == pivot) continue;
        Scalar upd = Scalar::integer(0) - c * rc;
        auto slot = v.find(w);
        if (slot == v.end()) {
          if (!upd.is_zero()) v.emplace(w, upd);
        } else {
          slot->second = slot->second + upd;
          if (slot->second.is_zero()) v.erase(slot);
        }
      }
      // keys below the pivot were already clean; updates land above it
      it = v.upper_bound(pivot);
    }
    return v;
  }

  void insert(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return;
    Scalar lead = v.begin()->second;
    Scalar inv = lead.inverse();
    for (auto& [w, c] : v) c = c * inv;
    TnWord pivot = v.begin()->first;
    rows_.emplace(std::move(pivot), std::move(v));
  }

 private:
  std::map<TnWord, SparseVec> rows_;
};

std::vector<TnElement::Gen> all_gens(std::uint32_t slots) {
  std::vector<TnElement::Gen> out;
  for (std::uint32_t i = 1; i <= slots; ++i)
    for (std::uint32_t j = i + 1; j <= slots; ++j) out.push_back({i, j});
  return out;
}

std::vector<SparseVec> base_relations(std::uint32_t slots) {
  std::vector<SparseVec> rels;
  auto gens = all_gens(slots);
  Scalar one = Scalar::integer(1);
  Scalar neg = Scalar::integer(-1);
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b) {
      const auto& g = gens[a];
      const auto& h = gens[b];
      bool disjoint = g.first != h.first && g.first != h.second &&
                      g.second != h.first && g.second != h.second;
      if (!disjoint) continue;
      rels.push_back({{{g, h}, one}, {{h, g}, neg}});
    }
  for (std::uint32_t i = 1; i <= slots; ++i)
    for (std::uint32_t j = i + 1; j <= slots; ++j)
      for (std::uint32_t k = j + 1; k <= slots; ++k) {
        TnElement::Gen ij{i, j}, ik{i, k}, jk{j, k};
        auto triple = [&](TnElement::Gen a, TnElement::Gen b,
                          TnElement::Gen c) {
          SparseVec v;
          v[{a, b}] = one;
          v[{a, c}] = one;
          v[{b, a}] = neg;
          v[{c, a}] = neg;
          rels.push_back(std::move(v));
        };
        triple(ij, ik, jk);
        triple(ik, ij, jk);
        triple(jk, ij, ik);
      }
  return rels;
}

void pad_words(const std::vector<TnElement::Gen>& gens, std::size_t len,
               TnWord& cur, std::vector<TnWord>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (const auto& g : gens) {
    cur.push_back(g);
    pad_words(gens, len, cur, out);
    cur.pop_back();
  }
}

Eliminator relation_span(std::uint32_t slots, std::size_t degree) {
  Eliminator el;
  if (degree < 2) return el;
  if (degree > 4) throw DomainError("chord reduction degree too large");
  auto gens = all_gens(slots);
  auto rels = base_relations(slots);
  for (std::size_t left = 0; left + 2 <= degree; ++left) {
    std::size_t right = degree - 2 - left;
    std::vector<TnWord> lpads, rpads;
    TnWord scratch;
    pad_words(gens, left, scratch, lpads);
    pad_words(gens, right, scratch, rpads);
    for (const auto& lp : lpads)
      for (const auto& rp : rpads)
        for (const auto& rel : rels) {
          SparseVec v;
          for (const auto& [w, c] : rel) {
            TnWord padded = lp;
            padded.insert(padded.end(), w.begin(), w.end());
            padded.insert(padded.end(), rp.begin(), rp.end());
            v[padded] = c;
          }
          el.insert(std::move(v));
        }
  }
  return el;
}

}  // namespace

TnElement tn_reduce(const TnElement& x) {
  // slices bucketed by lambda power and word length; relations are
  // homogeneous in both
  std::map<std::pair<std::uint32_t, std::size_t>, SparseVec> buckets;
  for (const auto& [w, c] : x.terms())
    for (std::uint32_t k = 0; k < x.order(); ++k)
      if (!c.coeff(k).is_zero()) buckets[{k, w.size()}][w] = c.coeff(k);

  TnElement out(x.slots(), x.order());
  std::map<std::size_t, Eliminator> spans;
  for (auto& [bk, vec] : buckets) {
    auto [k, len] = bk;
    if (len >= 2) {
      auto it = spans.find(len);
      if (it == spans.end())
        it = spans.emplace(len, relation_span(x.slots(), len)).first;
      vec = it->second.reduce(std::move(vec));
    }
    for (const auto& [w, c] : vec) {
      TruncSeries s(x.order());
      s.set_coeff(k, c);
      out.add_term(w, s);
    }
  }
  return out;
}

UEATensor embed_pair(const UEATensor& t, std::uint32_t arity, std::uint32_t i,
                     std::uint32_t j) {
  if (t.arity() != 2) throw DomainError("pair embedding needs arity 2");
  if (i >= j || j >= arity) throw DomainError("bad embedding slots");
  UEATensor out(t.env(), arity, t.order());
  for (const auto& [k, c] : t.terms()) {
    UEATensor::Key key(arity);
    key[i] = k[0];
    key[j] = k[1];
    out.add_term(key, c);
  }
  return out;
}

UEATensor tn_substitute(const EnvPtr& env, const TnElement& x,
                        const DeformedTensor& omega, std::uint32_t order) {
  if (omega.arity() != 2) throw DomainError("omega must have arity 2");
  if (!(omega.flipped() == omega))
    throw DomainError("omega must be symmetric under the Koszul flip");
  const auto& alg = env->algebra();
  for (std::uint32_t i = 0; i < alg.dim(); ++i)
    if (!adjoint_act(alg, i, omega).is_zero())
      throw DomainError("omega must be invariant under the adjoint action");

  UEATensor om = lift_to_uea(env, omega, order);
  std::uint32_t n = x.slots();
  auto placed = [&](std::uint32_t i, std::uint32_t j) {
    return embed_pair(om, n, i - 1, j - 1);
  };

  // the substituted images must satisfy the chord relations; locality is
  // automatic for a degree-0 tensor, the triple relations need invariance
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = i + 1; j <= n; ++j)
      for (std::uint32_t k = j + 1; k <= n; ++k) {
        UEATensor a = placed(i, j);
        UEATensor bc = placed(i, k) + placed(j, k);
        if (!(a.mul(bc) - bc.mul(a)).is_zero())
          throw Error("substituted chord relation failed");
      }

  UEATensor out(env, n, order);
  for (const auto& [w, c] : x.terms()) {
    UEATensor acc = UEATensor::unit(env, n, order);
    for (const auto& g : w) acc = acc.mul(placed(g.first, g.second));
    out = out + acc.scaled(c);
  }
  return out;
}

VermaTensor beta_map(const VermaTensor& v, std::uint32_t slot) {
  if (slot + 1 >= v.arity()) throw DomainError("bad braiding slot");
  const auto& dbl = v.dbl();
  UEATensor om = lift_to_uea(dbl->env(), dbl->structure().omega, v.order());
  UEATensor half = embed_pair(om, v.arity(), slot, slot + 1)
                       .scaled(TruncSeries::lambda(v.order())
                                   .scaled(Scalar::rational(1, 2)));
  return v.apply(half.exp()).flipped(slot);
}

namespace {

TnElement order2_associator(std::uint32_t order, const Scalar& c,
                            bool inverse) {
  TruncSeries one = TruncSeries::constant(order, Scalar::integer(1));
  TnElement t12 = TnElement::gen(3, order, 1, 2, one);
  TnElement t23 = TnElement::gen(3, order, 2, 3, one);
  TnElement k = t12.mul(t23) - t23.mul(t12);
  Scalar coeff = inverse ? Scalar::integer(0) - c : c;
  return TnElement::unit(3, order) +
         k.scaled(TruncSeries::lambda(order, 2).scaled(coeff));
}

}  // namespace

UEATensor compute_J(const DblPtr& dbl, std::uint32_t order,
                    std::optional<Scalar> assoc_c) {
  if (order == 0) throw DomainError("bad series order");
  if (order > 3 || (order == 3 && !assoc_c))
    throw DomainError("truncation order beyond the available associator");
  const auto& env = dbl->env();
  const auto& omega = dbl->structure().omega;

  VermaTensor v = VermaTensor::vacuum(
      dbl, {Side::plus, Side::plus, Side::minus, Side::minus}, order);

  bool with_assoc = assoc_c && order >= 3;
  auto apply_assoc = [&](const std::vector<std::vector<std::uint32_t>>& legs,
                         bool inverse) {
    TnElement phi = order2_associator(order, *assoc_c, inverse);
    v = v.apply(tn_substitute(env, phi.substitute_legs(legs, 4), omega, order));
  };

  if (with_assoc) {
    apply_assoc({{1}, {2}, {3, 4}}, false);
    apply_assoc({{2}, {3}, {4}}, true);
  }
  v = beta_map(v, 1);
  if (with_assoc) {
    apply_assoc({{2}, {3}, {4}}, false);
    apply_assoc({{1}, {2}, {3, 4}}, true);
  }

  if (v.sides() != std::vector<Side>{Side::plus, Side::minus, Side::plus,
                                     Side::minus})
    throw Error("braiding left the module sides misaligned");

  // pull back through the module isomorphism on each adjacent pair
  std::map<std::pair<Word, Word>, UEAElement> memo;
  auto pulled = [&](const Word& a, const Word& b) -> const UEAElement& {
    auto key = std::make_pair(a, b);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    VermaTensor pair(dbl, {Side::plus, Side::minus}, order);
    pair.add_term({a, b}, TruncSeries::constant(order, Scalar::integer(1)));
    return memo.emplace(key, dbl->phi_inv(pair)).first->second;
  };

  UEATensor j(env, 2, order);
  std::size_t word_cap = 2 * static_cast<std::size_t>(order);
  for (const auto& [k, c] : v.terms()) {
    if (std::max({k[0].size(), k[1].size(), k[2].size(), k[3].size()}) >
        word_cap)
      continue;
    const UEAElement& left = pulled(k[0], k[1]);
    const UEAElement& right = pulled(k[2], k[3]);
    for (const auto& [wl, cl] : left.terms())
      for (const auto& [wr, cr] : right.terms())
        j.add_term({wl, wr}, c * cl * cr);
  }

  UEATensor unit_part(env, 2, order);
  for (const auto& [k, c] : j.terms()) {
    if (!c.coeff(0).is_zero())
      unit_part.add_term(k, TruncSeries::constant(order, c.coeff(0)));
  }
  if (!(unit_part == UEATensor::unit(env, 2, order)))
    throw Error("twist has a nonunit constant term");
  return j;
}

UEATensor compute_J(const ColorLieBialgebra& b, std::uint32_t order,
                    std::optional<Scalar> assoc_c) {
  return compute_J(make_double_uea(b), order, assoc_c);
}

namespace {

UEATensor as_arity1(const EnvPtr& env, const UEAElement& a) {
  UEATensor t(env, 1, a.order());
  for (const auto& [w, c] : a.terms()) t.add_term({w}, c);
  return t;
}

UEAElement uea_inverse(const EnvPtr& env, const UEAElement& a) {
  return as_arity1(env, a).inverse().collapse();
}

}  // namespace

UEATensor QuasiHopfData::coproduct(const UEAElement& a) const {
  return Jinv.mul(env->coproduct0(a)).mul(J);
}

UEAElement QuasiHopfData::antipode(const UEAElement& a) const {
  return env->mul(env->mul(Qinv, env->antipode0(a)), Q);
}

TruncSeries QuasiHopfData::counit(const UEAElement& a) const {
  return env->counit(a);
}

UEATensor QuasiHopfData::assoc(
    const std::vector<std::vector<std::uint32_t>>& legs,
    std::uint32_t arity) const {
  if (!assoc_c)
    return UEATensor::unit(env, arity, order);
  TnElement phi = order2_associator(order, *assoc_c, false);
  return tn_substitute(env, phi.substitute_legs(legs, arity), omega, order);
}

QuasiHopfData twist_hopf(const EnvPtr& env, const UEATensor& J,
                         const DeformedTensor& omega,
                         std::optional<Scalar> assoc_c) {
  if (J.arity() != 2) throw DomainError("twist must have arity 2");
  std::uint32_t order = J.order();
  UEATensor jinv = J.inverse();

  UEATensor om = lift_to_uea(env, omega, order);
  UEATensor braid_core =
      om.scaled(TruncSeries::lambda(order).scaled(Scalar::rational(1, 2)))
          .exp();
  UEATensor r = J.flipped(0).inverse().mul(braid_core).mul(J);

  UEAElement q_el(order);
  for (const auto& [k, c] : J.terms()) {
    UEAElement first(order);
    first.add_term(k[0], Scalar::integer(1));
    UEAElement second(order);
    second.add_term(k[1], Scalar::integer(1));
    q_el = q_el + env->mul(env->antipode0(first), second).scaled(c);
  }
  UEAElement q_inv = uea_inverse(env, q_el);

  return QuasiHopfData{env,     order, J,    std::move(jinv), std::move(r),
                       omega,   assoc_c,     q_el,            q_inv};
}

UEAElement contract_counit(const UEATensor& t, std::uint32_t slot) {
  if (t.arity() != 2) throw DomainError("counit contraction needs arity 2");
  if (slot >= 2) throw DomainError("bad contraction slot");
  UEAElement out(t.order());
  for (const auto& [k, c] : t.terms())
    if (k[slot].empty()) out.add_term(k[1 - slot], c);
  return out;
}

namespace {

std::string word_name(const BasisPtr& basis, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ".";
    s += basis->name(w[i]);
  }
  return s;
}

}  // namespace

Report check_quasitriangular(const QuasiHopfData& q, std::size_t word_bound) {
  Report rep;
  const auto& env = q.env;
  std::uint32_t order = q.order;
  auto expand = [&](const Word& w) {
    return q.coproduct(env->from_word(w, order));
  };

  for (const auto& w : env->normal_words_upto(word_bound)) {
    UEAElement a = env->from_word(w, order);
    UEATensor d = q.coproduct(a);
    // R conjugates the coproduct into its opposite: R d(a) = d^op(a) R.
    // With d = J^{-1} d0 J and R normalized to 1 + lambda r, the reversed
    // reading fails already at lambda^1 with residual -2 delta(a).
    UEATensor lhs = q.R.mul(d);
    UEATensor rhs = d.flipped(0).mul(q.R);
    if (!(lhs == rhs))
      rep.add("r-coproduct-exchange", word_name(env->basis(), w),
              (lhs - rhs).str());

    UEATensor phi = q.assoc({{1}, {2}, {3}}, 3);
    UEATensor co_l = phi.mul(d.apply_slot_expansion(0, expand));
    UEATensor co_r = d.apply_slot_expansion(1, expand).mul(phi);
    if (!(co_l == co_r))
      rep.add("coassociativity", word_name(env->basis(), w),
              (co_l - co_r).str());
  }

  UEATensor r13 = embed_pair(q.R, 3, 0, 2);
  UEATensor r23 = embed_pair(q.R, 3, 1, 2);
  UEATensor r12 = embed_pair(q.R, 3, 0, 1);

  UEATensor lhs1 = q.R.apply_slot_expansion(0, expand);
  UEATensor rhs1 = q.assoc({{3}, {1}, {2}}, 3)
                       .mul(r13)
                       .mul(q.assoc({{1}, {3}, {2}}, 3).inverse())
                       .mul(r23)
                       .mul(q.assoc({{1}, {2}, {3}}, 3));
  if (!(lhs1 == rhs1))
    rep.add("coproduct-identity-left", "R", (lhs1 - rhs1).str());

  UEATensor lhs2 = q.R.apply_slot_expansion(1, expand);
  UEATensor rhs2 = q.assoc({{2}, {3}, {1}}, 3)
                       .inverse()
                       .mul(r13)
                       .mul(q.assoc({{2}, {1}, {3}}, 3))
                       .mul(r12)
                       .mul(q.assoc({{1}, {2}, {3}}, 3).inverse());
  if (!(lhs2 == rhs2))
    rep.add("coproduct-identity-right", "R", (lhs2 - rhs2).str());

  UEAElement one = env->one(order);
  for (std::uint32_t s = 0; s < 2; ++s) {
    if (!(contract_counit(q.R, s) == one))
      rep.add("r-counit", s == 0 ? "left" : "right");
    if (!(contract_counit(q.J, s) == one))
      rep.add("twist-counit", s == 0 ? "left" : "right");
  }
  return rep;
}

Report check_classical_limit(const QuasiHopfData& q,
                             const DoubleStructure& d) {
  Report rep;
  const auto& env = q.env;
  std::uint32_t order = q.order;
  if (order < 2) throw DomainError("classical limit needs order at least 2");
  if (!env->basis()->same_content(*d.bialgebra.algebra.basis()))
    throw DomainError("classical data over a different basis");

  for (std::uint32_t i = 0; i < env->basis()->size(); ++i) {
    UEATensor diff = q.coproduct(env->gen(i, order));
    diff = diff - diff.flipped(0);
    std::map<UEATensor::Key, Scalar> expected;
    for (const auto& [jk, c] : d.bialgebra.cobracket[i])
      expected[{{jk.first}, {jk.second}}] = c;
    bool match = true;
    for (const auto& [k, c] : diff.terms()) {
      if (!c.coeff(0).is_zero()) match = false;
      Scalar want = Scalar::integer(0);
      auto it = expected.find(k);
      if (it != expected.end()) want = it->second;
      if (!(c.coeff(1) - want).is_zero()) match = false;
      expected.erase(k);
    }
    for (const auto& [k, c] : expected)
      if (!c.is_zero()) match = false;
    if (!match)
      rep.add("classical-cobracket", env->basis()->name(i), diff.str());
  }

  std::map<UEATensor::Key, Scalar> rexp;
  for (const auto& [k, c] : d.r.terms()) rexp[{{k[0]}, {k[1]}}] = c.coeff(0);
  bool rmatch = true;
  for (const auto& [k, c] : q.R.terms()) {
    Scalar want0 = (k[0].empty() && k[1].empty()) ? Scalar::integer(1)
                                                  : Scalar::integer(0);
    if (!(c.coeff(0) - want0).is_zero()) rmatch = false;
    Scalar want1 = Scalar::integer(0);
    auto it = rexp.find(k);
    if (it != rexp.end()) want1 = it->second;
    if (!(c.coeff(1) - want1).is_zero()) rmatch = false;
    rexp.erase(k);
  }
  for (const auto& [k, c] : rexp)
    if (!c.is_zero()) rmatch = false;
  if (!rmatch) rep.add("classical-rmatrix", "R", q.R.str());
  return rep;
}

UEAElement polarize(const UEATensor& R,
                    const std::function<TruncSeries(const Word&)>& functional,
                    Side side) {
  if (R.arity() != 2) throw DomainError("polarization needs arity 2");
  std::uint32_t keep = side == Side::plus ? 0 : 1;
  UEAElement out(R.order());
  for (const auto& [k, c] : R.terms())
    out.add_term(k[keep], c * functional(k[1 - keep]));
  return out;
}

namespace {

TnElement exp_strand(std::uint32_t i, std::uint32_t j) {
  TruncSeries half = TruncSeries::lambda(3).scaled(Scalar::rational(1, 2));
  return TnElement::gen(3, 3, i, j, half).exp();
}

TnElement exp_strand_sum(std::uint32_t i1, std::uint32_t j1, std::uint32_t i2,
                         std::uint32_t j2) {
  TruncSeries half = TruncSeries::lambda(3).scaled(Scalar::rational(1, 2));
  return (TnElement::gen(3, 3, i1, j1, half) +
          TnElement::gen(3, 3, i2, j2, half))
      .exp();
}

}  // namespace

TnElement pentagon_defect(const Scalar& c) {
  TnElement phi = order2_associator(3, c, false);
  auto legs = [&](std::vector<std::vector<std::uint32_t>> g) {
    return phi.substitute_legs(g, 4);
  };
  TnElement lhs = legs({{1}, {2}, {3, 4}}).mul(legs({{1, 2}, {3}, {4}}));
  TnElement rhs = legs({{2}, {3}, {4}})
                      .mul(legs({{1}, {2, 3}, {4}}))
                      .mul(legs({{1}, {2}, {3}}));
  return tn_reduce(lhs - rhs);
}

TnElement hexagon_defect(int which, const Scalar& c) {
  TnElement phi = order2_associator(3, c, false);
  TnElement phi_inv = order2_associator(3, c, true);
  auto legs = [](const TnElement& x,
                 std::vector<std::vector<std::uint32_t>> g) {
    return x.substitute_legs(g, 3);
  };
  if (which == 1) {
    TnElement lhs = exp_strand_sum(1, 3, 2, 3);
    TnElement rhs = legs(phi, {{3}, {1}, {2}})
                        .mul(exp_strand(1, 3))
                        .mul(legs(phi_inv, {{1}, {3}, {2}}))
                        .mul(exp_strand(2, 3))
                        .mul(phi);
    return tn_reduce(lhs - rhs);
  }
  if (which == 2) {
    TnElement lhs = exp_strand_sum(1, 2, 1, 3);
    TnElement rhs = legs(phi_inv, {{2}, {3}, {1}})
                        .mul(exp_strand(1, 3))
                        .mul(legs(phi, {{2}, {1}, {3}}))
                        .mul(exp_strand(1, 2))
                        .mul(phi_inv);
    return tn_reduce(lhs - rhs);
  }
  throw DomainError("hexagon index must be 1 or 2");
}

AssociatorOrder2 solve_associator_order2() {
  Scalar zero = Scalar::integer(0);
  Scalar one = Scalar::integer(1);
  if (!pentagon_defect(zero).is_zero() || !pentagon_defect(one).is_zero())
    throw Error("pentagon depends on the order-2 coefficient");

  std::optional<Scalar> solved;
  for (int which : {1, 2}) {
    TnElement at0 = hexagon_defect(which, zero);
    TnElement slope = hexagon_defect(which, one) - at0;
    for (const auto& [w, s] : slope.terms())
      for (std::uint32_t k = 0; k < s.order(); ++k) {
        Scalar sk = s.coeff(k);
        Scalar ak = at0.coeff(w).coeff(k);
        if (sk.is_zero()) {
          if (!ak.is_zero())
            throw Error("hexagon system has no solution");
          continue;
        }
        Scalar cand = (zero - ak) * sk.inverse();
        if (!solved)
          solved = cand;
        else if (!(*solved - cand).is_zero())
          throw Error("hexagon system is inconsistent");
      }
    // residual terms outside the slope support must vanish at the solution
    for (const auto& [w, s] : at0.terms())
      for (std::uint32_t k = 0; k < s.order(); ++k)
        if (!s.coeff(k).is_zero() && slope.coeff(w).coeff(k).is_zero())
          throw Error("hexagon system has no solution");
  }
  if (!solved) throw Error("hexagon system does not determine a coefficient");

  AssociatorOrder2 out{*solved, pentagon_defect(*solved),
                       hexagon_defect(1, *solved), hexagon_defect(2, *solved)};
  if (!out.pentagon_residual.is_zero() || !out.hexagon1_residual.is_zero() ||
      !out.hexagon2_residual.is_zero())
    throw Error("associator residuals survive at the solved coefficient");
  return out;
}

TriangularQuantization quantize_triangular(const ColorLieBialgebra& b,
                                           std::uint32_t order,
                                           std::optional<Scalar> assoc_c) {
  auto cls = classify_r(b);
  if (cls.cls != RClass::triangular)
    throw DomainError("triangular classical structure required");
  const DeformedTensor& r = *b.rmatrix;

  DblPtr dbl = make_double_uea(b);
  UEATensor j_double = compute_J(dbl, order, assoc_c);

  EnvPtr env = make_envelope(b.algebra);
  const auto& alg = b.algebra;
  std::uint32_t n = static_cast<std::uint32_t>(alg.dim());

  // projection: identity on the base, duals contracted through r
  std::vector<std::map<std::uint32_t, Scalar>> proj(2 * n);
  for (std::uint32_t i = 0; i < n; ++i) proj[i][i] = Scalar::integer(1);
  for (const auto& [k, c] : r.terms()) {
    auto& row = proj[n + k[0]];
    auto it = row.find(k[1]);
    if (it == row.end())
      row.emplace(k[1], c.coeff(0));
    else
      it->second = it->second + c.coeff(0);
  }

  const auto& dalg = dbl->structure().bialgebra.algebra;
  auto as_tensor = [&](const std::map<std::uint32_t, Scalar>& row) {
    DeformedTensor t(alg.basis(), 1, 1);
    for (const auto& [i, c] : row) t.add_term({i}, c);
    return t;
  };
  for (std::uint32_t u = 0; u < 2 * n; ++u)
    for (std::uint32_t v = 0; v < 2 * n; ++v) {
      DeformedTensor lhs(alg.basis(), 1, 1);
      for (const auto& [k, c] : dalg.bracket_terms(u, v)) {
        DeformedTensor img = as_tensor(proj[k]);
        lhs += img.scaled(c);
      }
      DeformedTensor rhs = alg.bracket(as_tensor(proj[u]), as_tensor(proj[v]));
      if (!(lhs == rhs))
        throw Error("double projection is not a homomorphism");
    }

  std::vector<UEAElement> letter(2 * n);
  for (std::uint32_t i = 0; i < 2 * n; ++i) {
    UEAElement e(order);
    for (const auto& [p, c] : proj[i]) e.add_term({p}, c);
    letter[i] = e;
  }
  std::map<Word, UEAElement> memo;
  auto push = [&](const Word& w) -> const UEAElement& {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    UEAElement acc = env->one(order);
    for (auto x : w) acc = env->mul(acc, letter[x]);
    return memo.emplace(w, std::move(acc)).first->second;
  };

  UEATensor j(env, 2, order);
  for (const auto& [k, c] : j_double.terms()) {
    const UEAElement& a = push(k[0]);
    const UEAElement& bb = push(k[1]);
    for (const auto& [wa, ca] : a.terms())
      for (const auto& [wb, cb] : bb.terms()) j.add_term({wa, wb}, c * ca * cb);
  }

  DeformedTensor omega_base = r;
  omega_base += r.flipped();
  UEATensor braid_core =
      lift_to_uea(env, omega_base, order)
          .scaled(TruncSeries::lambda(order).scaled(Scalar::rational(1, 2)))
          .exp();
  UEATensor rmat = j.flipped(0).inverse().mul(braid_core).mul(j);
  return TriangularQuantization{env, j, rmat};
}

}  // namespace cq
