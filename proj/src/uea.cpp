#include "colorquant/uea.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cq {

namespace {

constexpr std::size_t kRewriteGuard = 4'000'000;

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string word_str(const GradedBasis& b, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ".";
    out += b.name(w[i]);
  }
  return out;
}

}  // namespace

void UEAElement::add_term(const Word& w, const TruncSeries& c) {
  if (c.order() != order_) throw OrderMismatch("term order differs");
  if (c.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

void UEAElement::add_term(const Word& w, const Scalar& c) {
  add_term(w, TruncSeries::constant(order_, c));
}

TruncSeries UEAElement::coeff(const Word& w) const {
  auto it = terms_.find(w);
  if (it == terms_.end()) return TruncSeries::constant(order_, Scalar::integer(0));
  return it->second;
}

UEAElement UEAElement::operator+(const UEAElement& o) const {
  if (order_ != o.order_) throw OrderMismatch("element orders differ");
  UEAElement out = *this;
  for (const auto& [w, c] : o.terms_) out.add_term(w, c);
  return out;
}

UEAElement UEAElement::operator-(const UEAElement& o) const {
  return *this + o.scaled(Scalar::integer(-1));
}

UEAElement UEAElement::scaled(const TruncSeries& c) const {
  UEAElement out(order_);
  for (const auto& [w, v] : terms_) out.add_term(w, v * c);
  return out;
}

UEAElement UEAElement::scaled(const Scalar& c) const {
  return scaled(TruncSeries::constant(order_, c));
}

bool UEAElement::operator==(const UEAElement& o) const {
  return order_ == o.order_ && terms_ == o.terms_;
}

UEAElement Envelope::one(std::uint32_t order) const {
  UEAElement out(order);
  out.add_term({}, Scalar::integer(1));
  return out;
}

UEAElement Envelope::gen(std::uint32_t i, std::uint32_t order) const {
  if (i >= basis()->size()) throw DomainError("generator index out of range");
  UEAElement out(order);
  out.add_term({i}, Scalar::integer(1));
  return out;
}

UEAElement Envelope::normalize(const Word& w, const TruncSeries& c,
                               const std::vector<std::uint32_t>& rank,
                               RewriteStrategy st) const {
  const auto& b = *basis();
  const auto& cx = *ctx();
  if (!rank.empty() && rank.size() != b.size())
    throw DomainError("rank vector size mismatch");
  auto pos = [&](std::uint32_t i) { return rank.empty() ? i : rank[i]; };

  UEAElement out(c.order());
  std::deque<std::pair<Word, TruncSeries>> work;
  work.emplace_back(w, c);
  std::size_t steps = 0;
  while (!work.empty()) {
    if (++steps > kRewriteGuard)
      throw Error("straightening exceeded the step guard");
    auto [word, coeff] = work.front();
    work.pop_front();
    if (coeff.is_zero()) continue;

    std::optional<std::size_t> critical;
    for (std::size_t p = 0; p + 1 < word.size(); ++p) {
      std::uint32_t a = word[p], bb = word[p + 1];
      bool descending = pos(a) > pos(bb);
      bool odd_square = (a == bb) && cx.is_odd(b.degree(a));
      if (descending || odd_square) {
        critical = p;
        if (st == RewriteStrategy::leftmost) break;
      }
    }
    if (!critical) {
      out.add_term(word, coeff);
      continue;
    }
    std::size_t p = *critical;
    std::uint32_t a = word[p], bb = word[p + 1];
    if (a == bb) {
      // odd square -> (1/2)[x,x]
      for (const auto& [k, v] : alg_.bracket_terms(a, a)) {
        Word shorter;
        shorter.reserve(word.size() - 1);
        shorter.insert(shorter.end(), word.begin(), word.begin() + p);
        shorter.push_back(k);
        shorter.insert(shorter.end(), word.begin() + p + 2, word.end());
        work.emplace_back(shorter,
                          coeff.scaled(v * Scalar::rational(1, 2)));
      }
      continue;
    }
    Word swapped = word;
    std::swap(swapped[p], swapped[p + 1]);
    work.emplace_back(swapped,
                      coeff.scaled(cx.eps_of(b.degree(a), b.degree(bb))));
    for (const auto& [k, v] : alg_.bracket_terms(a, bb)) {
      Word shorter;
      shorter.reserve(word.size() - 1);
      shorter.insert(shorter.end(), word.begin(), word.begin() + p);
      shorter.push_back(k);
      shorter.insert(shorter.end(), word.begin() + p + 2, word.end());
      work.emplace_back(shorter, coeff.scaled(v));
    }
  }
  return out;
}

UEAElement Envelope::from_word(const Word& w, std::uint32_t order,
                               RewriteStrategy st) const {
  return normalize(w, TruncSeries::constant(order, Scalar::integer(1)), {}, st);
}

UEAElement Envelope::mul(const UEAElement& a, const UEAElement& b,
                         RewriteStrategy st) const {
  if (a.order() != b.order()) throw OrderMismatch("element orders differ");
  UEAElement out(a.order());
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      UEAElement part = normalize(concat(wa, wb), ca * cb, {}, st);
      out = out + part;
    }
  return out;
}

GroupElement Envelope::word_degree(const Word& w) const {
  const auto& group = ctx()->group;
  GroupElement d = group.zero();
  for (std::uint32_t i : w) d = group.add(d, basis()->degree(i));
  return d;
}

bool Envelope::is_normal_word(const Word& w) const {
  const auto& b = *basis();
  const auto& cx = *ctx();
  for (std::size_t p = 0; p + 1 < w.size(); ++p) {
    if (w[p] > w[p + 1]) return false;
    if (w[p] == w[p + 1] && cx.is_odd(b.degree(w[p]))) return false;
  }
  return true;
}

std::vector<Word> Envelope::normal_words_upto(std::size_t max_len) const {
  std::vector<Word> out;
  Word cur;
  std::function<void(std::uint32_t)> rec = [&](std::uint32_t start) {
    out.push_back(cur);
    if (cur.size() == max_len) return;
    for (std::uint32_t i = start; i < basis()->size(); ++i) {
      bool odd = ctx()->is_odd(basis()->degree(i));
      if (odd && !cur.empty() && cur.back() == i) continue;
      cur.push_back(i);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

TruncSeries Envelope::counit(const UEAElement& a) const {
  return a.coeff({});
}

UEAElement Envelope::antipode0(const UEAElement& a) const {
  const auto& b = *basis();
  const auto& cx = *ctx();
  UEAElement out(a.order());
  for (const auto& [w, c] : a.terms()) {
    Scalar sign = Scalar::integer(w.size() % 2 == 0 ? 1 : -1);
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j < w.size(); ++j)
        sign *= cx.eps_of(b.degree(w[i]), b.degree(w[j]));
    Word rev(w.rbegin(), w.rend());
    out = out + normalize(rev, c.scaled(sign));
  }
  return out;
}

UEATensor Envelope::coproduct0(const UEAElement& a) const {
  EnvPtr self = shared_from_this();
  UEATensor out(self, 2, a.order());
  for (const auto& [w, c] : a.terms()) {
    UEATensor part = UEATensor::unit(self, 2, a.order());
    for (std::uint32_t letter : w) {
      UEATensor prim(self, 2, a.order());
      prim.add_term({{letter}, {}}, Scalar::integer(1));
      prim.add_term({{}, {letter}}, Scalar::integer(1));
      part = part.mul(prim);
    }
    out = out + part.scaled(c);
  }
  return out;
}

std::string Envelope::str(const UEAElement& a) const {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*" << word_str(*basis(), w);
  }
  return os.str();
}

EnvPtr make_envelope(ColorLieAlgebra alg) {
  return std::make_shared<const Envelope>(std::move(alg));
}

UEATensor::UEATensor(EnvPtr env, std::uint32_t arity, std::uint32_t order)
    : env_(std::move(env)), arity_(arity), order_(order) {
  if (arity_ == 0) throw DomainError("tensor arity must be positive");
}

UEATensor UEATensor::unit(EnvPtr env, std::uint32_t arity,
                          std::uint32_t order) {
  UEATensor out(std::move(env), arity, order);
  out.add_term(Key(arity), Scalar::integer(1));
  return out;
}

void UEATensor::add_term(const Key& k, const TruncSeries& c) {
  if (k.size() != arity_) throw DomainError("key arity mismatch");
  if (c.order() != order_) throw OrderMismatch("term order differs");
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

void UEATensor::add_term(const Key& k, const Scalar& c) {
  add_term(k, TruncSeries::constant(order_, c));
}

TruncSeries UEATensor::coeff(const Key& k) const {
  auto it = terms_.find(k);
  if (it == terms_.end()) return TruncSeries::constant(order_, Scalar::integer(0));
  return it->second;
}

UEATensor UEATensor::operator+(const UEATensor& o) const {
  if (arity_ != o.arity_ || order_ != o.order_)
    throw DomainError("tensor shape mismatch");
  UEATensor out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k, c);
  return out;
}

UEATensor UEATensor::operator-(const UEATensor& o) const {
  return *this + o.scaled(Scalar::integer(-1));
}

UEATensor UEATensor::scaled(const TruncSeries& c) const {
  UEATensor out(env_, arity_, order_);
  for (const auto& [k, v] : terms_) out.add_term(k, v * c);
  return out;
}

UEATensor UEATensor::scaled(const Scalar& c) const {
  return scaled(TruncSeries::constant(order_, c));
}

bool UEATensor::operator==(const UEATensor& o) const {
  return arity_ == o.arity_ && order_ == o.order_ && terms_ == o.terms_;
}

UEATensor UEATensor::mul(const UEATensor& o) const {
  if (arity_ != o.arity_ || order_ != o.order_)
    throw DomainError("tensor shape mismatch");
  const auto& cx = *env_->ctx();
  UEATensor out(env_, arity_, order_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      Scalar sign = Scalar::integer(1);
      for (std::uint32_t t = 1; t < arity_; ++t)
        for (std::uint32_t s = 0; s < t; ++s)
          sign *= cx.eps_of(env_->word_degree(ka[t]),
                            env_->word_degree(kb[s]));
      // slotwise straightening can fan out; distribute the products
      std::vector<UEAElement> slots;
      slots.reserve(arity_);
      bool dead = false;
      for (std::uint32_t s = 0; s < arity_ && !dead; ++s) {
        UEAElement norm = env_->normalize(
            concat(ka[s], kb[s]), TruncSeries::constant(order_, Scalar::integer(1)));
        if (norm.is_zero()) dead = true;
        slots.push_back(std::move(norm));
      }
      if (dead) continue;
      TruncSeries base = ca * cb;
      base = base.scaled(sign);
      std::function<void(std::uint32_t, Key&, const TruncSeries&)> dist =
          [&](std::uint32_t s, Key& key, const TruncSeries& acc) {
            if (s == arity_) {
              out.add_term(key, acc);
              return;
            }
            for (const auto& [w, c] : slots[s].terms()) {
              key.push_back(w);
              dist(s + 1, key, acc * c);
              key.pop_back();
            }
          };
      Key key;
      key.reserve(arity_);
      dist(0, key, base);
    }
  return out;
}

UEATensor UEATensor::flipped(std::uint32_t slot) const {
  if (slot + 1 >= arity_) throw DomainError("flip slot out of range");
  const auto& cx = *env_->ctx();
  UEATensor out(env_, arity_, order_);
  for (const auto& [k, c] : terms_) {
    Key swapped = k;
    std::swap(swapped[slot], swapped[slot + 1]);
    Scalar sign =
        cx.eps_of(env_->word_degree(k[slot]), env_->word_degree(k[slot + 1]));
    out.add_term(swapped, c.scaled(sign));
  }
  return out;
}

UEATensor UEATensor::inverse() const {
  UEATensor u = unit(env_, arity_, order_);
  UEATensor d = u - *this;
  // valid iff lambda^0 part is exactly the unit, i.e. d has no lambda^0 part
  for (const auto& [k, c] : d.terms())
    if (!c.coeff(0).is_zero())
      throw DomainError("tensor inverse requires unit lambda^0 part");
  UEATensor out = u;
  UEATensor power = u;
  for (std::uint32_t k = 1; k < order_; ++k) {
    power = power.mul(d);
    if (power.is_zero()) break;
    out = out + power;
  }
  return out;
}

UEATensor UEATensor::exp() const {
  for (const auto& [k, c] : terms_)
    if (!c.coeff(0).is_zero())
      throw DomainError("tensor exp requires zero lambda^0 part");
  UEATensor out = unit(env_, arity_, order_);
  UEATensor power = out;
  Scalar factorial = Scalar::integer(1);
  for (std::uint32_t k = 1; k < order_; ++k) {
    power = power.mul(*this);
    if (power.is_zero()) break;
    factorial *= Scalar::integer(static_cast<long>(k));
    out = out + power.scaled(factorial.inverse());
  }
  return out;
}

UEATensor UEATensor::apply_slot_expansion(
    std::uint32_t slot,
    const std::function<UEATensor(const Word&)>& fn) const {
  if (slot >= arity_) throw DomainError("slot out of range");
  UEATensor probe = fn(Word{});
  std::uint32_t out_arity = arity_ - 1 + probe.arity();
  UEATensor out(env_, out_arity, order_);
  for (const auto& [k, c] : terms_) {
    UEATensor image = fn(k[slot]);
    if (image.arity() != probe.arity() || image.order() != order_)
      throw DomainError("slot expansion produced inconsistent shape");
    for (const auto& [ik, ic] : image.terms()) {
      Key key;
      key.reserve(out_arity);
      for (std::uint32_t s = 0; s < slot; ++s) key.push_back(k[s]);
      for (const auto& w : ik) key.push_back(w);
      for (std::uint32_t s = slot + 1; s < arity_; ++s) key.push_back(k[s]);
      out.add_term(key, c * ic);
    }
  }
  return out;
}

UEAElement UEATensor::collapse() const {
  UEAElement out(order_);
  for (const auto& [k, c] : terms_) {
    Word all;
    for (const auto& w : k) all.insert(all.end(), w.begin(), w.end());
    out = out + env_->normalize(all, c);
  }
  return out;
}

GroupElement UEATensor::key_degree(const Key& k) const {
  const auto& group = env_->ctx()->group;
  GroupElement d = group.zero();
  for (const auto& w : k) d = group.add(d, env_->word_degree(w));
  return d;
}

bool UEATensor::is_degree_zero() const {
  const auto& group = env_->ctx()->group;
  for (const auto& [k, c] : terms_)
    if (!(key_degree(k) == group.zero())) return false;
  return true;
}

std::string UEATensor::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*";
    for (std::uint32_t s = 0; s < arity_; ++s) {
      if (s) os << "(x)";
      os << word_str(*env_->basis(), k[s]);
    }
  }
  return os.str();
}

UEATensor lift_to_uea(EnvPtr env, const DeformedTensor& t,
                      std::uint32_t order) {
  if (!t.basis()->same_content(*env->basis()))
    throw DomainError("tensor basis differs from the envelope basis");
  UEATensor out(env, t.arity(), order);
  for (const auto& [k, c] : t.terms()) {
    UEATensor::Key key;
    key.reserve(k.size());
    for (std::uint32_t i : k) key.push_back(Word{i});
    out.add_term(key, c.resized(order));
  }
  return out;
}

HopfData default_hopf(EnvPtr env) {
  HopfData h;
  h.coproduct = [env](const UEAElement& a) { return env->coproduct0(a); };
  h.counit = [env](const UEAElement& a) { return env->counit(a); };
  h.antipode = [env](const UEAElement& a) { return env->antipode0(a); };
  return h;
}

Report check_hopf(EnvPtr env, const HopfData& hopf, std::size_t max_len,
                  std::uint32_t order) {
  Report rep;
  const auto& b = *env->basis();
  auto words = env->normal_words_upto(max_len);
  auto delta_slot = [&](const UEATensor& t, std::uint32_t slot) {
    return t.apply_slot_expansion(slot, [&](const Word& w) {
      return hopf.coproduct(env->normalize(
          w, TruncSeries::constant(order, Scalar::integer(1))));
    });
  };
  auto counit_slot = [&](const UEATensor& t, std::uint32_t slot) {
    return t.apply_slot_expansion(slot, [&](const Word& w) {
      UEATensor image(env, 1, order);
      TruncSeries c =
          hopf.counit(env->normalize(w, TruncSeries::constant(order, Scalar::integer(1))));
      image.add_term({Word{}}, c);
      return image;
    });
  };
  auto antipode_slot = [&](const UEATensor& t, std::uint32_t slot) {
    return t.apply_slot_expansion(slot, [&](const Word& w) {
      UEAElement s = hopf.antipode(
          env->normalize(w, TruncSeries::constant(order, Scalar::integer(1))));
      UEATensor image(env, 1, order);
      for (const auto& [sw, sc] : s.terms()) image.add_term({sw}, sc);
      return image;
    });
  };

  for (const auto& w : words) {
    UEAElement el = env->from_word(w, order);
    std::string loc = word_str(*env->basis(), w);
    UEATensor d = hopf.coproduct(el);

    if (delta_slot(d, 0) != delta_slot(d, 1))
      rep.add("coassociativity", loc, "the two iterated coproducts differ");

    UEATensor left = counit_slot(d, 0);
    UEATensor right = counit_slot(d, 1);
    // counit laws compare in the one-slot representation
    UEATensor el1(env, 1, order);
    for (const auto& [ew, ec] : el.terms()) el1.add_term({ew}, ec);
    auto drop_empty = [&](const UEATensor& t, bool leading) {
      UEATensor out(env, 1, order);
      for (const auto& [k, c] : t.terms()) out.add_term({k[leading ? 1 : 0]}, c);
      return out;
    };
    if (drop_empty(left, true) != el1)
      rep.add("counit_left", loc, "(counit (x) id) coproduct differs from id");
    if (drop_empty(right, false) != el1)
      rep.add("counit_right", loc, "(id (x) counit) coproduct differs from id");

    UEAElement target = env->one(order).scaled(hopf.counit(el));
    if (antipode_slot(d, 0).collapse() != target)
      rep.add("antipode_left", loc, "mu(S (x) id) coproduct is not counit");
    if (antipode_slot(d, 1).collapse() != target)
      rep.add("antipode_right", loc, "mu(id (x) S) coproduct is not counit");

    if (w.size() == 1) {
      UEATensor prim(env, 2, order);
      prim.add_term({w, {}}, Scalar::integer(1));
      prim.add_term({{}, w}, Scalar::integer(1));
      if (d != prim)
        rep.add("primitivity", loc, "generator is not primitive");
    }
  }
  (void)b;
  return rep;
}

DoubleUEA::DoubleUEA(DoubleStructure dbl)
    : dbl_(std::move(dbl)), env_(make_envelope(dbl_.bialgebra.algebra)) {
  std::uint32_t n = dbl_.dim_plus;
  std::uint32_t total = static_cast<std::uint32_t>(env_->basis()->size());
  plus_rank_.resize(total);
  minus_rank_.resize(total);
  for (std::uint32_t i = 0; i < total; ++i) {
    minus_rank_[i] = i;
    plus_rank_[i] = i < n ? i + (total - n) : i - n;
  }
}

bool DoubleUEA::kills_vacuum(std::uint32_t letter, Side side) const {
  return side == Side::plus ? letter < dbl_.dim_plus
                            : letter >= dbl_.dim_plus;
}

const std::vector<std::uint32_t>& DoubleUEA::rank_for(Side side) const {
  return side == Side::plus ? plus_rank_ : minus_rank_;
}

VermaElement DoubleUEA::vacuum(Side side, std::uint32_t order) const {
  return VermaElement{side, env_->one(order)};
}

VermaElement DoubleUEA::act(const Word& w, const VermaElement& v) const {
  VermaElement out{v.side, env_->zero(v.el.order())};
  for (const auto& [vw, vc] : v.el.terms()) {
    UEAElement norm = env_->normalize(concat(w, vw), vc, rank_for(v.side));
    for (const auto& [nw, nc] : norm.terms()) {
      bool killed = false;
      for (std::uint32_t letter : nw)
        if (kills_vacuum(letter, v.side)) {
          killed = true;
          break;
        }
      if (!killed) out.el.add_term(nw, nc);
    }
  }
  return out;
}

VermaElement DoubleUEA::act(const UEAElement& u, const VermaElement& v) const {
  VermaElement out{v.side, env_->zero(v.el.order())};
  for (const auto& [uw, uc] : u.terms()) {
    VermaElement part = act(uw, v);
    out.el = out.el + part.el.scaled(uc);
  }
  return out;
}

VermaTensor DoubleUEA::phi(const UEAElement& u) const {
  DblPtr self = shared_from_this();
  VermaTensor vac =
      VermaTensor::vacuum(self, {Side::plus, Side::minus}, u.order());
  return vac.apply(env_->coproduct0(u));
}

UEAElement DoubleUEA::phi_inv(const VermaTensor& t) const {
  if (t.sides() != std::vector<Side>{Side::plus, Side::minus})
    throw DomainError("inverse expects a plus/minus pair");
  UEAElement out = env_->zero(t.order());
  VermaTensor residual = t;
  std::size_t guard = 0;
  while (!residual.is_zero()) {
    if (++guard > 200000) throw Error("module inverse failed to terminate");
    const VermaTensor::Key* best = nullptr;
    const TruncSeries* best_c = nullptr;
    std::size_t best_len = 0;
    for (const auto& [k, c] : residual.terms()) {
      std::size_t len = k[0].size() + k[1].size();
      if (!best || len > best_len) {
        best = &k;
        best_c = &c;
        best_len = len;
      }
    }
    UEAElement cand = env_->normalize(concat((*best)[0], (*best)[1]), *best_c);
    out = out + cand;
    residual = residual - phi(cand);
  }
  return out;
}

VermaTensor DoubleUEA::verma_coproduct(const VermaElement& v) const {
  DblPtr self = shared_from_this();
  VermaTensor vac =
      VermaTensor::vacuum(self, {v.side, v.side}, v.el.order());
  return vac.apply(env_->coproduct0(v.el));
}

DblPtr make_double_uea(const ColorLieBialgebra& bi) {
  return std::make_shared<const DoubleUEA>(build_double(bi));
}

VermaTensor::VermaTensor(DblPtr dbl, std::vector<Side> sides,
                         std::uint32_t order)
    : dbl_(std::move(dbl)), sides_(std::move(sides)), order_(order) {
  if (sides_.empty()) throw DomainError("tensor arity must be positive");
}

VermaTensor VermaTensor::vacuum(DblPtr dbl, std::vector<Side> sides,
                                std::uint32_t order) {
  VermaTensor out(std::move(dbl), std::move(sides), order);
  out.add_term(Key(out.arity()), TruncSeries::constant(order, Scalar::integer(1)));
  return out;
}

void VermaTensor::add_term(const Key& k, const TruncSeries& c) {
  if (k.size() != sides_.size()) throw DomainError("key arity mismatch");
  if (c.order() != order_) throw OrderMismatch("term order differs");
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

TruncSeries VermaTensor::coeff(const Key& k) const {
  auto it = terms_.find(k);
  if (it == terms_.end()) return TruncSeries::constant(order_, Scalar::integer(0));
  return it->second;
}

VermaTensor VermaTensor::operator+(const VermaTensor& o) const {
  if (sides_ != o.sides_ || order_ != o.order_)
    throw DomainError("tensor shape mismatch");
  VermaTensor out = *this;
  for (const auto& [k, c] : o.terms_) out.add_term(k, c);
  return out;
}

VermaTensor VermaTensor::operator-(const VermaTensor& o) const {
  return *this + o.scaled(TruncSeries::constant(order_, Scalar::integer(-1)));
}

VermaTensor VermaTensor::scaled(const TruncSeries& c) const {
  VermaTensor out(dbl_, sides_, order_);
  for (const auto& [k, v] : terms_) out.add_term(k, v * c);
  return out;
}

bool VermaTensor::operator==(const VermaTensor& o) const {
  return sides_ == o.sides_ && order_ == o.order_ && terms_ == o.terms_;
}

GroupElement VermaTensor::word_degree(const Word& w) const {
  return dbl_->env()->word_degree(w);
}

VermaTensor VermaTensor::apply(const UEATensor& op) const {
  if (op.arity() != arity() || op.order() != order_)
    throw DomainError("operator shape mismatch");
  const auto& env = *dbl_->env();
  const auto& cx = *env.ctx();
  VermaTensor out(dbl_, sides_, order_);
  for (const auto& [ok, oc] : op.terms())
    for (const auto& [mk, mc] : terms_) {
      Scalar sign = Scalar::integer(1);
      for (std::uint32_t t = 1; t < arity(); ++t)
        for (std::uint32_t s = 0; s < t; ++s)
          sign *= cx.eps_of(env.word_degree(ok[t]), word_degree(mk[s]));
      std::vector<VermaElement> slots;
      slots.reserve(arity());
      bool dead = false;
      for (std::uint32_t s = 0; s < arity() && !dead; ++s) {
        VermaElement base{sides_[s], env.zero(order_)};
        base.el.add_term(mk[s], TruncSeries::constant(order_, Scalar::integer(1)));
        VermaElement acted = dbl_->act(ok[s], base);
        if (acted.el.is_zero()) dead = true;
        slots.push_back(std::move(acted));
      }
      if (dead) continue;
      TruncSeries base = (oc * mc).scaled(sign);
      std::function<void(std::uint32_t, Key&, const TruncSeries&)> dist =
          [&](std::uint32_t s, Key& key, const TruncSeries& acc) {
            if (s == arity()) {
              out.add_term(key, acc);
              return;
            }
            for (const auto& [w, c] : slots[s].el.terms()) {
              key.push_back(w);
              dist(s + 1, key, acc * c);
              key.pop_back();
            }
          };
      Key key;
      key.reserve(arity());
      dist(0, key, base);
    }
  return out;
}

VermaTensor VermaTensor::flipped(std::uint32_t slot) const {
  if (slot + 1 >= arity()) throw DomainError("flip slot out of range");
  const auto& cx = *dbl_->env()->ctx();
  std::vector<Side> sides = sides_;
  std::swap(sides[slot], sides[slot + 1]);
  VermaTensor out(dbl_, sides, order_);
  for (const auto& [k, c] : terms_) {
    Key swapped = k;
    std::swap(swapped[slot], swapped[slot + 1]);
    Scalar sign = cx.eps_of(word_degree(k[slot]), word_degree(k[slot + 1]));
    out.add_term(swapped, c.scaled(sign));
  }
  return out;
}

VermaTensor VermaTensor::apply_slot_expansion(
    std::uint32_t slot,
    const std::function<VermaTensor(const Word&)>& fn) const {
  if (slot >= arity()) throw DomainError("slot out of range");
  VermaTensor probe = fn(Word{});
  std::vector<Side> sides;
  for (std::uint32_t s = 0; s < slot; ++s) sides.push_back(sides_[s]);
  for (Side s : probe.sides()) sides.push_back(s);
  for (std::uint32_t s = slot + 1; s < arity(); ++s)
    sides.push_back(sides_[s]);
  VermaTensor out(dbl_, sides, order_);
  for (const auto& [k, c] : terms_) {
    VermaTensor image = fn(k[slot]);
    if (image.sides() != probe.sides() || image.order() != order_)
      throw DomainError("slot expansion produced inconsistent shape");
    for (const auto& [ik, ic] : image.terms()) {
      Key key;
      for (std::uint32_t s = 0; s < slot; ++s) key.push_back(k[s]);
      for (const auto& w : ik) key.push_back(w);
      for (std::uint32_t s = slot + 1; s < arity(); ++s) key.push_back(k[s]);
      out.add_term(key, c * ic);
    }
  }
  return out;
}

std::string VermaTensor::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  const auto& b = *dbl_->env()->basis();
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*";
    for (std::uint32_t s = 0; s < arity(); ++s) {
      if (s) os << "(x)";
      os << word_str(b, k[s]) << (sides_[s] == Side::plus ? "|+>" : "|->");
    }
  }
  return os.str();
}

}  // namespace cq
