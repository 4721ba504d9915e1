#include "colorquant/cartan.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace cq {

namespace {

Rational factorial(std::uint32_t k) {
  Rational r(1);
  for (std::uint32_t i = 2; i <= k; ++i) r *= i;
  return r;
}

GroupElement word_deg(const GradedBasis& b, const FreeWord& w) {
  GroupElement d = b.ctx()->group.zero();
  for (std::uint32_t letter : w) d = b.ctx()->group.add(d, b.degree(letter));
  return d;
}

}  // namespace

void LaurentPoly::insert(std::int64_t e, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

LaurentPoly LaurentPoly::one() { return monomial(0, Scalar::integer(1)); }

LaurentPoly LaurentPoly::monomial(std::int64_t exponent, const Scalar& coeff) {
  LaurentPoly p;
  p.insert(exponent, coeff);
  return p;
}

Scalar LaurentPoly::coeff(std::int64_t exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Scalar() : it->second;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p;
  for (const auto& [e, c] : terms_) p.terms_.emplace(e, -c);
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) insert(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) insert(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly p;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) p.insert(ea + eb, ca * cb);
  return p;
}

LaurentPoly LaurentPoly::scaled(const Scalar& s) const {
  LaurentPoly p;
  for (const auto& [e, c] : terms_) p.insert(e, c * s);
  return p;
}

LaurentPoly LaurentPoly::divided_by(const LaurentPoly& d) const {
  if (d.is_zero()) throw DivisionByZero("division by the zero polynomial");
  if (is_zero()) return {};
  // Shift both to ordinary polynomials and long-divide.
  std::int64_t low_n = terms_.begin()->first;
  std::int64_t low_d = d.terms_.begin()->first;
  std::int64_t deg_n = terms_.rbegin()->first - low_n;
  std::int64_t deg_d = d.terms_.rbegin()->first - low_d;
  if (deg_n < deg_d) throw DomainError("inexact Laurent division");
  std::vector<Scalar> num(deg_n + 1), den(deg_d + 1);
  for (const auto& [e, c] : terms_) num[e - low_n] = c;
  for (const auto& [e, c] : d.terms_) den[e - low_d] = c;
  Scalar lead_inv = den[deg_d].inverse();
  std::vector<Scalar> quo(deg_n - deg_d + 1);
  for (std::int64_t k = deg_n - deg_d; k >= 0; --k) {
    Scalar q = num[k + deg_d] * lead_inv;
    quo[k] = q;
    if (q.is_zero()) continue;
    for (std::int64_t j = 0; j <= deg_d; ++j) num[k + j] -= q * den[j];
  }
  for (const auto& c : num)
    if (!c.is_zero()) throw DomainError("inexact Laurent division");
  LaurentPoly out;
  for (std::size_t k = 0; k < quo.size(); ++k)
    out.insert(static_cast<std::int64_t>(k) + low_n - low_d, quo[k]);
  return out;
}

bool LaurentPoly::is_symmetric() const {
  for (const auto& [e, c] : terms_)
    if (coeff(-e) != c) return false;
  return true;
}

Scalar LaurentPoly::at_one() const {
  Scalar s;
  for (const auto& [e, c] : terms_) s += c;
  return s;
}

TruncSeries LaurentPoly::at_exponential(std::uint32_t order, const Scalar& a) const {
  TruncSeries out(order);
  for (const auto& [e, c] : terms_) {
    TruncSeries arg = TruncSeries::lambda(order).scaled(a * Scalar::integer(e));
    out += arg.exp().scaled(c);
  }
  return out;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (e != 0) os << "*t^" << e;
  }
  return os.str();
}

LaurentPoly qbinom(std::uint32_t m, std::uint32_t n) {
  const Scalar one = Scalar::integer(1);
  LaurentPoly out = LaurentPoly::one();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::int64_t a = static_cast<std::int64_t>(m) + n - i;
    out = out * (LaurentPoly::monomial(a, one) - LaurentPoly::monomial(-a, one));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    std::int64_t b = static_cast<std::int64_t>(i) + 1;
    out = out.divided_by(LaurentPoly::monomial(b, one) -
                         LaurentPoly::monomial(-b, one));
  }
  return out;
}

bool CartanData::odd_root(std::uint32_t i) const {
  return std::find(tau.begin(), tau.end(), i) != tau.end();
}

void CartanData::validate() const {
  std::uint32_t s = rank();
  if (s == 0) throw DomainError("empty Cartan matrix");
  if (s > 3) throw DomainError("rank capped at 3");
  for (const auto& row : A)
    if (row.size() != s) throw DomainError("Cartan matrix must be square");
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (tau[k] < 1 || tau[k] > s)
      throw DomainError("odd root index out of range");
    if (k > 0 && tau[k] <= tau[k - 1])
      throw DomainError("odd root indices must be strictly increasing");
  }
  if (d.size() != s)
    throw DomainError("one symmetrizing weight per root required");
  for (const auto& w : d)
    if (w == 0) throw DomainError("symmetrizing weights must be nonzero");
  for (std::uint32_t i = 0; i < s; ++i)
    for (std::uint32_t j = 0; j < s; ++j)
      if (d[i] * Rational(A[i][j]) != d[j] * Rational(A[j][i]))
        throw DomainError(
            "Cartan matrix is not symmetrizable by the given weights at (" +
            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
}

Ctx CartanData::context() const {
  validate();
  std::uint32_t s = rank();
  GradingGroup g{s, {}};
  std::vector<std::vector<Scalar>> mat(
      s, std::vector<Scalar>(s, Scalar::integer(1)));
  for (std::uint32_t i = 0; i < s; ++i)
    for (std::uint32_t j = 0; j < s; ++j)
      if (odd_root(i + 1) || odd_root(j + 1)) mat[i][j] = Scalar::integer(-1);
  return make_context(std::move(g), std::move(mat), 1);
}

bool is_type_b(const CartanData& cd) {
  std::uint32_t s = cd.rank();
  if (s < 2) return false;
  if (cd.tau != std::vector<std::uint32_t>{s}) return false;
  for (std::uint32_t i = 0; i < s; ++i)
    for (std::uint32_t j = 0; j < s; ++j) {
      std::int64_t want = 0;
      if (i == j)
        want = 2;
      else if (j == i + 1)
        want = -1;
      else if (i == j + 1)
        want = (i == s - 1) ? -2 : -1;
      if (cd.A[i][j] != want) return false;
    }
  return true;
}

FreeElement::FreeElement(BasisPtr gens, std::uint32_t order)
    : gens_(std::move(gens)), order_(order) {
  if (!gens_) throw DomainError("null generator basis");
  if (order_ == 0) throw DomainError("series order must be positive");
}

FreeElement FreeElement::unit(BasisPtr gens, std::uint32_t order) {
  FreeElement el(std::move(gens), order);
  el.add_term({}, Scalar::integer(1));
  return el;
}

FreeElement FreeElement::generator(BasisPtr gens, std::uint32_t order,
                                   std::uint32_t i) {
  FreeElement el(std::move(gens), order);
  el.add_term({i}, Scalar::integer(1));
  return el;
}

void FreeElement::check_word(const FreeWord& w) const {
  for (std::uint32_t letter : w)
    if (letter >= gens_->size())
      throw DomainError("word letter out of range");
}

void FreeElement::add_term(const FreeWord& w, const TruncSeries& c) {
  check_word(w);
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

void FreeElement::add_term(const FreeWord& w, const Scalar& c) {
  add_term(w, TruncSeries::constant(order_, c));
}

TruncSeries FreeElement::coeff(const FreeWord& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? TruncSeries(order_) : it->second;
}

FreeElement FreeElement::operator-() const {
  FreeElement out(gens_, order_);
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
  return out;
}

FreeElement& FreeElement::operator+=(const FreeElement& o) {
  if (!gens_->same_content(*o.gens_)) throw DomainError("generator sets differ");
  if (order_ != o.order_) throw OrderMismatch("element orders differ");
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

FreeElement& FreeElement::operator-=(const FreeElement& o) { return *this += -o; }

FreeElement FreeElement::scaled(const Scalar& s) const {
  FreeElement out(gens_, order_);
  for (const auto& [w, c] : terms_) out.add_term(w, c.scaled(s));
  return out;
}

FreeElement FreeElement::scaled(const TruncSeries& s) const {
  if (s.order() != order_) throw OrderMismatch("scale order differs");
  FreeElement out(gens_, order_);
  for (const auto& [w, c] : terms_) out.add_term(w, c * s);
  return out;
}

FreeElement FreeElement::mul(const FreeElement& o) const {
  if (!gens_->same_content(*o.gens_)) throw DomainError("generator sets differ");
  if (order_ != o.order_) throw OrderMismatch("element orders differ");
  FreeElement out(gens_, order_);
  for (const auto& [wa, ca] : terms_)
    for (const auto& [wb, cb] : o.terms_) {
      FreeWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  return out;
}

bool FreeElement::operator==(const FreeElement& o) const {
  return order_ == o.order_ && gens_->same_content(*o.gens_) &&
         terms_ == o.terms_;
}

std::uint32_t FreeElement::max_word_length() const {
  std::size_t m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, w.size());
  return static_cast<std::uint32_t>(m);
}

FreeElement FreeElement::constant_part() const {
  FreeElement out(gens_, 1);
  for (const auto& [w, c] : terms_)
    out.add_term(w, TruncSeries::constant(1, c.coeff(0)));
  return out;
}

GroupElement FreeElement::word_degree(const FreeWord& w) const {
  return word_deg(*gens_, w);
}

GroupElement FreeElement::degree() const {
  if (terms_.empty()) throw DomainError("zero element has no degree");
  GroupElement deg = word_degree(terms_.begin()->first);
  for (const auto& [w, c] : terms_)
    if (word_degree(w) != deg) throw DomainError("element is not homogeneous");
  return deg;
}

std::string FreeElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*";
    if (w.empty()) {
      os << "1";
      continue;
    }
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) os << ".";
      os << gens_->name(w[k]);
    }
  }
  return os.str();
}

FreeElement colored_bracket(const FreeElement& x, const FreeElement& y) {
  Scalar sign = x.gens()->ctx()->eps_of(x.degree(), y.degree());
  return x.mul(y) - y.mul(x).scaled(sign);
}

FreeTensor2::FreeTensor2(BasisPtr gens, std::uint32_t order)
    : gens_(std::move(gens)), order_(order) {
  if (!gens_) throw DomainError("null generator basis");
  if (order_ == 0) throw DomainError("series order must be positive");
}

FreeTensor2 FreeTensor2::unit(BasisPtr gens, std::uint32_t order) {
  FreeTensor2 t(std::move(gens), order);
  t.add_term({{}, {}}, Scalar::integer(1));
  return t;
}

void FreeTensor2::add_term(const Key& k, const TruncSeries& c) {
  for (const FreeWord* w : {&k.first, &k.second})
    for (std::uint32_t letter : *w)
      if (letter >= gens_->size())
        throw DomainError("word letter out of range");
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

void FreeTensor2::add_term(const Key& k, const Scalar& c) {
  add_term(k, TruncSeries::constant(order_, c));
}

TruncSeries FreeTensor2::coeff(const Key& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? TruncSeries(order_) : it->second;
}

FreeTensor2 FreeTensor2::operator-() const {
  FreeTensor2 out(gens_, order_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

FreeTensor2& FreeTensor2::operator+=(const FreeTensor2& o) {
  if (!gens_->same_content(*o.gens_)) throw DomainError("generator sets differ");
  if (order_ != o.order_) throw OrderMismatch("element orders differ");
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

FreeTensor2& FreeTensor2::operator-=(const FreeTensor2& o) { return *this += -o; }

FreeTensor2 FreeTensor2::scaled(const Scalar& s) const {
  FreeTensor2 out(gens_, order_);
  for (const auto& [k, c] : terms_) out.add_term(k, c.scaled(s));
  return out;
}

FreeTensor2 FreeTensor2::scaled(const TruncSeries& s) const {
  if (s.order() != order_) throw OrderMismatch("scale order differs");
  FreeTensor2 out(gens_, order_);
  for (const auto& [k, c] : terms_) out.add_term(k, c * s);
  return out;
}

FreeTensor2 FreeTensor2::mul(const FreeTensor2& o) const {
  if (!gens_->same_content(*o.gens_)) throw DomainError("generator sets differ");
  if (order_ != o.order_) throw OrderMismatch("element orders differ");
  const Ctx& ctx = gens_->ctx();
  FreeTensor2 out(gens_, order_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      // inner factors cross: eps(deg of left's second leg, deg of right's first)
      Scalar sign =
          ctx->eps_of(word_deg(*gens_, ka.second), word_deg(*gens_, kb.first));
      FreeWord w1 = ka.first;
      w1.insert(w1.end(), kb.first.begin(), kb.first.end());
      FreeWord w2 = ka.second;
      w2.insert(w2.end(), kb.second.begin(), kb.second.end());
      out.add_term({std::move(w1), std::move(w2)}, (ca * cb).scaled(sign));
    }
  return out;
}

bool FreeTensor2::operator==(const FreeTensor2& o) const {
  return order_ == o.order_ && gens_->same_content(*o.gens_) &&
         terms_ == o.terms_;
}

std::uint32_t FreeTensor2::max_total_length() const {
  std::size_t m = 0;
  for (const auto& [k, c] : terms_)
    m = std::max(m, k.first.size() + k.second.size());
  return static_cast<std::uint32_t>(m);
}

std::string FreeTensor2::str() const {
  if (terms_.empty()) return "0";
  auto word_str = [&](const FreeWord& w) {
    if (w.empty()) return std::string("1");
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) s += ".";
      s += gens_->name(w[k]);
    }
    return s;
  };
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*" << word_str(k.first) << "(x)"
       << word_str(k.second);
  }
  return os.str();
}

std::uint32_t Presentation::h_index(std::uint32_t i) const {
  if (i < 1 || i > rank()) throw DomainError("root index out of range");
  return i - 1;
}

std::uint32_t Presentation::e_index(std::uint32_t i) const {
  return rank() + h_index(i);
}

std::uint32_t Presentation::f_index(std::uint32_t i) const {
  return 2 * rank() + h_index(i);
}

namespace {

BasisPtr presentation_basis(const CartanData& cd) {
  Ctx ctx = cd.context();
  std::uint32_t s = cd.rank();
  std::vector<std::string> names;
  std::vector<GroupElement> degrees;
  GroupElement zero = ctx->group.zero();
  for (std::uint32_t i = 1; i <= s; ++i) {
    names.push_back("h" + std::to_string(i));
    degrees.push_back(zero);
  }
  for (std::uint32_t i = 1; i <= s; ++i) {
    names.push_back("e" + std::to_string(i));
    GroupElement deg = zero;
    deg[i - 1] = -1;
    degrees.push_back(deg);
  }
  for (std::uint32_t i = 1; i <= s; ++i) {
    names.push_back("f" + std::to_string(i));
    GroupElement deg = zero;
    deg[i - 1] = 1;
    degrees.push_back(deg);
  }
  return make_basis(std::move(ctx), std::move(names), std::move(degrees));
}

// exp(a lambda h) expanded as words in one Cartan generator.
FreeElement group_like(const BasisPtr& gens, std::uint32_t order,
                       std::uint32_t h_letter, const Rational& a) {
  FreeElement out(gens, order);
  for (std::uint32_t k = 0; k < order; ++k) {
    Scalar c = Scalar::rational(a).pow(k) *
               Scalar::rational(Rational(1) / factorial(k));
    out.add_term(FreeWord(k, h_letter), TruncSeries::lambda(order, k).scaled(c));
  }
  return out;
}

// (exp(d lambda h / 2) - exp(-d lambda h / 2)) / (exp(d lambda / 2) -
// exp(-d lambda / 2)): both sides vanish at lambda = 0, so the quotient is
// computed one order higher internally and shifted down. Constant slice is h.
FreeElement pairing_series(const BasisPtr& gens, std::uint32_t order,
                           std::uint32_t h_letter, const Rational& d) {
  std::uint32_t inner = order + 1;
  Scalar half = Scalar::rational(d / 2);
  TruncSeries den(inner);
  FreeElement num(gens, inner);
  for (std::uint32_t k = 1; k < inner; k += 2) {
    Scalar c = half.pow(k) * Scalar::rational(Rational(2) / factorial(k));
    TruncSeries term = TruncSeries::lambda(inner, k).scaled(c);
    den += term;
    num.add_term(FreeWord(k, h_letter), term);
  }
  TruncSeries inv = den.lambda_shift_down().inverse();
  FreeElement out(gens, order);
  for (const auto& [w, c] : num.terms())
    out.add_term(w, c.lambda_shift_down() * inv);
  return out;
}

TruncSeries q_plus_qinv(std::uint32_t order) {
  TruncSeries l = TruncSeries::lambda(order);
  return l.scaled(Scalar::rational(1, 2)).exp() +
         l.scaled(Scalar::rational(-1, 2)).exp();
}

void push_relation(Presentation& p, std::string name, FreeElement el,
                   bool literal = false) {
  // Standard-reading relations are homogeneous; the literal families are
  // kept as printed even when they mix degrees.
  if (!literal && p.reading == EfReading::standard) el.degree();
  p.relations.push_back({std::move(name), std::move(el), literal});
}

void emit_relations(Presentation& p) {
  const CartanData& cd = p.data;
  const std::uint32_t s = cd.rank();
  const std::uint32_t N = p.order;
  const bool dj = p.flavor == PresentationFlavor::drinfeld_jimbo;
  auto G = [&](std::uint32_t idx) {
    return FreeElement::generator(p.gens, N, idx);
  };
  auto nm = [&](std::uint32_t idx) { return p.gens->name(idx); };
  auto rhs = [&](std::uint32_t i) {
    return dj ? pairing_series(p.gens, N, p.h_index(i), cd.d[i - 1])
              : G(p.h_index(i));
  };

  for (std::uint32_t i = 1; i <= s; ++i)
    for (std::uint32_t j = i + 1; j <= s; ++j)
      push_relation(p, "bracket h" + std::to_string(i) + " h" + std::to_string(j),
                    colored_bracket(G(p.h_index(i)), G(p.h_index(j))));

  for (std::uint32_t i = 1; i <= s; ++i)
    for (std::uint32_t j = 1; j <= s; ++j) {
      Scalar a = Scalar::integer(cd.A[i - 1][j - 1]);
      push_relation(p, "cartan " + nm(p.h_index(i)) + " " + nm(p.e_index(j)),
                    colored_bracket(G(p.h_index(i)), G(p.e_index(j))) -
                        G(p.e_index(j)).scaled(a));
      push_relation(p, "cartan " + nm(p.h_index(i)) + " " + nm(p.f_index(j)),
                    colored_bracket(G(p.h_index(i)), G(p.f_index(j))) +
                        G(p.f_index(j)).scaled(a));
    }

  if (p.reading == EfReading::standard) {
    for (std::uint32_t i = 1; i <= s; ++i)
      for (std::uint32_t j = 1; j <= s; ++j) {
        FreeElement rel = colored_bracket(G(p.e_index(i)), G(p.f_index(j)));
        if (i == j) rel -= rhs(i);
        push_relation(p, "cross " + nm(p.e_index(i)) + " " + nm(p.f_index(j)),
                      std::move(rel));
      }
  } else {
    for (std::uint32_t i = 1; i <= s; ++i)
      for (std::uint32_t j = i; j <= s; ++j) {
        FreeElement rel = colored_bracket(G(p.e_index(i)), G(p.e_index(j)));
        if (i == j) rel -= rhs(i);
        push_relation(p, "cross " + nm(p.e_index(i)) + " " + nm(p.e_index(j)),
                      std::move(rel));
        rel = colored_bracket(G(p.f_index(i)), G(p.f_index(j)));
        if (i == j) rel -= rhs(i);
        push_relation(p, "cross " + nm(p.f_index(i)) + " " + nm(p.f_index(j)),
                      std::move(rel));
      }
  }

  for (std::uint32_t i = 1; i <= s; ++i) {
    if (cd.A[i - 1][i - 1] != 0) continue;
    push_relation(p, "square " + nm(p.e_index(i)),
                  G(p.e_index(i)).mul(G(p.e_index(i))));
    push_relation(p, "square " + nm(p.f_index(i)),
                  G(p.f_index(i)).mul(G(p.f_index(i))));
  }

  for (std::uint32_t i = 1; i <= s; ++i)
    for (std::uint32_t j = i + 1; j <= s; ++j) {
      if (cd.A[i - 1][j - 1] != 0) continue;
      push_relation(p, "bracket " + nm(p.e_index(i)) + " " + nm(p.e_index(j)),
                    colored_bracket(G(p.e_index(i)), G(p.e_index(j))));
      push_relation(p, "bracket " + nm(p.f_index(i)) + " " + nm(p.f_index(j)),
                    colored_bracket(G(p.f_index(i)), G(p.f_index(j))));
    }

  for (std::uint32_t i = 1; i <= s; ++i) {
    if (cd.odd_root(i)) continue;
    for (std::uint32_t j = 1; j <= s; ++j) {
      if (i == j || cd.A[i - 1][j - 1] == 0) continue;
      std::uint32_t n =
          1 + static_cast<std::uint32_t>(std::abs(cd.A[i - 1][j - 1]));
      for (bool raising : {true, false}) {
        std::uint32_t gi = raising ? p.e_index(i) : p.f_index(i);
        std::uint32_t gj = raising ? p.e_index(j) : p.f_index(j);
        FreeElement rel(p.gens, N);
        if (!dj) {
          rel = G(gj);
          for (std::uint32_t k = 0; k < n; ++k) rel = colored_bracket(G(gi), rel);
        } else {
          Scalar eta =
              p.gens->ctx()->eps_of(p.gens->degree(gi), p.gens->degree(gj));
          Scalar step = Scalar::integer(-1) * eta;
          Scalar a = Scalar::rational(cd.d[i - 1] / 2);
          for (std::uint32_t k = 0; k <= n; ++k) {
            TruncSeries c =
                qbinom(n - k, k).at_exponential(N, a).scaled(step.pow(k));
            FreeWord w(n - k, gi);
            w.push_back(gj);
            w.insert(w.end(), k, gi);
            rel.add_term(w, c);
          }
        }
        push_relation(p, "serre " + nm(gi) + " " + nm(gj), std::move(rel));
      }
    }
  }

  for (std::uint32_t m = 2; m + 1 <= s; ++m) {
    if (cd.A[m - 1][m - 1] != 0) continue;
    for (bool raising : {true, false}) {
      auto idx = [&](std::uint32_t i) {
        return raising ? p.e_index(i) : p.f_index(i);
      };
      std::uint32_t a = idx(m - 1), b = idx(m), c = idx(m + 1);
      FreeElement rel(p.gens, N);
      if (!dj) {
        rel = colored_bracket(
            G(b), colored_bracket(G(a), colored_bracket(G(b), G(c))));
      } else {
        rel.add_term({b, a, b, c}, Scalar::integer(1));
        rel.add_term({b, c, b, a}, Scalar::integer(1));
        rel.add_term({a, b, c, b}, Scalar::integer(1));
        rel.add_term({c, b, a, b}, Scalar::integer(1));
        rel.add_term({b, a, c, b}, q_plus_qinv(N));
      }
      push_relation(p, "quartic " + nm(b), std::move(rel));
    }
  }

  if (is_type_b(cd)) {
    for (bool raising : {true, false}) {
      std::uint32_t a = raising ? p.e_index(s - 1) : p.f_index(s - 1);
      std::uint32_t b = raising ? p.e_index(s) : p.f_index(s);
      FreeElement rel(p.gens, N);
      if (!dj) {
        rel = colored_bracket(
            colored_bracket(colored_bracket(G(a), G(b)), G(b)), G(b));
      } else {
        TruncSeries mid = q_plus_qinv(N) - TruncSeries::constant(N, Scalar::integer(1));
        rel.add_term({a, b, b, b}, Scalar::integer(1));
        rel.add_term({b, a, b, b}, mid);
        rel.add_term({b, b, a, b}, -mid);
        rel.add_term({b, b, b, a}, Scalar::integer(-1));
      }
      push_relation(p, "special-b " + nm(b), std::move(rel));
      if (dj) {
        // Printed variant of the same relation, kept for comparison only.
        TruncSeries mid = q_plus_qinv(N) - TruncSeries::constant(N, Scalar::integer(1));
        FreeElement lit(p.gens, N);
        lit.add_term({a, a, a, a}, Scalar::integer(1));
        lit.add_term({b, a, b, b}, -mid);
        lit.add_term({b, b, a, b}, -mid);
        lit.add_term({b, b, b, a}, Scalar::integer(1));
        push_relation(p, "special-b " + nm(b) + " literal", std::move(lit), true);
      }
    }
  }
}

}  // namespace

Presentation build_classical_presentation(const CartanData& cd,
                                          EfReading reading) {
  cd.validate();
  Presentation p{cd, presentation_basis(cd), 1, PresentationFlavor::classical,
                 reading, {}};
  emit_relations(p);
  return p;
}

Presentation build_dj_presentation(const CartanData& cd, std::uint32_t order,
                                   EfReading reading) {
  cd.validate();
  if (order == 0) throw DomainError("series order must be positive");
  Presentation p{cd, presentation_basis(cd), order,
                 PresentationFlavor::drinfeld_jimbo, reading, {}};
  emit_relations(p);
  return p;
}

CoproductMap dj_coproduct_on_generators(const CartanData& cd,
                                        std::uint32_t order) {
  cd.validate();
  if (order == 0) throw DomainError("series order must be positive");
  BasisPtr gens = presentation_basis(cd);
  std::uint32_t s = cd.rank();
  CoproductMap map{gens, order, {}, {}};
  for (std::uint32_t k = 0; k < s; ++k) {
    FreeTensor2 img(gens, order);
    img.add_term({{k}, {}}, Scalar::integer(1));
    img.add_term({{}, {k}}, Scalar::integer(1));
    map.images.push_back(std::move(img));
  }
  for (std::uint32_t i = 1; i <= s; ++i) {
    std::uint32_t e = s + (i - 1);
    FreeElement weight = group_like(gens, order, i - 1, cd.d[i - 1] / 2);
    FreeTensor2 img(gens, order);
    for (const auto& [w, c] : weight.terms()) img.add_term({{e}, w}, c);
    img.add_term({{}, {e}}, Scalar::integer(1));
    map.images.push_back(std::move(img));
  }
  for (std::uint32_t i = 1; i <= s; ++i) {
    std::uint32_t f = 2 * s + (i - 1);
    FreeElement weight = group_like(gens, order, i - 1, -cd.d[i - 1] / 2);
    FreeTensor2 img(gens, order);
    img.add_term({{f}, {}}, Scalar::integer(1));
    for (const auto& [w, c] : weight.terms()) img.add_term({w, {f}}, c);
    map.images.push_back(std::move(img));
  }
  map.counits.assign(3 * s, TruncSeries(order));
  return map;
}

CoproductMap primitive_coproduct(const CartanData& cd, std::uint32_t order) {
  cd.validate();
  if (order == 0) throw DomainError("series order must be positive");
  BasisPtr gens = presentation_basis(cd);
  CoproductMap map{gens, order, {}, {}};
  for (std::uint32_t k = 0; k < gens->size(); ++k) {
    FreeTensor2 img(gens, order);
    img.add_term({{k}, {}}, Scalar::integer(1));
    img.add_term({{}, {k}}, Scalar::integer(1));
    map.images.push_back(std::move(img));
  }
  map.counits.assign(gens->size(), TruncSeries(order));
  return map;
}

FreeTensor2 apply_coproduct(const CoproductMap& delta, const FreeElement& el) {
  if (!delta.gens || delta.images.size() != delta.gens->size())
    throw DomainError("coproduct map is incomplete");
  if (!delta.gens->same_content(*el.gens()))
    throw DomainError("generator sets differ");
  if (delta.order != el.order()) throw OrderMismatch("coproduct order differs");
  FreeTensor2 out(el.gens(), el.order());
  for (const auto& [w, c] : el.terms()) {
    FreeTensor2 prod = FreeTensor2::unit(el.gens(), el.order());
    for (std::uint32_t letter : w) prod = prod.mul(delta.images[letter]);
    out += prod.scaled(c);
  }
  return out;
}

namespace {

// Forward substitution over exact scalars; rows are keyed by their smallest
// monomial with leading coefficient 1.
template <class Key>
class RowReducer {
 public:
  using Vec = std::map<Key, Scalar>;

  Vec reduce(Vec v) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto row = rows_.find(it->first);
      if (row == rows_.end()) {
        ++it;
        continue;
      }
      Scalar c = it->second;
      Key pivot = it->first;
      v.erase(it);
      for (const auto& [k, rc] : row->second) {
        if (k == pivot) continue;
        Scalar upd = Scalar::integer(0) - c * rc;
        auto slot = v.find(k);
        if (slot == v.end()) {
          if (!upd.is_zero()) v.emplace(k, upd);
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

  void insert(Vec v) {
    v = reduce(std::move(v));
    if (v.empty()) return;
    Scalar inv = v.begin()->second.inverse();
    for (auto& [k, c] : v) c = c * inv;
    Key pivot = v.begin()->first;
    rows_.emplace(std::move(pivot), std::move(v));
  }

 private:
  std::map<Key, Vec> rows_;
};

std::vector<FreeWord> words_upto(const std::vector<std::uint32_t>& alphabet,
                                 std::uint32_t max_len) {
  std::vector<FreeWord> out{FreeWord{}};
  std::size_t layer_start = 0;
  for (std::uint32_t len = 1; len <= max_len; ++len) {
    std::size_t layer_end = out.size();
    for (std::size_t k = layer_start; k < layer_end; ++k)
      for (std::uint32_t letter : alphabet) {
        FreeWord w = out[k];
        w.push_back(letter);
        out.push_back(std::move(w));
      }
    layer_start = layer_end;
  }
  return out;
}

FreeElement word_element(const BasisPtr& gens, std::uint32_t order,
                         const FreeWord& w) {
  FreeElement el(gens, order);
  el.add_term(w, Scalar::integer(1));
  return el;
}

using SpanKey = std::pair<std::uint32_t, FreeTensor2::Key>;
using SpanVec = std::map<SpanKey, Scalar>;

SpanVec vectorize(const FreeTensor2& t, std::uint32_t shift) {
  SpanVec v;
  for (const auto& [key, c] : t.terms())
    for (std::uint32_t k = 0; k + shift < t.order(); ++k)
      if (!c.coeff(k).is_zero()) v.emplace(SpanKey{k + shift, key}, c.coeff(k));
  return v;
}

std::string span_sample(const BasisPtr& gens, const SpanVec& v) {
  auto word_str = [&](const FreeWord& w) {
    if (w.empty()) return std::string("1");
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) s += ".";
      s += gens->name(w[k]);
    }
    return s;
  };
  std::ostringstream os;
  os << v.size() << " residual entries, first: ";
  std::size_t shown = 0;
  for (const auto& [key, c] : v) {
    if (shown++ == 2) break;
    if (shown > 1) os << ", ";
    os << "l^" << key.first << " " << word_str(key.second.first) << "(x)"
       << word_str(key.second.second) << " -> " << c.str();
  }
  return os.str();
}

}  // namespace

Report check_delta_respects_relations(const Presentation& p,
                                      const CoproductMap& delta,
                                      std::uint32_t degree_bound,
                                      std::uint32_t order) {
  if (order != p.order)
    throw OrderMismatch("presentation order differs from the requested order");
  if (delta.order != order) throw OrderMismatch("coproduct order differs");
  if (!delta.gens || !p.gens->same_content(*delta.gens))
    throw DomainError("generator sets differ");
  if (degree_bound > 5) throw DomainError("degree bound capped at 5");
  std::uint32_t max_len = 0;
  for (const auto& rel : p.relations)
    if (!rel.literal_variant)
      max_len = std::max(max_len, rel.element.max_word_length());
  if (degree_bound < max_len + 1)
    throw DomainError("degree bound must exceed the longest relation word");

  std::vector<std::uint32_t> alphabet(p.gens->size());
  for (std::uint32_t k = 0; k < alphabet.size(); ++k) alphabet[k] = k;

  RowReducer<SpanKey> rows;
  for (const auto& rel : p.relations) {
    if (rel.literal_variant) continue;
    std::uint32_t pad = degree_bound - rel.element.max_word_length();
    auto pads = words_upto(alphabet, pad);
    for (const auto& u : pads) {
      for (const auto& v : pads) {
        if (u.size() + v.size() > pad) continue;
        FreeElement padded = word_element(p.gens, order, u)
                                 .mul(rel.element)
                                 .mul(word_element(p.gens, order, v));
        std::uint32_t rest = pad - static_cast<std::uint32_t>(u.size() + v.size());
        for (const auto& w : pads) {
          if (w.size() > rest) continue;
          FreeTensor2 left(p.gens, order), right(p.gens, order);
          for (const auto& [pw, pc] : padded.terms()) {
            left.add_term({pw, w}, pc);
            right.add_term({w, pw}, pc);
          }
          for (std::uint32_t shift = 0; shift < order; ++shift) {
            SpanVec lv = vectorize(left, shift);
            if (!lv.empty()) rows.insert(std::move(lv));
            SpanVec rv = vectorize(right, shift);
            if (!rv.empty()) rows.insert(std::move(rv));
          }
        }
      }
    }
  }

  Report rep;
  for (const auto& rel : p.relations) {
    if (rel.literal_variant) continue;
    FreeTensor2 image = apply_coproduct(delta, rel.element);
    if (image.max_total_length() > degree_bound) {
      rep.add("delta-degree-bound", rel.name,
              "coproduct image exceeds the degree bound");
      continue;
    }
    SpanVec residual = rows.reduce(vectorize(image, 0));
    if (!residual.empty())
      rep.add("delta-membership", rel.name,
              "not found within bound: " + span_sample(p.gens, residual));
  }
  return rep;
}

Presentation apply_bicharacter_twist_to_presentation(
    const Presentation& p, const std::vector<std::vector<Scalar>>& eps_consts) {
  const GradingGroup& group = p.gens->ctx()->group;
  Bicharacter sigma(group, eps_consts);
  std::uint32_t n = static_cast<std::uint32_t>(group.rank());
  const auto& base = p.gens->ctx()->eps.matrix();
  std::vector<std::vector<Scalar>> mat(n, std::vector<Scalar>(n));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      mat[i][j] = eps_consts[i][j] * eps_consts[j][i].inverse() * base[i][j];
  Ctx ctx = make_context(group, std::move(mat), p.gens->ctx()->conductor);
  std::vector<std::string> names;
  std::vector<GroupElement> degrees;
  for (std::uint32_t k = 0; k < p.gens->size(); ++k) {
    names.push_back(p.gens->name(k));
    degrees.push_back(p.gens->degree(k));
  }
  BasisPtr gens = make_basis(std::move(ctx), std::move(names), std::move(degrees));

  Presentation out{p.data, gens, p.order, p.flavor, p.reading, {}};
  auto word_factor = [&](const FreeWord& w) {
    Scalar f = Scalar::integer(1);
    for (std::size_t a = 0; a < w.size(); ++a)
      for (std::size_t b = a + 1; b < w.size(); ++b)
        f *= sigma.eval(gens->degree(w[a]), gens->degree(w[b]));
    return f;
  };
  for (const auto& rel : p.relations) {
    FreeElement el(gens, p.order);
    if (rel.element.is_zero()) {
      out.relations.push_back({rel.name, std::move(el), rel.literal_variant});
      continue;
    }
    for (const auto& [w, c] : rel.element.terms())
      el.add_term(w, c.scaled(word_factor(w).inverse()));
    // the leading monomial keeps its original coefficient
    el = el.scaled(word_factor(rel.element.terms().begin()->first));
    out.relations.push_back({rel.name, std::move(el), rel.literal_variant});
  }
  return out;
}

std::vector<std::string> degenerate_generators(const Presentation& p) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& rel : p.relations) {
    if (rel.literal_variant) continue;
    FreeElement c = rel.element.constant_part();
    if (c.terms().size() != 1) continue;
    const auto& [w, coeff] = *c.terms().begin();
    if (w.size() != 1) continue;
    std::string name = p.gens->name(w[0]);
    if (seen.insert(name).second) out.push_back(std::move(name));
  }
  return out;
}

namespace {

std::map<FreeWord, Scalar> vectorize_plain(const FreeElement& el) {
  std::map<FreeWord, Scalar> v;
  for (const auto& [w, c] : el.terms())
    if (!c.coeff(0).is_zero()) v.emplace(w, c.coeff(0));
  return v;
}

// The quartic's printed quantum form merges monomials the classical bracket
// expansion keeps apart; the gap must lie in the ideal of the squares and
// zero brackets on the same three roots.
bool quartic_limit_matches(const Presentation& classical,
                           const std::string& name, const FreeElement& limit,
                           const FreeElement& base) {
  FreeElement diff = limit;
  diff -= base;
  if (diff.is_zero()) return true;
  std::set<std::uint32_t> letter_set;
  for (const auto& [w, c] : base.terms())
    letter_set.insert(w.begin(), w.end());
  std::vector<std::uint32_t> alphabet(letter_set.begin(), letter_set.end());
  const std::uint32_t bound = base.max_word_length();
  RowReducer<FreeWord> rows;
  for (const auto& rel : classical.relations) {
    if (rel.literal_variant || rel.name == name) continue;
    std::uint32_t len = rel.element.max_word_length();
    if (len > bound) continue;
    bool inside = true;
    for (const auto& [w, c] : rel.element.terms())
      for (std::uint32_t letter : w)
        if (!letter_set.count(letter)) inside = false;
    if (!inside) continue;
    auto pads = words_upto(alphabet, bound - len);
    for (const auto& u : pads)
      for (const auto& v : pads) {
        if (u.size() + v.size() + len > bound) continue;
        FreeElement padded = word_element(classical.gens, 1, u)
                                 .mul(rel.element)
                                 .mul(word_element(classical.gens, 1, v));
        auto row = vectorize_plain(padded);
        if (!row.empty()) rows.insert(std::move(row));
      }
  }
  return rows.reduce(vectorize_plain(diff)).empty();
}

}  // namespace

ClassicalLimitComparison compare_classical_limit(const Presentation& quantized) {
  if (quantized.flavor != PresentationFlavor::drinfeld_jimbo)
    throw DomainError("quantized presentation required");
  Presentation classical =
      build_classical_presentation(quantized.data, quantized.reading);
  std::map<std::string, const FreeElement*> by_name;
  for (const auto& rel : classical.relations) by_name[rel.name] = &rel.element;

  ClassicalLimitComparison out;
  const std::string suffix = " literal";
  for (const auto& rel : quantized.relations) {
    std::string key = rel.name;
    if (rel.literal_variant && key.size() > suffix.size() &&
        key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
      key.resize(key.size() - suffix.size());
    auto it = by_name.find(key);
    if (it == by_name.end()) {
      out.report.add("classical-limit", rel.name, "no classical counterpart");
      continue;
    }
    FreeElement limit = rel.element.constant_part();
    bool match;
    if (key.rfind("quartic", 0) == 0)
      match = quartic_limit_matches(classical, key, limit, *it->second);
    else
      match = limit == *it->second;
    if (rel.literal_variant)
      out.literal_matches[rel.name] = match;
    else if (!match)
      out.report.add("classical-limit", rel.name,
                     "constant slice differs from the classical relation");
  }
  return out;
}

}  // namespace cq
