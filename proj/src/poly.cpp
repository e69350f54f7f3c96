#include "gmx/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gmx {

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UniPoly UniPoly::constant(const Rat& c) {
  return UniPoly(std::vector<Rat>{c});
}

UniPoly UniPoly::monomial(const Rat& c, std::size_t degree) {
  std::vector<Rat> cs(degree + 1, Rat(0));
  cs[degree] = c;
  return UniPoly(std::move(cs));
}

UniPoly UniPoly::variable() { return monomial(Rat(1), 1); }

Rat UniPoly::leading() const {
  if (coeffs_.empty()) return Rat(0);
  return coeffs_.back();
}

Rat UniPoly::eval(const Rat& x) const {
  Rat acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Rat> cs(std::max(coeffs_.size(), o.coeffs_.size()), Rat(0));
  for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = coeff(i) + o.coeff(i);
  return UniPoly(std::move(cs));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator-() const {
  std::vector<Rat> cs = coeffs_;
  for (auto& c : cs) c = -c;
  return UniPoly(std::move(cs));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return UniPoly();
  std::vector<Rat> cs(coeffs_.size() + o.coeffs_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      cs[i + j] += coeffs_[i] * o.coeffs_[j];
  return UniPoly(std::move(cs));
}

UniPoly UniPoly::scale(const Rat& c) const {
  std::vector<Rat> cs = coeffs_;
  for (auto& x : cs) x *= c;
  return UniPoly(std::move(cs));
}

UniPoly UniPoly::derivative(unsigned order) const {
  UniPoly p = *this;
  for (unsigned k = 0; k < order; ++k) {
    if (p.coeffs_.size() <= 1) return UniPoly();
    std::vector<Rat> cs(p.coeffs_.size() - 1);
    for (std::size_t i = 1; i < p.coeffs_.size(); ++i)
      cs[i - 1] = p.coeffs_[i] * Rat(static_cast<long>(i));
    p = UniPoly(std::move(cs));
  }
  return p;
}

UniPoly UniPoly::rem(const UniPoly& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("division by zero poly");
  UniPoly r = *this;
  const int dd = divisor.degree();
  const Rat lead = divisor.leading();
  while (!r.is_zero() && r.degree() >= dd) {
    Rat factor = r.leading() / lead;
    std::size_t shift = static_cast<std::size_t>(r.degree() - dd);
    // r -= factor * x^shift * divisor
    std::vector<Rat> cs = r.coeffs_;
    for (std::size_t i = 0; i < divisor.coeffs_.size(); ++i)
      cs[i + shift] -= factor * divisor.coeffs_[i];
    r = UniPoly(std::move(cs));
  }
  return r;
}

namespace {

UniPoly poly_gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a.rem(b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scale(Rat(1) / a.leading());  // monic
}

UniPoly poly_div_exact(const UniPoly& a, const UniPoly& b) {
  // Quotient of an exact division (remainder known to be zero).
  UniPoly r = a;
  const int db = b.degree();
  std::vector<Rat> q(a.degree() - db + 1, Rat(0));
  while (!r.is_zero() && r.degree() >= db) {
    Rat factor = r.leading() / b.leading();
    std::size_t shift = static_cast<std::size_t>(r.degree() - db);
    q[shift] = factor;
    std::vector<Rat> cs = r.coeffs();
    for (std::size_t i = 0; i < b.coeffs().size(); ++i)
      cs[i + shift] -= factor * b.coeffs()[i];
    r = UniPoly(std::move(cs));
  }
  return UniPoly(std::move(q));
}

}  // namespace

UniPoly UniPoly::squarefree_part() const {
  if (is_zero() || degree() == 0) return *this;
  UniPoly g = poly_gcd(*this, derivative());
  if (g.degree() <= 0) return *this;
  return poly_div_exact(*this, g);
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    Rat c = coeff(static_cast<std::size_t>(i));
    if (c == 0) continue;
    if (!first) os << (sign(c) > 0 ? " + " : " - ");
    Rat a = first ? c : Rat(abs(c));
    first = false;
    if (i == 0 || a != 1) os << rat_to_string(a);
    if (i > 0) {
      if (a != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::vector<UniPoly> sturm_sequence(const UniPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("sturm of zero polynomial");
  std::vector<UniPoly> seq;
  seq.push_back(p.squarefree_part());
  if (seq[0].degree() == 0) return seq;
  seq.push_back(seq[0].derivative());
  while (!seq.back().is_zero() && seq.back().degree() > 0) {
    UniPoly r = -(seq[seq.size() - 2].rem(seq.back()));
    if (r.is_zero()) break;
    seq.push_back(std::move(r));
  }
  return seq;
}

namespace {

int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int variations_at(const std::vector<UniPoly>& seq, const Rat& x) {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (const auto& q : seq) signs.push_back(q.sign_at(x));
  return variations(signs);
}

}  // namespace

int sturm_count(const std::vector<UniPoly>& seq, const Rat& a, const Rat& b) {
  return variations_at(seq, a) - variations_at(seq, b);
}

Rat root_bound(const UniPoly& p) {
  // Cauchy bound: 1 + max |a_i| / |a_n|.
  if (p.is_zero() || p.degree() == 0) return Rat(1);
  Rat lead = abs(p.leading());
  Rat m(0);
  for (int i = 0; i < p.degree(); ++i) {
    Rat a = abs(p.coeff(static_cast<std::size_t>(i)));
    if (a > m) m = a;
  }
  return Rat(1) + m / lead;
}

namespace {

void isolate_rec(const UniPoly& p, const std::vector<UniPoly>& seq,
                 const Rat& lo, const Rat& hi,
                 std::vector<RootInterval>& out) {
  // Invariant: p(lo) != 0 and p(hi) != 0.
  int n = sturm_count(seq, lo, hi);
  if (n == 0) return;
  if (n == 1) {
    out.push_back({lo, hi});
    return;
  }
  Rat mid = (lo + hi) / 2;
  if (p.sign_at(mid) == 0) {
    out.push_back({mid, mid});
    // Nudge off the root, shrinking toward mid until the excluded gap holds
    // no other root.
    Rat l = (lo + mid) / 2, r = (mid + hi) / 2;
    auto off_roots = [&] {
      while (p.sign_at(l) == 0) l = (l + mid) / 2;
      while (p.sign_at(r) == 0) r = (mid + r) / 2;
    };
    off_roots();
    while (sturm_count(seq, l, r) > 1) {
      l = (l + mid) / 2;
      r = (mid + r) / 2;
      off_roots();
    }
    isolate_rec(p, seq, lo, l, out);
    isolate_rec(p, seq, r, hi, out);
  } else {
    isolate_rec(p, seq, lo, mid, out);
    isolate_rec(p, seq, mid, hi, out);
  }
}

}  // namespace

std::vector<RootInterval> isolate_roots(
    const UniPoly& p, std::optional<std::pair<Rat, Rat>> interval) {
  if (p.is_zero()) throw std::invalid_argument("isolate_roots: zero poly");
  UniPoly sf = p.squarefree_part();
  if (sf.degree() <= 0) return {};
  Rat bound = root_bound(sf);
  Rat lo = interval ? interval->first : -bound;
  Rat hi = interval ? interval->second : bound;
  if (lo > hi) return {};
  std::vector<RootInterval> out;
  if (lo == hi) {
    if (sf.sign_at(lo) == 0) out.push_back({lo, lo});
    return out;
  }
  // Shift endpoints off roots, staying inside the query interval by emitting
  // endpoint roots as point intervals.
  auto seq = sturm_sequence(sf);
  Rat l = lo, h = hi;
  if (sf.sign_at(l) == 0) {
    out.push_back({l, l});
    Rat step = (h - l) / Rat(4 * (sf.degree() + 1));
    do { l += step; step /= 2; } while (l < h && sf.sign_at(l) == 0);
  }
  if (h > l && sf.sign_at(h) == 0) {
    out.push_back({h, h});
    Rat step = (h - l) / Rat(4 * (sf.degree() + 1));
    do { h -= step; step /= 2; } while (h > l && sf.sign_at(h) == 0);
  }
  if (h > l) isolate_rec(sf, seq, l, h, out);
  std::sort(out.begin(), out.end(),
            [](const RootInterval& a, const RootInterval& b) {
              return a.lo < b.lo;
            });
  return out;
}

RootInterval refine_root(const UniPoly& p, RootInterval iv, const Rat& width) {
  if (iv.is_point()) return iv;
  UniPoly sf = p.squarefree_part();
  int slo = sf.sign_at(iv.lo);
  while (iv.hi - iv.lo > width) {
    Rat mid = (iv.lo + iv.hi) / 2;
    int sm = sf.sign_at(mid);
    if (sm == 0) return {mid, mid};
    if (sm == slo)
      iv.lo = mid;
    else
      iv.hi = mid;
  }
  return iv;
}

bool rel_holds(int sgn, Rel rel) {
  switch (rel) {
    case Rel::Lt: return sgn < 0;
    case Rel::Le: return sgn <= 0;
    case Rel::Eq: return sgn == 0;
    case Rel::Ne: return sgn != 0;
    case Rel::Ge: return sgn >= 0;
    case Rel::Gt: return sgn > 0;
  }
  return false;
}

std::string rel_to_string(Rel rel) {
  switch (rel) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

Rel parse_rel(const std::string& s) {
  if (s == "<") return Rel::Lt;
  if (s == "<=") return Rel::Le;
  if (s == "=" || s == "==") return Rel::Eq;
  if (s == "!=" || s == "<>") return Rel::Ne;
  if (s == ">=") return Rel::Ge;
  if (s == ">") return Rel::Gt;
  throw std::invalid_argument("bad relation: " + s);
}

int count_interval_components(
    const std::vector<std::pair<UniPoly, Rel>>& constraints,
    std::optional<std::pair<Rat, Rat>> domain) {
  // Sign chart over the roots of the product of all constraint polynomials.
  // Using a single product keeps the isolating intervals pairwise disjoint,
  // so each interval holds the only constraint root in its span.
  UniPoly prod = UniPoly::constant(Rat(1));
  bool any_nonconst = false;
  for (const auto& [p, rel] : constraints) {
    (void)rel;
    if (p.degree() >= 1) {
      prod = prod * p.squarefree_part();
      any_nonconst = true;
    }
  }
  prod = prod.squarefree_part();

  Rat span = any_nonconst ? root_bound(prod) + 1 : Rat(1);
  Rat lo = domain ? domain->first : -span;
  Rat hi = domain ? domain->second : span;
  if (lo > hi) return 0;

  auto satisfied_at = [&](const Rat& x) {
    for (const auto& [p, rel] : constraints)
      if (!rel_holds(p.sign_at(x), rel)) return false;
    return true;
  };

  if (!any_nonconst || lo == hi) return satisfied_at(lo) ? 1 : 0;

  std::vector<RootInterval> roots = isolate_roots(prod, {{lo, hi}});

  // Satisfaction inside a non-point isolating interval (at the root it
  // brackets): a constraint vanishes there iff its Sturm count over the
  // interval is positive; otherwise its sign is constant across it.
  auto satisfied_at_root = [&](const RootInterval& iv) {
    if (iv.is_point()) return satisfied_at(iv.lo);
    Rat mid = (iv.lo + iv.hi) / 2;
    for (const auto& [p, rel] : constraints) {
      int s;
      if (p.degree() >= 1 &&
          sturm_count(sturm_sequence(p), iv.lo, iv.hi) > 0)
        s = 0;
      else
        s = p.sign_at(mid);
      if (!rel_holds(s, rel)) return false;
    }
    return true;
  };

  // Walk lo, gaps, roots, hi in order, counting maximal satisfied runs.
  // Isolating-interval endpoints are themselves root-free, so they stand in
  // for the open stretches on either side of the bracketed root.
  std::vector<bool> samples;
  Rat cursor = lo;
  samples.push_back(satisfied_at(lo));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& iv = roots[i];
    if (iv.lo > cursor) samples.push_back(satisfied_at((cursor + iv.lo) / 2));
    if (iv.is_point()) {
      if (iv.lo > lo && iv.lo <= hi) samples.push_back(satisfied_at(iv.lo));
      cursor = iv.lo;
      continue;
    }
    if (iv.lo > lo) samples.push_back(satisfied_at(iv.lo));
    samples.push_back(satisfied_at_root(iv));
    if (iv.hi < hi) samples.push_back(satisfied_at(iv.hi));
    cursor = iv.hi;
  }
  if (cursor < hi) samples.push_back(satisfied_at((cursor + hi) / 2));
  samples.push_back(satisfied_at(hi));

  int components = 0;
  bool in_run = false;
  for (bool s : samples) {
    if (s && !in_run) ++components;
    in_run = s;
  }
  return components;
}

// ---------------------------------------------------------------------------
// MultiPoly

namespace {

void trim_monomial(MultiPoly::Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

}  // namespace

MultiPoly MultiPoly::constant(const Rat& c) {
  MultiPoly p;
  p.set_term({}, c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t index) {
  MultiPoly p;
  Monomial m(index + 1, 0);
  m[index] = 1;
  p.set_term(m, Rat(1));
  return p;
}

void MultiPoly::set_term(const Monomial& mono, const Rat& c) {
  Monomial m = mono;
  trim_monomial(m);
  if (c == 0)
    terms_.erase(m);
  else
    terms_[m] = c;
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    int t = 0;
    for (unsigned e : m) t += static_cast<int>(e);
    d = std::max(d, t);
  }
  return d;
}

std::size_t MultiPoly::num_vars() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    n = std::max(n, m.size());
  }
  return n;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly r = *this;
  for (const auto& [m, c] : o.terms_) {
    auto it = r.terms_.find(m);
    if (it == r.terms_.end()) {
      r.terms_[m] = c;
    } else {
      it->second += c;
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [m, c] : r.terms_) {
    (void)m;
    c = -c;
  }
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  return *this + (-o);
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  MultiPoly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      Monomial m(std::max(m1.size(), m2.size()), 0);
      for (std::size_t i = 0; i < m.size(); ++i) {
        unsigned e = 0;
        if (i < m1.size()) e += m1[i];
        if (i < m2.size()) e += m2[i];
        m[i] = e;
      }
      auto it = r.terms_.find(m);
      if (it == r.terms_.end()) {
        Rat c = c1 * c2;
        if (c != 0) r.terms_[m] = c;
      } else {
        it->second += c1 * c2;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
  return r;
}

MultiPoly MultiPoly::scale(const Rat& c) const {
  MultiPoly r;
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& [m, x] : r.terms_) {
    (void)m;
    x *= c;
  }
  return r;
}

MultiPoly MultiPoly::partial_derivative(std::size_t var) const {
  MultiPoly r;
  for (const auto& [m, c] : terms_) {
    if (var >= m.size() || m[var] == 0) continue;
    Monomial d = m;
    unsigned e = d[var];
    d[var] -= 1;
    trim_monomial(d);
    auto it = r.terms_.find(d);
    Rat add = c * Rat(static_cast<long>(e));
    if (it == r.terms_.end())
      r.terms_[d] = add;
    else {
      it->second += add;
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

MultiPoly MultiPoly::substitute(std::size_t var,
                                const MultiPoly& replacement) const {
  MultiPoly r;
  for (const auto& [m, c] : terms_) {
    MultiPoly term = MultiPoly::constant(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      MultiPoly base =
          (i == var) ? replacement : MultiPoly::variable(i);
      for (unsigned e = 0; e < m[i]; ++e) term = term * base;
    }
    r = r + term;
  }
  return r;
}

Rat MultiPoly::eval(const std::vector<Rat>& point) const {
  Rat acc(0);
  for (const auto& [m, c] : terms_) {
    Rat t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (i >= point.size())
        throw std::invalid_argument("eval point dimension too small");
      for (unsigned e = 0; e < m[i]; ++e) t *= point[i];
    }
    acc += t;
  }
  return acc;
}

std::optional<UniPoly> MultiPoly::as_univariate(std::size_t var) const {
  std::vector<Rat> cs;
  for (const auto& [m, c] : terms_) {
    unsigned deg = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (i != var) return std::nullopt;
      deg = m[i];
    }
    if (cs.size() <= deg) cs.resize(deg + 1, Rat(0));
    cs[deg] += c;
  }
  return UniPoly(std::move(cs));
}

std::optional<std::size_t> MultiPoly::sole_variable() const {
  std::optional<std::size_t> v;
  for (const auto& [m, c] : terms_) {
    (void)c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (v && *v != i) return std::nullopt;
      v = i;
    }
  }
  return v;
}

std::string MultiPoly::to_string(
    const std::vector<std::string>& var_names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (sign(c) > 0 ? " + " : " - ");
    Rat a = first ? c : Rat(abs(c));
    first = false;
    bool has_var = false;
    for (unsigned e : m) has_var = has_var || e > 0;
    bool printed = false;
    if (!has_var || a != 1) {
      os << rat_to_string(a);
      printed = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (printed) os << "*";
      printed = true;
      if (i < var_names.size())
        os << var_names[i];
      else
        os << "x" << i;
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

}  // namespace gmx
