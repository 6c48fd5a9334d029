#pragma once

// Exact scalars of the shape  sum_p  pi^p * (element of Q(zeta_M)),
// with pi a formal transcendental and M a conductor divisible by 4 so that
// i = zeta_4 is always present. Cyclotomic elements live in Q[x]/Phi_M(x);
// mixing conductors lifts both operands to the least common multiple.
//
// Root-of-unity phases exp(pi*i*q) with rational q are therefore exact
// elements: exp(pi*i*a/b) = zeta_{2b}^a.

#include <tdk/matrix.hpp>

#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tdk {

namespace cyclo {

// dense polynomials over Q, lowest degree first, no trailing zeros
using QPoly = std::vector<Rat>;

inline void strip(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  strip(out);
  return out;
}

// quotient of an exact division (throws when the division is not exact)
inline QPoly exact_div(QPoly num, const QPoly& den) {
  if (den.empty()) throw std::invalid_argument("division by zero polynomial");
  QPoly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Rat(0));
  while (num.size() >= den.size()) {
    Rat c = num.back() / den.back();
    std::size_t shift = num.size() - den.size();
    q[shift] = c;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
    strip(num);
  }
  if (!num.empty()) throw std::logic_error("inexact polynomial division");
  strip(q);
  return q;
}

inline QPoly mod(QPoly num, const QPoly& den) {
  while (num.size() >= den.size()) {
    Rat c = num.back() / den.back();
    std::size_t shift = num.size() - den.size();
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
    strip(num);
  }
  return num;
}

// Phi_M, computed as (x^M - 1) / prod_{d | M, d < M} Phi_d and cached
inline const QPoly& cyclotomic(long m) {
  static std::map<long, QPoly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  QPoly num(std::size_t(m) + 1, Rat(0));
  num[0] = -1;
  num[std::size_t(m)] = 1;
  for (long d = 1; d < m; ++d)
    if (m % d == 0) num = exact_div(num, cyclotomic(d));
  return cache.emplace(m, std::move(num)).first->second;
}

inline long totient(long m) { return long(cyclotomic(m).size()) - 1; }

}  // namespace cyclo

class FormalScalar {
 public:
  FormalScalar() : m_(4) {}

  static FormalScalar rational(const Rat& q) {
    FormalScalar s;
    if (q != 0) s.terms_[0] = {q};
    return s;
  }
  static FormalScalar pi(int power = 1) {
    FormalScalar s;
    s.terms_[power] = {Rat(1)};
    return s;
  }
  /// zeta_n^power, at conductor lcm(4, n)
  static FormalScalar zeta(long n, long power = 1) {
    if (n < 1) throw std::invalid_argument("zeta order must be positive");
    FormalScalar s;
    s.m_ = std::lcm(4l, n);
    power = ((power % n) + n) % n;
    cyclo::QPoly x(std::size_t(power * (s.m_ / n)) + 1, Rat(0));
    x.back() = 1;
    cyclo::QPoly r = cyclo::mod(std::move(x), cyclo::cyclotomic(s.m_));
    if (!r.empty()) s.terms_[0] = std::move(r);
    return s;
  }
  static FormalScalar i_unit() { return zeta(4); }
  /// q * pi * i
  static FormalScalar pi_i(const Rat& q) { return rational(q) * pi() * i_unit(); }
  /// exp(pi*i*q) for rational q, as the exact root of unity zeta_{2b}^a
  static FormalScalar phase_pi_i(const Rat& q) {
    Int num = rat_num(q), den = rat_den(q);
    return zeta(2 * long(den), long(num % (2 * den)));
  }

  bool is_zero() const { return terms_.empty(); }
  int conductor() const { return m_; }
  int min_pi_power() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_pi_power() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  friend FormalScalar operator+(const FormalScalar& a, const FormalScalar& b) {
    int m = std::lcm(a.m_, b.m_);
    FormalScalar out;
    out.m_ = m;
    for (const auto& [p, c] : a.terms_) out.add_term(p, lift(c, a.m_, m));
    for (const auto& [p, c] : b.terms_) out.add_term(p, lift(c, b.m_, m));
    return out;
  }
  friend FormalScalar operator-(const FormalScalar& a, const FormalScalar& b) {
    return a + (-b);
  }
  FormalScalar operator-() const {
    FormalScalar out = *this;
    for (auto& [p, c] : out.terms_)
      for (Rat& x : c) x = -x;
    return out;
  }
  friend FormalScalar operator*(const FormalScalar& a, const FormalScalar& b) {
    int m = std::lcm(a.m_, b.m_);
    const cyclo::QPoly& phi = cyclo::cyclotomic(m);
    FormalScalar out;
    out.m_ = m;
    for (const auto& [pa, ca] : a.terms_) {
      cyclo::QPoly la = lift(ca, a.m_, m);
      for (const auto& [pb, cb] : b.terms_)
        out.add_term(pa + pb, cyclo::mod(cyclo::mul(la, lift(cb, b.m_, m)), phi));
    }
    return out;
  }
  friend FormalScalar operator*(const Rat& q, const FormalScalar& a) {
    if (q == 0) return FormalScalar();
    FormalScalar out = a;
    for (auto& [p, c] : out.terms_)
      for (Rat& x : c) x *= q;
    return out;
  }
  FormalScalar& operator+=(const FormalScalar& o) { return *this = *this + o; }
  FormalScalar& operator-=(const FormalScalar& o) { return *this = *this - o; }
  FormalScalar& operator*=(const FormalScalar& o) { return *this = *this * o; }

  friend bool operator==(const FormalScalar& a, const FormalScalar& b) {
    int m = std::lcm(a.m_, b.m_);
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
        if (!all_zero(ia->second)) return false;
        ++ia;
      } else if (ia == a.terms_.end() || ib->first < ia->first) {
        if (!all_zero(ib->second)) return false;
        ++ib;
      } else {
        if (lift(ia->second, a.m_, m) != lift(ib->second, b.m_, m)) return false;
        ++ia;
        ++ib;
      }
    }
    return true;
  }
  friend bool operator!=(const FormalScalar& a, const FormalScalar& b) { return !(a == b); }

  /// coefficient of pi^p, lifted to the requested conductor, padded to phi(m)
  std::vector<Rat> pi_coefficient(int p, int m) const {
    std::vector<Rat> out(std::size_t(cyclo::totient(m)), Rat(0));
    auto it = terms_.find(p);
    if (it == terms_.end()) return out;
    cyclo::QPoly l = lift(it->second, m_, m);
    for (std::size_t i = 0; i < l.size(); ++i) out[i] = l[i];
    return out;
  }

  std::optional<Rat> as_rational() const {
    if (terms_.empty()) return Rat(0);
    if (terms_.size() != 1 || terms_.begin()->first != 0) return std::nullopt;
    const cyclo::QPoly& c = terms_.begin()->second;
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] != 0) return std::nullopt;
    return c.empty() ? Rat(0) : c[0];
  }

  /// q such that this == q * pi * i, when it has that shape
  std::optional<Rat> as_rational_multiple_of_pi_i() const {
    if (is_zero()) return Rat(0);
    if (terms_.size() != 1 || terms_.begin()->first != 1) return std::nullopt;
    FormalScalar c;
    c.m_ = m_;
    c.terms_[0] = terms_.begin()->second;
    return (c * -i_unit()).as_rational();  // 1/i = -i
  }

  /// raw term access for serialization: (pi power, cyclotomic coefficients)
  const std::map<int, cyclo::QPoly>& terms() const { return terms_; }

 private:
  static bool all_zero(const cyclo::QPoly& c) {
    for (const Rat& x : c)
      if (x != 0) return false;
    return true;
  }

  // zeta_{m1} = zeta_m^{m/m1}: substitute x -> x^{m/m1} and reduce
  static cyclo::QPoly lift(const cyclo::QPoly& c, int m1, int m) {
    if (m1 == m) return c;
    long stride = m / m1;
    cyclo::QPoly big(c.size() * std::size_t(stride), Rat(0));
    if (c.empty()) return {};
    big.resize((c.size() - 1) * std::size_t(stride) + 1, Rat(0));
    for (std::size_t i = 0; i < c.size(); ++i) big[i * std::size_t(stride)] = c[i];
    return cyclo::mod(std::move(big), cyclo::cyclotomic(m));
  }

  void add_term(int p, cyclo::QPoly c) {
    cyclo::strip(c);
    if (c.empty()) return;
    auto it = terms_.find(p);
    if (it == terms_.end()) {
      terms_[p] = std::move(c);
      return;
    }
    cyclo::QPoly& dst = it->second;
    if (dst.size() < c.size()) dst.resize(c.size(), Rat(0));
    for (std::size_t i = 0; i < c.size(); ++i) dst[i] += c[i];
    cyclo::strip(dst);
    if (dst.empty()) terms_.erase(it);
  }

  int m_;
  std::map<int, cyclo::QPoly> terms_;
};

}  // namespace tdk
