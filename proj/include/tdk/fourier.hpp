#pragma once

// Differential forms on the n-torus with finite Fourier support and exact
// coefficients. A form is a periodic part, indexed by (integer mode vector,
// exterior monomial), plus an affine slot holding theta-linear terms
// theta_j * c * dtheta_S. The affine slot is not itself a form on the torus;
// it exists so connection 1-forms of non-flat line bundles can be carried
// through d, translation, and difference constructions, all of which keep
// the two slots consistent. Group-averaging operations reject affine terms.

#include <tdk/exact_linalg.hpp>
#include <tdk/formal_scalar.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tdk {

namespace detail {

// sign of dtheta_{S_a} ^ dtheta_{S_b} relative to the sorted merge; masks
// must be disjoint
inline int merge_sign(unsigned a, unsigned b) {
  int inversions = 0;
  for (int i = 0; i < 32; ++i)
    if (a >> i & 1u)
      for (int j = 0; j < i; ++j)
        if (b >> j & 1u) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// sign of dtheta_j ^ dtheta_S as a sorted monomial; j must not lie in S
inline int insert_sign(int j, unsigned s) {
  int below = 0;
  for (int l = 0; l < j; ++l)
    if (s >> l & 1u) ++below;
  return below % 2 == 0 ? 1 : -1;
}

}  // namespace detail

class FourierForm {
 public:
  using PeriodicKey = std::pair<std::vector<int>, unsigned>;
  using AffineKey = std::pair<int, unsigned>;

  explicit FourierForm(int n = 2) : n_(n) {
    if (n < 1 || n > 16) throw std::invalid_argument("torus dimension out of range");
  }

  int dimension() const { return n_; }

  /// translation-invariant term: zero mode, given monomial
  static FourierForm invariant(int n, unsigned mask, const FormalScalar& c) {
    FourierForm f(n);
    f.add_periodic(std::vector<int>(std::size_t(n), 0), mask, c);
    return f;
  }

  void add_periodic(std::vector<int> mode, unsigned mask, const FormalScalar& c) {
    check_key(mode.size() == std::size_t(n_), mask);
    if (c.is_zero()) return;
    auto [it, fresh] = periodic_.try_emplace({std::move(mode), mask}, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) periodic_.erase(it);
    }
  }

  /// theta_axis * c * dtheta_mask
  void add_affine(int axis, unsigned mask, const FormalScalar& c) {
    check_key(axis >= 0 && axis < n_, mask);
    if (c.is_zero()) return;
    auto [it, fresh] = affine_.try_emplace({axis, mask}, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) affine_.erase(it);
    }
  }

  const std::map<PeriodicKey, FormalScalar>& periodic() const { return periodic_; }
  const std::map<AffineKey, FormalScalar>& affine() const { return affine_; }

  FormalScalar periodic_coefficient(const std::vector<int>& mode, unsigned mask) const {
    auto it = periodic_.find({mode, mask});
    return it == periodic_.end() ? FormalScalar() : it->second;
  }
  FormalScalar affine_coefficient(int axis, unsigned mask) const {
    auto it = affine_.find({axis, mask});
    return it == affine_.end() ? FormalScalar() : it->second;
  }

  bool is_zero() const { return periodic_.empty() && affine_.empty(); }
  bool has_affine_part() const { return !affine_.empty(); }

  /// max |k|_inf over the periodic support
  int support_cutoff() const {
    int cut = 0;
    for (const auto& [key, c] : periodic_)
      for (int k : key.first) cut = std::max(cut, k < 0 ? -k : k);
    return cut;
  }

  std::optional<int> homogeneous_degree() const {
    std::optional<int> deg;
    auto visit = [&](unsigned mask) {
      int d = __builtin_popcount(mask);
      if (!deg) deg = d;
      return *deg == d;
    };
    for (const auto& [key, c] : periodic_)
      if (!visit(key.second)) return std::nullopt;
    for (const auto& [key, c] : affine_)
      if (!visit(key.second)) return std::nullopt;
    return deg;
  }

  friend FourierForm operator+(const FourierForm& a, const FourierForm& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("torus dimension mismatch");
    FourierForm out = a;
    for (const auto& [key, c] : b.periodic_) out.add_periodic(key.first, key.second, c);
    for (const auto& [key, c] : b.affine_) out.add_affine(key.first, key.second, c);
    return out;
  }
  friend FourierForm operator-(const FourierForm& a, const FourierForm& b) {
    return a + -b;
  }
  FourierForm operator-() const {
    FourierForm out(n_);
    for (const auto& [key, c] : periodic_) out.periodic_[key] = -c;
    for (const auto& [key, c] : affine_) out.affine_[key] = -c;
    return out;
  }
  friend FourierForm operator*(const FormalScalar& s, const FourierForm& a) {
    FourierForm out(a.n_);
    for (const auto& [key, c] : a.periodic_) out.add_periodic(key.first, key.second, s * c);
    for (const auto& [key, c] : a.affine_) out.add_affine(key.first, key.second, s * c);
    return out;
  }
  friend FourierForm operator*(const Rat& q, const FourierForm& a) {
    return FormalScalar::rational(q) * a;
  }
  friend bool operator==(const FourierForm& a, const FourierForm& b) {
    return a.n_ == b.n_ && a.periodic_ == b.periodic_ && a.affine_ == b.affine_;
  }
  friend bool operator!=(const FourierForm& a, const FourierForm& b) { return !(a == b); }

  friend FourierForm d(const FourierForm& w) {
    FourierForm out(w.n_);
    for (const auto& [key, c] : w.periodic_) {
      const auto& [mode, mask] = key;
      for (int j = 0; j < w.n_; ++j) {
        if (mode[std::size_t(j)] == 0 || (mask >> j & 1u)) continue;
        FormalScalar coeff =
            Rat(detail::insert_sign(j, mask)) *
            (FormalScalar::pi_i(Rat(2) * Rat(mode[std::size_t(j)])) * c);
        out.add_periodic(mode, mask | 1u << j, coeff);
      }
    }
    // d(theta_j c dtheta_S) = c dtheta_j ^ dtheta_S, an invariant term
    std::vector<int> zero_mode(std::size_t(w.n_), 0);
    for (const auto& [key, c] : w.affine_) {
      const auto& [axis, mask] = key;
      if (mask >> axis & 1u) continue;
      out.add_periodic(zero_mode, mask | 1u << axis,
                       Rat(detail::insert_sign(axis, mask)) * c);
    }
    return out;
  }

  friend FourierForm translate(const FourierForm& w, const std::vector<Rat>& t) {
    if (t.size() != std::size_t(w.n_)) throw std::invalid_argument("translation dimension");
    FourierForm out(w.n_);
    for (const auto& [key, c] : w.periodic_) {
      Rat kt(0);
      for (int j = 0; j < w.n_; ++j) kt += Rat(key.first[std::size_t(j)]) * t[std::size_t(j)];
      out.add_periodic(key.first, key.second, FormalScalar::phase_pi_i(2 * kt) * c);
    }
    std::vector<int> zero_mode(std::size_t(w.n_), 0);
    for (const auto& [key, c] : w.affine_) {
      out.add_affine(key.first, key.second, c);
      out.add_periodic(zero_mode, key.second, t[std::size_t(key.first)] * c);
    }
    return out;
  }

  friend FourierForm wedge(const FourierForm& a, const FourierForm& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("torus dimension mismatch");
    FourierForm out(a.n_);
    for (const auto& [ka, ca] : a.periodic_)
      for (const auto& [kb, cb] : b.periodic_) {
        if (ka.second & kb.second) continue;
        std::vector<int> mode = ka.first;
        for (int j = 0; j < a.n_; ++j) mode[std::size_t(j)] += kb.first[std::size_t(j)];
        out.add_periodic(std::move(mode), ka.second | kb.second,
                         Rat(detail::merge_sign(ka.second, kb.second)) * (ca * cb));
      }
    auto zero_mode = [&](const std::vector<int>& k) {
      for (int x : k)
        if (x != 0) return false;
      return true;
    };
    auto affine_times_periodic = [&](const std::pair<AffineKey, FormalScalar>& at,
                                     const std::pair<PeriodicKey, FormalScalar>& pt,
                                     bool affine_left) {
      if (at.first.second & pt.first.second) return;
      if (!zero_mode(pt.first.first))
        throw std::domain_error(
            "product of an affine term with a nonzero Fourier mode leaves the "
            "representable space");
      int sign = affine_left ? detail::merge_sign(at.first.second, pt.first.second)
                             : detail::merge_sign(pt.first.second, at.first.second);
      out.add_affine(at.first.first, at.first.second | pt.first.second,
                     Rat(sign) * (at.second * pt.second));
    };
    for (const auto& at : a.affine_)
      for (const auto& bt : b.affine_)
        if (!(at.first.second & bt.first.second))
          throw std::domain_error("product of two affine terms is not theta-linear");
    for (const auto& at : a.affine_)
      for (const auto& pt : b.periodic_) affine_times_periodic(at, pt, true);
    for (const auto& pt : a.periodic_)
      for (const auto& bt : b.affine_) affine_times_periodic(bt, pt, false);
    return out;
  }

  /// zero-mode projection; group averaging is undefined on affine terms
  friend FourierForm average(const FourierForm& w) {
    if (w.has_affine_part())
      throw std::invalid_argument("average of a theta-linear term is not defined");
    FourierForm out(w.n_);
    for (const auto& [key, c] : w.periodic_) {
      bool zero = true;
      for (int k : key.first) zero = zero && k == 0;
      if (zero) out.add_periodic(key.first, key.second, c);
    }
    return out;
  }

 private:
  void check_key(bool dim_ok, unsigned mask) const {
    if (!dim_ok) throw std::invalid_argument("mode/axis does not match torus dimension");
    if (mask >> n_) throw std::invalid_argument("monomial uses directions beyond the torus");
  }

  int n_;
  std::map<PeriodicKey, FormalScalar> periodic_;
  std::map<AffineKey, FormalScalar> affine_;
};

inline bool is_geometrically_invariant(const FourierForm& w) {
  if (w.has_affine_part()) return false;
  for (const auto& [key, c] : w.periodic())
    for (int k : key.first)
      if (k != 0) return false;
  return true;
}

struct InvariantDecomposition {
  FourierForm invariant_part;
  FourierForm alpha;
  bool exact = false;  // solver found alpha with omega == invariant_part + d_h alpha
};

namespace detail {

// Q-linearization window for FormalScalar coefficients: pi powers in
// [pi_lo, pi_hi) over the zeta basis of Q(zeta_m)
struct ScalarWindow {
  int pi_lo, pi_hi, m;
  std::size_t width() const {
    return std::size_t(pi_hi - pi_lo) * std::size_t(cyclo::totient(m));
  }
  std::size_t slot(int pi_pow, std::size_t zeta_idx) const {
    return std::size_t(pi_pow - pi_lo) * std::size_t(cyclo::totient(m)) + zeta_idx;
  }
  bool contains(const FormalScalar& s) const {
    return s.is_zero() || (s.min_pi_power() >= pi_lo && s.max_pi_power() < pi_hi);
  }
  std::vector<Rat> linearize(const FormalScalar& s) const {
    if (!contains(s))
      throw std::logic_error("scalar support exceeds the linearization window");
    std::vector<Rat> out(width(), Rat(0));
    for (int p = pi_lo; p < pi_hi; ++p) {
      std::vector<Rat> c = s.pi_coefficient(p, m);
      for (std::size_t j = 0; j < c.size(); ++j) out[slot(p, j)] = c[j];
    }
    return out;
  }
  FormalScalar delinearize(const std::vector<Rat>& v) const {
    FormalScalar out;
    std::size_t phi = std::size_t(cyclo::totient(m));
    for (int p = pi_lo; p < pi_hi; ++p) {
      FormalScalar zeta_part;
      for (std::size_t j = 0; j < phi; ++j) {
        Rat q = v[slot(p, j)];
        if (q == 0) continue;
        zeta_part += q * FormalScalar::zeta(m, long(j));
      }
      out += FormalScalar::pi(p) * zeta_part;
    }
    return out;
  }
};

}  // namespace detail

/// Splits a d_h-closed periodic form as (average, alpha) with
/// omega = average + d_h alpha, solving mode by mode; h must be invariant
/// and closed (h may be the zero form for the untwisted case).
inline InvariantDecomposition invariant_decomposition(const FourierForm& w,
                                                      const FourierForm& h) {
  int n = w.dimension();
  if (w.has_affine_part())
    throw std::invalid_argument("invariant decomposition needs a periodic form");
  if (!is_geometrically_invariant(h) || !d(h).is_zero())
    throw std::invalid_argument("twist must be an invariant closed form");
  FourierForm dh_w = d(w) + wedge(h, w);
  if (!dh_w.is_zero()) throw std::invalid_argument("form is not d_h closed");

  InvariantDecomposition out{average(w), FourierForm(n), true};
  FourierForm rest = w - out.invariant_part;

  // residual equation d_h alpha_k = rest_k decouples over modes k != 0
  std::map<std::vector<int>, std::map<unsigned, FormalScalar>> by_mode;
  int conductor = 4;
  int pi_lo = 0, pi_hi = 1;
  auto widen = [&](const FormalScalar& s) {
    conductor = std::lcm(conductor, s.conductor());
    if (!s.is_zero()) {
      pi_lo = std::min(pi_lo, s.min_pi_power());
      pi_hi = std::max(pi_hi, s.max_pi_power() + 1);
    }
  };
  for (const auto& [key, c] : rest.periodic()) {
    by_mode[key.first][key.second] = c;
    widen(c);
  }
  int h_max_pi = 1, h_min_pi = 1;
  for (const auto& [key, c] : h.periodic()) {
    widen(c);
    h_max_pi = std::max(h_max_pi, c.max_pi_power());
    h_min_pi = std::min(h_min_pi, c.min_pi_power());
  }
  // d raises the pi degree by exactly 1 and the h-wedge shifts it by the pi
  // powers of h. When every operator shifts by exactly +1 (h zero or purely
  // pi-linear, the 2 pi i normalization), any solution decomposes into
  // pi-homogeneous layers one step below the residue; otherwise alpha may sit
  // up to (n+1) inversion steps below it.
  int up = h_max_pi;
  int down = (h_min_pi == 1 && h_max_pi == 1)
                 ? 1
                 : 1 + n * std::max(1, 1 - h_min_pi);
  detail::ScalarWindow unknowns{pi_lo - down, pi_hi, conductor};
  detail::ScalarWindow equations{unknowns.pi_lo + std::min(0, h_min_pi),
                                 unknowns.pi_hi + up, conductor};

  std::size_t masks = 1u << n;
  for (auto& [mode, rhs_terms] : by_mode) {
    // columns: unknown alpha coefficients per monomial and scalar slot
    std::size_t ucols = masks * unknowns.width();
    std::size_t erows = masks * equations.width();
    RatMatrix a(erows, ucols);
    std::vector<Rat> b(erows, Rat(0));
    auto eq_base = [&](unsigned mask) { return std::size_t(mask) * equations.width(); };
    auto add_block = [&](unsigned eq_mask, unsigned un_mask, const FormalScalar& factor) {
      // contribution factor * alpha_{un_mask} to equation row block eq_mask
      for (int p = unknowns.pi_lo; p < unknowns.pi_hi; ++p)
        for (long j = 0; j < cyclo::totient(unknowns.m); ++j) {
          FormalScalar image =
              factor * (FormalScalar::pi(p) * FormalScalar::zeta(unknowns.m, j));
          std::vector<Rat> img = equations.linearize(image);
          std::size_t col = std::size_t(un_mask) * unknowns.width() +
                            unknowns.slot(p, std::size_t(j));
          for (std::size_t r = 0; r < img.size(); ++r)
            if (img[r] != 0) a(eq_base(eq_mask) + r, col) += img[r];
        }
    };
    for (unsigned mask = 0; mask < masks; ++mask) {
      for (int j = 0; j < n; ++j) {
        if ((mask >> j & 1u) || mode[std::size_t(j)] == 0) continue;
        add_block(mask | 1u << j, mask,
                  Rat(detail::insert_sign(j, mask)) *
                      FormalScalar::pi_i(Rat(2) * Rat(mode[std::size_t(j)])));
      }
      for (const auto& [hkey, hc] : h.periodic()) {
        if (hkey.second & mask) continue;
        add_block(mask | hkey.second, mask,
                  Rat(detail::merge_sign(hkey.second, mask)) * hc);
      }
    }
    for (const auto& [mask, c] : rhs_terms) {
      if (!equations.contains(c)) {
        out.exact = false;
        break;
      }
      std::vector<Rat> rhs = equations.linearize(c);
      for (std::size_t r = 0; r < rhs.size(); ++r) b[eq_base(mask) + r] = rhs[r];
    }
    if (!out.exact) break;
    RatSolveResult sol = rational_solve(a, b);
    if (!sol.solution) {
      out.exact = false;
      break;
    }
    for (unsigned mask = 0; mask < masks; ++mask) {
      std::vector<Rat> coeffs(unknowns.width());
      for (std::size_t s = 0; s < coeffs.size(); ++s)
        coeffs[s] = (*sol.solution)[std::size_t(mask) * unknowns.width() + s];
      out.alpha.add_periodic(mode, mask, unknowns.delinearize(coeffs));
    }
  }
  return out;
}

inline InvariantDecomposition invariant_decomposition(const FourierForm& w) {
  return invariant_decomposition(w, FourierForm(w.dimension()));
}

}  // namespace tdk
