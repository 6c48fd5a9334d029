#pragma once

// Torus-bundle duality models over a finitely presented base algebra.
//
// A model adjoins degree-1 fiber generators A_i (dA_i = F_i) and dual fiber
// generators Ahat^i (dAhat^i = Fhat^i) to the base, together with a degree-3
// base element sigma satisfying d sigma = sum F_i Fhat^i. The derived data
//   P    = sum A_i ^ Ahat^i        (fiberwise Poincare form)
//   h    = sigma - sum A_i ^ Fhat^i
//   hhat = sigma - sum F_i ^ Ahat^i
// then satisfies dh = dhhat = 0 and dP = h - hhat, which construction
// verifies rather than assumes.
//
// Fiber integration extracts the coefficient of the full ascending A-block
// moved to the front; the transform T(w) = pi_*(exp P ^ w) and its reverse
// (roles of A and Ahat swapped, so the Poincare form flips sign) are the
// Buscher/Hori maps on invariant forms.

#include <tdk/cdga.hpp>

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tdk {

struct ModelSpec {
  std::string name;
  std::vector<GeneratorSpec> base_generators;
  std::map<std::string, Poly> base_differentials;
  int torus_rank = 1;
  std::vector<Poly> curvature;       // F_i, degree-2 base polynomials
  std::vector<Poly> dual_curvature;  // Fhat^i
  Poly sigma;                        // degree-3 base polynomial
};

struct TDualityModel {
  std::string name;
  int k = 1;
  std::shared_ptr<const CDGA> algebra;
  std::size_t base_generator_count = 0;
  std::vector<std::size_t> fiber;       // generator indices of A_1..A_k
  std::vector<std::size_t> dual_fiber;  // Ahat^1..Ahat^k
  std::vector<InvariantForm> F, Fhat;
  InvariantForm sigma, poincare, h, hhat;
  std::vector<std::size_t> side_basis;       // monomials free of Ahat factors
  std::vector<std::size_t> dual_side_basis;  // monomials free of A factors

  std::string fiber_name(int i) const {
    return k == 1 ? std::string("A") : "A" + std::to_string(i + 1);
  }
  std::string dual_fiber_name(int i) const {
    return k == 1 ? std::string("Â") : "Â" + std::to_string(i + 1);
  }
};

namespace detail {

inline bool uses_only_base(const TDualityModel& m, const InvariantForm& x) {
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
    if (x.coeffs[i] == 0) continue;
    const auto& e = m.algebra->exponents(i);
    for (std::size_t g = m.base_generator_count; g < m.algebra->num_generators(); ++g)
      if (e[g] != 0) return false;
  }
  return true;
}

}  // namespace detail

inline TDualityModel build_model(const ModelSpec& spec) {
  if (spec.torus_rank < 1) throw std::invalid_argument("torus rank must be positive");
  if (spec.curvature.size() != std::size_t(spec.torus_rank) ||
      spec.dual_curvature.size() != std::size_t(spec.torus_rank))
    throw std::invalid_argument("need one curvature per fiber generator");

  TDualityModel m;
  m.name = spec.name;
  m.k = spec.torus_rank;
  m.base_generator_count = spec.base_generators.size();

  std::vector<GeneratorSpec> gens = spec.base_generators;
  std::map<std::string, Poly> diffs = spec.base_differentials;
  for (int i = 0; i < m.k; ++i) {
    gens.push_back({m.fiber_name(i), 1, 2});
    diffs[m.fiber_name(i)] = spec.curvature[i];
  }
  for (int i = 0; i < m.k; ++i) {
    gens.push_back({m.dual_fiber_name(i), 1, 2});
    diffs[m.dual_fiber_name(i)] = spec.dual_curvature[i];
  }
  m.algebra = std::make_shared<CDGA>(std::move(gens), diffs);
  const CDGA& a = *m.algebra;

  for (int i = 0; i < m.k; ++i) {
    m.fiber.push_back(std::size_t(a.generator_index(m.fiber_name(i))));
    m.dual_fiber.push_back(std::size_t(a.generator_index(m.dual_fiber_name(i))));
  }

  auto base_form = [&](const Poly& p, int degree, const char* what) {
    InvariantForm f = form_from_poly(a, p);
    int deg = 0;
    if (!f.is_homogeneous(&deg) || (!f.is_zero() && deg != degree))
      throw std::invalid_argument(std::string(what) + " must be homogeneous of degree " +
                                  std::to_string(degree));
    if (!detail::uses_only_base(m, f))
      throw std::invalid_argument(std::string(what) + " must be a base element");
    return f;
  };

  InvariantForm ffhat = InvariantForm::zero(a);
  for (int i = 0; i < m.k; ++i) {
    m.F.push_back(base_form(spec.curvature[i], 2, "curvature"));
    m.Fhat.push_back(base_form(spec.dual_curvature[i], 2, "dual curvature"));
    if (!d(m.F[i]).is_zero() || !d(m.Fhat[i]).is_zero())
      throw std::invalid_argument("curvatures must be closed");
    ffhat += wedge(m.F[i], m.Fhat[i]);
  }
  m.sigma = base_form(spec.sigma, 3, "sigma");
  if (!(d(m.sigma) == ffhat))
    throw std::invalid_argument("sigma must satisfy d sigma = sum F_i Fhat^i");

  m.poincare = InvariantForm::zero(a);
  m.h = m.sigma;
  m.hhat = m.sigma;
  for (int i = 0; i < m.k; ++i) {
    InvariantForm A = InvariantForm::generator(a, m.fiber_name(i));
    InvariantForm Ahat = InvariantForm::generator(a, m.dual_fiber_name(i));
    m.poincare += wedge(A, Ahat);
    m.h -= wedge(A, m.Fhat[i]);
    m.hhat -= wedge(m.F[i], Ahat);
  }
  if (!d(m.h).is_zero() || !d(m.hhat).is_zero())
    throw std::logic_error("twists failed to close");
  if (!(d(m.poincare) == m.h - m.hhat))
    throw std::logic_error("dP = h - hhat failed");

  for (std::size_t i = 0; i < a.dim(); ++i) {
    const auto& e = a.exponents(i);
    bool has_a = false, has_ahat = false;
    for (int j = 0; j < m.k; ++j) {
      if (e[m.fiber[j]] != 0) has_a = true;
      if (e[m.dual_fiber[j]] != 0) has_ahat = true;
    }
    if (!has_ahat) m.side_basis.push_back(i);
    if (!has_a) m.dual_side_basis.push_back(i);
  }
  return m;
}

/// Coefficient of the full ascending A-block moved to the front. The block
/// sits after the base factors in storage order, so the Koszul sign is
/// (-1)^(k * number of odd base factors).
inline InvariantForm fiber_integrate(const TDualityModel& m, const InvariantForm& w) {
  const CDGA& a = *m.algebra;
  InvariantForm out = InvariantForm::zero(a);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (w.coeffs[i] == 0) continue;
    const auto& e = a.exponents(i);
    bool full = true;
    for (int j = 0; j < m.k; ++j)
      if (e[m.fiber[j]] != 1) full = false;
    if (!full) continue;
    long odd_before = 0;
    for (std::size_t g = 0; g < m.base_generator_count; ++g)
      if (a.generator(g).degree % 2 != 0 && e[g] != 0) odd_before += e[g];
    std::vector<unsigned char> target = e;
    for (int j = 0; j < m.k; ++j) target[m.fiber[j]] = 0;
    Rat sign = (long(m.k) * odd_before) % 2 == 0 ? Rat(1) : Rat(-1);
    out += sign * w.coeffs[i] * m.algebra->monomial_form(target);
  }
  return out;
}

/// Dual-side analogue: coefficient of the full Ahat-block, which in storage
/// order follows both the base factors and any A factors.
inline InvariantForm dual_fiber_integrate(const TDualityModel& m, const InvariantForm& w) {
  const CDGA& a = *m.algebra;
  InvariantForm out = InvariantForm::zero(a);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (w.coeffs[i] == 0) continue;
    const auto& e = a.exponents(i);
    bool full = true;
    for (int j = 0; j < m.k; ++j)
      if (e[m.dual_fiber[j]] != 1) full = false;
    if (!full) continue;
    long odd_before = 0;
    for (std::size_t g = 0; g < m.base_generator_count; ++g)
      if (a.generator(g).degree % 2 != 0 && e[g] != 0) odd_before += e[g];
    for (int j = 0; j < m.k; ++j) odd_before += e[m.fiber[j]];
    std::vector<unsigned char> target = e;
    for (int j = 0; j < m.k; ++j) target[m.dual_fiber[j]] = 0;
    Rat sign = (long(m.k) * odd_before) % 2 == 0 ? Rat(1) : Rat(-1);
    out += sign * w.coeffs[i] * m.algebra->monomial_form(target);
  }
  return out;
}

inline bool on_side(const TDualityModel& m, const InvariantForm& w, bool dual) {
  const auto& fibers = dual ? m.fiber : m.dual_fiber;
  for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
    if (w.coeffs[i] == 0) continue;
    const auto& e = m.algebra->exponents(i);
    for (std::size_t f : fibers)
      if (e[f] != 0) return false;
  }
  return true;
}

inline InvariantForm hori_transform(const TDualityModel& m, const InvariantForm& w) {
  if (w.alg != m.algebra.get()) throw std::logic_error("form from a different model");
  if (!on_side(m, w, false))
    throw std::invalid_argument("input contains dual-side fiber generators");
  return fiber_integrate(m, wedge(exp_nilpotent(m.poincare), w));
}

inline InvariantForm hori_reverse(const TDualityModel& m, const InvariantForm& w) {
  if (w.alg != m.algebra.get()) throw std::logic_error("form from a different model");
  if (!on_side(m, w, true)) throw std::invalid_argument("input contains fiber generators");
  return dual_fiber_integrate(m, wedge(exp_nilpotent(-m.poincare), w));
}

struct HoriReport {
  bool chain_map = false;       // d_hhat(T w) == T(d_h w) on the full side basis
  int chain_map_sign = 0;       // s with d_hhat(T w) == s T(d_h w), 0 if none
  bool proof_identity = false;  // d_hhat(expP ^ w) == expP ^ d_h w, all w
  bool exact_to_exact = false;  // T of every d_h-exact basis form is d_hhat-exact
  bool iso = false;
  std::vector<std::array<int, 2>> involution_sign;  // (degree, sign) per side degree
  bool involution_constant_per_degree = false;
  bool degree_parity_shift_ok = false;  // parity shift is k mod 2 wherever T != 0
};

inline HoriReport verify_hori(const TDualityModel& m) {
  const CDGA& a = *m.algebra;
  HoriReport rep;

  auto side_form = [&](std::size_t idx) {
    InvariantForm f = InvariantForm::zero(a);
    f.coeffs[idx] = 1;
    return f;
  };

  bool plus = true, minus = true;
  for (std::size_t idx : m.side_basis) {
    InvariantForm w = side_form(idx);
    InvariantForm lhs = twisted_d(m.hhat, hori_transform(m, w));
    InvariantForm rhs = hori_transform(m, twisted_d(m.h, w));
    if (!(lhs == rhs)) plus = false;
    if (!(lhs == -rhs)) minus = false;
  }
  rep.chain_map = plus;
  rep.chain_map_sign = plus ? 1 : (minus ? -1 : 0);

  rep.proof_identity = true;
  InvariantForm expP = exp_nilpotent(m.poincare);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    InvariantForm w = side_form(i);
    if (!(twisted_d(m.hhat, wedge(expP, w)) == wedge(expP, twisted_d(m.h, w)))) {
      rep.proof_identity = false;
      break;
    }
  }

  // matrix of T between the side bases, and of d_hhat on the dual side
  std::size_t n = m.side_basis.size();
  std::size_t nd = m.dual_side_basis.size();
  std::map<std::size_t, std::size_t> dual_pos;
  for (std::size_t c = 0; c < nd; ++c) dual_pos[m.dual_side_basis[c]] = c;
  RatMatrix tmat(nd, n);
  for (std::size_t c = 0; c < n; ++c) {
    InvariantForm img = hori_transform(m, side_form(m.side_basis[c]));
    for (std::size_t r = 0; r < nd; ++r) tmat(r, c) = img.coeffs[m.dual_side_basis[r]];
  }
  rep.iso = n == nd && rational_rank(tmat) == n;

  RatMatrix dh_dual(nd, nd);
  for (std::size_t c = 0; c < nd; ++c) {
    InvariantForm img = twisted_d(m.hhat, side_form(m.dual_side_basis[c]));
    for (std::size_t r = 0; r < nd; ++r) dh_dual(r, c) = img.coeffs[m.dual_side_basis[r]];
  }
  rep.exact_to_exact = true;
  for (std::size_t c = 0; c < n; ++c) {
    InvariantForm y = hori_transform(m, twisted_d(m.h, side_form(m.side_basis[c])));
    std::vector<Rat> b(nd);
    for (std::size_t r = 0; r < nd; ++r) b[r] = y.coeffs[m.dual_side_basis[r]];
    if (!rational_solve(dh_dual, b).solution) {
      rep.exact_to_exact = false;
      break;
    }
  }

  rep.degree_parity_shift_ok = true;
  std::map<int, int> sign_by_degree;
  rep.involution_constant_per_degree = true;
  for (std::size_t idx : m.side_basis) {
    InvariantForm w = side_form(idx);
    InvariantForm t = hori_transform(m, w);
    int tdeg = 0;
    if (!t.is_homogeneous(&tdeg) ||
        (!t.is_zero() && ((tdeg - a.degree(idx)) % 2 + 2) % 2 != m.k % 2))
      rep.degree_parity_shift_ok = false;

    InvariantForm round = hori_reverse(m, t);
    int s = 0;
    if (round == w)
      s = 1;
    else if (round == -w)
      s = -1;
    else {
      rep.involution_constant_per_degree = false;
      continue;
    }
    auto [it, fresh] = sign_by_degree.emplace(a.degree(idx), s);
    if (!fresh && it->second != s) rep.involution_constant_per_degree = false;
  }
  for (const auto& [deg, s] : sign_by_degree) rep.involution_sign.push_back({deg, s});
  return rep;
}

struct PushforwardTwistReport {
  bool consistent = false;
  int sign = 0;  // 0 when both sides vanish and any sign works
  InvariantForm pushed_h, pushed_hhat;
};

/// k = 1 only: checks fiber_integrate(h) = s * Fhat and the dual statement
/// for one sign s shared by both directions.
inline PushforwardTwistReport pushforward_twist_check(const TDualityModel& m) {
  if (m.k != 1) throw std::invalid_argument("pushforward twist check requires torus rank 1");
  PushforwardTwistReport rep;
  rep.pushed_h = fiber_integrate(m, m.h);
  rep.pushed_hhat = dual_fiber_integrate(m, m.hhat);
  for (int s : {1, -1}) {
    if (rep.pushed_h == Rat(s) * m.Fhat[0] && rep.pushed_hhat == Rat(s) * m.F[0]) {
      rep.consistent = true;
      if (!rep.pushed_h.is_zero() || !rep.pushed_hhat.is_zero()) rep.sign = s;
      break;
    }
  }
  return rep;
}

// ---- built-in models -------------------------------------------------------

inline const std::vector<std::string>& builtin_model_names() {
  static const std::vector<std::string> names = {"point-k1",   "hopf-model", "buscher-k1",
                                                 "flat-k2",    "twisted-k2", "sphere-uv"};
  return names;
}

inline ModelSpec builtin_model_spec(const std::string& name) {
  ModelSpec s;
  s.name = name;
  if (name == "point-k1") {
    s.torus_rank = 1;
    s.curvature = {{}};
    s.dual_curvature = {{}};
  } else if (name == "hopf-model") {
    s.base_generators = {{"u", 2, 2}};
    s.torus_rank = 1;
    s.curvature = {{{Rat(1), {"u"}}}};
    s.dual_curvature = {{}};
  } else if (name == "buscher-k1") {
    s.base_generators = {{"x", 1, 2}, {"y", 1, 2}};
    s.torus_rank = 1;
    s.curvature = {{{Rat(1), {"x", "y"}}}};
    s.dual_curvature = {{}};
  } else if (name == "flat-k2") {
    s.torus_rank = 2;
    s.curvature = {{}, {}};
    s.dual_curvature = {{}, {}};
  } else if (name == "twisted-k2") {
    s.base_generators = {{"u", 2, 2}, {"v", 2, 2}};
    s.torus_rank = 2;
    s.curvature = {{{Rat(1), {"u"}}}, {}};
    s.dual_curvature = {{}, {{Rat(1), {"v"}}}};
  } else if (name == "sphere-uv") {
    s.base_generators = {{"u", 2, 2}, {"v", 2, 2}, {"w", 3, 2}};
    s.base_differentials["w"] = {{Rat(1), {"u", "v"}}};
    s.torus_rank = 1;
    s.curvature = {{{Rat(1), {"u"}}}};
    s.dual_curvature = {{{Rat(1), {"v"}}}};
    s.sigma = {{Rat(1), {"w"}}};
  } else {
    throw std::invalid_argument("unknown model: " + name);
  }
  return s;
}

inline TDualityModel builtin_model(const std::string& name) {
  return build_model(builtin_model_spec(name));
}

inline const std::vector<std::string>& builtin_cdga_names() {
  static const std::vector<std::string> names = {"point-cdga", "t3-cdga"};
  return names;
}

inline CDGA builtin_cdga(const std::string& name) {
  if (name == "point-cdga") return CDGA({}, {});
  if (name == "t3-cdga")
    return CDGA({{"x", 1, 2}, {"y", 1, 2}, {"z", 1, 2}}, {});
  throw std::invalid_argument("unknown algebra: " + name);
}

}  // namespace tdk
