#pragma once

// Line bundles on T^2 = R^2 / Z^2 carrying a lattice action: the cocycle
// rho_v(theta) = exp(2 pi i v^T P theta) for an integer pairing matrix P,
// together with a connection 1-form on the fundamental domain whose
// coefficients are affine in theta. Holonomy, curvature, equivariance
// residuals, and the fixed-point obstruction system are all exact.

#include <tdk/exact_linalg.hpp>
#include <tdk/fourier.hpp>

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdk {

class EquivariantLineBundle {
 public:
  EquivariantLineBundle(RatMatrix pairing, FourierForm connection)
      : pairing_(std::move(pairing)), connection_(std::move(connection)) {
    if (pairing_.rows() != 2 || pairing_.cols() != 2)
      throw std::invalid_argument("pairing matrix must be 2x2");
    if (connection_.dimension() != 2)
      throw std::invalid_argument("connection must live on T^2");
    // Cocycle condition rho_{v+w}(theta) = rho_v(theta + w) rho_w(theta):
    // the exponents differ by 2 pi i v^T P w, so the condition over all of
    // Z^2 x Z^2 is exactly integrality of the pairing on lattice vectors.
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        if (!is_integer(pairing_(i, j)))
          throw std::invalid_argument(
              "cocycle condition fails: generator pairing is not integral");
    std::optional<int> deg = connection_.homogeneous_degree();
    if (!connection_.is_zero() && (!deg || *deg != 1))
      throw std::invalid_argument("connection must be a 1-form");
    for (const auto& [key, c] : connection_.periodic())
      for (int k : key.first)
        if (k != 0)
          throw std::invalid_argument(
              "connection coefficients must be affine in theta (no nonzero "
              "Fourier modes)");
  }

  const RatMatrix& pairing() const { return pairing_; }
  const FourierForm& connection() const { return connection_; }

  /// v^T P theta
  Rat pairing_value(const std::array<Int, 2>& v, const std::vector<Rat>& theta) const {
    if (theta.size() != 2) throw std::invalid_argument("point must lie on T^2");
    Rat out(0);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) out += Rat(v[i]) * pairing_(i, j) * theta[j];
    return out;
  }

  /// exp(2 pi i v^T P theta)
  FormalScalar cocycle_phase(const std::array<Int, 2>& v,
                             const std::vector<Rat>& theta) const {
    return FormalScalar::phase_pi_i(2 * pairing_value(v, theta));
  }

  /// residual commutator exponent v^T P w - w^T P v of the two generator
  /// actions; the actions commute exactly when this is an integer
  Rat generator_commutator_defect() const { return pairing_(0, 1) - pairing_(1, 0); }

  /// g^-1 dg for the generator translation e_gen: 2 pi i sum_l P(gen, l) dtheta_l
  FourierForm generator_log_derivative(int gen) const {
    if (gen < 0 || gen > 1) throw std::invalid_argument("generator index");
    FourierForm out(2);
    for (int l = 0; l < 2; ++l)
      out = out + FourierForm::invariant(
                      2, 1u << l,
                      FormalScalar::pi_i(2 * pairing_(std::size_t(gen), std::size_t(l))));
    return out;
  }

 private:
  RatMatrix pairing_;
  FourierForm connection_;
};

inline FourierForm curvature(const EquivariantLineBundle& l) {
  return d(l.connection());
}

struct EquivarianceReport {
  std::array<FourierForm, 2> residuals{FourierForm(2), FourierForm(2)};
  bool passes = false;
};

/// Compares the translated connection against the gauge transform of the
/// cocycle for each lattice generator: residual_g = e_g^* A - A - g^-1 dg.
inline EquivarianceReport check_equivariance(const EquivariantLineBundle& l) {
  EquivarianceReport rep;
  rep.passes = true;
  for (int g = 0; g < 2; ++g) {
    std::vector<Rat> e(2, Rat(0));
    e[std::size_t(g)] = 1;
    rep.residuals[std::size_t(g)] =
        translate(l.connection(), e) - l.connection() - l.generator_log_derivative(g);
    rep.passes = rep.passes && rep.residuals[std::size_t(g)].is_zero();
  }
  return rep;
}

namespace detail {

// integral of the connection along the straight segment from p to q varying
// only coordinate `axis` (exact: coefficients are affine in theta)
inline FormalScalar segment_integral(const FourierForm& a,
                                     const std::vector<Rat>& p,
                                     const std::vector<Rat>& q, int axis) {
  unsigned mask = 1u << axis;
  Rat lo = p[std::size_t(axis)], hi = q[std::size_t(axis)];
  FormalScalar total;
  for (const auto& [key, c] : a.periodic())
    if (key.second == mask) total += (hi - lo) * c;
  for (const auto& [key, c] : a.affine()) {
    if (key.second != mask) continue;
    if (key.first == axis)
      total += (hi * hi - lo * lo) / 2 * c;
    else
      total += p[std::size_t(key.first)] * (hi - lo) * c;
  }
  return total;
}

}  // namespace detail

/// Holonomy around an axis-parallel rational loop, given as a vertex list in
/// R^2 coordinates (the lift); the loop must close on the torus, i.e. end -
/// start must be integral. Transport is exp(-int A) along the lift, composed
/// with the inverse cocycle phase identifying the endpoint fibers.
inline FormalScalar holonomy(const EquivariantLineBundle& l,
                             const std::vector<std::vector<Rat>>& loop) {
  if (loop.size() < 2) throw std::invalid_argument("loop needs at least two vertices");
  FormalScalar exponent;
  for (std::size_t s = 0; s + 1 < loop.size(); ++s) {
    const std::vector<Rat>&p = loop[s], &q = loop[s + 1];
    if (p.size() != 2 || q.size() != 2) throw std::invalid_argument("loop vertices must lie in R^2");
    int axis = -1;
    for (int j = 0; j < 2; ++j) {
      if (p[std::size_t(j)] == q[std::size_t(j)]) continue;
      if (axis >= 0) throw std::invalid_argument("loop segments must be axis-parallel");
      axis = j;
    }
    if (axis < 0) continue;
    exponent += detail::segment_integral(l.connection(), p, q, axis);
  }
  std::array<Int, 2> winding;
  for (int j = 0; j < 2; ++j) {
    Rat diff = loop.back()[std::size_t(j)] - loop.front()[std::size_t(j)];
    if (!is_integer(diff))
      throw std::invalid_argument("loop does not close on the torus");
    winding[std::size_t(j)] = rat_num(diff);
  }
  std::optional<Rat> q_exp = exponent.as_rational_multiple_of_pi_i();
  if (!q_exp)
    throw std::domain_error("transport exponent is not a rational multiple of pi i");
  FormalScalar transport = FormalScalar::phase_pi_i(-*q_exp);
  // fiber identification over the endpoint: s(x + v) = rho_v(x) s(x), so the
  // transported vector is compared through the inverse cocycle phase
  FormalScalar correction =
      FormalScalar::phase_pi_i(-2 * l.pairing_value(winding, loop.front()));
  return transport * correction;
}

/// Difference of the connection under translation by (t, 0): t^*A - A. The
/// affine slot cancels termwise, so the result is an honest invariant form
/// whose periods measure the failure of the translation to lift.
inline FourierForm cs_difference(const EquivariantLineBundle& l, const Rat& t) {
  return translate(l.connection(), {t, Rat(0)}) - l.connection();
}

struct ObstructionReport {
  bool feasible = false;
  long group_order = 0;
  int cutoff = 0;
  /// invariant connection correction solving every comparison equation,
  /// present when the system is feasible
  std::optional<FourierForm> alpha;
  std::string blocking;
  std::optional<IntInfeasibilityCertificate> certificate;
  IntMatrix projected_system;
  std::vector<Int> projected_rhs;
};

/// Searches for a 1-form alpha and, per group element t = j/N, a gauge term
/// d beta_t plus an integral-period closed form rho_t, with
///   cs_difference(t) = t^* alpha - alpha + d beta_t + rho_t
/// simultaneously for all t in (1/N) Z / Z. Every operator in the system
/// preserves the Fourier mode, cs_difference is concentrated in the zero
/// mode (the affine slot cancels and mode-0 translation phases are 1), and
/// the nonzero-mode blocks are homogeneous, hence always solvable by zero.
/// Feasibility is therefore decided by the zero-mode block, where t^* alpha -
/// alpha and d beta_t vanish identically and only the integral periods
/// rho_t = 2 pi i (a_t dtheta_1 + b_t dtheta_2) remain; that block is solved
/// as a mixed integer/rational system with certificates. The cutoff is
/// recorded for the report; the zero-mode block does not depend on it, which
/// is exactly why infeasibility persists under truncation changes.
inline ObstructionReport fixed_obstruction_check(const EquivariantLineBundle& l,
                                                 long n, int cutoff) {
  if (n < 1) throw std::invalid_argument("group order must be positive");
  ObstructionReport rep;
  rep.group_order = n;
  rep.cutoff = cutoff;

  std::vector<FourierForm> cs;
  int conductor = 4;
  int pi_lo = 1, pi_hi = 2;  // the period columns 2 pi i live at pi^1
  for (long j = 1; j < n; ++j) {
    cs.push_back(cs_difference(l, Rat(j) / Rat(n)));
    if (!is_geometrically_invariant(cs.back()))
      throw std::logic_error("comparison form escaped the zero mode");
    for (const auto& [key, c] : cs.back().periodic()) {
      conductor = std::lcm(conductor, c.conductor());
      pi_lo = std::min(pi_lo, c.min_pi_power());
      pi_hi = std::max(pi_hi, c.max_pi_power() + 1);
    }
  }
  detail::ScalarWindow window{pi_lo, pi_hi, conductor};

  // rows: (group element, dtheta component, scalar slot)
  std::size_t t_count = std::size_t(n - 1);
  std::size_t rows = t_count * 2 * window.width();
  auto row_base = [&](std::size_t ti, int mask_axis) {
    return (ti * 2 + std::size_t(mask_axis)) * window.width();
  };
  // integer columns: periods a_t, b_t; rational columns: the zero-mode
  // coefficients of alpha, on which t^* - 1 acts as zero (kept explicit)
  IntMatrix a_int(rows, t_count * 2);
  RatMatrix a_rat(rows, 2 * window.width());
  std::vector<Rat> b(rows, Rat(0));
  std::vector<Rat> two_pi_i = window.linearize(FormalScalar::pi_i(Rat(2)));
  Int denom_lcm(1);
  for (const Rat& x : two_pi_i) denom_lcm = boost::multiprecision::lcm(denom_lcm, rat_den(x));
  if (denom_lcm != 1) throw std::logic_error("period column is not integral");
  for (std::size_t ti = 0; ti < t_count; ++ti)
    for (int axis = 0; axis < 2; ++axis) {
      for (std::size_t s = 0; s < two_pi_i.size(); ++s)
        a_int(row_base(ti, axis) + s, ti * 2 + std::size_t(axis)) = rat_num(two_pi_i[s]);
      std::vector<int> zero_mode(2, 0);
      std::vector<Rat> rhs =
          window.linearize(cs[ti].periodic_coefficient(zero_mode, 1u << axis));
      for (std::size_t s = 0; s < rhs.size(); ++s) b[row_base(ti, axis) + s] = rhs[s];
    }

  MixedSolveResult sol = solve_mixed(a_int, a_rat, b);
  rep.projected_system = sol.projected_a;
  rep.projected_rhs = sol.projected_b;
  if (sol.feasible()) {
    rep.feasible = true;
    FourierForm alpha(2);
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<Rat> coeffs(window.width());
      for (std::size_t s = 0; s < coeffs.size(); ++s)
        coeffs[s] = sol.solution->second[std::size_t(axis) * window.width() + s];
      alpha.add_periodic({0, 0}, 1u << axis, window.delinearize(coeffs));
    }
    rep.alpha = std::move(alpha);
    return rep;
  }
  rep.certificate = sol.integral_certificate;
  std::ostringstream why;
  why << "no integral periods match the comparison forms: the dtheta_2 period "
         "of the translation comparison at t = 1/"
      << n << " lies outside 2 pi i Z";
  rep.blocking = why.str();
  return rep;
}

/// cocycle exp(2 pi i n theta_2), connection 2 pi i theta_1 dtheta_2
inline EquivariantLineBundle poincare_standard() {
  RatMatrix p(2, 2);
  p(0, 1) = 1;
  FourierForm a(2);
  a.add_affine(0, 2u, FormalScalar::pi_i(Rat(2)));
  return EquivariantLineBundle(p, a);
}

/// cocycle exp(2 pi i (n theta_2 + m theta_1)), symmetrized connection
/// pi i (theta_1 dtheta_2 - theta_2 dtheta_1)
inline EquivariantLineBundle poincare_symmetric() {
  RatMatrix p(2, 2);
  p(0, 1) = 1;
  p(1, 0) = 1;
  FourierForm a(2);
  a.add_affine(0, 2u, FormalScalar::pi_i(Rat(1)));
  a.add_affine(1, 1u, FormalScalar::pi_i(Rat(-1)));
  return EquivariantLineBundle(p, a);
}

/// trivial cocycle, zero connection
inline EquivariantLineBundle trivial_bundle() {
  return EquivariantLineBundle(RatMatrix(2, 2), FourierForm(2));
}

inline std::vector<std::string> builtin_bundle_names() {
  return {"poincare-standard", "poincare-symmetric", "trivial-bundle"};
}

inline EquivariantLineBundle builtin_bundle(const std::string& name) {
  if (name == "poincare-standard") return poincare_standard();
  if (name == "poincare-symmetric" || name == "poincare-paper")  // accepted alias
    return poincare_symmetric();
  if (name == "trivial-bundle") return trivial_bundle();
  throw std::invalid_argument("unknown bundle fixture: " + name);
}

}  // namespace tdk
