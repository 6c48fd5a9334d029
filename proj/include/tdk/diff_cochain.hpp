#pragma once

#include <tdk/cohomology.hpp>

#include <optional>
#include <string>

namespace tdk {

/// Differential cochain in C^p(q)(X;Lambda): an integral cochain c of degree
/// p, a V-valued cochain h of degree p-1, and for p >= q a V-valued "form"
/// slot omega of degree p.  Forms are modeled by V-valued simplicial cochains
/// and the comparison map between them is the identity, so every compatibility
/// below is exact rather than up-to-homotopy.
struct DiffCochain {
  int p = 0;
  int q = 0;
  IntCochain c;
  RatCochain h;
  std::optional<RatCochain> omega;

  std::size_t rank() const { return c.rank; }
  const SimplicialComplex& complex() const { return *c.complex; }

  static DiffCochain zero(const SimplicialComplex& x, int p, int q, std::size_t rank = 1) {
    DiffCochain d;
    d.p = p;
    d.q = q;
    d.c = IntCochain::zero(x, p, rank);
    d.h = RatCochain::zero(x, p - 1, rank);
    if (p >= q) d.omega = RatCochain::zero(x, p, rank);
    return d;
  }

  /// Unit for the differential cup product, in C^0(0).
  static DiffCochain unit(const SimplicialComplex& x) {
    DiffCochain d = zero(x, 0, 0);
    d.c = IntCochain::unit(x);
    d.omega = to_rational(d.c);
    return d;
  }

  void validate() const {
    if (omega.has_value() != (p >= q)) throw std::invalid_argument("omega slot presence violates p >= q");
    if (c.degree != p || h.degree != p - 1) throw std::invalid_argument("slot degree mismatch");
    if (omega && omega->degree != p) throw std::invalid_argument("omega degree mismatch");
    if (h.rank != c.rank || (omega && omega->rank != c.rank))
      throw std::invalid_argument("slot rank mismatch");
  }

  DiffCochain operator+(const DiffCochain& o) const {
    DiffCochain r = *this;
    r.c = c + o.c;
    r.h = h + o.h;
    if (omega && o.omega) r.omega = *omega + *o.omega;
    return r;
  }
  DiffCochain operator-(const DiffCochain& o) const {
    DiffCochain r = *this;
    r.c = c - o.c;
    r.h = h - o.h;
    if (omega && o.omega) r.omega = *omega - *o.omega;
    return r;
  }

  bool is_zero() const { return c.is_zero() && h.is_zero() && (!omega || omega->is_zero()); }

  /// Slotwise equality of the underlying data (ignores the filtration tag;
  /// used to compare a differential against a target across the natural
  /// inclusion C^p(q) -> C^p(q')).
  bool same_data(const DiffCochain& o) const {
    if (c != o.c || h != o.h) return false;
    const RatCochain zl = omega ? *omega : RatCochain::zero(complex(), p, rank());
    const RatCochain zr = o.omega ? *o.omega : RatCochain::zero(o.complex(), o.p, o.rank());
    return zl == zr;
  }
};

/// Curvature: the form slot (zero when the slot is absent).
inline RatCochain curvature(const DiffCochain& x) {
  return x.omega ? *x.omega : RatCochain::zero(x.complex(), x.p, x.rank());
}

/// Characteristic cocycle: the integral slot.
inline const IntCochain& char_cocycle(const DiffCochain& x) { return x.c; }

/// The differential: three branches depending on p against q.
///   p >= q   : (dc, c_V - omega - dh, d omega)
///   p = q-1  : (dc, c_V - dh, 0)       (target acquires the form slot)
///   p < q-1  : (dc, c_V - dh)
inline DiffCochain dcheck(const DiffCochain& x) {
  x.validate();
  DiffCochain r;
  r.p = x.p + 1;
  r.q = x.q;
  r.c = coboundary(x.c);
  RatCochain cv = to_rational(x.c);
  if (x.p >= x.q) {
    r.h = cv - *x.omega - coboundary(x.h);
    r.omega = coboundary(*x.omega);
  } else if (x.p == x.q - 1) {
    r.h = cv - coboundary(x.h);
    r.omega = RatCochain::zero(x.complex(), r.p, x.rank());
  } else {
    r.h = cv - coboundary(x.h);
  }
  return r;
}

inline bool is_diff_cocycle(const DiffCochain& x) { return dcheck(x).is_zero(); }

/// The inclusion of forms: i(beta) = (0, -beta, d beta) in C^p(p) for beta of
/// degree p-1.  Sends closed lattice-period forms to trivialisable classes
/// and satisfies Curv(i(beta)) = d beta, char(i(beta)) = 0.
inline DiffCochain include_form(const RatCochain& beta) {
  DiffCochain r = DiffCochain::zero(*beta.complex, beta.degree + 1, beta.degree + 1, beta.rank);
  r.h = -beta;
  r.omega = coboundary(beta);
  return r;
}

namespace detail {

template <typename CupInt, typename CupRat>
DiffCochain diff_cup_impl(const DiffCochain& x, const DiffCochain& y, CupInt ci, CupRat cr) {
  x.validate();
  y.validate();
  DiffCochain r;
  r.p = x.p + y.p;
  r.q = x.q + y.q;
  r.c = ci(x.c, y.c);
  RatCochain h2 = cr(to_rational(x.c), y.h);
  if (x.p % 2 != 0) h2 = -h2;
  r.h = h2 + cr(x.h, curvature(y));
  if (r.p >= r.q) r.omega = cr(curvature(x), curvature(y));
  return r;
}

}  // namespace detail

/// Differential cup product for scalar (rank-1) coefficients:
///   x cup y = (c1 c2, (-1)^{p1} c1 h2 + h1 w2, w1 w2)
/// with absent form slots read as zero.
inline DiffCochain diff_cup(const DiffCochain& x, const DiffCochain& y) {
  return detail::diff_cup_impl(
      x, y, [](const IntCochain& a, const IntCochain& b) { return cup(a, b); },
      [](const RatCochain& a, const RatCochain& b) { return cup(a, b); });
}

/// Differential cup with the lattice/dual pairing contraction: coefficients
/// of x in Lambda, of y in the dual, output rank 1.
inline DiffCochain diff_dot_cup(const DiffCochain& x, const DiffCochain& y, const Lattice& lat) {
  return detail::diff_cup_impl(
      x, y, [&lat](const IntCochain& a, const IntCochain& b) { return dot_pairing(a, b, lat); },
      [&lat](const RatCochain& a, const RatCochain& b) { return dot_pairing(a, b, lat); });
}

/// Isomorphism type of Hat H^p(X;Lambda) in this model:
///   Z^free_rank + (torsion chain) + (Q/Z)^divisible_rank + Q^vector_dim.
/// The Q-summands come from non-closed form directions (h-slot freedom) and
/// are genuinely divisible torsion-free, so they are tracked separately from
/// the finitely generated part.
struct DiffCohomologyPresentation {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;
  std::size_t divisible_rank = 0;
  std::size_t vector_dim = 0;

  bool operator==(const DiffCohomologyPresentation&) const = default;
};

/// Hat H^p(X;Lambda) for a rank-r lattice, p >= 1, assembled from the two
/// exact sequences it sits in:
///   0 -> H^{p-1}(X;V/L) -> HatH^p -> Omega_L^p -> 0   (curvature sequence)
///   0 -> Omega^{p-1}/Omega_L^{p-1} -> HatH^p -> H^p(X;L) -> 0
/// Both determine the same split answer because every quotient involved is
/// divisible; the pieces are Betti numbers, integral torsion, and the rank of
/// the (p-1)-coboundary.
inline DiffCohomologyPresentation diff_cohomology(const SimplicialComplex& x, int p,
                                                  std::size_t rank = 1) {
  if (p < 1) throw std::invalid_argument("diff_cohomology: need p >= 1");
  DiffCohomologyPresentation out;
  std::size_t bp = betti(x, p), bpm1 = betti(x, p - 1);
  std::size_t rho = rational_rank(to_rational(x.coboundary_matrix(p - 1)));
  std::vector<Int> tp = integer_cohomology(x, p).presentation().torsion;
  out.free_rank = rank * bp;
  out.divisible_rank = rank * bpm1;
  out.vector_dim = rank * rho;
  std::vector<Int> t;
  for (std::size_t i = 0; i < rank; ++i) t.insert(t.end(), tp.begin(), tp.end());
  out.torsion = normalize_torsion(std::move(t));
  return out;
}

/// Rank bookkeeping for the two exact sequences around Hat H^p.  Each flag
/// compares the presentation above against an independently computed side.
struct SequenceReport {
  /// flat part (ker Curv) against H^{p-1}(X;V/Lambda) from the coefficient
  /// sequence 0 -> L -> V -> V/L -> 0
  bool flat_part_matches = false;
  /// char surjects with the full integral cohomology: free rank and torsion
  /// of H^p(X;Lambda) both appear
  bool char_part_matches = false;
  /// the i-image: divisible_rank counts closed-form directions mod lattice
  /// periods (b_{p-1}), vector_dim the non-closed directions (rank d_{p-1})
  bool form_part_matches = false;
  /// dim C^{p-1} = (non-closed) + (harmonic) + (exact) directions
  bool dimension_bookkeeping = false;
  /// constructive: every integral cocycle generator lifts to a cocycle
  /// (c, 0, c_V) whose char is the chosen generator
  bool char_lifts_are_cocycles = false;
  /// constructive: Curv(i(beta)) = d beta and char(i(beta)) = 0 on a sample
  bool curv_after_include_is_d = false;

  bool all() const {
    return flat_part_matches && char_part_matches && form_part_matches && dimension_bookkeeping &&
           char_lifts_are_cocycles && curv_after_include_is_d;
  }
};

inline SequenceReport sequence_report(const SimplicialComplex& x, int p, std::size_t rank = 1) {
  SequenceReport r;
  DiffCohomologyPresentation hat = diff_cohomology(x, p, rank);

  AbelianGroupPresentation flat = cohomology(x, p - 1, Coeff::torus, rank);
  r.flat_part_matches =
      flat.divisible_rank == hat.divisible_rank && flat.torsion == hat.torsion && flat.free_rank == 0;

  AbelianGroupPresentation integral = cohomology(x, p, Coeff::lattice, rank);
  r.char_part_matches = integral.free_rank == hat.free_rank && integral.torsion == hat.torsion;

  std::size_t bpm1 = betti(x, p - 1);
  std::size_t rho = rational_rank(to_rational(x.coboundary_matrix(p - 1)));
  r.form_part_matches = hat.divisible_rank == rank * bpm1 && hat.vector_dim == rank * rho;

  std::size_t exact_below =
      p >= 2 ? rational_rank(to_rational(x.coboundary_matrix(p - 2))) : 0;
  r.dimension_bookkeeping = x.count(p - 1) == rho + bpm1 + exact_below;

  r.char_lifts_are_cocycles = true;
  IntegerCohomology hp = integer_cohomology(x, p);
  for (const std::vector<Int>& g : hp.generators()) {
    DiffCochain lift = DiffCochain::zero(x, p, p, 1);
    lift.c.set_slot(0, g);
    lift.omega = to_rational(lift.c);
    if (!is_diff_cocycle(lift)) r.char_lifts_are_cocycles = false;
    std::vector<Int> back = hp.class_coordinates(char_cocycle(lift).slot(0));
    if (back != hp.class_coordinates(g)) r.char_lifts_are_cocycles = false;
  }

  Rng rng(2026);
  RatCochain beta = rng.cochain<Rat>(x, p - 1, rank);
  DiffCochain inc = include_form(beta);
  r.curv_after_include_is_d =
      curvature(inc) == coboundary(beta) && char_cocycle(inc).is_zero() && is_diff_cocycle(inc);
  return r;
}

/// Outcome of a trivialisation search.  When the class is trivialisable the
/// witness alpha satisfies dcheck(alpha).same_data(x); otherwise the reason
/// names the obstructed stage and, for the linear stages, a self-verifiable
/// infeasibility certificate for the reported system is attached.
struct TrivialisationResult {
  bool exists = false;
  std::optional<DiffCochain> alpha;

  std::string reason;  // "", "char", "curvature", "periods"
  std::size_t failing_slot = 0;
  std::optional<IntInfeasibilityCertificate> certificate;
  IntMatrix system;  // the integer system the certificate refers to
  std::vector<Int> rhs;
};

/// Geometric trivialisation: alpha in C^{p-1}(p-1) with x = dcheck(alpha)
/// under the inclusion C^p(p-1) -> C^p(p).  Exists iff the characteristic
/// cocycle is an integral coboundary; curvature is NOT required to vanish.
inline TrivialisationResult geometric_trivialisation(const DiffCochain& x) {
  x.validate();
  if (x.p != x.q) throw std::invalid_argument("geometric_trivialisation: need p = q");
  if (!is_diff_cocycle(x)) throw std::invalid_argument("geometric_trivialisation: not a cocycle");
  const SimplicialComplex& X = x.complex();
  const int p = x.p;
  TrivialisationResult res;

  IntMatrix d = X.coboundary_matrix(p - 1);
  IntSolver solver(d);
  IntCochain a = IntCochain::zero(X, p - 1, x.rank());
  for (std::size_t j = 0; j < x.rank(); ++j) {
    IntSolveResult r = solver.solve(x.c.slot(j));
    if (!r.feasible()) {
      res.reason = "char";
      res.failing_slot = j;
      res.certificate = r.certificate;
      res.system = d;
      res.rhs = x.c.slot(j);
      return res;
    }
    a.set_slot(j, *r.solution);
  }
  // remaining slots close automatically: rho := a_V - h forces
  // h-slot = a_V - rho - d(0) = h and form slot d rho = c_V - d h = omega
  // (the cocycle condition supplies the last equality)
  DiffCochain alpha = DiffCochain::zero(X, p - 1, p - 1, x.rank());
  alpha.c = a;
  alpha.omega = to_rational(a) - x.h;
  res.exists = true;
  res.alpha = alpha;
  return res;
}

/// Topological trivialisation: alpha = (a, b) in C^{p-1}(p), no form slot, so
/// x = dcheck(alpha) additionally forces Curv(x) = 0 and makes the h-slot a
/// mixed integer/rational condition: a must be an integral preimage of c
/// whose V-image differs from h by an exact cochain.
inline TrivialisationResult topological_trivialisation(const DiffCochain& x) {
  x.validate();
  if (x.p != x.q) throw std::invalid_argument("topological_trivialisation: need p = q");
  if (!is_diff_cocycle(x)) throw std::invalid_argument("topological_trivialisation: not a cocycle");
  const SimplicialComplex& X = x.complex();
  const int p = x.p;
  TrivialisationResult res;

  if (!curvature(x).is_zero()) {
    res.reason = "curvature";
    return res;
  }
  IntMatrix d = X.coboundary_matrix(p - 1);
  IntSolver solver(d);
  IntMatrix db = p >= 2 ? X.coboundary_matrix(p - 2) : IntMatrix(X.count(p - 1), 0);
  RatMatrix dbq = to_rational(db);

  IntCochain a = IntCochain::zero(X, p - 1, x.rank());
  RatCochain b = RatCochain::zero(X, p - 2, x.rank());
  for (std::size_t j = 0; j < x.rank(); ++j) {
    IntSolveResult r = solver.solve(x.c.slot(j));
    if (!r.feasible()) {
      res.reason = "char";
      res.failing_slot = j;
      res.certificate = r.certificate;
      res.system = d;
      res.rhs = x.c.slot(j);
      return res;
    }
    // general integral preimage: a0 + K t; require a_V - d b = h, i.e.
    //   K_V t - d b = h - a0_V  with t integral, b rational
    const IntMatrix& k = solver.kernel_basis();
    std::vector<Rat> rhs(X.count(p - 1));
    std::vector<Rat> h = x.h.slot(j);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = h[i] - Rat((*r.solution)[i]);
    MixedSolveResult m = solve_mixed(k, -dbq, rhs);
    if (!m.feasible()) {
      res.reason = "periods";
      res.failing_slot = j;
      res.certificate = m.integral_certificate;
      res.system = m.projected_a;
      res.rhs = m.projected_b;
      return res;
    }
    std::vector<Int> av = *r.solution;
    std::vector<Int> kt = k.apply(m.solution->first);
    for (std::size_t i = 0; i < av.size(); ++i) av[i] += kt[i];
    a.set_slot(j, av);
    b.set_slot(j, m.solution->second);
  }
  DiffCochain alpha = DiffCochain::zero(X, p - 1, p, x.rank());
  alpha.c = a;
  alpha.h = b;
  res.exists = true;
  res.alpha = alpha;
  return res;
}

/// Verification of a differential T-duality pair at the cochain level: two
/// degree-2 cocycles with values in dual lattices, and a candidate geometric
/// trivialisation sigma of their dot-pairing class in degree 4.  When sigma
/// is null the witness is searched for.  A valid pair forces the cup of the
/// characteristic classes to vanish integrally; the report carries that
/// derived fact and, on rejection, the residual data.
struct PairCheckReport {
  bool p_cocycle = false;
  bool phat_cocycle = false;
  bool sigma_valid = false;
  bool char_cup_vanishes = false;
  std::optional<DiffCochain> residual;  // dcheck(sigma) - pairing, when sigma was supplied
  std::optional<TrivialisationResult> search;

  bool valid() const { return p_cocycle && phat_cocycle && sigma_valid; }
};

inline PairCheckReport pair_check(const DiffCochain& P, const DiffCochain& Phat,
                                  const std::optional<DiffCochain>& sigma, const Lattice& lat) {
  if (P.p != 2 || P.q != 2 || Phat.p != 2 || Phat.q != 2)
    throw std::invalid_argument("pair_check: degree-2 filtration-2 cocycles required");
  if (P.rank() != lat.rank || Phat.rank() != lat.rank)
    throw std::invalid_argument("pair_check: lattice rank mismatch");
  PairCheckReport rep;
  rep.p_cocycle = is_diff_cocycle(P);
  rep.phat_cocycle = is_diff_cocycle(Phat);

  DiffCochain pairing = diff_dot_cup(P, Phat, lat);  // in C^4(4), rank 1
  IntCochain cc = cup_with(P.c, Phat.c, 1, [&lat](const std::vector<Int>& a, const std::vector<Int>& b) {
    Int acc(0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (lat.pairing(i, j) != 0) acc += a[i] * Int(lat.pairing(i, j)) * b[j];
    return std::vector<Int>{acc};
  });
  rep.char_cup_vanishes = is_integer_coboundary(cc);

  if (sigma) {
    sigma->validate();
    if (sigma->p != 3 || sigma->q != 3)
      throw std::invalid_argument("pair_check: sigma must live in C^3(3)");
    DiffCochain image = dcheck(*sigma);
    rep.sigma_valid = image.same_data(pairing);
    if (!rep.sigma_valid) rep.residual = image - pairing;
  } else {
    TrivialisationResult found = geometric_trivialisation(pairing);
    rep.sigma_valid = found.exists;
    rep.search = std::move(found);
  }
  return rep;
}

}  // namespace tdk
