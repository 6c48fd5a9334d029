#pragma once

#include <tdk/cochain.hpp>
#include <tdk/exact_linalg.hpp>
#include <tdk/rng.hpp>

namespace tdk {

/// Coefficient systems: the lattice Lambda, the vector space V = Lambda (x) Q,
/// and the torus V/Lambda.
enum class Coeff { lattice, vector, torus };

inline std::size_t betti(const SimplicialComplex& x, int p) {
  if (p < 0) return 0;
  RatMatrix dp = to_rational(x.coboundary_matrix(p));
  std::size_t kernel_dim = x.count(p) - rational_rank(dp);
  std::size_t image_dim = p == 0 ? 0 : rational_rank(to_rational(x.coboundary_matrix(p - 1)));
  return kernel_dim - image_dim;
}

/// H^p(X; Z) with full coordinate machinery, coefficient rank 1.
/// Generators are cocycles kernel * u_inv[:, j]; generator j has order
/// orders[j] (0 = infinite, 1 = trivial and skipped in coordinates).
struct IntegerCohomology {
  IntMatrix kernel;  // columns: basis of ker(coboundary_p), saturated
  SmithNormalForm relations;
  std::vector<Int> orders;

  AbelianGroupPresentation presentation() const {
    AbelianGroupPresentation p;
    for (const Int& d : orders) {
      if (d == 0)
        ++p.free_rank;
      else if (d >= 2)
        p.torsion.push_back(d);
    }
    p.torsion = normalize_torsion(p.torsion);
    return p;
  }

  /// All generators with nontrivial order, as cocycle coordinate vectors.
  std::vector<std::vector<Int>> generators() const {
    std::vector<std::vector<Int>> out;
    for (std::size_t j = 0; j < orders.size(); ++j) {
      if (orders[j] == 1) continue;
      std::vector<Int> e(orders.size(), Int(0));
      e[j] = 1;
      out.push_back(kernel.apply(relations.u_inv.apply(e)));
    }
    return out;
  }

  /// Coordinates of a cocycle in the generator basis, torsion coordinates
  /// reduced mod the order.  Throws if z is not in the kernel lattice.
  std::vector<Int> class_coordinates(const std::vector<Int>& z) const {
    IntSolveResult r = solve_integer(kernel, z);
    if (!r.feasible()) throw std::invalid_argument("class_coordinates: not a cocycle");
    std::vector<Int> t = relations.u.apply(*r.solution);
    std::vector<Int> out;
    for (std::size_t j = 0; j < orders.size(); ++j) {
      if (orders[j] == 1) continue;
      if (orders[j] == 0) {
        out.push_back(t[j]);
      } else {
        Int m = t[j] % orders[j];
        if (m < 0) m += orders[j];
        out.push_back(m);
      }
    }
    return out;
  }
};

inline IntegerCohomology integer_cohomology(const SimplicialComplex& x, int p) {
  IntegerCohomology h;
  h.kernel = integer_kernel_basis(x.coboundary_matrix(p));
  IntMatrix im = p == 0 ? IntMatrix(x.count(0), 0) : x.coboundary_matrix(p - 1);
  // express the coboundary image in kernel coordinates; one factorization
  // answers every column
  IntSolver solver(h.kernel);
  IntMatrix y(h.kernel.cols(), im.cols());
  for (std::size_t j = 0; j < im.cols(); ++j) {
    IntSolveResult r = solver.solve(im.column(j));
    if (!r.feasible()) throw std::logic_error("integer_cohomology: coboundary not a cocycle");
    y.set_column(j, *r.solution);
  }
  h.relations = smith_normal_form(y);
  h.orders.assign(h.kernel.cols(), Int(0));
  std::size_t n = std::min(y.rows(), y.cols());
  for (std::size_t i = 0; i < n; ++i) h.orders[i] = h.relations.d(i, i);
  return h;
}

/// Presentation of H^p(X; coeff) for a lattice of the given rank.  The
/// coefficient module splits as rank copies of the scalar case, so the
/// result is a direct sum of rank identical scalar presentations.
/// For V coefficients free_rank counts V-dimensions (Q-dimensions per
/// lattice generator); for V/Lambda the divisible summands are counted by
/// divisible_rank and the finite part is the integral torsion one degree up
/// (the connecting-map image of the coefficient sequence 0 -> L -> V -> V/L -> 0).
inline AbelianGroupPresentation cohomology(const SimplicialComplex& x, int p, Coeff coeff,
                                           std::size_t rank = 1) {
  if (p < 0) throw std::invalid_argument("cohomology: negative degree");
  AbelianGroupPresentation scalar;
  switch (coeff) {
    case Coeff::lattice:
      scalar = integer_cohomology(x, p).presentation();
      break;
    case Coeff::vector:
      scalar.free_rank = betti(x, p);
      break;
    case Coeff::torus: {
      scalar.divisible_rank = betti(x, p);
      scalar.torsion = integer_cohomology(x, p + 1).presentation().torsion;
      break;
    }
  }
  AbelianGroupPresentation out;
  for (std::size_t i = 0; i < rank; ++i) out = direct_sum(out, scalar);
  return out;
}

/// Is the rank-1 integer cocycle z a coboundary?  Result carries the witness
/// or the divisibility certificate.
inline IntSolveResult integer_coboundary_solve(const SimplicialComplex& x, int p,
                                               const std::vector<Int>& z) {
  IntMatrix d = p == 0 ? IntMatrix(x.count(0), 0) : x.coboundary_matrix(p - 1);
  return solve_integer(d, z);
}

inline RatSolveResult rational_coboundary_solve(const SimplicialComplex& x, int p,
                                                const std::vector<Rat>& z) {
  RatMatrix d = to_rational(p == 0 ? IntMatrix(x.count(0), 0) : x.coboundary_matrix(p - 1));
  return rational_solve(d, z);
}

template <typename S>
bool is_cocycle(const Cochain<S>& c) {
  return coboundary(c).is_zero();
}

/// Multi-rank coboundary test: every coefficient slot must be a coboundary.
inline bool is_integer_coboundary(const IntCochain& z) {
  for (std::size_t j = 0; j < z.rank; ++j)
    if (!integer_coboundary_solve(*z.complex, z.degree, z.slot(j)).feasible()) return false;
  return true;
}

inline bool is_rational_coboundary(const RatCochain& z) {
  for (std::size_t j = 0; j < z.rank; ++j)
    if (!rational_coboundary_solve(*z.complex, z.degree, z.slot(j)).feasible()) return false;
  return true;
}

/// Random cocycle with small coordinates: a lattice point of the kernel.
inline IntCochain random_integer_cocycle(Rng& rng, const SimplicialComplex& x, int p,
                                         std::size_t rank = 1) {
  IntMatrix k = integer_kernel_basis(x.coboundary_matrix(p));
  IntCochain c = IntCochain::zero(x, p, rank);
  for (std::size_t j = 0; j < rank; ++j) {
    std::vector<Int> coeff(k.cols());
    for (auto& v : coeff) v = rng.range(-3, 3);
    c.set_slot(j, k.apply(coeff));
  }
  return c;
}

}  // namespace tdk
