#pragma once

#include <tdk/matrix.hpp>

#include <algorithm>
#include <optional>
#include <tuple>

namespace tdk {

/// Isomorphism type of a finitely generated group possibly extended by
/// divisible torsion summands:  Z^free_rank  +  Z/d_1 + ... + Z/d_k  +  (Q/Z)^divisible_rank
/// with d_1 | d_2 | ... | d_k and every d_i >= 2.  divisible_rank is nonzero
/// only for quotient presentations with vector-space numerators (V/Lambda
/// coefficients and differential cohomology).
struct AbelianGroupPresentation {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;
  std::size_t divisible_rank = 0;

  bool operator==(const AbelianGroupPresentation&) const = default;
};

/// U * input * V = D with U, V unimodular and D diagonal, diagonal entries
/// nonnegative and forming a divisibility chain d_1 | d_2 | ... .
/// u_inv and v_inv are the exact inverses, accumulated alongside.
struct SmithNormalForm {
  IntMatrix u, v, d;
  IntMatrix u_inv, v_inv;

  std::size_t rank() const {
    std::size_t r = 0, n = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < n; ++i)
      if (d(i, i) != 0) ++r;
    return r;
  }
  std::vector<Int> diagonal() const {
    std::size_t n = std::min(d.rows(), d.cols());
    std::vector<Int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = d(i, i);
    return out;
  }
};

namespace detail {

inline Int int_abs(const Int& a) { return a < 0 ? Int(-a) : a; }

// Pivot choice: smallest nonzero absolute value; ties broken by (row, col).
inline bool find_pivot(const IntMatrix& m, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < m.rows(); ++i)
    for (std::size_t j = t; j < m.cols(); ++j) {
      if (m(i, j) == 0) continue;
      Int a = int_abs(m(i, j));
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  return found;
}

}  // namespace detail

/// Smith normal form over Z.  Deterministic: pivots by smallest nonzero
/// absolute value with (row, col) tie-break, reduction by truncated division.
inline SmithNormalForm smith_normal_form(const IntMatrix& input) {
  const std::size_t r = input.rows(), c = input.cols();
  SmithNormalForm s{IntMatrix::identity(r), IntMatrix::identity(c), input,
                    IntMatrix::identity(r), IntMatrix::identity(c)};
  IntMatrix& d = s.d;

  // Every elementary operation on d is mirrored on u or v; the inverse
  // matrices receive the inverse operation on the opposite side, keeping
  // u*u_inv = I and v*v_inv = I at every step.
  auto row_swap = [&](std::size_t a, std::size_t b) {
    d.swap_rows(a, b);
    s.u.swap_rows(a, b);
    s.u_inv.swap_cols(a, b);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    d.swap_cols(a, b);
    s.v.swap_cols(a, b);
    s.v_inv.swap_rows(a, b);
  };
  auto row_add = [&](std::size_t a, std::size_t b, const Int& q) {  // row a += q*row b
    d.add_row(a, b, q);
    s.u.add_row(a, b, q);
    s.u_inv.add_col(b, a, -q);
  };
  auto col_add = [&](std::size_t a, std::size_t b, const Int& q) {  // col a += q*col b
    d.add_col(a, b, q);
    s.v.add_col(a, b, q);
    s.v_inv.add_row(b, a, -q);
  };
  auto row_negate = [&](std::size_t a) {
    d.negate_row(a);
    s.u.negate_row(a);
    s.u_inv.negate_col(a);
  };

  const std::size_t steps = std::min(r, c);
  for (std::size_t t = 0; t < steps; ++t) {
    std::size_t pi = 0, pj = 0;
    if (!detail::find_pivot(d, t, pi, pj)) break;
    row_swap(t, pi);
    col_swap(t, pj);

    for (;;) {
      // zero out below and to the right of the pivot
      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (d(i, t) == 0) continue;
        Int q = d(i, t) / d(t, t);
        if (q != 0) row_add(i, t, -q);
        if (d(i, t) != 0) dirty = true;  // remainder smaller than pivot
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (d(t, j) == 0) continue;
        Int q = d(t, j) / d(t, t);
        if (q != 0) col_add(j, t, -q);
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) {
        std::size_t qi = 0, qj = 0;
        detail::find_pivot(d, t, qi, qj);
        row_swap(t, qi);
        col_swap(t, qj);
        continue;
      }
      // divisibility: pivot must divide every remaining entry
      bool fixed = true;
      for (std::size_t i = t + 1; i < r && fixed; ++i)
        for (std::size_t j = t + 1; j < c && fixed; ++j)
          if (d(i, j) % d(t, t) != 0) {
            row_add(t, i, Int(1));
            fixed = false;
          }
      if (fixed) break;
    }
    if (d(t, t) < 0) row_negate(t);
  }
  return s;
}

/// Determinant by fraction-free elimination; exact.
inline Int determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("determinant: square matrix required");
  const std::size_t n = input.rows();
  if (n == 0) return Int(1);
  RatMatrix m = to_rational(input);
  Rat det(1);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t p = t;
    while (p < n && m(p, t) == 0) ++p;
    if (p == n) return Int(0);
    if (p != t) {
      m.swap_rows(p, t);
      det = -det;
    }
    det *= m(t, t);
    for (std::size_t i = t + 1; i < n; ++i) {
      if (m(i, t) == 0) continue;
      Rat f = m(i, t) / m(t, t);
      for (std::size_t j = t; j < n; ++j) m(i, j) -= f * m(t, j);
    }
  }
  if (!is_integer(det)) throw std::logic_error("determinant: non-integer result");
  return rat_num(det);
}

inline bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  Int d = determinant(m);
  return d == 1 || d == -1;
}

/// Presentation of Z^rows / colspan(m).
inline AbelianGroupPresentation cokernel_presentation(const IntMatrix& m) {
  SmithNormalForm s = smith_normal_form(m);
  AbelianGroupPresentation p;
  std::size_t n = std::min(m.rows(), m.cols());
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Int& di = s.d(i, i);
    if (di == 0) continue;
    ++nonzero;
    if (di >= 2) p.torsion.push_back(di);
  }
  p.free_rank = m.rows() - nonzero;
  return p;
}

/// Normalizes an arbitrary multiset of cyclic orders into a divisibility
/// chain (invariant factors), via the Smith form of the diagonal relation
/// matrix.
inline std::vector<Int> normalize_torsion(std::vector<Int> orders) {
  orders.erase(std::remove_if(orders.begin(), orders.end(), [](const Int& d) { return d == 1; }),
               orders.end());
  if (orders.size() <= 1) return orders;
  IntMatrix diag(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) diag(i, i) = orders[i];
  return cokernel_presentation(diag).torsion;
}

/// Direct sum of presentations.
inline AbelianGroupPresentation direct_sum(const AbelianGroupPresentation& a,
                                           const AbelianGroupPresentation& b) {
  AbelianGroupPresentation out;
  out.free_rank = a.free_rank + b.free_rank;
  out.divisible_rank = a.divisible_rank + b.divisible_rank;
  std::vector<Int> t = a.torsion;
  t.insert(t.end(), b.torsion.begin(), b.torsion.end());
  out.torsion = normalize_torsion(std::move(t));
  return out;
}

/// Witness that an integer system a*x = b has no solution over Z:
/// row * a == 0 (mod modulus) entrywise while row * b != 0 (mod modulus);
/// modulus == 0 means exact equality (a rational obstruction).
struct IntInfeasibilityCertificate {
  std::vector<Int> row;
  Int modulus;

  bool verify(const IntMatrix& a, const std::vector<Int>& b) const {
    std::vector<Int> ra = a.apply_left(row);
    Int rb(0);
    for (std::size_t i = 0; i < row.size(); ++i) rb += row[i] * b[i];
    if (modulus == 0) {
      for (const Int& x : ra)
        if (x != 0) return false;
      return rb != 0;
    }
    for (const Int& x : ra)
      if (x % modulus != 0) return false;
    return rb % modulus != 0;
  }
};

struct IntSolveResult {
  std::optional<std::vector<Int>> solution;
  std::optional<IntInfeasibilityCertificate> certificate;
  /// Columns span the solution lattice of a*x = 0 (valid with or without a
  /// particular solution).
  IntMatrix kernel_basis;

  bool feasible() const { return solution.has_value(); }
};

/// Factored integer solver: one Smith decomposition answers any number of
/// right-hand sides.
class IntSolver {
 public:
  explicit IntSolver(const IntMatrix& a)
      : rows_(a.rows()), cols_(a.cols()), s_(smith_normal_form(a)) {
    const std::size_t n = std::min(rows_, cols_);
    std::size_t rank = s_.rank();
    kernel_ = IntMatrix(cols_, cols_ - rank);
    std::size_t kcol = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
      bool zero_diag = j >= n || s_.d(j, j) == 0;
      if (!zero_diag) continue;
      for (std::size_t i = 0; i < cols_; ++i) kernel_(i, kcol) = s_.v(i, j);
      ++kcol;
    }
  }

  const SmithNormalForm& snf() const { return s_; }
  const IntMatrix& kernel_basis() const { return kernel_; }

  /// Solution or certificate only; the kernel lattice is shared via
  /// kernel_basis() instead of copied into every result.
  IntSolveResult solve(const std::vector<Int>& b) const {
    if (b.size() != rows_) throw std::invalid_argument("IntSolver: rhs size mismatch");
    const std::size_t n = std::min(rows_, cols_);
    IntSolveResult res;
    std::vector<Int> ub = s_.u.apply(b);
    std::vector<Int> y(cols_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      Int di = (i < n) ? s_.d(i, i) : Int(0);
      if (di == 0) {
        if (ub[i] != 0) {
          // row i of u kills the matrix on the left but not b
          std::vector<Int> row(rows_);
          for (std::size_t j = 0; j < rows_; ++j) row[j] = s_.u(i, j);
          res.certificate = IntInfeasibilityCertificate{row, Int(0)};
          return res;
        }
      } else {
        if (ub[i] % di != 0) {
          std::vector<Int> row(rows_);
          for (std::size_t j = 0; j < rows_; ++j) row[j] = s_.u(i, j);
          res.certificate = IntInfeasibilityCertificate{row, di};
          return res;
        }
        y[i] = ub[i] / di;
      }
    }
    res.solution = s_.v.apply(y);
    return res;
  }

 private:
  std::size_t rows_, cols_;
  SmithNormalForm s_;
  IntMatrix kernel_;
};

/// Solve a*x = b over the integers.  Returns a particular solution plus a
/// kernel lattice basis, or a verified infeasibility certificate.
inline IntSolveResult solve_integer(const IntMatrix& a, const std::vector<Int>& b) {
  IntSolver solver(a);
  IntSolveResult res = solver.solve(b);
  res.kernel_basis = solver.kernel_basis();
  return res;
}

/// Lattice basis of {x : a*x = 0} as matrix columns.  The kernel of an
/// integer matrix is saturated, so the basis spans it over both Z and Q.
inline IntMatrix integer_kernel_basis(const IntMatrix& a) {
  SmithNormalForm s = smith_normal_form(a);
  const std::size_t n = std::min(a.rows(), a.cols());
  std::size_t rank = s.rank();
  IntMatrix k(a.cols(), a.cols() - rank);
  std::size_t kcol = 0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    bool zero_diag = j >= n || s.d(j, j) == 0;
    if (!zero_diag) continue;
    for (std::size_t i = 0; i < a.cols(); ++i) k(i, kcol) = s.v(i, j);
    ++kcol;
  }
  return k;
}

/// Witness that a rational system a*x = b has no solution: y*a = 0, y*b != 0.
struct RatInfeasibilityCertificate {
  std::vector<Rat> row;

  bool verify(const RatMatrix& a, const std::vector<Rat>& b) const {
    std::vector<Rat> ra = a.apply_left(row);
    for (const Rat& x : ra)
      if (x != 0) return false;
    Rat rb(0);
    for (std::size_t i = 0; i < row.size(); ++i) rb += row[i] * b[i];
    return rb != 0;
  }
};

struct RatSolveResult {
  std::optional<std::vector<Rat>> solution;
  std::optional<RatInfeasibilityCertificate> certificate;

  bool feasible() const { return solution.has_value(); }
};

/// Solve a*x = b over Q by exact Gauss elimination with full row bookkeeping:
/// infeasibility is returned as a left null row y with y*a = 0, y*b != 0.
inline RatSolveResult rational_solve(const RatMatrix& a, const std::vector<Rat>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("rational_solve: rhs size mismatch");
  const std::size_t r = a.rows(), c = a.cols();
  RatMatrix m = a;
  RatMatrix left = RatMatrix::identity(r);  // tracks row operations: m = left * a
  std::vector<Rat> rhs = b;

  std::vector<std::size_t> pivot_col_of_row;
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t p = row;
    while (p < r && m(p, col) == 0) ++p;
    if (p == r) continue;
    m.swap_rows(p, row);
    left.swap_rows(p, row);
    std::swap(rhs[p], rhs[row]);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rat f = m(i, col) / m(row, col);
      for (std::size_t j = 0; j < c; ++j) m(i, j) -= f * m(row, j);
      for (std::size_t j = 0; j < r; ++j) left(i, j) -= f * left(row, j);
      rhs[i] -= f * rhs[row];
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }

  RatSolveResult res;
  for (std::size_t i = row; i < r; ++i) {
    if (rhs[i] != 0) {
      std::vector<Rat> y(r);
      for (std::size_t j = 0; j < r; ++j) y[j] = left(i, j);
      res.certificate = RatInfeasibilityCertificate{y};
      return res;
    }
  }
  std::vector<Rat> x(c, Rat(0));
  for (std::size_t i = 0; i < row; ++i) x[pivot_col_of_row[i]] = rhs[i] / m(i, pivot_col_of_row[i]);
  res.solution = std::move(x);
  return res;
}

inline std::size_t rational_rank(const RatMatrix& a) {
  RatMatrix m = a;
  const std::size_t r = m.rows(), c = m.cols();
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t p = row;
    while (p < r && m(p, col) == 0) ++p;
    if (p == r) continue;
    m.swap_rows(p, row);
    for (std::size_t i = row + 1; i < r; ++i) {
      if (m(i, col) == 0) continue;
      Rat f = m(i, col) / m(row, col);
      for (std::size_t j = col; j < c; ++j) m(i, j) -= f * m(row, j);
    }
    ++row;
  }
  return row;
}

/// Basis of {x : a*x = 0} over Q, as matrix columns.
inline RatMatrix rational_kernel_basis(const RatMatrix& a) {
  const std::size_t r = a.rows(), c = a.cols();
  RatMatrix m = a;
  std::vector<std::ptrdiff_t> pivot_row_of_col(c, -1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t p = row;
    while (p < r && m(p, col) == 0) ++p;
    if (p == r) continue;
    m.swap_rows(p, row);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rat f = m(i, col) / m(row, col);
      for (std::size_t j = 0; j < c; ++j) m(i, j) -= f * m(row, j);
    }
    pivot_row_of_col[col] = static_cast<std::ptrdiff_t>(row);
    ++row;
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t col = 0; col < c; ++col)
    if (pivot_row_of_col[col] < 0) free_cols.push_back(col);
  RatMatrix k(c, free_cols.size());
  for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
    std::size_t fc = free_cols[fi];
    k(fc, fi) = 1;
    for (std::size_t col = 0; col < c; ++col) {
      std::ptrdiff_t pr = pivot_row_of_col[col];
      if (pr < 0) continue;
      // pivot variable value solving m * x = 0 with x_fc = 1
      k(col, fi) = -m(static_cast<std::size_t>(pr), fc) / m(static_cast<std::size_t>(pr), col);
    }
  }
  return k;
}

/// Presentation of span_Z(columns of k) / span_Z(columns of im), assuming the
/// second lattice is contained in the first and k has full column rank (the
/// cohomology subquotient shape: k a saturated kernel basis, im coboundaries).
inline AbelianGroupPresentation quotient_presentation(const IntMatrix& k, const IntMatrix& im) {
  // Express each im column in the k basis: k * y = im_col, solvable over Z
  // because k is a basis of a saturated lattice containing the image.
  IntSolver solver(k);
  IntMatrix y(k.cols(), im.cols());
  for (std::size_t j = 0; j < im.cols(); ++j) {
    IntSolveResult r = solver.solve(im.column(j));
    if (!r.feasible()) throw std::logic_error("quotient_presentation: image not contained in kernel");
    y.set_column(j, *r.solution);
  }
  return cokernel_presentation(y);
}

/// Mixed-domain solve: find integer x and rational q with
///   a_int * x + a_rat * q = b.
/// Infeasibility is certified by a rational row orthogonal to a_rat whose
/// pairing with a_int is divisibility-obstructed against b.
struct MixedSolveResult {
  std::optional<std::pair<std::vector<Int>, std::vector<Rat>>> solution;
  /// Certificate: row with row*a_rat = 0, row*a_int integral entrywise
  /// (after scaling), and row*b violating the integrality forced by row*a_int.
  std::optional<RatInfeasibilityCertificate> rational_certificate;
  std::optional<IntInfeasibilityCertificate> integral_certificate;
  /// The integer system the integral certificate refers to (projected system).
  IntMatrix projected_a;
  std::vector<Int> projected_b;

  bool feasible() const { return solution.has_value(); }
};

inline MixedSolveResult solve_mixed(const IntMatrix& a_int, const RatMatrix& a_rat,
                                    const std::vector<Rat>& b) {
  const std::size_t rows = a_int.rows();
  if (a_rat.rows() != rows || b.size() != rows)
    throw std::invalid_argument("solve_mixed: shape mismatch");
  MixedSolveResult res;

  // Rows spanning the left kernel of a_rat: condition rows for x alone.
  RatMatrix n = rational_kernel_basis(a_rat.transpose()).transpose();
  // Scale each row to integers (clears denominators; rhs scaled alike).
  IntMatrix pa(n.rows(), a_int.cols());
  std::vector<Int> pb(n.rows());
  RatMatrix a_int_q = to_rational(a_int);
  for (std::size_t i = 0; i < n.rows(); ++i) {
    Int scale(1);
    for (std::size_t j = 0; j < n.cols(); ++j)
      scale = boost::multiprecision::lcm(scale, rat_den(n(i, j)));
    std::vector<Rat> row(n.cols());
    for (std::size_t j = 0; j < n.cols(); ++j) row[j] = n(i, j) * Rat(scale);
    std::vector<Rat> ra = a_int_q.apply_left(row);
    Rat rb(0);
    for (std::size_t j = 0; j < row.size(); ++j) rb += row[j] * b[j];
    // row * a_int is integral (integer row times integer matrix after scaling);
    // rb may be fractional: scale row and rhs together by the rb denominator.
    Int den = rat_den(rb);
    for (std::size_t j = 0; j < ra.size(); ++j) {
      Rat v = ra[j] * Rat(den);
      if (!is_integer(v)) throw std::logic_error("solve_mixed: projection not integral");
      pa(i, j) = rat_num(v);
    }
    pb[i] = rat_num(rb * Rat(den));
  }
  res.projected_a = pa;
  res.projected_b = pb;

  IntSolveResult ir = solve_integer(pa, pb);
  if (!ir.feasible()) {
    res.integral_certificate = ir.certificate;
    return res;
  }
  // Back-substitute the rational part.
  std::vector<Int>& x = *ir.solution;
  std::vector<Rat> rhs(rows);
  std::vector<Rat> ax;
  {
    std::vector<Int> t = a_int.apply(x);
    for (std::size_t i = 0; i < rows; ++i) rhs[i] = b[i] - Rat(t[i]);
  }
  RatSolveResult rr = rational_solve(a_rat, rhs);
  if (!rr.feasible()) {
    // Cannot happen when the projection logic is right; keep the certificate.
    res.rational_certificate = rr.certificate;
    return res;
  }
  res.solution = std::make_pair(std::move(x), std::move(*rr.solution));
  return res;
}

}  // namespace tdk
