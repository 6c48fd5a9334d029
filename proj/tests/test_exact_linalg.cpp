#include <catch2/catch_amalgamated.hpp>

#include <tdk/exact_linalg.hpp>

using namespace tdk;

namespace {

// Independent determinant oracle: cofactor expansion, fine for n <= 6.
Int det_cofactor(const IntMatrix& m) {
  const std::size_t n = m.rows();
  REQUIRE(m.cols() == n);
  if (n == 0) return Int(1);
  if (n == 1) return m(0, 0);
  Int acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    IntMatrix sub(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        sub(i - 1, cc++) = m(i, k);
      }
    }
    Int term = m(0, j) * det_cofactor(sub);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state;
  }
  Int small() { return Int(static_cast<std::int64_t>(next() % 19) - 9); }
};

IntMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  Lcg g(seed);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = g.small();
  return m;
}

void check_smith_invariants(const IntMatrix& m) {
  SmithNormalForm s = smith_normal_form(m);
  REQUIRE(s.u * m * s.v == s.d);
  REQUIRE(s.u * s.u_inv == IntMatrix::identity(m.rows()));
  REQUIRE(s.v * s.v_inv == IntMatrix::identity(m.cols()));
  Int du = det_cofactor(s.u), dv = det_cofactor(s.v);
  REQUIRE((du == 1 || du == -1));
  REQUIRE((dv == 1 || dv == -1));
  const std::size_t n = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(s.d(i, i) >= 0);
    if (i + 1 < n && s.d(i, i) != 0) {
      if (s.d(i + 1, i + 1) != 0) REQUIRE(s.d(i + 1, i + 1) % s.d(i, i) == 0);
    }
    if (s.d(i, i) == 0 && i + 1 < n) REQUIRE(s.d(i + 1, i + 1) == 0);
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) REQUIRE(s.d(i, j) == 0);
}

std::vector<Int> ivec(std::initializer_list<long> xs) {
  std::vector<Int> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::vector<Rat> rvec(std::initializer_list<Rat> xs) { return std::vector<Rat>(xs); }

}  // namespace

TEST_CASE("smith normal form on pinned matrices") {
  // gcd of entries 2, |det| = 8, so invariant factors 2, 4
  SmithNormalForm s = smith_normal_form(IntMatrix(2, 2, {2, 4, 6, 8}));
  REQUIRE(s.diagonal() == ivec({2, 4}));

  // coprime diagonal folds into a single cyclic factor
  s = smith_normal_form(IntMatrix(2, 2, {2, 0, 0, 3}));
  REQUIRE(s.diagonal() == ivec({1, 6}));

  // gcd 2, |det| = 20
  s = smith_normal_form(IntMatrix(2, 2, {6, 4, 4, 6}));
  REQUIRE(s.diagonal() == ivec({2, 10}));

  // rank 2, gcd 1, 2x2 minor gcd 2
  s = smith_normal_form(IntMatrix(3, 2, {1, 2, 3, 4, 5, 6}));
  REQUIRE(s.diagonal() == ivec({1, 2}));

  s = smith_normal_form(IntMatrix(1, 3, {2, 4, 6}));
  REQUIRE(s.diagonal() == ivec({2}));

  s = smith_normal_form(IntMatrix(2, 2, {0, 0, 0, 0}));
  REQUIRE(s.diagonal() == ivec({0, 0}));

  s = smith_normal_form(IntMatrix::identity(3));
  REQUIRE(s.diagonal() == ivec({1, 1, 1}));
}

TEST_CASE("smith normal form invariants hold on random matrices") {
  std::size_t shapes[][2] = {{3, 3}, {4, 3}, {3, 5}, {5, 5}, {1, 4}, {4, 1}, {2, 6}};
  std::uint64_t seed = 1;
  for (auto [r, c] : shapes)
    for (int k = 0; k < 6; ++k) check_smith_invariants(random_matrix(r, c, seed++));
  // degenerate shapes
  check_smith_invariants(IntMatrix(0, 3));
  check_smith_invariants(IntMatrix(3, 0));
}

TEST_CASE("determinant matches cofactor oracle") {
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    IntMatrix m = random_matrix(4, 4, seed);
    REQUIRE(determinant(m) == det_cofactor(m));
  }
  REQUIRE(determinant(IntMatrix(0, 0)) == 1);
  REQUIRE_FALSE(is_unimodular(IntMatrix(2, 2, {2, 0, 0, 1})));
  REQUIRE(is_unimodular(IntMatrix(2, 2, {2, 1, 1, 1})));
}

TEST_CASE("cokernel presentations") {
  // Z^2 / <(2,0),(0,3)> is cyclic of order 6
  AbelianGroupPresentation p = cokernel_presentation(IntMatrix(2, 2, {2, 0, 0, 3}));
  REQUIRE(p.free_rank == 0);
  REQUIRE(p.torsion == ivec({6}));

  p = cokernel_presentation(IntMatrix(2, 2, {0, 0, 0, 0}));
  REQUIRE(p.free_rank == 2);
  REQUIRE(p.torsion.empty());

  p = cokernel_presentation(IntMatrix(2, 2, {2, 4, 6, 8}));
  REQUIRE(p.free_rank == 0);
  REQUIRE(p.torsion == ivec({2, 4}));

  // rank-1 image 2*(1,2,3) inside Z^3
  p = cokernel_presentation(IntMatrix(3, 1, {2, 4, 6}));
  REQUIRE(p.free_rank == 2);
  REQUIRE(p.torsion == ivec({2}));

  SECTION("permutation invariance") {
    IntMatrix m = random_matrix(4, 4, 77);
    AbelianGroupPresentation base = cokernel_presentation(m);
    IntMatrix shuffled = m;
    shuffled.swap_rows(0, 3);
    shuffled.swap_rows(1, 2);
    shuffled.swap_cols(0, 2);
    shuffled.swap_cols(1, 3);
    REQUIRE(cokernel_presentation(shuffled) == base);
  }
}

TEST_CASE("torsion normalization and direct sums") {
  REQUIRE(normalize_torsion({Int(3), Int(2)}) == ivec({6}));
  REQUIRE(normalize_torsion({Int(4), Int(6)}) == ivec({2, 12}));
  REQUIRE(normalize_torsion({Int(2), Int(2), Int(2)}) == ivec({2, 2, 2}));
  REQUIRE(normalize_torsion({Int(1), Int(5)}) == ivec({5}));
  REQUIRE(normalize_torsion({}) == ivec({}));

  AbelianGroupPresentation a{1, {Int(2)}, 0}, b{2, {Int(3)}, 1};
  AbelianGroupPresentation sum = direct_sum(a, b);
  REQUIRE(sum.free_rank == 3);
  REQUIRE(sum.torsion == ivec({6}));
  REQUIRE(sum.divisible_rank == 1);
}

TEST_CASE("integer solve returns solutions or verifiable certificates") {
  SECTION("feasible square") {
    IntMatrix a(2, 2, {1, 2, 3, 5});  // det -1, everything solvable
    auto r = solve_integer(a, ivec({7, 11}));
    REQUIRE(r.feasible());
    REQUIRE(a.apply(*r.solution) == ivec({7, 11}));
    REQUIRE(r.kernel_basis.cols() == 0);
  }
  SECTION("divisibility obstruction") {
    IntMatrix a(1, 1, {2});
    auto r = solve_integer(a, ivec({3}));
    REQUIRE_FALSE(r.feasible());
    REQUIRE(r.certificate->modulus == 2);
    REQUIRE(r.certificate->verify(a, ivec({3})));
  }
  SECTION("rationally solvable but not integrally") {
    IntMatrix a(2, 2, {1, 2, 3, 4});  // det -2
    std::vector<Int> b = ivec({5, 6});
    auto r = solve_integer(a, b);
    REQUIRE_FALSE(r.feasible());
    REQUIRE(r.certificate->modulus != 0);
    REQUIRE(r.certificate->verify(a, b));
    // but over Q it solves
    auto rq = rational_solve(to_rational(a), rvec({Rat(5), Rat(6)}));
    REQUIRE(rq.feasible());
  }
  SECTION("rational obstruction, modulus zero") {
    IntMatrix a(2, 1, {1, 1});
    std::vector<Int> b = ivec({1, 2});
    auto r = solve_integer(a, b);
    REQUIRE_FALSE(r.feasible());
    REQUIRE(r.certificate->modulus == 0);
    REQUIRE(r.certificate->verify(a, b));
  }
  SECTION("underdetermined with kernel") {
    IntMatrix a(1, 2, {1, 1});
    auto r = solve_integer(a, ivec({3}));
    REQUIRE(r.feasible());
    REQUIRE(a.apply(*r.solution) == ivec({3}));
    REQUIRE(r.kernel_basis.cols() == 1);
    std::vector<Int> shifted = *r.solution;
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += r.kernel_basis(i, 0);
    REQUIRE(a.apply(shifted) == ivec({3}));
  }
}

TEST_CASE("integer kernels are saturated") {
  IntMatrix a(2, 4, {2, 4, 6, 8, 1, 3, 5, 7});
  IntMatrix k = integer_kernel_basis(a);
  REQUIRE(k.cols() == 4 - rational_rank(to_rational(a)));
  REQUIRE((a * k).is_zero());
  // saturation: Z^4 / ker-lattice is torsion free
  AbelianGroupPresentation p = cokernel_presentation(k);
  REQUIRE(p.torsion.empty());
}

TEST_CASE("rational solve and rank") {
  RatMatrix a(2, 2, {Rat(1), Rat(2), Rat(3), Rat(4)});
  auto r = rational_solve(a, rvec({Rat(5), Rat(6)}));
  REQUIRE(r.feasible());
  auto ax = a.apply(*r.solution);
  REQUIRE(ax == rvec({Rat(5), Rat(6)}));

  RatMatrix sing(2, 2, {Rat(1), Rat(1), Rat(1), Rat(1)});
  auto bad = rational_solve(sing, rvec({Rat(1), Rat(2)}));
  REQUIRE_FALSE(bad.feasible());
  REQUIRE(bad.certificate->verify(sing, rvec({Rat(1), Rat(2)})));

  REQUIRE(rational_rank(sing) == 1);
  REQUIRE(rational_rank(a) == 2);
  REQUIRE(rational_rank(RatMatrix(3, 2)) == 0);

  RatMatrix wide(1, 3, {Rat(1), Rat(2), Rat(3)});
  RatMatrix k = rational_kernel_basis(wide);
  REQUIRE(k.cols() == 2);
  REQUIRE((wide * k).is_zero());
}

TEST_CASE("quotient presentation of lattice pairs") {
  // Z^2 modulo the sublattice spanned by (2,0) and (0,3)
  AbelianGroupPresentation p =
      quotient_presentation(IntMatrix::identity(2), IntMatrix(2, 2, {2, 0, 0, 3}));
  REQUIRE(p.free_rank == 0);
  REQUIRE(p.torsion == ivec({6}));

  // kernel of the sum functional on Z^3, modulo 3 times one basis vector
  IntMatrix k(3, 2, {1, 0, -1, 1, 0, -1});
  IntMatrix im(3, 1, {3, -3, 0});
  p = quotient_presentation(k, im);
  REQUIRE(p.free_rank == 1);
  REQUIRE(p.torsion == ivec({3}));

  // empty image: quotient is the full lattice
  p = quotient_presentation(k, IntMatrix(3, 0));
  REQUIRE(p.free_rank == 2);
  REQUIRE(p.torsion.empty());
}

TEST_CASE("mixed integer and rational solve") {
  SECTION("pure integral obstruction") {
    IntMatrix a_int(1, 1, {2});
    RatMatrix a_rat(1, 1, {Rat(0)});
    auto r = solve_mixed(a_int, a_rat, rvec({Rat(1)}));
    REQUIRE_FALSE(r.feasible());
    REQUIRE(r.integral_certificate.has_value());
    REQUIRE(r.integral_certificate->verify(r.projected_a, r.projected_b));
  }
  SECTION("rational slack absorbs fractions") {
    IntMatrix a_int(1, 1, {2});
    RatMatrix a_rat(1, 1, {Rat(1)});
    auto r = solve_mixed(a_int, a_rat, rvec({Rat(1, 2)}));
    REQUIRE(r.feasible());
    auto [x, q] = *r.solution;
    REQUIRE(Rat(2) * Rat(x[0]) + q[0] == Rat(1, 2));
  }
  SECTION("split system") {
    IntMatrix a_int(2, 1, {1, 0});
    RatMatrix a_rat(2, 1, {Rat(0), Rat(1)});
    auto r = solve_mixed(a_int, a_rat, rvec({Rat(3), Rat(1, 2)}));
    REQUIRE(r.feasible());
    auto [x, q] = *r.solution;
    REQUIRE(x == ivec({3}));
    REQUIRE(q[0] == Rat(1, 2));
  }
  SECTION("obstruction with modulus") {
    IntMatrix a_int(2, 1, {2, 0});
    RatMatrix a_rat(2, 1, {Rat(0), Rat(0)});
    auto r = solve_mixed(a_int, a_rat, rvec({Rat(3), Rat(0)}));
    REQUIRE_FALSE(r.feasible());
    REQUIRE(r.integral_certificate.has_value());
    REQUIRE(r.integral_certificate->verify(r.projected_a, r.projected_b));
  }
}
