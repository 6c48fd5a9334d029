#include <catch2/catch_amalgamated.hpp>

#include <tdk/line_bundle.hpp>
#include <tdk/rng.hpp>

using namespace tdk;

namespace {

FourierForm random_periodic_form(Rng& rng, int n, int degree, int cutoff,
                                 bool allow_zero_mode = true) {
  FourierForm w(n);
  unsigned masks = 1u << n;
  int terms = int(rng.range(2, 5));
  for (int t = 0; t < terms; ++t) {
    std::vector<int> mode(std::size_t(n), 0);
    bool zero = true;
    for (int j = 0; j < n; ++j) {
      mode[std::size_t(j)] = int(rng.range(-cutoff, cutoff));
      zero = zero && mode[std::size_t(j)] == 0;
    }
    if (zero && !allow_zero_mode) continue;
    unsigned mask = 0;
    // pick a monomial of the requested degree
    while (__builtin_popcount(mask) != degree) mask = unsigned(rng.range(0, masks - 1));
    w.add_periodic(mode, mask, FormalScalar::pi_i(rng.small_rat()));
  }
  return w;
}

FourierForm random_mixed_form(Rng& rng, int cutoff) {
  FourierForm w = random_periodic_form(rng, 2, int(rng.range(0, 2)), cutoff);
  if (rng.range(0, 1) == 1)
    w.add_affine(int(rng.range(0, 1)), rng.range(0, 1) ? 1u : 2u,
                 FormalScalar::pi_i(rng.small_rat()));
  return w;
}

}  // namespace

TEST_CASE("formal scalars: exact cyclotomic arithmetic with a formal pi") {
  FormalScalar i = FormalScalar::i_unit();
  CHECK(i * i == FormalScalar::rational(-1));
  CHECK(i * i * i * i == FormalScalar::rational(1));

  FormalScalar z3 = FormalScalar::zeta(3);
  CHECK(z3 * z3 * z3 == FormalScalar::rational(1));
  CHECK(z3 * z3 + z3 + FormalScalar::rational(1) == FormalScalar());

  // equality across conductors: zeta_12^3 = i, zeta_6 = -zeta_3^2
  CHECK(FormalScalar::zeta(12, 3) == i);
  CHECK(FormalScalar::zeta(6) == -(z3 * z3));
  CHECK(FormalScalar::zeta(8) * FormalScalar::zeta(8) == i);

  SECTION("phases exp(pi i q) are exact roots of unity") {
    CHECK(FormalScalar::phase_pi_i(Rat(0)) == FormalScalar::rational(1));
    CHECK(FormalScalar::phase_pi_i(Rat(1)) == FormalScalar::rational(-1));
    CHECK(FormalScalar::phase_pi_i(Rat(2)) == FormalScalar::rational(1));
    CHECK(FormalScalar::phase_pi_i(Rat(1) / 2) == i);
    CHECK(FormalScalar::phase_pi_i(Rat(-1) / 2) == -i);
    CHECK(FormalScalar::phase_pi_i(Rat(2) / 3) == z3);
    Rng rng(11);
    for (int rep = 0; rep < 40; ++rep) {
      Rat a = rng.small_rat(), b = rng.small_rat();
      CHECK(FormalScalar::phase_pi_i(a) * FormalScalar::phase_pi_i(b) ==
            FormalScalar::phase_pi_i(a + b));
    }
  }

  SECTION("pi is a unit-free transcendental marker") {
    FormalScalar p = FormalScalar::pi();
    CHECK(p * p == FormalScalar::pi(2));
    CHECK(FormalScalar::pi(-1) * FormalScalar::pi(2) == p);
    CHECK((p + i) - p == i);
    CHECK_FALSE(p == FormalScalar::rational(1));
    FormalScalar mix = Rat(3) * p * i + FormalScalar::rational(2);
    CHECK(mix.min_pi_power() == 0);
    CHECK(mix.max_pi_power() == 1);
  }

  SECTION("rational-multiple-of-pi-i extraction") {
    CHECK(FormalScalar::pi_i(Rat(3) / 4).as_rational_multiple_of_pi_i() == Rat(3) / 4);
    CHECK(FormalScalar().as_rational_multiple_of_pi_i() == Rat(0));
    CHECK_FALSE(FormalScalar::pi().as_rational_multiple_of_pi_i().has_value());
    CHECK_FALSE(FormalScalar::rational(2).as_rational_multiple_of_pi_i().has_value());
    CHECK_FALSE((FormalScalar::pi_i(Rat(1)) + FormalScalar::rational(1))
                    .as_rational_multiple_of_pi_i()
                    .has_value());
    CHECK(FormalScalar::rational(2).as_rational() == Rat(2));
    CHECK_FALSE(FormalScalar::zeta(3).as_rational().has_value());
  }
}

TEST_CASE("fourier forms: differential, translation, product, average") {
  Rng rng(23);

  SECTION("d squares to zero on mixed forms") {
    for (int rep = 0; rep < 60; ++rep) {
      FourierForm w = random_mixed_form(rng, 2);
      CHECK(d(d(w)).is_zero());
    }
  }

  SECTION("d of a pure mode") {
    FourierForm f(2);
    f.add_periodic({1, 0}, 0u, FormalScalar::rational(1));
    FourierForm df = d(f);
    CHECK(df.periodic_coefficient({1, 0}, 1u) == FormalScalar::pi_i(Rat(2)));
    CHECK(df.periodic_coefficient({1, 0}, 2u) == FormalScalar());
  }

  SECTION("translation is a homomorphism commuting with d") {
    for (int rep = 0; rep < 30; ++rep) {
      FourierForm w = random_mixed_form(rng, 2);
      std::vector<Rat> s{rng.small_rat(), rng.small_rat()};
      std::vector<Rat> t{rng.small_rat(), rng.small_rat()};
      std::vector<Rat> st{s[0] + t[0], s[1] + t[1]};
      CHECK(translate(translate(w, s), t) == translate(w, st));
      CHECK(d(translate(w, t)) == translate(d(w), t));
    }
    FourierForm f(2);
    f.add_periodic({2, -1}, 0u, FormalScalar::rational(1));
    CHECK(translate(f, {Rat(1), Rat(-3)}) == f);  // periodic in integer steps
    CHECK(translate(f, {Rat(1) / 4, Rat(0)}).periodic_coefficient({2, -1}, 0u) ==
          FormalScalar::rational(-1));  // exp(2 pi i * 2/4)
    CHECK(translate(f, {Rat(1) / 8, Rat(0)}).periodic_coefficient({2, -1}, 0u) ==
          FormalScalar::i_unit());
  }

  SECTION("wedge is graded and Leibniz holds") {
    for (int rep = 0; rep < 30; ++rep) {
      FourierForm a = random_periodic_form(rng, 2, 1, 2);
      FourierForm b = random_periodic_form(rng, 2, 1, 2);
      CHECK(wedge(a, b) == -wedge(b, a));
      FourierForm g = random_periodic_form(rng, 2, 0, 2);
      CHECK(d(wedge(g, b)) == wedge(d(g), b) + wedge(g, d(b)));
      CHECK(d(wedge(a, g)) == wedge(d(a), g) - wedge(a, d(g)));
    }
    FourierForm aff(2);
    aff.add_affine(0, 2u, FormalScalar::pi_i(Rat(2)));
    FourierForm nonzero_mode(2);
    nonzero_mode.add_periodic({1, 0}, 1u, FormalScalar::rational(1));
    CHECK_THROWS_AS(wedge(aff, nonzero_mode), std::domain_error);
    FourierForm aff2(2);
    aff2.add_affine(1, 1u, FormalScalar::rational(1));
    CHECK_THROWS_AS(wedge(aff, aff2), std::domain_error);
    // products that vanish by repeated dtheta factors never throw
    FourierForm same_leg(2);
    same_leg.add_periodic({1, 0}, 2u, FormalScalar::rational(1));
    CHECK(wedge(aff, same_leg).is_zero());
  }

  SECTION("average projects onto the zero mode") {
    for (int rep = 0; rep < 40; ++rep) {
      FourierForm w = random_periodic_form(rng, 2, int(rng.range(0, 2)), 2);
      FourierForm avg = average(w);
      CHECK(is_geometrically_invariant(avg));
      CHECK(average(avg) == avg);
      CHECK(d(avg) == average(d(w)));
      CHECK(average(w - avg).is_zero());
    }
    FourierForm aff(2);
    aff.add_affine(0, 2u, FormalScalar::rational(1));
    CHECK_THROWS_AS(average(aff), std::invalid_argument);
    CHECK_FALSE(is_geometrically_invariant(aff));
  }
}

TEST_CASE("invariant decomposition splits closed forms exactly") {
  Rng rng(37);

  SECTION("inverting d on a single mode") {
    FourierForm f(2);
    f.add_periodic({1, 0}, 0u, FormalScalar::rational(1));
    FourierForm w = d(f);
    InvariantDecomposition dec = invariant_decomposition(w);
    REQUIRE(dec.exact);
    CHECK(dec.invariant_part.is_zero());
    CHECK(dec.invariant_part + d(dec.alpha) == w);
  }

  SECTION("random closed two-dimensional forms reconstruct") {
    for (int rep = 0; rep < 60; ++rep) {
      FourierForm planted = random_periodic_form(rng, 2, 1, 2, false);
      FourierForm invariant(2);
      invariant.add_periodic({0, 0}, 3u, FormalScalar::pi_i(rng.small_rat()));
      invariant.add_periodic({0, 0}, 1u, FormalScalar::pi_i(rng.small_rat()));
      FourierForm w = invariant + d(planted);
      InvariantDecomposition dec = invariant_decomposition(w);
      REQUIRE(dec.exact);
      CHECK(dec.invariant_part == invariant);
      CHECK(dec.invariant_part + d(dec.alpha) == w);
      CHECK(is_geometrically_invariant(dec.invariant_part));
    }
  }

  SECTION("twisted splitting on the three-torus") {
    FourierForm h = FourierForm::invariant(3, 7u, FormalScalar::pi_i(Rat(2)));
    auto d_h = [&](const FourierForm& w) { return d(w) + wedge(h, w); };
    for (int rep = 0; rep < 15; ++rep) {
      FourierForm planted = random_periodic_form(rng, 3, 1, 1, false);
      FourierForm invariant = FourierForm::invariant(3, 3u, FormalScalar::pi_i(rng.small_rat()));
      FourierForm w = invariant + d_h(planted);
      REQUIRE(d_h(w).is_zero());
      InvariantDecomposition dec = invariant_decomposition(w, h);
      REQUIRE(dec.exact);
      CHECK(dec.invariant_part == invariant);
      CHECK(dec.invariant_part + d_h(dec.alpha) == w);
    }
  }

  SECTION("preconditions are enforced") {
    FourierForm open_form(2);
    open_form.add_periodic({1, 0}, 0u, FormalScalar::rational(1));
    CHECK_THROWS_AS(invariant_decomposition(open_form), std::invalid_argument);
    FourierForm aff(2);
    aff.add_affine(0, 2u, FormalScalar::rational(1));
    CHECK_THROWS_AS(invariant_decomposition(aff), std::invalid_argument);
    FourierForm bad_twist(2);
    bad_twist.add_periodic({1, 0}, 1u, FormalScalar::rational(1));
    CHECK_THROWS_AS(invariant_decomposition(FourierForm(2), bad_twist),
                    std::invalid_argument);
  }
}

TEST_CASE("line bundle construction validates the action data") {
  CHECK_NOTHROW(poincare_standard());
  CHECK_NOTHROW(poincare_symmetric());
  CHECK_NOTHROW(trivial_bundle());
  for (const std::string& name : builtin_bundle_names()) CHECK_NOTHROW(builtin_bundle(name));
  CHECK_NOTHROW(builtin_bundle("poincare-paper"));  // catalogue alias
  CHECK_THROWS_AS(builtin_bundle("no-such"), std::invalid_argument);

  SECTION("cocycle condition rejects non-integral pairings") {
    RatMatrix p(2, 2);
    p(0, 1) = Rat(1) / 2;
    CHECK_THROWS_AS(EquivariantLineBundle(p, FourierForm(2)), std::invalid_argument);
  }
  SECTION("connection shape is checked") {
    RatMatrix p(2, 2);
    FourierForm two_form(2);
    two_form.add_periodic({0, 0}, 3u, FormalScalar::rational(1));
    CHECK_THROWS_AS(EquivariantLineBundle(p, two_form), std::invalid_argument);
    FourierForm modey(2);
    modey.add_periodic({1, 0}, 1u, FormalScalar::rational(1));
    CHECK_THROWS_AS(EquivariantLineBundle(p, modey), std::invalid_argument);
  }
  SECTION("cocycle phases and generator commutativity") {
    EquivariantLineBundle std_b = poincare_standard();
    CHECK(std_b.cocycle_phase({1, 0}, {Rat(1) / 3, Rat(1) / 4}) == FormalScalar::i_unit());
    CHECK(std_b.cocycle_phase({0, 1}, {Rat(1) / 3, Rat(1) / 4}) == FormalScalar::rational(1));
    CHECK(is_integer(std_b.generator_commutator_defect()));
    CHECK(is_integer(poincare_symmetric().generator_commutator_defect()));
    CHECK(poincare_symmetric().generator_commutator_defect() == 0);
  }
}

TEST_CASE("equivariance residuals of the two connection conventions") {
  EquivarianceReport std_rep = check_equivariance(poincare_standard());
  CHECK(std_rep.passes);
  CHECK(std_rep.residuals[0].is_zero());
  CHECK(std_rep.residuals[1].is_zero());

  EquivarianceReport sym_rep = check_equivariance(poincare_symmetric());
  CHECK_FALSE(sym_rep.passes);
  CHECK(sym_rep.residuals[0] == FourierForm::invariant(2, 2u, FormalScalar::pi_i(Rat(-1))));
  CHECK(sym_rep.residuals[1] == FourierForm::invariant(2, 1u, FormalScalar::pi_i(Rat(-3))));

  CHECK(check_equivariance(trivial_bundle()).passes);
}

TEST_CASE("curvature and holonomy are exact") {
  EquivariantLineBundle std_b = poincare_standard();
  EquivariantLineBundle sym_b = poincare_symmetric();
  FourierForm expected = FourierForm::invariant(2, 3u, FormalScalar::pi_i(Rat(2)));
  CHECK(curvature(std_b) == expected);
  CHECK(curvature(sym_b) == expected);
  CHECK(curvature(trivial_bundle()).is_zero());
  CHECK(is_geometrically_invariant(curvature(std_b)));
  CHECK(is_geometrically_invariant(curvature(sym_b)));

  SECTION("loops along the second axis see the first coordinate") {
    Rat c = Rat(1) / 3;
    std::vector<std::vector<Rat>> loop{{c, Rat(0)}, {c, Rat(1)}};
    CHECK(holonomy(std_b, loop) == FormalScalar::zeta(3, 2));  // exp(-2 pi i / 3)
    CHECK(holonomy(std_b, {{Rat(0), Rat(0)}, {Rat(0), Rat(1)}}) ==
          FormalScalar::rational(1));
  }
  SECTION("loops along the first axis see only the cocycle") {
    Rat c = Rat(1) / 4;
    std::vector<std::vector<Rat>> loop{{Rat(0), c}, {Rat(1), c}};
    CHECK(holonomy(std_b, loop) == -FormalScalar::i_unit());  // exp(-pi i / 2)
  }
  SECTION("winding loop on the symmetrized connection") {
    std::vector<std::vector<Rat>> loop{{Rat(1) / 3, Rat(1) / 5}, {Rat(1) / 3, Rat(6) / 5}};
    CHECK(holonomy(sym_b, loop) == FormalScalar::rational(-1));
  }
  SECTION("stokes consistency on seeded contractible rectangles") {
    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
      Rat a1 = rng.small_rat(), a2 = rng.small_rat();
      Rat w = Rat(rng.range(1, 5)) / Rat(rng.range(1, 6));
      Rat h = Rat(rng.range(1, 5)) / Rat(rng.range(1, 6));
      Rat b1 = a1 + w, b2 = a2 + h;
      std::vector<std::vector<Rat>> rect{
          {a1, a2}, {b1, a2}, {b1, b2}, {a1, b2}, {a1, a2}};
      FormalScalar flux_phase = FormalScalar::phase_pi_i(-2 * (w * h));
      CHECK(holonomy(std_b, rect) == flux_phase);
      CHECK(holonomy(sym_b, rect) == flux_phase);
      CHECK(holonomy(trivial_bundle(), rect) == FormalScalar::rational(1));
    }
  }
  SECTION("invalid loops are rejected") {
    CHECK_THROWS_AS(holonomy(std_b, {{Rat(0), Rat(0)}, {Rat(1) / 2, Rat(1) / 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(holonomy(std_b, {{Rat(0), Rat(0)}, {Rat(0), Rat(1) / 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(holonomy(std_b, {{Rat(0), Rat(0)}}), std::invalid_argument);
  }
}

TEST_CASE("translation comparison forms and their cocycle identity") {
  EquivariantLineBundle std_b = poincare_standard();
  EquivariantLineBundle sym_b = poincare_symmetric();

  for (Rat t : {Rat(1) / 2, Rat(1) / 3, Rat(2) / 3, Rat(5) / 4}) {
    CHECK(cs_difference(std_b, t) ==
          FourierForm::invariant(2, 2u, FormalScalar::pi_i(2 * t)));
    CHECK(cs_difference(sym_b, t) ==
          FourierForm::invariant(2, 2u, FormalScalar::pi_i(t)));
  }
  CHECK(cs_difference(trivial_bundle(), Rat(1) / 2).is_zero());

  SECTION("composition law") {
    Rng rng(53);
    for (int rep = 0; rep < 25; ++rep) {
      Rat t1 = rng.small_rat(), t2 = rng.small_rat();
      for (const EquivariantLineBundle& l : {std_b, sym_b}) {
        FourierForm lhs = cs_difference(l, t1 + t2);
        FourierForm rhs = translate(cs_difference(l, t1), {t2, Rat(0)}) +
                          cs_difference(l, t2);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("fixed-point obstruction system") {
  EquivariantLineBundle std_b = poincare_standard();

  SECTION("the standard model is obstructed for small cyclic groups") {
    for (long n : {2l, 3l, 4l}) {
      ObstructionReport rep = fixed_obstruction_check(std_b, n, 3);
      CHECK_FALSE(rep.feasible);
      REQUIRE(rep.certificate.has_value());
      CHECK(rep.certificate->verify(rep.projected_system, rep.projected_rhs));
      CHECK(rep.certificate->modulus > 1);
      // the period columns carry 2 pi i, so the divisibility obstruction
      // shows up modulo a divisor of 2n
      CHECK((2 * n) % long(rep.certificate->modulus) == 0);
      CHECK(rep.blocking.find("2 pi i Z") != std::string::npos);
    }
  }
  SECTION("infeasibility survives truncation changes") {
    for (int cutoff : {1, 2, 3}) {
      ObstructionReport rep = fixed_obstruction_check(std_b, 2, cutoff);
      CHECK_FALSE(rep.feasible);
      CHECK(rep.certificate.has_value());
    }
  }
  SECTION("the symmetrized connection is obstructed too") {
    ObstructionReport rep = fixed_obstruction_check(poincare_symmetric(), 2, 3);
    CHECK_FALSE(rep.feasible);
  }
  SECTION("the trivial bundle admits a fixed lift") {
    ObstructionReport rep = fixed_obstruction_check(trivial_bundle(), 3, 3);
    CHECK(rep.feasible);
    REQUIRE(rep.alpha.has_value());
    CHECK(rep.alpha->is_zero());
  }
  SECTION("integral comparison periods are feasible") {
    // scale the connection so every comparison period lands in 2 pi i Z
    RatMatrix p(2, 2);
    p(0, 1) = 1;
    FourierForm a(2);
    a.add_affine(0, 2u, FormalScalar::pi_i(Rat(6)));
    ObstructionReport rep = fixed_obstruction_check(EquivariantLineBundle(p, a), 3, 3);
    CHECK(rep.feasible);
  }
}
