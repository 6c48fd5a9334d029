#include <catch2/catch_amalgamated.hpp>

#include <tdk/diff_cochain.hpp>

using namespace tdk;

namespace {

SimplicialComplex rp6() {
  std::vector<Simplex> faces = {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 5}, {0, 4, 5},
                                {1, 2, 5}, {1, 3, 4}, {1, 4, 5}, {2, 3, 4}, {2, 3, 5}};
  return SimplicialComplex::from_maximal(6, faces);
}

// boundary of the 5-simplex: a small 4-sphere
SimplicialComplex s4() {
  std::vector<Simplex> cells;
  for (int skip = 0; skip < 6; ++skip) {
    Simplex s;
    for (int v = 0; v < 6; ++v)
      if (v != skip) s.push_back(v);
    cells.push_back(s);
  }
  return SimplicialComplex::from_maximal(6, cells);
}

DiffCochain random_diff_cochain(Rng& rng, const SimplicialComplex& x, int p, int q,
                                std::size_t rank = 1) {
  DiffCochain d = DiffCochain::zero(x, p, q, rank);
  d.c = rng.cochain<Int>(x, p, rank);
  d.h = rng.cochain<Rat>(x, p - 1, rank);
  if (d.omega) d.omega = rng.cochain<Rat>(x, p, rank);
  return d;
}

/// Holonomy class on the n-gon: (0, h, 0) in C^2(2) with the h-slot summing
/// to the given value around the circle.
DiffCochain holonomy_class(const SimplicialComplex& s1, const Rat& value) {
  DiffCochain x = DiffCochain::zero(s1, 2, 2);
  x.h.values[0][0] = value;
  return x;
}

}  // namespace

TEST_CASE("dcheck squares to zero on all branches") {
  SimplicialComplex s1 = circle(3);
  SimplicialComplex t2 = torus9();
  Rng rng(101);
  for (const SimplicialComplex* x : {&s1, &t2})
    for (int p = 0; p <= 4; ++p)
      for (int q = 0; q <= 5; ++q)
        for (std::size_t rank : {std::size_t(1), std::size_t(2)}) {
          DiffCochain d = random_diff_cochain(rng, *x, p, q, rank);
          REQUIRE(dcheck(dcheck(d)).is_zero());
        }
}

TEST_CASE("dcheck branch formulas") {
  SimplicialComplex s1 = circle(3);

  SECTION("zero maps to zero") {
    REQUIRE(dcheck(DiffCochain::zero(s1, 2, 3)).is_zero());
    REQUIRE(dcheck(DiffCochain::zero(s1, 1, 1)).is_zero());
  }

  SECTION("below the filtration the form slot is absent and ignored") {
    Rng rng(7);
    DiffCochain d = DiffCochain::zero(s1, 1, 4);
    d.h = rng.cochain<Rat>(s1, 0);
    REQUIRE_FALSE(d.omega.has_value());
    DiffCochain dd = dcheck(d);
    REQUIRE(dd.c.is_zero());
    REQUIRE(dd.h == -coboundary(d.h));
    REQUIRE_FALSE(dd.omega.has_value());
  }

  SECTION("at p = q-1 the differential lands in the form-carrying tier") {
    DiffCochain d = DiffCochain::zero(s1, 1, 2);
    Rng rng(8);
    d.c = rng.cochain<Int>(s1, 1);
    DiffCochain dd = dcheck(d);
    REQUIRE(dd.omega.has_value());
    REQUIRE(dd.omega->is_zero());
    REQUIRE(dd.h == to_rational(d.c));  // h was zero
  }

  SECTION("degree-1 cocycle with empty h and omega") {
    IntegerCohomology h1 = integer_cohomology(s1, 1);
    DiffCochain d = DiffCochain::zero(s1, 1, 1);
    d.c.set_slot(0, h1.generators()[0]);
    DiffCochain dd = dcheck(d);
    REQUIRE(dd.c.is_zero());
    REQUIRE(dd.h == to_rational(d.c));
    REQUIRE(dd.omega->is_zero());
  }
}

TEST_CASE("differential cohomology presentations") {
  SimplicialComplex pt = point();
  REQUIRE(diff_cohomology(pt, 1) == DiffCohomologyPresentation{0, {}, 1, 0});
  REQUIRE(diff_cohomology(pt, 2) == DiffCohomologyPresentation{0, {}, 0, 0});

  SimplicialComplex s1 = circle(3);
  REQUIRE(diff_cohomology(s1, 1) == DiffCohomologyPresentation{1, {}, 1, 2});
  REQUIRE(diff_cohomology(s1, 2) == DiffCohomologyPresentation{0, {}, 1, 0});
  REQUIRE(diff_cohomology(s1, 3) == DiffCohomologyPresentation{0, {}, 0, 0});

  SimplicialComplex t2 = torus9();
  REQUIRE(diff_cohomology(t2, 1) == DiffCohomologyPresentation{2, {}, 1, 8});
  REQUIRE(diff_cohomology(t2, 2) == DiffCohomologyPresentation{1, {}, 2, 17});
  REQUIRE(diff_cohomology(t2, 3) == DiffCohomologyPresentation{0, {}, 1, 0});

  SimplicialComplex p2 = rp6();
  REQUIRE(diff_cohomology(p2, 1) == DiffCohomologyPresentation{0, {}, 1, 5});
  REQUIRE(diff_cohomology(p2, 2) == DiffCohomologyPresentation{0, {Int(2)}, 0, 10});
  REQUIRE(diff_cohomology(p2, 3) == DiffCohomologyPresentation{0, {}, 0, 0});

  SECTION("lattice rank scales every part") {
    REQUIRE(diff_cohomology(s1, 1, 2) == DiffCohomologyPresentation{2, {}, 2, 4});
    REQUIRE(diff_cohomology(p2, 2, 2) == DiffCohomologyPresentation{0, {Int(2), Int(2)}, 0, 20});
  }
}

TEST_CASE("exact sequence bookkeeping") {
  for (int p = 1; p <= 3; ++p) {
    INFO("degree " << p);
    REQUIRE(sequence_report(circle(3), p).all());
    REQUIRE(sequence_report(torus9(), p).all());
    REQUIRE(sequence_report(rp6(), p).all());
  }
  REQUIRE(sequence_report(point(), 1).all());
  REQUIRE(sequence_report(torus9(), 2, 2).all());
}

TEST_CASE("structure maps") {
  SimplicialComplex t2 = torus9();
  Rng rng(55);

  SECTION("curvature and char of the form inclusion") {
    for (int p = 1; p <= 2; ++p) {
      RatCochain beta = rng.cochain<Rat>(t2, p - 1);
      DiffCochain x = include_form(beta);
      REQUIRE(is_diff_cocycle(x));
      REQUIRE(curvature(x) == coboundary(beta));
      REQUIRE(char_cocycle(x).is_zero());
    }
  }

  SECTION("topologically trivial classes have vanishing curvature and char") {
    DiffCochain alpha = DiffCochain::zero(t2, 1, 2);
    alpha.c = rng.cochain<Int>(t2, 1);
    alpha.h = rng.cochain<Rat>(t2, 0);
    DiffCochain x = dcheck(alpha);
    REQUIRE(is_diff_cocycle(x));
    REQUIRE(char_cocycle(x) == coboundary(alpha.c));
    REQUIRE(is_integer_coboundary(char_cocycle(x)));
    // curvature of a topological boundary vanishes identically
    REQUIRE(curvature(x).is_zero());
  }
}

TEST_CASE("trivialisation dichotomy on the circle") {
  SimplicialComplex s1 = circle(3);

  SECTION("third-of-a-turn holonomy: geometric yes, topological no") {
    DiffCochain x = holonomy_class(s1, Rat(1, 3));
    REQUIRE(is_diff_cocycle(x));

    TrivialisationResult geo = geometric_trivialisation(x);
    REQUIRE(geo.exists);
    REQUIRE(dcheck(*geo.alpha).same_data(x));
    REQUIRE(geo.alpha->p == 1);
    REQUIRE(geo.alpha->q == 1);

    TrivialisationResult top = topological_trivialisation(x);
    REQUIRE_FALSE(top.exists);
    REQUIRE(top.reason == "periods");
    REQUIRE(top.certificate.has_value());
    REQUIRE(top.certificate->verify(top.system, top.rhs));
    REQUIRE(top.certificate->modulus == 3);
  }

  SECTION("integral holonomy is topologically trivialisable") {
    DiffCochain x = holonomy_class(s1, Rat(2));
    TrivialisationResult top = topological_trivialisation(x);
    REQUIRE(top.exists);
    REQUIRE(dcheck(*top.alpha).same_data(x));
    REQUIRE(top.alpha->q == 2);
    REQUIRE_FALSE(top.alpha->omega.has_value());
  }

  SECTION("nonzero char blocks both, with certificate") {
    SimplicialComplex t2 = torus9();
    IntegerCohomology h2 = integer_cohomology(t2, 2);
    DiffCochain x = DiffCochain::zero(t2, 2, 2);
    x.c.set_slot(0, h2.generators()[0]);
    x.omega = to_rational(x.c);
    REQUIRE(is_diff_cocycle(x));
    TrivialisationResult geo = geometric_trivialisation(x);
    REQUIRE_FALSE(geo.exists);
    REQUIRE(geo.reason == "char");
    REQUIRE(geo.certificate.has_value());
    REQUIRE(geo.certificate->verify(geo.system, geo.rhs));
  }

  SECTION("nonzero curvature blocks the topological search") {
    SimplicialComplex t2 = torus9();
    Rng rng(66);
    RatCochain beta = rng.cochain<Rat>(t2, 1);
    DiffCochain x = include_form(beta);  // curvature d beta != 0 generically
    REQUIRE_FALSE(curvature(x).is_zero());
    TrivialisationResult top = topological_trivialisation(x);
    REQUIRE_FALSE(top.exists);
    REQUIRE(top.reason == "curvature");
  }

  SECTION("rank 2: one good slot does not mask a bad one") {
    DiffCochain x = DiffCochain::zero(s1, 2, 2, 2);
    x.h.values[0][0] = Rat(1);      // integral slot
    x.h.values[0][1] = Rat(1, 3);   // obstructed slot
    TrivialisationResult top = topological_trivialisation(x);
    REQUIRE_FALSE(top.exists);
    REQUIRE(top.failing_slot == 1);
    REQUIRE(top.certificate->verify(top.system, top.rhs));
  }
}

TEST_CASE("kernel of the form inclusion is the lattice-period forms") {
  SimplicialComplex s1 = circle(3);
  IntegerCohomology h1 = integer_cohomology(s1, 1);
  std::vector<Int> gen = h1.generators()[0];

  // integral periods: i(beta) dies in differential cohomology
  RatCochain beta = RatCochain::zero(s1, 1);
  for (std::size_t i = 0; i < beta.values.size(); ++i) beta.values[i][0] = Rat(gen[i]);
  TrivialisationResult t = topological_trivialisation(include_form(beta));
  REQUIRE(t.exists);

  // fractional periods: i(beta/3) survives
  for (auto& v : beta.values) v[0] /= 3;
  TrivialisationResult t3 = topological_trivialisation(include_form(beta));
  REQUIRE_FALSE(t3.exists);
  REQUIRE(t3.reason == "periods");
}

TEST_CASE("differential cup product") {
  SimplicialComplex s1 = circle(3);
  SimplicialComplex t2 = torus9();
  Rng rng(77);

  SECTION("Leibniz rule across branch combinations") {
    for (const SimplicialComplex* x : {&s1, &t2})
      for (int p1 = 0; p1 <= 2; ++p1)
        for (int q1 = 0; q1 <= 3; ++q1)
          for (int p2 = 0; p2 <= 2; ++p2)
            for (int q2 = 0; q2 <= 3; ++q2) {
              DiffCochain a = random_diff_cochain(rng, *x, p1, q1);
              DiffCochain b = random_diff_cochain(rng, *x, p2, q2);
              DiffCochain lhs = dcheck(diff_cup(a, b));
              DiffCochain rhs = diff_cup(dcheck(a), b);
              DiffCochain rhs2 = diff_cup(a, dcheck(b));
              if (p1 % 2 != 0) {
                rhs2.c = -rhs2.c;
                rhs2.h = -rhs2.h;
                if (rhs2.omega) rhs2.omega = -*rhs2.omega;
              }
              DiffCochain total = rhs + rhs2;
              REQUIRE(lhs.c == total.c);
              REQUIRE(lhs.h == total.h);
              REQUIRE(curvature(lhs) == curvature(rhs) + curvature(rhs2));
            }
  }

  SECTION("curvature and char are multiplicative") {
    for (int rep = 0; rep < 20; ++rep) {
      DiffCochain a = random_diff_cochain(rng, t2, 1, 1);
      DiffCochain b = random_diff_cochain(rng, t2, 1, 1);
      DiffCochain ab = diff_cup(a, b);
      REQUIRE(curvature(ab) == cup(curvature(a), curvature(b)));
      REQUIRE(char_cocycle(ab) == cup(char_cocycle(a), char_cocycle(b)));
    }
  }

  SECTION("unit and zero") {
    DiffCochain u = DiffCochain::unit(t2);
    REQUIRE(is_diff_cocycle(u));
    DiffCochain a = random_diff_cochain(rng, t2, 2, 2);
    REQUIRE(diff_cup(a, u).same_data(a));
    REQUIRE(diff_cup(u, a).same_data(a));
    DiffCochain z = DiffCochain::zero(t2, 1, 1);
    REQUIRE(diff_cup(a, z).is_zero());
  }

  SECTION("cocycles multiply to cocycles") {
    DiffCochain x = holonomy_class(s1, Rat(1, 3));
    DiffCochain u = DiffCochain::unit(s1);
    REQUIRE(is_diff_cocycle(diff_cup(u, x)));
    REQUIRE(diff_cup(u, x).same_data(x));
  }
}

TEST_CASE("pair validation") {
  Lattice rank1 = Lattice::standard(1);

  SECTION("torus base: bundle classes pair with sigma = 0") {
    SimplicialComplex t2 = torus9();
    IntegerCohomology h2 = integer_cohomology(t2, 2);
    DiffCochain P = DiffCochain::zero(t2, 2, 2);
    P.c.set_slot(0, h2.generators()[0]);
    P.omega = to_rational(P.c);
    DiffCochain Phat = P;
    DiffCochain sigma = DiffCochain::zero(t2, 3, 3);
    PairCheckReport rep = pair_check(P, Phat, sigma, rank1);
    REQUIRE(rep.p_cocycle);
    REQUIRE(rep.phat_cocycle);
    REQUIRE(rep.char_cup_vanishes);
    REQUIRE(rep.sigma_valid);
    REQUIRE(rep.valid());
  }

  SECTION("four-sphere: searched sigma and residual rejection") {
    SimplicialComplex s = s4();
    Rng rng(88);
    // char-trivial degree-2 classes (H^2(S^4) = 0 forces this anyway)
    DiffCochain P = include_form(rng.cochain<Rat>(s, 1));
    DiffCochain Phat = include_form(rng.cochain<Rat>(s, 1));
    REQUIRE(is_diff_cocycle(diff_cup(P, Phat)));

    PairCheckReport found = pair_check(P, Phat, std::nullopt, rank1);
    REQUIRE(found.valid());
    REQUIRE(found.search->exists);
    REQUIRE(dcheck(*found.search->alpha).same_data(diff_cup(P, Phat)));

    // a perturbed sigma is rejected with the exact residual
    DiffCochain bad = *found.search->alpha;
    bad.h.values[0][0] += Rat(1, 2);
    PairCheckReport rej = pair_check(P, Phat, bad, rank1);
    REQUIRE_FALSE(rej.sigma_valid);
    REQUIRE(rej.residual.has_value());
    REQUIRE_FALSE(rej.residual->is_zero());
  }

  SECTION("zero pair is valid") {
    SimplicialComplex s1 = circle(3);
    DiffCochain z = DiffCochain::zero(s1, 2, 2);
    PairCheckReport rep = pair_check(z, z, DiffCochain::zero(s1, 3, 3), rank1);
    REQUIRE(rep.valid());
  }
}
