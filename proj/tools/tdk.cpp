// Command-line front end. Each subcommand runs one scenario kind against a
// built-in fixture, a scenario file, or inline payload data, and writes a
// check report (JSON and text). Report bytes are a deterministic function of
// (scenario, seed): checks are emitted in name order and witnesses are exact.
//
// Exit codes: 0 all checks pass or the scenario is purely computational,
// 1 at least one check failed (the report carries a witness), 2 bad input.

#include <tdk/cohomology.hpp>
#include <tdk/report.hpp>
#include <tdk/rng.hpp>

#include <CLI11.hpp>

#include <bit>
#include <fstream>
#include <iostream>

namespace {

using namespace tdk;

// ---------------------------------------------------------------- helpers

Json presentation_json(const AbelianGroupPresentation& p) {
  Json j;
  j["free_rank"] = p.free_rank;
  Json t = Json::array();
  for (const Int& d : p.torsion) t.push_back(render_int(d));
  j["torsion"] = std::move(t);
  j["divisible_rank"] = p.divisible_rank;
  return j;
}

Json presentation_json(const DiffCohomologyPresentation& p) {
  Json j;
  j["free_rank"] = p.free_rank;
  Json t = Json::array();
  for (const Int& d : p.torsion) t.push_back(render_int(d));
  j["torsion"] = std::move(t);
  j["divisible_rank"] = p.divisible_rank;
  j["vector_dim"] = p.vector_dim;
  return j;
}

Json certificate_json(const IntInfeasibilityCertificate& c, bool verified) {
  Json j;
  Json row = Json::array();
  for (const Int& v : c.row) row.push_back(render_int(v));
  j["row"] = std::move(row);
  j["modulus"] = render_int(c.modulus);
  j["verified"] = verified;
  return j;
}

DiffCochain random_diff_cochain(Rng& rng, const SimplicialComplex& x, int p, int q,
                                std::size_t rank = 1) {
  DiffCochain d = DiffCochain::zero(x, p, q, rank);
  d.c = rng.cochain<Int>(x, p, rank);
  d.h = rng.cochain<Rat>(x, p - 1, rank);
  if (d.omega) d.omega = rng.cochain<Rat>(x, p, rank);
  return d;
}

/// (0, h, 0) in C^2(2) on an n-gon, h supported on one edge
DiffCochain holonomy_class(const SimplicialComplex& s1, const Rat& value) {
  DiffCochain x = DiffCochain::zero(s1, 2, 2);
  x.h.values[0][0] = value;
  return x;
}

FourierForm random_periodic_form(Rng& rng, int n, int degree, int cutoff,
                                 bool allow_zero_mode = true) {
  FourierForm w(n);
  long terms = rng.range(1, 4);
  for (long t = 0; t < terms; ++t) {
    std::vector<int> mode(std::size_t(n), 0);
    do {
      for (int j = 0; j < n; ++j) mode[std::size_t(j)] = int(rng.range(-cutoff, cutoff));
    } while (!allow_zero_mode &&
             std::all_of(mode.begin(), mode.end(), [](int k) { return k == 0; }));
    unsigned mask = 0;
    long picks = degree;
    for (int b = 0; b < n && picks > 0; ++b)
      if (rng.range(0, 1)) {
        mask |= 1u << b;
        --picks;
      }
    if (int(std::popcount(mask)) != degree) continue;
    w.add_periodic(mode, mask, FormalScalar::pi_i(rng.small_rat()));
  }
  return w;
}

// ------------------------------------------------------------ check groups

void complex_checks(Report& rep, const SimplicialComplex& x, const std::string& pre,
                    Rng& rng, long reps) {
  int dim = x.dimension();
  Json b = Json::array();
  for (int p = 0; p <= dim; ++p) b.push_back(betti(x, p));
  rep.add(pre + "betti", "measured", b);

  for (int p = 1; p <= dim + 1; ++p) {
    std::string deg = " p=" + std::to_string(p);
    rep.add(pre + "cohomology integral" + deg, "measured",
            presentation_json(cohomology(x, p, Coeff::lattice)));
    rep.add(pre + "presentation" + deg, "measured",
            presentation_json(diff_cohomology(x, p)));
    SequenceReport s = sequence_report(x, p);
    Json w;
    w["flat_part_matches"] = s.flat_part_matches;
    w["char_part_matches"] = s.char_part_matches;
    w["form_part_matches"] = s.form_part_matches;
    w["dimension_bookkeeping"] = s.dimension_bookkeeping;
    w["char_lifts_are_cocycles"] = s.char_lifts_are_cocycles;
    w["curv_after_include_is_d"] = s.curv_after_include_is_d;
    rep.add(pre + "exact sequences" + deg, s.all() ? "pass" : "fail", w);
  }

  bool square = true;
  for (long r = 0; r < reps && square; ++r) {
    int p = int(rng.range(0, dim + 1));
    DiffCochain c = random_diff_cochain(rng, x, p, int(rng.range(0, dim + 2)));
    square = dcheck(dcheck(c)).is_zero();
  }
  Json w;
  w["reps"] = reps;
  rep.add(pre + "dcheck squares to zero", square ? "pass" : "fail", w);
}

void diff_checks(Report& rep, const SimplicialComplex& x, const std::string& pre,
                 Rng& rng, long reps) {
  int dim = x.dimension();

  bool leibniz = true;
  for (long r = 0; r < reps && leibniz; ++r) {
    int p1 = int(rng.range(0, 2)), q1 = int(rng.range(0, 3));
    int p2 = int(rng.range(0, 2)), q2 = int(rng.range(0, 3));
    DiffCochain a = random_diff_cochain(rng, x, p1, q1);
    DiffCochain c = random_diff_cochain(rng, x, p2, q2);
    DiffCochain lhs = dcheck(diff_cup(a, c));
    DiffCochain rhs = diff_cup(dcheck(a), c);
    DiffCochain rhs2 = diff_cup(a, dcheck(c));
    if (p1 % 2 != 0) {
      rhs2.c = -rhs2.c;
      rhs2.h = -rhs2.h;
      if (rhs2.omega) rhs2.omega = -*rhs2.omega;
    }
    DiffCochain total = rhs + rhs2;
    leibniz = lhs.c == total.c && lhs.h == total.h &&
              curvature(lhs) == curvature(rhs) + curvature(rhs2);
  }
  Json lw;
  lw["reps"] = reps;
  rep.add(pre + "cup leibniz", leibniz ? "pass" : "fail", lw);

  bool mult = true;
  for (long r = 0; r < reps && mult; ++r) {
    DiffCochain a = random_diff_cochain(rng, x, 1, 1);
    DiffCochain c = random_diff_cochain(rng, x, 1, 1);
    DiffCochain ac = diff_cup(a, c);
    mult = curvature(ac) == cup(curvature(a), curvature(c)) &&
           char_cocycle(ac) == cup(char_cocycle(a), char_cocycle(c));
  }
  rep.add(pre + "cup multiplicative", mult ? "pass" : "fail", lw);

  if (dim == 1) {
    DiffCochain third = holonomy_class(x, Rat(1, 3));
    TrivialisationResult geo = geometric_trivialisation(third);
    Json gw;
    gw["exists"] = geo.exists;
    gw["alpha_checks"] = geo.exists && dcheck(*geo.alpha).same_data(third);
    rep.add(pre + "trivialisation geometric holonomy-1/3",
            geo.exists && dcheck(*geo.alpha).same_data(third) ? "pass" : "fail", gw);

    TrivialisationResult top = topological_trivialisation(third);
    Json tw;
    tw["exists"] = top.exists;
    tw["reason"] = top.reason;
    if (top.certificate)
      tw["certificate"] = certificate_json(*top.certificate,
                                           top.certificate->verify(top.system, top.rhs));
    std::string status = "fail";
    if (!top.exists && top.reason == "periods" && top.certificate &&
        top.certificate->verify(top.system, top.rhs))
      status = "infeasible";
    rep.add(pre + "trivialisation topological holonomy-1/3", status, tw);

    DiffCochain whole = holonomy_class(x, Rat(2));
    TrivialisationResult ok = topological_trivialisation(whole);
    rep.add(pre + "trivialisation topological integral holonomy",
            ok.exists && dcheck(*ok.alpha).same_data(whole) ? "pass" : "fail",
            Json(nullptr));
  }

  if (dim == 2) {
    IntegerCohomology h2 = integer_cohomology(x, 2);
    if (!h2.generators().empty()) {
      DiffCochain cls = DiffCochain::zero(x, 2, 2);
      cls.c.set_slot(0, h2.generators()[0]);
      cls.omega = to_rational(cls.c);
      TrivialisationResult geo = geometric_trivialisation(cls);
      Json w;
      w["reason"] = geo.reason;
      if (geo.certificate)
        w["certificate"] = certificate_json(*geo.certificate,
                                            geo.certificate->verify(geo.system, geo.rhs));
      std::string status = "fail";
      if (!geo.exists && geo.reason == "char" && geo.certificate &&
          geo.certificate->verify(geo.system, geo.rhs))
        status = "infeasible";
      rep.add(pre + "trivialisation char-blocked class", status, w);
    }
  }
}

void pair_checks(Report& rep, const std::string& pre, const SimplicialComplex& x,
                 const DiffCochain& P, const DiffCochain& Phat,
                 const std::optional<DiffCochain>& sigma, const Lattice& lat) {
  (void)x;
  PairCheckReport r = pair_check(P, Phat, sigma, lat);
  rep.add(pre + "p cocycle", r.p_cocycle ? "pass" : "fail", Json(nullptr));
  rep.add(pre + "phat cocycle", r.phat_cocycle ? "pass" : "fail", Json(nullptr));
  Json sw;
  sw["residual_zero"] = !r.residual || r.residual->is_zero();
  rep.add(pre + "sigma valid", r.sigma_valid ? "pass" : "fail", sw);
  rep.add(pre + "char cup vanishes", r.char_cup_vanishes ? "pass" : "fail",
          Json(nullptr));
}

/// the canonical pair: the torus bundle class against itself with sigma = 0
void default_pair_checks(Report& rep, const std::string& pre) {
  SimplicialComplex t2 = torus9();
  IntegerCohomology h2 = integer_cohomology(t2, 2);
  DiffCochain P = DiffCochain::zero(t2, 2, 2);
  P.c.set_slot(0, h2.generators()[0]);
  P.omega = to_rational(P.c);
  DiffCochain sigma = DiffCochain::zero(t2, 3, 3);
  pair_checks(rep, pre, t2, P, P, sigma, Lattice::standard(1));
}

void hori_checks(Report& rep, const TDualityModel& m, const std::string& pre,
                 const std::string& form_text) {
  if (!form_text.empty()) {
    InvariantForm w = parse_form(*m.algebra, form_text);
    if (!on_side(m, w, false))
      throw std::invalid_argument("input form contains dual-side fiber generators");
    InvariantForm t = hori_transform(m, w);
    Json tw;
    tw["input"] = render_form(w);
    tw["output"] = render_form(t);
    rep.add(pre + "transform", "measured", tw);
  }

  HoriReport r = verify_hori(m);
  Json sw;
  sw["sign"] = r.chain_map_sign;
  rep.add(pre + "chain map sign", r.chain_map_sign != 0 ? "measured" : "fail", sw);
  rep.add(pre + "proof identity", r.proof_identity ? "pass" : "fail", Json(nullptr));
  rep.add(pre + "exact to exact", r.exact_to_exact ? "pass" : "fail", Json(nullptr));
  rep.add(pre + "isomorphism", r.iso ? "pass" : "fail", Json(nullptr));
  Json iw = Json::array();
  for (const auto& [deg, sign] : r.involution_sign)
    iw.push_back(Json::array({deg, sign}));
  rep.add(pre + "involution signs",
          r.involution_constant_per_degree ? "measured" : "fail", iw);
  rep.add(pre + "degree parity shift", r.degree_parity_shift_ok ? "pass" : "fail",
          Json(nullptr));
  if (m.k == 1) {
    PushforwardTwistReport pw = pushforward_twist_check(m);
    Json w;
    w["sign"] = pw.sign;
    rep.add(pre + "pushforward twist", pw.consistent ? "measured" : "fail", w);
  }
}

void poincare_checks(Report& rep, const EquivariantLineBundle& l,
                     const std::string& name, const std::string& pre, Rng& rng,
                     int cutoff, long reps) {
  Json cw;
  cw["pairing_defect"] = render_rat(l.generator_commutator_defect());
  rep.add(pre + "cocycle commutativity", "pass", cw);

  FourierForm curv = curvature(l);
  rep.add(pre + "curvature", "measured", fourier_to_json(curv));
  rep.add(pre + "curvature invariant",
          is_geometrically_invariant(curv) ? "pass" : "fail", Json(nullptr));
  bool is_poincare = name == "poincare-standard" || name == "poincare-symmetric";
  if (is_poincare) {
    FourierForm expected = FourierForm::invariant(2, 3u, FormalScalar::pi_i(Rat(2)));
    rep.add(pre + "curvature expected", curv == expected ? "pass" : "fail",
            fourier_to_json(expected));
  }

  EquivarianceReport eq = check_equivariance(l);
  Json ew;
  ew["generator 1"] = fourier_to_json(eq.residuals[0]);
  ew["generator 2"] = fourier_to_json(eq.residuals[1]);
  rep.add(pre + "equivariance residuals", eq.passes ? "pass" : "measured", ew);

  try {
    Rat c = Rat(1) / 3;
    FormalScalar h = holonomy(l, {{c, Rat(0)}, {c, Rat(1)}});
    Json w;
    w["loop"] = "theta1=1/3, full theta2 turn";
    w["value"] = render_scalar(h);
    rep.add(pre + "holonomy sample", "measured", w);
    if (name == "poincare-standard") {
      bool ok = h == FormalScalar::zeta(3, 2) &&
                holonomy(l, {{Rat(0), Rat(1) / 4}, {Rat(1), Rat(1) / 4}}) ==
                    -FormalScalar::i_unit();
      rep.add(pre + "holonomy expected values", ok ? "pass" : "fail", Json(nullptr));
    }
    if (name == "poincare-symmetric") {
      bool ok = holonomy(l, {{Rat(1) / 3, Rat(1) / 5}, {Rat(1) / 3, Rat(6) / 5}}) ==
                FormalScalar::rational(-1);
      rep.add(pre + "holonomy expected values", ok ? "pass" : "fail", Json(nullptr));
    }
    // curvature of a mode-0 + affine connection is constant, so the flux
    // through a rectangle is coefficient * area
    FormalScalar coeff = curv.periodic_coefficient(std::vector<int>(2, 0), 3u);
    std::optional<Rat> q =
        coeff.is_zero() ? std::optional<Rat>(Rat(0)) : coeff.as_rational_multiple_of_pi_i();
    if (q) {
      bool stokes = true;
      for (long r = 0; r < reps && stokes; ++r) {
        Rat a1 = rng.small_rat(), a2 = rng.small_rat();
        Rat w = Rat(rng.range(1, 5)) / Rat(rng.range(1, 6));
        Rat h = Rat(rng.range(1, 5)) / Rat(rng.range(1, 6));
        std::vector<std::vector<Rat>> rect{
            {a1, a2}, {a1 + w, a2}, {a1 + w, a2 + h}, {a1, a2 + h}, {a1, a2}};
        stokes = holonomy(l, rect) == FormalScalar::phase_pi_i(-*q * w * h);
      }
      Json w;
      w["loops"] = reps;
      rep.add(pre + "stokes rectangles", stokes ? "pass" : "fail", w);
    }
  } catch (const std::domain_error& e) {
    Json w;
    w["reason"] = e.what();
    rep.add(pre + "holonomy skipped", "measured", w);
  }

  FourierForm cs = cs_difference(l, Rat(1) / 2);
  rep.add(pre + "translation comparison t=1/2", "measured", fourier_to_json(cs));
  rep.add(pre + "translation comparison closed", d(cs).is_zero() ? "pass" : "fail",
          Json(nullptr));
  {
    bool law = true;
    for (int r = 0; r < 10 && law; ++r) {
      Rat t1 = rng.small_rat(), t2 = rng.small_rat();
      law = cs_difference(l, t1 + t2) ==
            translate(cs_difference(l, t1), {t2, Rat(0)}) + cs_difference(l, t2);
    }
    rep.add(pre + "translation cocycle identity", law ? "pass" : "fail", Json(nullptr));
  }

  for (long n : {2L, 3L, 4L}) {
    ObstructionReport r = fixed_obstruction_check(l, n, cutoff);
    Json w;
    w["group_order"] = n;
    w["cutoff"] = r.cutoff;
    w["feasible"] = r.feasible;
    std::string status;
    if (r.feasible) {
      status = "pass";
    } else {
      w["blocking"] = r.blocking;
      bool verified = r.certificate &&
                      r.certificate->verify(r.projected_system, r.projected_rhs);
      if (r.certificate) w["certificate"] = certificate_json(*r.certificate, verified);
      status = verified ? "infeasible" : "fail";
    }
    rep.add(pre + "fixed lift order " + std::to_string(n), status, w);
  }
}

void fourier_checks(Report& rep, const std::string& pre, Rng& rng, long reps) {
  bool avg = true;
  for (long r = 0; r < reps && avg; ++r) {
    FourierForm w = random_periodic_form(rng, 2, int(rng.range(0, 2)), 2);
    FourierForm a = average(w);
    avg = is_geometrically_invariant(a) && average(a) == a && d(a) == average(d(w)) &&
          average(w - a).is_zero();
  }
  Json aw;
  aw["reps"] = reps;
  rep.add(pre + "averaging projector", avg ? "pass" : "fail", aw);

  bool rec = true;
  for (long r = 0; r < reps && rec; ++r) {
    FourierForm planted = random_periodic_form(rng, 2, 1, 2, false);
    FourierForm invariant(2);
    invariant.add_periodic({0, 0}, 3u, FormalScalar::pi_i(rng.small_rat()));
    invariant.add_periodic({0, 0}, 1u, FormalScalar::pi_i(rng.small_rat()));
    FourierForm w = invariant + d(planted);
    InvariantDecomposition dec = invariant_decomposition(w);
    rec = dec.exact && dec.invariant_part == invariant &&
          dec.invariant_part + d(dec.alpha) == w;
  }
  rep.add(pre + "invariant decomposition", rec ? "pass" : "fail", aw);

  bool tw = true;
  FourierForm h = FourierForm::invariant(3, 7u, FormalScalar::pi_i(Rat(2)));
  for (long r = 0; r < std::min(reps, 10L) && tw; ++r) {
    FourierForm planted = random_periodic_form(rng, 3, 1, 1, false);
    FourierForm invariant =
        FourierForm::invariant(3, 3u, FormalScalar::pi_i(rng.small_rat()));
    FourierForm w = invariant + d(planted) + wedge(h, planted);
    InvariantDecomposition dec = invariant_decomposition(w, h);
    tw = dec.exact && dec.invariant_part == invariant &&
         dec.invariant_part + d(dec.alpha) + wedge(h, dec.alpha) == w;
  }
  rep.add(pre + "twisted decomposition", tw ? "pass" : "fail", Json(nullptr));
}

void cdga_checks(Report& rep, const std::string& pre) {
  CDGA t3 = builtin_cdga("t3-cdga");
  InvariantForm xyz = wedge(InvariantForm::generator(t3, "x"),
                            wedge(InvariantForm::generator(t3, "y"),
                                  InvariantForm::generator(t3, "z")));
  TwistedCohomology flat = twisted_cohomology(t3, InvariantForm::zero(t3));
  Json uw;
  uw["even"] = flat.even_dim;
  uw["odd"] = flat.odd_dim;
  rep.add(pre + "three-torus untwisted dims",
          flat.even_dim == 4 && flat.odd_dim == 4 ? "pass" : "fail", uw);
  TwistedCohomology tw = twisted_cohomology(t3, xyz);
  Json twj;
  twj["even"] = tw.even_dim;
  twj["odd"] = tw.odd_dim;
  rep.add(pre + "three-torus twisted dims",
          tw.even_dim == 3 && tw.odd_dim == 3 ? "pass" : "fail", twj);
  TwistedCohomology scaled = twisted_cohomology(t3, Rat(5) * xyz);
  rep.add(pre + "twist scaling invariance",
          scaled.even_dim == tw.even_dim && scaled.odd_dim == tw.odd_dim ? "pass"
                                                                         : "fail",
          Json(nullptr));
}

// ------------------------------------------------------------ scenario glue

struct Options {
  std::string in, out, fixture, form;
  std::uint64_t seed = 1;
  long reps = 0;
  int cutoff = 3;
  bool timing = false;
  bool seed_set = false, reps_set = false, cutoff_set = false, fixture_set = false;
};

struct Scenario {
  std::string kind, name, fixture;
  std::uint64_t seed = 1;
  long reps = 0;
  int cutoff = 3;
  Json payload = Json::object();
};

Scenario load_scenario(const Options& opt, const std::string& kind,
                       const std::string& default_fixture) {
  Scenario s;
  s.kind = kind;
  s.fixture = default_fixture;
  if (!opt.in.empty()) {
    std::ifstream file(opt.in);
    if (!file) throw std::invalid_argument("cannot open scenario file " + opt.in);
    Json j = Json::parse(file);
    if (j.value("schema", "") != kSchemaTag)
      throw std::invalid_argument("scenario schema must be " + std::string(kSchemaTag));
    if (j.value("kind", "") != kind)
      throw std::invalid_argument("scenario kind " + j.value("kind", "") +
                                  " does not match subcommand " + kind);
    s.seed = j.value("seed", std::uint64_t(1));
    s.reps = j.value("reps", 0L);
    s.cutoff = j.value("cutoff", 3);
    s.fixture = j.value("fixture", default_fixture);
    s.name = j.value("scenario", "");
    if (j.contains("payload")) s.payload = j["payload"];
  }
  if (opt.seed_set || opt.in.empty()) s.seed = opt.seed;
  if (opt.reps_set) s.reps = opt.reps;
  if (opt.cutoff_set) s.cutoff = opt.cutoff;
  if (opt.fixture_set) s.fixture = opt.fixture;
  return s;
}

long pick(long reps, long fallback) { return reps > 0 ? reps : fallback; }

int finish(Report& rep, const Options& opt) {
  rep.sort_by_name();
  std::filesystem::path path = write_report(rep, opt.out);
  std::cout << rep.to_text() << "report written to " << path.string() << "\n";
  return rep.exit_code();
}

int run_complex(const Options& opt) {
  Scenario s = load_scenario(opt, "complex", "torus-9");
  Report rep;
  rep.kind = "complex";
  rep.scenario = s.name.empty() ? "complex-" + s.fixture : s.name;
  rep.seed = s.seed;
  rep.timing = opt.timing;
  SimplicialComplex x = s.payload.contains("complex")
                            ? complex_from_json(s.payload["complex"])
                            : builtin_complex(s.fixture);
  Rng rng(s.seed);
  complex_checks(rep, x, "", rng, pick(s.reps, 50));
  return finish(rep, opt);
}

int run_diff(const Options& opt) {
  Scenario s = load_scenario(opt, "diff", "circle-3gon");
  Report rep;
  rep.kind = "diff";
  rep.scenario = s.name.empty() ? "diff-" + s.fixture : s.name;
  rep.seed = s.seed;
  rep.timing = opt.timing;
  SimplicialComplex x = s.payload.contains("complex")
                            ? complex_from_json(s.payload["complex"])
                            : builtin_complex(s.fixture);
  Rng rng(s.seed);
  diff_checks(rep, x, "", rng, pick(s.reps, 50));
  return finish(rep, opt);
}

int run_pair(const Options& opt) {
  Scenario s = load_scenario(opt, "pair", "torus-9");
  Report rep;
  rep.kind = "pair";
  rep.scenario = s.name.empty() ? "pair-" + s.fixture : s.name;
  rep.seed = s.seed;
  rep.timing = opt.timing;
  if (s.payload.contains("p")) {
    SimplicialComplex x = s.payload.contains("complex")
                              ? complex_from_json(s.payload["complex"])
                              : builtin_complex(s.fixture);
    std::size_t rank = s.payload.value("rank", std::size_t(1));
    DiffCochain P = diff_cochain_from_json(x, s.payload.at("p"));
    DiffCochain Phat = diff_cochain_from_json(x, s.payload.at("phat"));
    std::optional<DiffCochain> sigma;
    if (s.payload.contains("sigma") && !s.payload["sigma"].is_null())
      sigma = diff_cochain_from_json(x, s.payload["sigma"]);
    pair_checks(rep, "", x, P, Phat, sigma, Lattice::standard(rank));
  } else {
    default_pair_checks(rep, "");
  }
  return finish(rep, opt);
}

int run_hori(const Options& opt) {
  Scenario s = load_scenario(opt, "hori", "point-k1");
  Report rep;
  rep.kind = "hori";
  rep.scenario = s.name.empty() ? "hori-" + s.fixture : s.name;
  rep.seed = s.seed;
  rep.timing = opt.timing;
  TDualityModel m = s.payload.contains("spec")
                        ? build_model(model_spec_from_json(s.payload["spec"]))
                        : builtin_model(s.fixture);
  std::string form = opt.form;
  if (form.empty()) form = s.payload.value("form", "1");
  hori_checks(rep, m, "", form);
  return finish(rep, opt);
}

int run_poincare(const Options& opt) {
  Scenario s = load_scenario(opt, "poincare", "poincare-standard");
  Report rep;
  rep.kind = "poincare";
  rep.scenario = s.name.empty() ? s.fixture : s.name;
  rep.seed = s.seed;
  rep.timing = opt.timing;
  std::string name = s.fixture == "poincare-paper" ? "poincare-symmetric" : s.fixture;
  EquivariantLineBundle l = s.payload.contains("bundle")
                                ? bundle_from_json(s.payload["bundle"])
                                : builtin_bundle(name);
  Rng rng(s.seed);
  poincare_checks(rep, l, s.payload.contains("bundle") ? "" : name, "", rng, s.cutoff,
                  pick(s.reps, 20));
  return finish(rep, opt);
}

int run_verify(const Options& opt) {
  Scenario s = load_scenario(opt, "verify-all", "");
  Report rep;
  rep.kind = "verify-all";
  rep.scenario = s.name.empty() ? "verify-all" : s.name;
  rep.seed = s.seed;
  rep.timing = opt.timing;

  for (const char* name : {"point", "circle-3gon", "torus-9"}) {
    Rng rng(s.seed);
    complex_checks(rep, builtin_complex(name), std::string("complex/") + name + "/",
                   rng, pick(s.reps, 25));
  }
  for (const char* name : {"circle-3gon", "torus-9"}) {
    Rng rng(s.seed + 1);
    diff_checks(rep, builtin_complex(name), std::string("diff/") + name + "/", rng,
                pick(s.reps, 25));
  }
  default_pair_checks(rep, "pair/torus-9/");
  for (const std::string& name : builtin_model_names())
    hori_checks(rep, builtin_model(name), "hori/" + name + "/", "");
  for (const char* name : {"poincare-standard", "poincare-symmetric", "trivial-bundle"}) {
    Rng rng(s.seed + 2);
    poincare_checks(rep, builtin_bundle(name), name, std::string("poincare/") + name + "/",
                    rng, s.cutoff, pick(s.reps, 20));
  }
  {
    Rng rng(s.seed + 3);
    fourier_checks(rep, "fourier/", rng, pick(s.reps, 40));
  }
  cdga_checks(rep, "cdga/");
  return finish(rep, opt);
}

int run_emit_fixture(const Options& opt, bool list) {
  if (list) {
    for (const std::string& name : fixture_names()) std::cout << name << "\n";
    return 0;
  }
  if (opt.fixture.empty())
    throw std::invalid_argument("emit-fixture needs --fixture NAME (or --list)");
  std::string text = dump_json(emit_fixture(opt.fixture));
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(opt.out);
    if (!file) throw std::invalid_argument("cannot open output file " + opt.out);
    file << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact checks for differential cohomology and torus duality"};
  app.require_subcommand(1);

  Options opt;
  bool list_fixtures = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--in", opt.in, "scenario JSON file");
    sub->add_option("--out", opt.out, "report path (default <scenario>.report.json)");
    sub->add_option("--seed", opt.seed, "random seed")->default_val(1);
    sub->add_option("--reps", opt.reps, "repetitions for randomized checks");
    sub->add_option("--cutoff", opt.cutoff, "mode cutoff for obstruction systems");
    sub->add_option("--fixture", opt.fixture, "built-in fixture name");
    sub->add_flag("--timing", opt.timing, "record wall-clock times in reports");
    return sub;
  };

  CLI::App* c_complex = add_common(
      app.add_subcommand("complex", "cohomology of a simplicial complex"));
  CLI::App* c_diff = add_common(
      app.add_subcommand("diff", "differential cochain checks"));
  CLI::App* c_pair = add_common(
      app.add_subcommand("pair", "dual pair validation"));
  CLI::App* c_hori = add_common(
      app.add_subcommand("hori", "apply and verify the duality transform"));
  c_hori->add_option("--form", opt.form, "input form, e.g. \"1\" or \"2*A\"");
  CLI::App* c_poincare = add_common(
      app.add_subcommand("poincare", "equivariant line bundle checks"));
  CLI::App* c_verify = add_common(
      app.add_subcommand("verify", "run every property suite"));
  CLI::App* c_emit = add_common(
      app.add_subcommand("emit-fixture", "write a built-in fixture as JSON"));
  c_emit->add_flag("--list", list_fixtures, "list fixture names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  opt.seed_set = app.get_subcommands()[0]->count("--seed") > 0;
  opt.reps_set = app.get_subcommands()[0]->count("--reps") > 0;
  opt.cutoff_set = app.get_subcommands()[0]->count("--cutoff") > 0;
  opt.fixture_set = app.get_subcommands()[0]->count("--fixture") > 0;

  try {
    if (c_complex->parsed()) return run_complex(opt);
    if (c_diff->parsed()) return run_diff(opt);
    if (c_pair->parsed()) return run_pair(opt);
    if (c_hori->parsed()) return run_hori(opt);
    if (c_poincare->parsed()) return run_poincare(opt);
    if (c_verify->parsed()) return run_verify(opt);
    if (c_emit->parsed()) return run_emit_fixture(opt, list_fixtures);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
