#pragma once

// Canonical JSON serialization for every domain object, plus the built-in
// fixture catalogue. Numbers that must stay exact (big integers, rationals)
// travel as strings; scalars with roots of unity and the formal pi travel as
// token strings over "pi", "i", "zeta(N)". Emission is deterministic: equal
// in-memory values produce identical bytes, and re-loading an emitted
// document reproduces the value.

#include <tdk/diff_cochain.hpp>
#include <tdk/line_bundle.hpp>
#include <tdk/tduality.hpp>

#include <json.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdk {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "tdk/v1";

// ---------------------------------------------------------------- rationals

inline std::string render_rat(const Rat& q) {
  std::ostringstream out;
  out << rat_num(q);
  if (rat_den(q) != 1) out << "/" << rat_den(q);
  return out.str();
}

inline std::string render_int(const Int& n) {
  std::ostringstream out;
  out << n;
  return out.str();
}

inline Rat parse_rat(const std::string& s) {
  std::string t = s;
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = t.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(t));
    Int den(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(Int(t.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

inline Int parse_int(const std::string& s) {
  Rat q = parse_rat(s);
  if (!is_integer(q)) throw std::invalid_argument("expected integer, got " + s);
  return rat_num(q);
}

// ------------------------------------------------------------ formal scalars

/// Canonical token string: terms ordered by (pi power, zeta exponent), each
/// "q", "q*pi^p", "q*i", "q*zeta(M)^j" with unit coefficients elided.
inline std::string render_scalar(const FormalScalar& s) {
  if (s.is_zero()) return "0";
  std::vector<std::string> terms;
  for (const auto& [p, poly] : s.terms()) {
    for (std::size_t j = 0; j < poly.size(); ++j) {
      if (poly[j] == 0) continue;
      std::vector<std::string> factors;
      if (p != 0) factors.push_back(p == 1 ? "pi" : "pi^" + std::to_string(p));
      if (j != 0) {
        if (s.conductor() == 4 && j == 1)
          factors.push_back("i");
        else
          factors.push_back("zeta(" + std::to_string(s.conductor()) + ")" +
                            (j == 1 ? "" : "^" + std::to_string(j)));
      }
      std::string term;
      if (factors.empty())
        term = render_rat(poly[j]);
      else {
        if (poly[j] == 1)
          term = "";
        else if (poly[j] == -1)
          term = "-";
        else
          term = render_rat(poly[j]) + "*";
        for (std::size_t f = 0; f < factors.size(); ++f)
          term += (f ? "*" : "") + factors[f];
      }
      terms.push_back(term);
    }
  }
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? " + " : "") + terms[i];
  return out;
}

namespace detail {

inline FormalScalar parse_scalar_factor(const std::string& tok) {
  auto parse_power = [](const std::string& t, std::size_t base_len) {
    if (t.size() == base_len) return 1;
    if (t[base_len] != '^') throw std::invalid_argument("bad token: " + t);
    return std::stoi(t.substr(base_len + 1));
  };
  if (tok == "i") return FormalScalar::i_unit();
  if (tok.rfind("pi", 0) == 0 && (tok.size() == 2 || tok[2] == '^'))
    return FormalScalar::pi(parse_power(tok, 2));
  if (tok.rfind("zeta(", 0) == 0) {
    std::size_t close = tok.find(')');
    if (close == std::string::npos) throw std::invalid_argument("bad token: " + tok);
    long order = std::stol(tok.substr(5, close - 5));
    long power = 1;
    if (close + 1 < tok.size()) {
      if (tok[close + 1] != '^') throw std::invalid_argument("bad token: " + tok);
      power = std::stol(tok.substr(close + 2));
    }
    return FormalScalar::zeta(order, power);
  }
  return FormalScalar::rational(parse_rat(tok));
}

}  // namespace detail

inline FormalScalar parse_scalar(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw std::invalid_argument("empty scalar literal");
  FormalScalar total;
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    std::size_t next = s.find(" + ", pos);
    std::string term = s.substr(pos, next == std::string::npos ? next : next - pos);
    pos = next == std::string::npos ? next : next + 3;
    if (term.empty()) continue;
    bool negate = false;
    if (term[0] == '-' && term.size() > 1 && !std::isdigit(term[1])) {
      negate = true;
      term = term.substr(1);
    }
    FormalScalar value = FormalScalar::rational(Rat(1));
    std::size_t fpos = 0;
    while (fpos != std::string::npos) {
      std::size_t fnext = term.find('*', fpos);
      std::string tok =
          term.substr(fpos, fnext == std::string::npos ? fnext : fnext - fpos);
      fpos = fnext == std::string::npos ? fnext : fnext + 1;
      if (tok.empty()) throw std::invalid_argument("bad scalar term: " + term);
      value *= detail::parse_scalar_factor(tok);
    }
    total += negate ? -value : value;
  }
  return total;
}

// --------------------------------------------------------- invariant forms

inline std::string render_form(const InvariantForm& w) {
  const CDGA& a = *w.alg;
  std::vector<std::string> terms;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (w.coeffs[i] == 0) continue;
    std::string name = a.monomial_name(i);
    if (name == "1")
      terms.push_back(render_rat(w.coeffs[i]));
    else if (w.coeffs[i] == 1)
      terms.push_back(name);
    else if (w.coeffs[i] == -1)
      terms.push_back("-" + name);
    else
      terms.push_back(render_rat(w.coeffs[i]) + "*" + name);
  }
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? " + " : "") + terms[i];
  return out;
}

inline InvariantForm parse_form(const CDGA& a, const std::string& text) {
  InvariantForm total = InvariantForm::zero(a);
  std::string s = text;
  if (s.empty()) throw std::invalid_argument("empty form literal");
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    std::size_t next = s.find(" + ", pos);
    std::string term = s.substr(pos, next == std::string::npos ? next : next - pos);
    pos = next == std::string::npos ? next : next + 3;
    if (term.empty() || term == "0") continue;
    Rat coeff(1);
    if (term[0] == '-' && term.size() > 1 && !std::isdigit(term[1])) {
      coeff = -1;
      term = term.substr(1);
    }
    InvariantForm mono = InvariantForm::unit(a);
    std::size_t fpos = 0;
    bool first = true;
    while (fpos != std::string::npos) {
      std::size_t fnext = term.find('*', fpos);
      std::string tok =
          term.substr(fpos, fnext == std::string::npos ? fnext : fnext - fpos);
      fpos = fnext == std::string::npos ? fnext : fnext + 1;
      if (tok.empty()) throw std::invalid_argument("bad form term: " + term);
      if (first && (std::isdigit(tok[0]) || tok[0] == '-')) {
        coeff = coeff * parse_rat(tok);
      } else if (tok != "1") {
        if (a.generator_index(tok) < 0)
          throw std::invalid_argument("unknown generator in form: " + tok);
        mono = wedge(mono, InvariantForm::generator(a, tok));
      }
      first = false;
    }
    total = total + coeff * mono;
  }
  return total;
}

// ------------------------------------------------------ simplicial complexes

inline Json complex_to_json(const SimplicialComplex& x) {
  Json j;
  j["vertices"] = x.num_vertices();
  Json simplices = Json::array();
  for (int p = 0; p <= x.dimension(); ++p)
    for (const auto& s : x.simplices(p)) simplices.push_back(s);
  j["simplices"] = std::move(simplices);
  return j;
}

inline SimplicialComplex complex_from_json(const Json& j) {
  std::vector<Simplex> simplices;
  for (const auto& s : j.at("simplices")) simplices.push_back(s.get<Simplex>());
  return SimplicialComplex::from_maximal(j.at("vertices").get<int>(), simplices);
}

// ------------------------------------------------------------------ cochains

template <typename S>
Json cochain_to_json(const Cochain<S>& c) {
  Json j;
  j["degree"] = c.degree;
  j["rank"] = c.rank;
  Json values = Json::array();
  for (const auto& v : c.values) {
    Json row = Json::array();
    for (const S& s : v) {
      if constexpr (std::is_same_v<S, Int>)
        row.push_back(render_int(s));
      else
        row.push_back(render_rat(s));
    }
    values.push_back(std::move(row));
  }
  j["values"] = std::move(values);
  return j;
}

template <typename S>
Cochain<S> cochain_from_json(const SimplicialComplex& x, const Json& j) {
  Cochain<S> c = Cochain<S>::zero(x, j.at("degree").get<int>(),
                                  j.at("rank").get<std::size_t>());
  const Json& values = j.at("values");
  if (values.size() != c.values.size())
    throw std::invalid_argument("cochain length does not match the complex");
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const Json& row = values[i];
    if (row.size() != c.rank) throw std::invalid_argument("cochain rank mismatch");
    for (std::size_t r = 0; r < c.rank; ++r) {
      if constexpr (std::is_same_v<S, Int>)
        c.values[i][r] = parse_int(row[r].get<std::string>());
      else
        c.values[i][r] = parse_rat(row[r].get<std::string>());
    }
  }
  return c;
}

inline Json diff_cochain_to_json(const DiffCochain& x) {
  Json j;
  j["p"] = x.p;
  j["q"] = x.q;
  j["c"] = cochain_to_json(x.c);
  j["h"] = cochain_to_json(x.h);
  j["omega"] = x.omega ? cochain_to_json(*x.omega) : Json(nullptr);
  return j;
}

inline DiffCochain diff_cochain_from_json(const SimplicialComplex& x, const Json& j) {
  DiffCochain out;
  out.p = j.at("p").get<int>();
  out.q = j.at("q").get<int>();
  out.c = cochain_from_json<Int>(x, j.at("c"));
  out.h = cochain_from_json<Rat>(x, j.at("h"));
  if (!j.at("omega").is_null()) out.omega = cochain_from_json<Rat>(x, j.at("omega"));
  return out;
}

// ------------------------------------------------- graded algebras and models

inline Json poly_to_json(const Poly& p) {
  Json j = Json::array();
  for (const PolyTerm& t : p) j.push_back(Json::array({render_rat(t.coeff), t.factors}));
  return j;
}

inline Poly poly_from_json(const Json& j) {
  Poly p;
  for (const auto& t : j)
    p.push_back({parse_rat(t.at(0).get<std::string>()),
                 t.at(1).get<std::vector<std::string>>()});
  return p;
}

inline Json generators_to_json(const std::vector<GeneratorSpec>& gens) {
  Json j = Json::array();
  for (const GeneratorSpec& g : gens) {
    Json e;
    e["name"] = g.name;
    e["degree"] = g.degree;
    e["nilpotency"] = g.nilpotency;
    j.push_back(std::move(e));
  }
  return j;
}

inline std::vector<GeneratorSpec> generators_from_json(const Json& j) {
  std::vector<GeneratorSpec> gens;
  for (const auto& e : j)
    gens.push_back({e.at("name").get<std::string>(), e.at("degree").get<int>(),
                    e.at("nilpotency").get<std::size_t>()});
  return gens;
}

inline Json differentials_to_json(const std::map<std::string, Poly>& d) {
  Json j = Json::object();
  for (const auto& [name, poly] : d) j[name] = poly_to_json(poly);
  return j;
}

inline std::map<std::string, Poly> differentials_from_json(const Json& j) {
  std::map<std::string, Poly> d;
  for (const auto& [name, poly] : j.items()) d[name] = poly_from_json(poly);
  return d;
}

inline Json cdga_to_json(const std::vector<GeneratorSpec>& gens,
                         const std::map<std::string, Poly>& diffs) {
  Json j;
  j["generators"] = generators_to_json(gens);
  j["differentials"] = differentials_to_json(diffs);
  return j;
}

inline CDGA cdga_from_json(const Json& j) {
  return CDGA(generators_from_json(j.at("generators")),
              differentials_from_json(j.at("differentials")));
}

inline Json model_spec_to_json(const ModelSpec& m) {
  Json j;
  j["name"] = m.name;
  j["base_generators"] = generators_to_json(m.base_generators);
  j["base_differentials"] = differentials_to_json(m.base_differentials);
  j["torus_rank"] = m.torus_rank;
  Json f = Json::array(), fhat = Json::array();
  for (const Poly& p : m.curvature) f.push_back(poly_to_json(p));
  for (const Poly& p : m.dual_curvature) fhat.push_back(poly_to_json(p));
  j["curvature"] = std::move(f);
  j["dual_curvature"] = std::move(fhat);
  j["sigma"] = poly_to_json(m.sigma);
  return j;
}

inline ModelSpec model_spec_from_json(const Json& j) {
  ModelSpec m;
  m.name = j.at("name").get<std::string>();
  m.base_generators = generators_from_json(j.at("base_generators"));
  m.base_differentials = differentials_from_json(j.at("base_differentials"));
  m.torus_rank = j.at("torus_rank").get<int>();
  for (const auto& p : j.at("curvature")) m.curvature.push_back(poly_from_json(p));
  for (const auto& p : j.at("dual_curvature"))
    m.dual_curvature.push_back(poly_from_json(p));
  m.sigma = poly_from_json(j.at("sigma"));
  return m;
}

// --------------------------------------------------- fourier forms and bundles

inline Json fourier_to_json(const FourierForm& w) {
  Json j;
  j["dimension"] = w.dimension();
  Json periodic = Json::array();
  for (const auto& [key, c] : w.periodic()) {
    Json e;
    e["mode"] = key.first;
    Json mono = Json::array();
    for (int b = 0; b < w.dimension(); ++b)
      if (key.second >> b & 1u) mono.push_back(b + 1);
    e["monomial"] = std::move(mono);
    e["scalar"] = render_scalar(c);
    periodic.push_back(std::move(e));
  }
  j["periodic"] = std::move(periodic);
  Json affine = Json::array();
  for (const auto& [key, c] : w.affine()) {
    Json e;
    e["axis"] = key.first + 1;
    Json mono = Json::array();
    for (int b = 0; b < w.dimension(); ++b)
      if (key.second >> b & 1u) mono.push_back(b + 1);
    e["monomial"] = std::move(mono);
    e["scalar"] = render_scalar(c);
    affine.push_back(std::move(e));
  }
  j["affine"] = std::move(affine);
  return j;
}

inline FourierForm fourier_from_json(const Json& j) {
  FourierForm w(j.at("dimension").get<int>());
  auto mask_of = [&](const Json& mono) {
    unsigned mask = 0;
    for (const auto& b : mono) mask |= 1u << (b.get<int>() - 1);
    return mask;
  };
  for (const auto& e : j.at("periodic"))
    w.add_periodic(e.at("mode").get<std::vector<int>>(), mask_of(e.at("monomial")),
                   parse_scalar(e.at("scalar").get<std::string>()));
  for (const auto& e : j.at("affine"))
    w.add_affine(e.at("axis").get<int>() - 1, mask_of(e.at("monomial")),
                 parse_scalar(e.at("scalar").get<std::string>()));
  return w;
}

inline Json bundle_to_json(const EquivariantLineBundle& l) {
  Json j;
  Json pairing = Json::array();
  for (std::size_t i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < 2; ++k) row.push_back(render_rat(l.pairing()(i, k)));
    pairing.push_back(std::move(row));
  }
  j["pairing"] = std::move(pairing);
  j["connection"] = fourier_to_json(l.connection());
  return j;
}

inline EquivariantLineBundle bundle_from_json(const Json& j) {
  RatMatrix p(2, 2);
  const Json& rows = j.at("pairing");
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      p(i, k) = parse_rat(rows.at(i).at(k).get<std::string>());
  return EquivariantLineBundle(p, fourier_from_json(j.at("connection")));
}

// ----------------------------------------------------------- fixture catalogue

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "point",          "circle-3gon",     "torus-9",
      "point-cdga",     "t3-cdga",         "point-k1",
      "hopf-model",     "buscher-k1",      "flat-k2",
      "twisted-k2",     "sphere-uv",       "poincare-standard",
      "poincare-symmetric", "trivial-bundle"};
  return names;
}

inline std::string fixture_kind(const std::string& name) {
  if (name == "point" || name == "circle-3gon" || name == "torus-9") return "complex";
  if (name == "point-cdga" || name == "t3-cdga") return "cdga";
  if (name == "poincare-standard" || name == "poincare-symmetric" ||
      name == "poincare-paper" || name == "trivial-bundle")
    return "bundle";
  for (const std::string& m : builtin_model_names())
    if (m == name) return "model";
  throw std::invalid_argument("unknown fixture: " + name);
}

inline SimplicialComplex builtin_complex(const std::string& name) {
  if (name == "point") return point();
  if (name == "circle-3gon") return circle(3);
  if (name == "torus-9") return torus9();
  throw std::invalid_argument("unknown complex fixture: " + name);
}

inline Json emit_fixture(const std::string& name) {
  Json j;
  j["schema"] = kSchemaTag;
  std::string kind = fixture_kind(name);
  j["fixture"] = name == "poincare-paper" ? "poincare-symmetric" : name;
  j["kind"] = kind;
  if (kind == "complex") {
    j["data"] = complex_to_json(builtin_complex(name));
  } else if (kind == "cdga") {
    if (name == "point-cdga")
      j["data"] = cdga_to_json({}, {});
    else
      j["data"] = cdga_to_json({{"x", 1, 2}, {"y", 1, 2}, {"z", 1, 2}}, {});
  } else if (kind == "model") {
    j["data"] = model_spec_to_json(builtin_model_spec(name));
  } else {
    j["data"] = bundle_to_json(builtin_bundle(name));
  }
  return j;
}

/// canonical bytes for any document produced here
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tdk
