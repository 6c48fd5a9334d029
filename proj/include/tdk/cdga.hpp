#pragma once

// Finitely presented graded-commutative differential algebras over Q.
//
// An algebra is generated by named homogeneous generators with finite
// nilpotency (odd generators square to zero automatically), so the monomial
// basis is finite. Differentials are given on generators as polynomials and
// extended by the graded Leibniz rule; d^2 = 0 is checked at construction.

#include <tdk/exact_linalg.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tdk {

struct GeneratorSpec {
  std::string name;
  int degree = 1;
  // first vanishing power; odd-degree generators must have 2
  std::size_t nilpotency = 2;
};

struct PolyTerm {
  Rat coeff;
  std::vector<std::string> factors;
};
using Poly = std::vector<PolyTerm>;

class CDGA;

struct InvariantForm {
  const CDGA* alg = nullptr;
  std::vector<Rat> coeffs;

  static InvariantForm zero(const CDGA& a);
  static InvariantForm unit(const CDGA& a);
  static InvariantForm generator(const CDGA& a, const std::string& name);

  bool is_zero() const {
    for (const Rat& c : coeffs)
      if (c != 0) return false;
    return true;
  }
  InvariantForm& operator+=(const InvariantForm& o);
  InvariantForm& operator-=(const InvariantForm& o);
  friend InvariantForm operator+(InvariantForm a, const InvariantForm& b) { return a += b; }
  friend InvariantForm operator-(InvariantForm a, const InvariantForm& b) { return a -= b; }
  InvariantForm operator-() const {
    InvariantForm out = *this;
    for (Rat& c : out.coeffs) c = -c;
    return out;
  }
  friend InvariantForm operator*(const Rat& s, InvariantForm a) {
    for (Rat& c : a.coeffs) c *= s;
    return a;
  }
  bool operator==(const InvariantForm& o) const { return alg == o.alg && coeffs == o.coeffs; }

  // true when every supported monomial has the same degree; zero is
  // homogeneous of any degree
  bool is_homogeneous(int* degree_out = nullptr) const;
  InvariantForm parity_part(int parity) const;
  InvariantForm degree_part(int degree) const;
};

class CDGA {
 public:
  CDGA(std::vector<GeneratorSpec> generators, const std::map<std::string, Poly>& differentials,
       int truncate_degree = -1)
      : gens_(std::move(generators)), truncate_(truncate_degree) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      const GeneratorSpec& g = gens_[i];
      if (g.name.empty()) throw std::invalid_argument("unnamed generator");
      if (g.degree < 1) throw std::invalid_argument("generator degree must be positive");
      if (g.nilpotency < 2) throw std::invalid_argument("nilpotency must be at least 2");
      if (g.degree % 2 != 0 && g.nilpotency != 2)
        throw std::invalid_argument("odd generators square to zero");
      if (!name_to_gen_.emplace(g.name, i).second)
        throw std::invalid_argument("duplicate generator name: " + g.name);
    }
    enumerate_basis();
    build_differential(differentials);
    for (std::size_t i = 0; i < dim(); ++i)
      if (!apply_d(d_basis(i)).is_zero()) throw std::invalid_argument("d^2 != 0");
  }

  std::size_t dim() const { return basis_.size(); }
  std::size_t num_generators() const { return gens_.size(); }
  const GeneratorSpec& generator(std::size_t i) const { return gens_[i]; }
  int generator_index(const std::string& name) const {
    auto it = name_to_gen_.find(name);
    return it == name_to_gen_.end() ? -1 : static_cast<int>(it->second);
  }
  int degree(std::size_t basis_index) const { return degrees_[basis_index]; }
  const std::vector<unsigned char>& exponents(std::size_t basis_index) const {
    return basis_[basis_index];
  }
  std::size_t unit_index() const { return unit_; }
  std::size_t generator_basis_index(std::size_t gen) const { return gen_basis_[gen]; }

  // product of two basis monomials: Koszul sign (or 0) and target index
  std::pair<Rat, std::size_t> mul_basis(std::size_t i, std::size_t j) const {
    const auto& a = basis_[i];
    const auto& b = basis_[j];
    std::vector<unsigned char> e(gens_.size());
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      unsigned sum = unsigned(a[g]) + unsigned(b[g]);
      if (sum >= gens_[g].nilpotency) return {Rat(0), 0};
      e[g] = static_cast<unsigned char>(sum);
    }
    auto it = index_.find(e);
    if (it == index_.end()) return {Rat(0), 0};  // degree-truncated
    long swaps = 0;
    for (std::size_t ga = 0; ga < gens_.size(); ++ga) {
      if (gens_[ga].degree % 2 == 0 || a[ga] == 0) continue;
      for (std::size_t gb = 0; gb < ga; ++gb)
        if (gens_[gb].degree % 2 != 0 && b[gb] != 0) ++swaps;
    }
    return {swaps % 2 == 0 ? Rat(1) : Rat(-1), it->second};
  }

  // materialized on demand so that the stored table stays pointer-free and
  // the algebra remains safely copyable
  InvariantForm d_basis(std::size_t i) const { return {this, d_table_[i]}; }

  InvariantForm monomial_form(const std::vector<unsigned char>& e) const {
    auto it = index_.find(e);
    InvariantForm out{this, std::vector<Rat>(dim(), Rat(0))};
    if (it == index_.end()) throw std::invalid_argument("monomial not in basis");
    out.coeffs[it->second] = 1;
    return out;
  }

  std::string monomial_name(std::size_t i) const {
    const auto& e = basis_[i];
    std::string out;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      for (unsigned p = 0; p < e[g]; ++p) {
        if (!out.empty()) out += "*";
        out += gens_[g].name;
      }
    }
    return out.empty() ? "1" : out;
  }

 private:
  friend InvariantForm wedge(const InvariantForm&, const InvariantForm&);
  friend InvariantForm d(const InvariantForm&);

  void enumerate_basis() {
    std::vector<unsigned char> e(gens_.size(), 0);
    for (;;) {
      int deg = 0;
      for (std::size_t g = 0; g < gens_.size(); ++g) deg += int(e[g]) * gens_[g].degree;
      if (truncate_ < 0 || deg <= truncate_) basis_.push_back(e);
      std::size_t g = 0;
      while (g < gens_.size() && e[g] + 1 == gens_[g].nilpotency) e[g++] = 0;
      if (g == gens_.size()) break;
      ++e[g];
    }
    std::sort(basis_.begin(), basis_.end(), [&](const auto& x, const auto& y) {
      int dx = 0, dy = 0;
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        dx += int(x[g]) * gens_[g].degree;
        dy += int(y[g]) * gens_[g].degree;
      }
      return dx != dy ? dx < dy : x < y;
    });
    degrees_.resize(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      int deg = 0;
      for (std::size_t g = 0; g < gens_.size(); ++g) deg += int(basis_[i][g]) * gens_[g].degree;
      degrees_[i] = deg;
      index_[basis_[i]] = i;
    }
    unit_ = index_.at(std::vector<unsigned char>(gens_.size(), 0));
    gen_basis_.resize(gens_.size());
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      std::vector<unsigned char> ge(gens_.size(), 0);
      ge[g] = 1;
      auto it = index_.find(ge);
      if (it == index_.end()) throw std::invalid_argument("truncation removes a generator");
      gen_basis_[g] = it->second;
    }
  }

  InvariantForm form_zero() const { return {this, std::vector<Rat>(dim(), Rat(0))}; }

  InvariantForm raw_wedge(const InvariantForm& a, const InvariantForm& b) const {
    InvariantForm out = form_zero();
    for (std::size_t i = 0; i < dim(); ++i) {
      if (a.coeffs[i] == 0) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (b.coeffs[j] == 0) continue;
        auto [sign, idx] = mul_basis(i, j);
        if (sign != 0) out.coeffs[idx] += sign * a.coeffs[i] * b.coeffs[j];
      }
    }
    return out;
  }

  InvariantForm apply_d(const InvariantForm& a) const {
    InvariantForm out = form_zero();
    for (std::size_t i = 0; i < dim(); ++i) {
      if (a.coeffs[i] == 0) continue;
      for (std::size_t j = 0; j < dim(); ++j) out.coeffs[j] += a.coeffs[i] * d_table_[i][j];
    }
    return out;
  }

  void build_differential(const std::map<std::string, Poly>& differentials) {
    for (const auto& [name, poly] : differentials)
      if (name_to_gen_.find(name) == name_to_gen_.end())
        throw std::invalid_argument("differential for unknown generator: " + name);
    std::vector<InvariantForm> dgen(gens_.size(), form_zero());
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      auto it = differentials.find(gens_[g].name);
      if (it == differentials.end()) continue;
      for (const PolyTerm& t : it->second) {
        InvariantForm term = form_zero();
        term.coeffs[unit_] = t.coeff;
        for (const std::string& f : t.factors) {
          int fg = generator_index(f);
          if (fg < 0) throw std::invalid_argument("unknown factor in differential: " + f);
          InvariantForm gf = form_zero();
          gf.coeffs[gen_basis_[fg]] = 1;
          term = raw_wedge(term, gf);
        }
        dgen[g] += term;
      }
      int dg_degree = 0;
      if (!dgen[g].is_homogeneous(&dg_degree) ||
          (!dgen[g].is_zero() && dg_degree != gens_[g].degree + 1))
        throw std::invalid_argument("differential of " + gens_[g].name +
                                    " is not homogeneous of degree +1");
    }

    // Leibniz extension: for m = left * g^e * right, each generator occurrence
    // contributes (-1)^{deg left} * e * left * g^{e-1} * dg * right.
    d_table_.assign(dim(), std::vector<Rat>(dim(), Rat(0)));
    for (std::size_t i = 0; i < dim(); ++i) {
      const auto& e = basis_[i];
      InvariantForm acc = form_zero();
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        if (e[g] == 0 || dgen[g].is_zero()) continue;
        int prefix_deg = (int(e[g]) - 1) * gens_[g].degree;
        std::vector<unsigned char> left(gens_.size(), 0), right(gens_.size(), 0);
        for (std::size_t j = 0; j < gens_.size(); ++j) {
          if (j < g) {
            left[j] = e[j];
            prefix_deg += int(e[j]) * gens_[j].degree;
          } else if (j == g) {
            left[j] = static_cast<unsigned char>(e[j] - 1);
          } else {
            right[j] = e[j];
          }
        }
        Rat coef = Rat(int(e[g])) * (prefix_deg % 2 == 0 ? Rat(1) : Rat(-1));
        InvariantForm term = raw_wedge(raw_wedge(monomial_form(left), dgen[g]),
                                       monomial_form(right));
        acc += coef * term;
      }
      d_table_[i] = std::move(acc.coeffs);
    }
  }

  std::vector<GeneratorSpec> gens_;
  int truncate_;
  std::map<std::string, std::size_t> name_to_gen_;
  std::vector<std::vector<unsigned char>> basis_;
  std::vector<int> degrees_;
  std::map<std::vector<unsigned char>, std::size_t> index_;
  std::size_t unit_ = 0;
  std::vector<std::size_t> gen_basis_;
  std::vector<std::vector<Rat>> d_table_;
};

inline InvariantForm InvariantForm::zero(const CDGA& a) {
  return {&a, std::vector<Rat>(a.dim(), Rat(0))};
}

inline InvariantForm InvariantForm::unit(const CDGA& a) {
  InvariantForm out = zero(a);
  out.coeffs[a.unit_index()] = 1;
  return out;
}

inline InvariantForm InvariantForm::generator(const CDGA& a, const std::string& name) {
  int g = a.generator_index(name);
  if (g < 0) throw std::invalid_argument("unknown generator: " + name);
  InvariantForm out = zero(a);
  out.coeffs[a.generator_basis_index(std::size_t(g))] = 1;
  return out;
}

inline InvariantForm& InvariantForm::operator+=(const InvariantForm& o) {
  if (alg != o.alg) throw std::logic_error("forms from different algebras");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

inline InvariantForm& InvariantForm::operator-=(const InvariantForm& o) {
  if (alg != o.alg) throw std::logic_error("forms from different algebras");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

inline bool InvariantForm::is_homogeneous(int* degree_out) const {
  int deg = -1;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    if (deg == -1)
      deg = alg->degree(i);
    else if (alg->degree(i) != deg)
      return false;
  }
  if (degree_out) *degree_out = deg < 0 ? 0 : deg;
  return true;
}

inline InvariantForm InvariantForm::parity_part(int parity) const {
  InvariantForm out = *this;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (alg->degree(i) % 2 != parity % 2) out.coeffs[i] = 0;
  return out;
}

inline InvariantForm InvariantForm::degree_part(int degree) const {
  InvariantForm out = *this;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (alg->degree(i) != degree) out.coeffs[i] = 0;
  return out;
}

inline InvariantForm wedge(const InvariantForm& a, const InvariantForm& b) {
  if (a.alg != b.alg) throw std::logic_error("forms from different algebras");
  return a.alg->raw_wedge(a, b);
}

inline InvariantForm d(const InvariantForm& a) { return a.alg->apply_d(a); }

inline InvariantForm form_from_poly(const CDGA& a, const Poly& poly) {
  InvariantForm out = InvariantForm::zero(a);
  for (const PolyTerm& t : poly) {
    InvariantForm term = t.coeff * InvariantForm::unit(a);
    for (const std::string& f : t.factors) term = wedge(term, InvariantForm::generator(a, f));
    out += term;
  }
  return out;
}

/// exp of a positive-even-degree (hence nilpotent) element, expanded exactly.
inline InvariantForm exp_nilpotent(const InvariantForm& x) {
  if (x.coeffs[x.alg->unit_index()] != 0)
    throw std::invalid_argument("exp requires vanishing constant term");
  for (std::size_t i = 0; i < x.coeffs.size(); ++i)
    if (x.coeffs[i] != 0 && x.alg->degree(i) % 2 != 0)
      throw std::invalid_argument("exp requires an even element");
  InvariantForm acc = InvariantForm::unit(*x.alg);
  InvariantForm term = acc;
  for (Int j = 1;; ++j) {
    term = Rat(1, j) * wedge(term, x);
    if (term.is_zero()) break;
    acc += term;
  }
  return acc;
}

/// d_h = d + h-wedge, the 2-periodic twisted differential.
inline InvariantForm twisted_d(const InvariantForm& h, const InvariantForm& omega) {
  int deg = 0;
  if (!h.is_homogeneous(&deg) || (!h.is_zero() && deg != 3))
    throw std::invalid_argument("twist must be homogeneous of degree 3");
  if (!d(h).is_zero()) throw std::invalid_argument("twist must be closed");
  return d(omega) + wedge(h, omega);
}

struct TwistedCohomology {
  std::size_t even_dim = 0;
  std::size_t odd_dim = 0;
  std::vector<InvariantForm> even_representatives;
  std::vector<InvariantForm> odd_representatives;
};

/// Kernel-mod-image dimensions of the 2-periodic complex (even <-> odd)
/// with differential d_h, plus representatives completing the image.
inline TwistedCohomology twisted_cohomology(const CDGA& a, const InvariantForm& h) {
  std::vector<std::size_t> side[2];
  for (std::size_t i = 0; i < a.dim(); ++i) side[a.degree(i) % 2].push_back(i);

  // matrix of d_h from parity p to parity 1-p, in the side bases
  auto dh_matrix = [&](int p) {
    RatMatrix m(side[1 - p].size(), side[p].size());
    for (std::size_t col = 0; col < side[p].size(); ++col) {
      InvariantForm b = InvariantForm::zero(a);
      b.coeffs[side[p][col]] = 1;
      InvariantForm image = twisted_d(h, b);
      for (std::size_t row = 0; row < side[1 - p].size(); ++row)
        m(row, col) = image.coeffs[side[1 - p][row]];
    }
    return m;
  };

  TwistedCohomology out;
  for (int p = 0; p < 2; ++p) {
    RatMatrix dp = dh_matrix(p);
    RatMatrix dq = dh_matrix(1 - p);  // image lands in parity p
    RatMatrix kernel = rational_kernel_basis(dp);
    std::size_t im_rank = rational_rank(dq);
    std::size_t dim = kernel.cols() - im_rank;

    // representatives: kernel vectors extending the image column space
    std::vector<std::vector<Rat>> cols;
    for (std::size_t c = 0; c < dq.cols(); ++c) cols.push_back(dq.column(c));
    std::size_t rank = im_rank;
    std::vector<InvariantForm> reps;
    for (std::size_t c = 0; c < kernel.cols(); ++c) {
      cols.push_back(kernel.column(c));
      RatMatrix trial(side[p].size(), cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) trial.set_column(j, cols[j]);
      if (rational_rank(trial) > rank) {
        ++rank;
        InvariantForm rep = InvariantForm::zero(a);
        for (std::size_t r = 0; r < side[p].size(); ++r) rep.coeffs[side[p][r]] = kernel(r, c);
        reps.push_back(rep);
      } else {
        cols.pop_back();
      }
    }
    if (reps.size() != dim) throw std::logic_error("representative count mismatch");
    if (p == 0) {
      out.even_dim = dim;
      out.even_representatives = std::move(reps);
    } else {
      out.odd_dim = dim;
      out.odd_representatives = std::move(reps);
    }
  }
  return out;
}

}  // namespace tdk
