#pragma once

#include <tdk/simplicial.hpp>

namespace tdk {

/// Full-rank lattice with a chosen basis; the pairing with the dual lattice
/// is the identity matrix in the distinguished bases.
struct Lattice {
  std::size_t rank = 1;
  IntMatrix pairing = IntMatrix::identity(1);

  static Lattice standard(std::size_t r) { return Lattice{r, IntMatrix::identity(r)}; }
};

/// Simplicial cochain of one degree with coefficients in S^rank,
/// S = Int (lattice values) or Rat (vector values).  Values indexed by the
/// complex's p-simplex order.  A degree beyond the complex dimension is a
/// legal cochain with no simplices.
template <typename S>
struct Cochain {
  const SimplicialComplex* complex = nullptr;
  int degree = 0;
  std::size_t rank = 1;
  std::vector<std::vector<S>> values;  // count(degree) entries of size rank

  static Cochain zero(const SimplicialComplex& x, int degree, std::size_t rank = 1) {
    Cochain c{&x, degree, rank, {}};
    c.values.assign(x.count(degree), std::vector<S>(rank, S(0)));
    return c;
  }
  /// Unit for the cup product: the constant scalar 1 in degree 0.
  static Cochain unit(const SimplicialComplex& x) {
    Cochain c = zero(x, 0, 1);
    for (auto& v : c.values) v[0] = S(1);
    return c;
  }

  bool is_zero() const {
    for (const auto& v : values)
      for (const S& s : v)
        if (s != S(0)) return false;
    return true;
  }

  Cochain operator+(const Cochain& o) const {
    check_same_shape(o);
    Cochain r = *this;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < rank; ++j) r.values[i][j] += o.values[i][j];
    return r;
  }
  Cochain operator-(const Cochain& o) const {
    check_same_shape(o);
    Cochain r = *this;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < rank; ++j) r.values[i][j] -= o.values[i][j];
    return r;
  }
  Cochain operator-() const {
    Cochain r = *this;
    for (auto& v : r.values)
      for (S& s : v) s = -s;
    return r;
  }
  Cochain operator*(const S& k) const {
    Cochain r = *this;
    for (auto& v : r.values)
      for (S& s : v) s *= k;
    return r;
  }
  bool operator==(const Cochain& o) const {
    return complex == o.complex && degree == o.degree && rank == o.rank && values == o.values;
  }

  /// One coefficient slot as a plain vector over the p-simplices.
  std::vector<S> slot(std::size_t j) const {
    std::vector<S> v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i][j];
    return v;
  }
  void set_slot(std::size_t j, const std::vector<S>& v) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i][j] = v[i];
  }

  void check_same_shape(const Cochain& o) const {
    if (complex != o.complex || degree != o.degree || rank != o.rank)
      throw std::invalid_argument("cochain shape mismatch");
  }
};

using IntCochain = Cochain<Int>;
using RatCochain = Cochain<Rat>;

inline RatCochain to_rational(const IntCochain& x) {
  RatCochain r{x.complex, x.degree, x.rank, {}};
  r.values.reserve(x.values.size());
  for (const auto& v : x.values) {
    std::vector<Rat> w(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) w[j] = Rat(v[j]);
    r.values.push_back(std::move(w));
  }
  return r;
}

/// Alternating-face-sum coboundary, computed slot by slot through the
/// complex's matrix so cochain and matrix conventions cannot drift apart.
template <typename S>
Cochain<S> coboundary(const Cochain<S>& x) {
  const SimplicialComplex& X = *x.complex;
  Cochain<S> r = Cochain<S>::zero(X, x.degree + 1, x.rank);
  IntMatrix d = X.coboundary_matrix(x.degree);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t k = 0; k < d.cols(); ++k) {
      if (d(i, k) == 0) continue;
      for (std::size_t j = 0; j < x.rank; ++j) r.values[i][j] += S(d(i, k)) * x.values[k][j];
    }
  return r;
}

/// Alexander-Whitney cup product: front p-face paired with back q-face.
/// The pairing maps (coeff of x, coeff of y) to the output coefficient.
template <typename S, typename Pairing>
Cochain<S> cup_with(const Cochain<S>& x, const Cochain<S>& y, std::size_t out_rank, Pairing pair) {
  if (x.complex != y.complex) throw std::invalid_argument("cup: different complexes");
  const SimplicialComplex& X = *x.complex;
  const int p = x.degree, q = y.degree;
  Cochain<S> r = Cochain<S>::zero(X, p + q, out_rank);
  const auto& cells = X.simplices(p + q);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Simplex& s = cells[i];
    Simplex front(s.begin(), s.begin() + p + 1);
    Simplex back(s.begin() + p, s.end());
    int fi = X.index_of(p, front);
    int bi = X.index_of(q, back);
    if (fi < 0 || bi < 0) continue;  // faces of a simplex are always present; defensive
    r.values[i] = pair(x.values[static_cast<std::size_t>(fi)], y.values[static_cast<std::size_t>(bi)]);
  }
  return r;
}

/// Scalar cup: both factors rank 1.
template <typename S>
Cochain<S> cup(const Cochain<S>& x, const Cochain<S>& y) {
  if (x.rank != 1 || y.rank != 1) throw std::invalid_argument("cup: scalar cochains required");
  return cup_with(x, y, 1, [](const std::vector<S>& a, const std::vector<S>& b) {
    return std::vector<S>{a[0] * b[0]};
  });
}

/// Cup followed by contraction with the lattice/dual-lattice pairing:
/// coefficients a in Lambda, b in the dual, output a^T * pairing * b.
template <typename S>
Cochain<S> dot_pairing(const Cochain<S>& x, const Cochain<S>& y, const Lattice& lat) {
  if (x.rank != lat.rank || y.rank != lat.rank)
    throw std::invalid_argument("dot_pairing: rank mismatch");
  return cup_with(x, y, 1, [&lat](const std::vector<S>& a, const std::vector<S>& b) {
    S acc(0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (lat.pairing(i, j) == 0) continue;
        acc += a[i] * S(lat.pairing(i, j)) * b[j];
      }
    return std::vector<S>{acc};
  });
}

/// Cup where one factor is scalar and the other vector-valued.
template <typename S>
Cochain<S> cup_scale(const Cochain<S>& x, const Cochain<S>& y) {
  if (x.rank == 1) {
    return cup_with(x, y, y.rank, [](const std::vector<S>& a, const std::vector<S>& b) {
      std::vector<S> v(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) v[i] = a[0] * b[i];
      return v;
    });
  }
  if (y.rank == 1) {
    return cup_with(x, y, x.rank, [](const std::vector<S>& a, const std::vector<S>& b) {
      std::vector<S> v(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i] * b[0];
      return v;
    });
  }
  throw std::invalid_argument("cup_scale: one factor must be scalar");
}

/// Kronecker evaluation of a rank-1 cochain against an integer chain.
template <typename S>
S evaluate(const Cochain<S>& x, const std::vector<Int>& chain) {
  if (x.rank != 1) throw std::invalid_argument("evaluate: scalar cochain required");
  if (chain.size() != x.values.size()) throw std::invalid_argument("evaluate: chain size mismatch");
  S acc(0);
  for (std::size_t i = 0; i < chain.size(); ++i) acc += S(chain[i]) * x.values[i][0];
  return acc;
}

/// Equality of V/Lambda cochains represented by V-valued lifts: all entries
/// must differ by lattice elements (integers, in the distinguished basis).
inline bool equal_mod_lattice(const RatCochain& x, const RatCochain& y) {
  x.check_same_shape(y);
  for (std::size_t i = 0; i < x.values.size(); ++i)
    for (std::size_t j = 0; j < x.rank; ++j)
      if (!is_integer(x.values[i][j] - y.values[i][j])) return false;
  return true;
}

}  // namespace tdk
