#pragma once

#include <tdk/matrix.hpp>

#include <map>
#include <set>

namespace tdk {

/// Strictly increasing vertex ids.
using Simplex = std::vector<int>;

/// Finite simplicial complex on vertices 0..n-1, closed under faces.
/// Simplices are stored per dimension in lexicographic order, which fixes
/// the basis of every (co)chain group and makes all matrices deterministic.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  static SimplicialComplex from_maximal(int num_vertices, const std::vector<Simplex>& maximal) {
    SimplicialComplex x;
    x.num_vertices_ = num_vertices;
    std::vector<std::set<Simplex>> tiers;
    for (const Simplex& s : maximal) {
      if (s.empty()) throw std::invalid_argument("empty simplex");
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= num_vertices) throw std::invalid_argument("vertex out of range");
        if (i > 0 && s[i] <= s[i - 1]) throw std::invalid_argument("vertices not strictly increasing");
      }
      // close under faces: all nonempty subsets
      const std::size_t m = s.size();
      for (std::size_t mask = 1; mask < (std::size_t(1) << m); ++mask) {
        Simplex f;
        for (std::size_t i = 0; i < m; ++i)
          if (mask & (std::size_t(1) << i)) f.push_back(s[i]);
        std::size_t d = f.size() - 1;
        if (tiers.size() <= d) tiers.resize(d + 1);
        tiers[d].insert(std::move(f));
      }
    }
    for (const auto& tier : tiers) {
      x.faces_.emplace_back(tier.begin(), tier.end());
      x.index_.emplace_back();
      for (std::size_t i = 0; i < x.faces_.back().size(); ++i)
        x.index_.back()[x.faces_.back()[i]] = static_cast<int>(i);
    }
    return x;
  }

  int dimension() const { return static_cast<int>(faces_.size()) - 1; }
  int num_vertices() const { return num_vertices_; }

  std::size_t count(int p) const {
    if (p < 0 || p > dimension()) return 0;
    return faces_[p].size();
  }
  const std::vector<Simplex>& simplices(int p) const {
    static const std::vector<Simplex> empty;
    if (p < 0 || p > dimension()) return empty;
    return faces_[p];
  }
  int index_of(int p, const Simplex& s) const {
    if (p < 0 || p > dimension()) return -1;
    auto it = index_[p].find(s);
    return it == index_[p].end() ? -1 : it->second;
  }

  /// Boundary C_p -> C_{p-1}, alternating face signs.
  IntMatrix boundary_matrix(int p) const {
    IntMatrix b(count(p - 1), count(p));
    if (p < 1 || p > dimension()) return b;
    for (std::size_t j = 0; j < faces_[p].size(); ++j) {
      const Simplex& s = faces_[p][j];
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        int r = index_of(p - 1, f);
        b(static_cast<std::size_t>(r), j) += (i % 2 == 0) ? 1 : -1;
      }
    }
    return b;
  }

  /// Coboundary on cochain coordinates: C^p -> C^{p+1}.
  IntMatrix coboundary_matrix(int p) const { return boundary_matrix(p + 1).transpose(); }

  long euler_characteristic() const {
    long chi = 0;
    for (int p = 0; p <= dimension(); ++p)
      chi += (p % 2 == 0) ? static_cast<long>(count(p)) : -static_cast<long>(count(p));
    return chi;
  }

  bool operator==(const SimplicialComplex& o) const {
    return num_vertices_ == o.num_vertices_ && faces_ == o.faces_;
  }

 private:
  int num_vertices_ = 0;
  std::vector<std::vector<Simplex>> faces_;
  std::vector<std::map<Simplex, int>> index_;
};

inline SimplicialComplex point() { return SimplicialComplex::from_maximal(1, {{0}}); }

/// n-gon circle, n >= 3.
inline SimplicialComplex circle(int n) {
  if (n < 3) throw std::invalid_argument("circle: need n >= 3");
  std::vector<Simplex> edges;
  for (int i = 0; i < n; ++i) {
    int a = i, b = (i + 1) % n;
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return SimplicialComplex::from_maximal(n, edges);
}

/// 9-vertex torus: 3x3 grid, vertex (i,j) -> 3i+j, both wraps mod 3, each
/// grid square split along its diagonal.
inline SimplicialComplex torus9() {
  auto v = [](int i, int j) { return 3 * (i % 3) + (j % 3); };
  std::vector<Simplex> tris;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Simplex a = {v(i, j), v(i + 1, j), v(i + 1, j + 1)};
      Simplex b = {v(i, j), v(i, j + 1), v(i + 1, j + 1)};
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      tris.push_back(a);
      tris.push_back(b);
    }
  return SimplicialComplex::from_maximal(9, tris);
}

namespace detail {

inline void staircases(const Simplex& s, const Simplex& t, std::size_t i, std::size_t j,
                       std::vector<std::pair<int, int>>& path,
                       std::vector<std::vector<std::pair<int, int>>>& out) {
  path.emplace_back(s[i], t[j]);
  if (i + 1 == s.size() && j + 1 == t.size()) {
    out.push_back(path);
  } else {
    if (i + 1 < s.size()) staircases(s, t, i + 1, j, path, out);
    if (j + 1 < t.size()) staircases(s, t, i, j + 1, path, out);
  }
  path.pop_back();
}

}  // namespace detail

/// Simplicial product with the ordered-vertex (staircase) triangulation.
/// Vertex (a, b) gets id a*y.num_vertices() + b; the lexicographic vertex
/// order extends the componentwise partial order, so staircase paths are
/// strictly increasing chains.
inline SimplicialComplex product(const SimplicialComplex& x, const SimplicialComplex& y) {
  const int ny = y.num_vertices();
  std::vector<Simplex> maximal;
  for (int p = 0; p <= x.dimension(); ++p)
    for (const Simplex& s : x.simplices(p))
      for (int q = 0; q <= y.dimension(); ++q)
        for (const Simplex& t : y.simplices(q)) {
          std::vector<std::vector<std::pair<int, int>>> paths;
          std::vector<std::pair<int, int>> scratch;
          detail::staircases(s, t, 0, 0, scratch, paths);
          for (const auto& path : paths) {
            Simplex cell;
            for (auto [a, b] : path) cell.push_back(a * ny + b);
            maximal.push_back(cell);
          }
        }
  return SimplicialComplex::from_maximal(x.num_vertices() * ny, maximal);
}

}  // namespace tdk
