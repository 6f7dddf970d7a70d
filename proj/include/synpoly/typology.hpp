#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synpoly/error.hpp"
#include "synpoly/matrices.hpp"
#include "synpoly/rational.hpp"

namespace synpoly {

// ---------------------------------------------------------------------------
// UPGMA

template <typename T>
struct Dendrogram {
  struct Node {
    std::string label;  // leaves only
    std::optional<std::size_t> left;
    std::optional<std::size_t> right;
    T height{};
    std::size_t size = 1;

    bool is_leaf() const noexcept { return !left; }
  };

  /// Leaves first in input order, then one node per merge; the last node is the root.
  std::vector<Node> nodes;

  std::size_t root() const noexcept { return nodes.size() - 1; }
  std::size_t leaf_count() const noexcept { return (nodes.size() + 1) / 2; }

  /// Labels of the leaves below `id`, sorted.
  std::vector<std::string> leaves_under(std::size_t id) const {
    std::vector<std::string> out;
    std::vector<std::size_t> stack{id};
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (nodes[n].is_leaf()) {
        out.push_back(nodes[n].label);
      } else {
        stack.push_back(*nodes[n].left);
        stack.push_back(*nodes[n].right);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// True when some node's leaf set is exactly `members`.
  bool has_clade(std::vector<std::string> members) const {
    std::sort(members.begin(), members.end());
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      if (leaves_under(id) == members) return true;
    }
    return false;
  }
};

/// Average-linkage agglomerative clustering. Each merge joins the closest
/// pair of current clusters at height distance / 2; ties go to the smallest
/// (row, column) pair, where a merged cluster takes the row of its first
/// member and the other row is removed.
template <typename T>
Dendrogram<T> upgma(const std::vector<std::string>& labels, const std::vector<std::vector<T>>& dist) {
  const auto n = labels.size();
  if (n < 2) throw Error(ErrorKind::DegenerateMatrix, "UPGMA needs at least two labels");
  if (dist.size() != n) throw Error(ErrorKind::DegenerateMatrix, "matrix size does not match labels");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n || dist[i][i] != T(0)) {
      throw Error(ErrorKind::DegenerateMatrix, "matrix must be square with a zero diagonal");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (dist[i][j] != dist[j][i]) throw Error(ErrorKind::DegenerateMatrix, "matrix must be symmetric");
    }
  }

  Dendrogram<T> tree;
  for (const auto& label : labels) tree.nodes.push_back({label, std::nullopt, std::nullopt, T(0), 1});

  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  auto d = dist;

  while (active.size() > 1) {
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        if (d[a][b] < d[best_a][best_b]) {
          best_a = a;
          best_b = b;
        }
      }
    }

    const auto& left = tree.nodes[active[best_a]];
    const auto& right = tree.nodes[active[best_b]];
    const std::size_t size_a = left.size;
    const std::size_t size_b = right.size;
    typename Dendrogram<T>::Node merged{"", active[best_a], active[best_b], d[best_a][best_b] / T(2),
                                        size_a + size_b};
    tree.nodes.push_back(std::move(merged));

    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == best_a || k == best_b) continue;
      T v = (T(size_a) * d[best_a][k] + T(size_b) * d[best_b][k]) / T(size_a + size_b);
      d[best_a][k] = v;
      d[k][best_a] = v;
    }
    active[best_a] = tree.nodes.size() - 1;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(best_b));
    for (auto& row : d) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_b));
  }
  return tree;
}

/// Exact UPGMA over a rational distance matrix.
inline Dendrogram<Rational> upgma(const DistanceMatrix& m) {
  std::vector<std::vector<Rational>> d(m.size(), std::vector<Rational>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) d[i][j] = m.at(i, j);
  }
  return upgma(m.labels(), d);
}

// ---------------------------------------------------------------------------
// Newick

namespace detail {

inline double as_double(double v) { return v; }
inline double as_double(const Rational& v) { return to_double(v); }

/// Shortest decimal that reads back as the same double.
inline std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Branch length is parent height minus child height; at every internal node
/// the child holding the lexicographically smallest leaf is written first.
template <typename T>
std::string to_newick(const Dendrogram<T>& tree) {
  std::vector<std::string> min_leaf(tree.nodes.size());
  std::vector<std::string> text(tree.nodes.size());
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {  // children precede parents
    const auto& node = tree.nodes[id];
    if (node.is_leaf()) {
      min_leaf[id] = node.label;
      text[id] = node.label;
      continue;
    }
    auto a = *node.left;
    auto b = *node.right;
    if (min_leaf[b] < min_leaf[a]) std::swap(a, b);
    min_leaf[id] = min_leaf[a];
    auto branch = [&](std::size_t child) {
      return text[child] + ":" + detail::shortest(detail::as_double(T(node.height - tree.nodes[child].height)));
    };
    text[id] = "(" + branch(a) + "," + branch(b) + ")";
  }
  return text[tree.root()] + ";";
}

struct NewickNode {
  std::string label;
  double length = 0.0;
  std::vector<std::size_t> children;
};

/// Reads labels, branch lengths and nesting; the root is node 0.
inline std::vector<NewickNode> parse_newick(std::string_view text) {
  std::vector<NewickNode> nodes;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::MalformedLine, "newick at offset " + std::to_string(pos) + ": " + why);
  };
  auto read_label = [&] {
    auto start = pos;
    while (pos < text.size() && std::string_view("(),:;").find(text[pos]) == std::string_view::npos) ++pos;
    return std::string(text.substr(start, pos - start));
  };
  auto read_length = [&](NewickNode& node) {
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      auto start = pos;
      while (pos < text.size() && std::string_view("(),;").find(text[pos]) == std::string_view::npos) ++pos;
      auto s = text.substr(start, pos - start);
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), node.length);
      if (ec != std::errc{} || ptr != s.data() + s.size()) fail("bad branch length");
    }
  };

  // Iterative descent; the stack holds indices of open internal nodes.
  std::vector<std::size_t> open;
  nodes.push_back({});
  std::size_t current = 0;
  bool at_node_start = true;
  while (pos < text.size() && text[pos] != ';') {
    char c = text[pos];
    if (at_node_start && c == '(') {
      ++pos;
      open.push_back(current);
      nodes.push_back({});
      current = nodes.size() - 1;
      nodes[open.back()].children.push_back(current);
      continue;
    }
    if (at_node_start) {
      nodes[current].label = read_label();
      read_length(nodes[current]);
      at_node_start = false;
      continue;
    }
    if (c == ',') {
      if (open.empty()) fail("',' outside parentheses");
      ++pos;
      nodes.push_back({});
      current = nodes.size() - 1;
      nodes[open.back()].children.push_back(current);
      at_node_start = true;
      continue;
    }
    if (c == ')') {
      if (open.empty()) fail("unbalanced ')'");
      ++pos;
      current = open.back();
      open.pop_back();
      nodes[current].label = read_label();
      read_length(nodes[current]);
      continue;
    }
    fail(std::string("unexpected '") + c + "'");
  }
  if (pos >= text.size() || !open.empty()) fail("missing ';' or unbalanced parentheses");
  return nodes;
}

/// Height of each node above its leftmost descendant leaf.
inline std::vector<double> newick_heights(const std::vector<NewickNode>& nodes) {
  std::vector<double> height(nodes.size(), 0.0);
  for (std::size_t k = nodes.size(); k-- > 0;) {  // children have larger indices
    if (!nodes[k].children.empty()) {
      auto c = nodes[k].children.front();
      height[k] = height[c] + nodes[c].length;
    }
  }
  return height;
}

// ---------------------------------------------------------------------------
// Symmetric eigenproblem and classical MDS

struct EigenDecomposition {
  std::vector<double> values;                 // descending
  std::vector<std::vector<double>> vectors;   // vectors[k] pairs with values[k]
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls
/// below `threshold` times the matrix norm, or `max_sweeps` is reached.
inline EigenDecomposition jacobi_eigen(std::vector<std::vector<double>> a, double threshold = 1e-12,
                                       int max_sweeps = 100) {
  const auto n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  double norm = 0.0;
  for (const auto& row : a) {
    for (double x : row) norm += x * x;
  }
  norm = std::sqrt(norm);

  EigenDecomposition out;
  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a[p][q] * a[p][q];
    }
    if (std::sqrt(off) <= threshold * std::max(norm, 1.0)) {
      out.converged = true;
      out.sweeps = sweep;
      break;
    }
    if (sweep == max_sweeps) {
      out.sweeps = sweep;
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  for (auto k : order) {
    out.values.push_back(a[k][k]);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v[i][k];
    // first non-negligible entry non-negative
    for (double x : col) {
      if (std::abs(x) > 1e-12) {
        if (x < 0) {
          for (auto& y : col) y = -y;
        }
        break;
      }
    }
    out.vectors.push_back(std::move(col));
  }
  return out;
}

struct Embedding {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coordinates;  // coordinates[i][k]
  std::vector<double> eigenvalues;               // all, descending
  std::vector<std::string> warnings;

  /// Share of eigenvalue k in the sum of positive eigenvalues.
  double eigenvalue_share(std::size_t k) const {
    double positive = 0.0;
    for (double v : eigenvalues) positive += std::max(v, 0.0);
    return positive > 0 ? std::max(eigenvalues.at(k), 0.0) / positive : 0.0;
  }
};

/// Torgerson scaling: eigenpairs of B = -1/2 J D^2 J with J = I - 11'/n;
/// coordinates are eigenvectors scaled by sqrt(max(eigenvalue, 0)).
inline Embedding classical_mds(const std::vector<std::string>& labels,
                               const std::vector<std::vector<double>>& dist, std::size_t dims = 2) {
  const auto n = labels.size();
  if (n < 2 || dist.size() != n) throw Error(ErrorKind::DegenerateMatrix, "MDS needs a square matrix of size >= 2");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n || dist[i][i] != 0.0) {
      throw Error(ErrorKind::DegenerateMatrix, "matrix must be square with a zero diagonal");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(dist[i][j] - dist[j][i]) > 1e-12 * std::max(1.0, std::abs(dist[i][j]))) {
        throw Error(ErrorKind::DegenerateMatrix, "matrix must be symmetric");
      }
    }
  }

  std::vector<std::vector<double>> b(n, std::vector<double>(n));
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sq = dist[i][j] * dist[i][j];
      row_mean[i] += sq / static_cast<double>(n);
      grand += sq / static_cast<double>(n * n);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b[i][j] = -0.5 * (dist[i][j] * dist[i][j] - row_mean[i] - row_mean[j] + grand);
    }
  }

  auto eig = jacobi_eigen(b);
  Embedding out;
  out.labels = labels;
  out.eigenvalues = eig.values;
  if (!eig.converged) out.warnings.push_back("eigensolver stopped before convergence");

  double scale = 0.0;
  for (double v : eig.values) scale = std::max(scale, std::abs(v));
  std::size_t negative = 0;
  for (double v : eig.values) negative += v < -1e-9 * std::max(scale, 1.0);
  if (negative > 0) {
    out.warnings.push_back(std::to_string(negative) +
                           " negative eigenvalue(s): distances are not Euclidean; selected negatives clamped to 0");
  }

  dims = std::min(dims, n);
  out.coordinates.assign(n, std::vector<double>(dims, 0.0));
  for (std::size_t k = 0; k < dims; ++k) {
    const double s = std::sqrt(std::max(eig.values[k], 0.0));
    for (std::size_t i = 0; i < n; ++i) out.coordinates[i][k] = eig.vectors[k][i] * s;
  }
  return out;
}

inline Embedding classical_mds(const DistanceMatrix& m, std::size_t dims = 2) {
  return classical_mds(m.labels(), m.to_doubles(), dims);
}

}  // namespace synpoly
