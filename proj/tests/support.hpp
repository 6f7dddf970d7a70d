#pragma once

// Test-only generators and oracles. The oracles deliberately share no code
// with the library's polynomial or distance paths.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "synpoly/synpoly.hpp"

namespace synpoly::testing {

using Parents = std::vector<std::optional<std::size_t>>;

inline DepTree make_tree(const std::vector<int>& labels, const Parents& parents) {
  return DepTree::from_parents(labels, parents);
}

/// Random rooted tree with n in [1, max_nodes], labels in [1, max_label],
/// node ids shuffled so parent indices carry no structure. The root gets
/// `root_label` when given.
inline DepTree random_tree(std::mt19937_64& rng, std::size_t max_nodes, int max_label = kRelationCount,
                           std::optional<int> root_label = std::nullopt) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_nodes);
  std::uniform_int_distribution<int> label_dist(1, max_label);
  const auto n = size_dist(rng);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<int> labels(n);
  Parents parents(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[perm[i]] = label_dist(rng);
    if (i == 0 && root_label) labels[perm[i]] = *root_label;
    if (i > 0) parents[perm[i]] = perm[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
  }
  return make_tree(labels, parents);
}

/// Calls fn(tree) for every parent array with parent[i] < i over n nodes
/// and every labeling from {1..alphabet}. Covers every rooted tree shape.
template <typename Fn>
void for_each_increasing_tree(std::size_t n, int alphabet, Fn&& fn) {
  if (n == 0) return;
  std::vector<std::size_t> parent(n, 0);
  std::vector<int> labels(n, 1);
  while (true) {
    Parents parents{std::nullopt};
    for (std::size_t i = 1; i < n; ++i) parents.emplace_back(parent[i]);
    std::fill(labels.begin(), labels.end(), 1);
    while (true) {
      fn(make_tree(labels, parents));
      std::size_t k = 0;
      while (k < n && labels[k] == alphabet) labels[k++] = 1;
      if (k == n) break;
      ++labels[k];
    }
    std::size_t i = 1;
    while (i < n && parent[i] == i - 1) parent[i++] = 0;
    if (i >= n) break;
    ++parent[i];
  }
}

/// Canonical forms of all labeled rooted trees with exactly n nodes, built
/// as root label plus a sorted multiset of smaller canonical subtrees.
inline std::vector<std::string> canonical_forms(std::size_t n, int alphabet) {
  static std::map<std::pair<std::size_t, int>, std::vector<std::string>> memo;
  auto key = std::make_pair(n, alphabet);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  // forests of total size m as sorted (non-decreasing) sequences of forms
  std::vector<std::string> out;
  std::vector<std::vector<std::string>> by_size(n);
  for (std::size_t s = 1; s < n; ++s) by_size[s] = canonical_forms(s, alphabet);

  std::vector<std::string> forests;
  std::function<void(std::size_t, std::string, std::string)> grow = [&](std::size_t remaining,
                                                                         std::string min_form,
                                                                         std::string acc) {
    if (remaining == 0) {
      forests.push_back(acc);
      return;
    }
    for (std::size_t s = 1; s <= remaining; ++s) {
      for (const auto& f : by_size[s]) {
        if (f < min_form) continue;
        grow(remaining - s, f, acc + f);
      }
    }
  };
  grow(n - 1, "", "");
  for (int label = 1; label <= alphabet; ++label) {
    for (const auto& forest : forests) out.push_back("(" + std::to_string(label) + forest + ")");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  memo[key] = out;
  return out;
}

// ---------------------------------------------------------------------------
// Naive polynomial oracle: dense exponent arrays, 64-bit coefficients,
// plain recursion straight from the definition.

using DenseMonomial = std::array<int, 74>;
using NaivePoly = std::map<DenseMonomial, long long>;

inline NaivePoly naive_labeled(const DepTree& t, DepTree::NodeId id) {
  const auto& node = t.node(id);
  const int label = node.label.value();
  if (node.children.empty()) {
    DenseMonomial m{};
    m[label - 1] = 1;
    return {{m, 1}};
  }
  NaivePoly product;
  product[DenseMonomial{}] = 1;
  for (auto child : node.children) {
    const NaivePoly sub = naive_labeled(t, child);
    NaivePoly next;
    for (const auto& [a, ca] : product) {
      for (const auto& [b, cb] : sub) {
        DenseMonomial m{};
        for (int k = 0; k < 74; ++k) m[k] = a[k] + b[k];
        next[m] += ca * cb;
      }
    }
    product = std::move(next);
  }
  DenseMonomial y{};
  y[37 + label - 1] = 1;
  product[y] += 1;
  return product;
}

inline NaivePoly naive_labeled(const DepTree& t) { return naive_labeled(t, t.root()); }

inline bool same_polynomial(const NaivePoly& naive, const Polynomial& p) {
  if (naive.size() != p.size()) return false;
  for (const auto& term : p.terms()) {
    DenseMonomial m{};
    for (const auto& [s, e] : term.monomial.entries()) m[s] = static_cast<int>(e);
    auto it = naive.find(m);
    if (it == naive.end() || Coefficient(it->second) != term.coefficient) return false;
  }
  return true;
}

/// Brute-force distance over naive term lists: (numerator, denominator) reduced.
inline std::pair<long long, long long> naive_distance(const NaivePoly& p, const NaivePoly& q) {
  auto l1 = [](const DenseMonomial& a, long long ca, const DenseMonomial& b, long long cb) {
    long long d = std::llabs(ca - cb);
    for (int k = 0; k < 74; ++k) d += std::llabs(static_cast<long long>(a[k]) - b[k]);
    return d;
  };
  long long total = 0;
  for (const auto& [a, ca] : p) {
    long long best = -1;
    for (const auto& [b, cb] : q) {
      auto d = l1(a, ca, b, cb);
      if (best < 0 || d < best) best = d;
    }
    total += best;
  }
  for (const auto& [b, cb] : q) {
    long long best = -1;
    for (const auto& [a, ca] : p) {
      auto d = l1(a, ca, b, cb);
      if (best < 0 || d < best) best = d;
    }
    total += best;
  }
  long long den = static_cast<long long>(p.size() + q.size());
  long long g = std::gcd(total, den);
  return {total / g, den / g};
}

/// Grid from trees given row-major by (sentence, language).
inline TermGrid grid_of(std::vector<std::string> sent_ids, std::vector<std::string> languages,
                        const std::vector<DepTree>& trees) {
  std::vector<TermVectorSet> cells;
  for (const auto& t : trees) cells.push_back(TermVectorSet::of(compute_labeled(t)));
  return TermGrid(std::move(sent_ids), std::move(languages), std::move(cells));
}

inline Rational naive_value(const NaivePoly& p, const NaivePoly& q) {
  auto [num, den] = naive_distance(p, q);
  return Rational(num, den);
}

/// CoNLL-U text for one sentence given (head, deprel) per token.
inline std::string conllu_sentence(const std::string& sent_id,
                                   const std::vector<std::pair<int, std::string>>& tokens) {
  std::string out = "# sent_id = " + sent_id + "\n";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += std::to_string(i + 1) + "\tw" + std::to_string(i + 1) + "\t_\t_\t_\t_\t" +
           std::to_string(tokens[i].first) + '\t' + tokens[i].second + "\t_\t_\n";
  }
  return out + "\n";
}

/// Random well-formed sentence as (head, deprel) per token; deprels may carry subtypes.
inline std::vector<std::pair<int, std::string>> random_sentence(std::mt19937_64& rng, std::size_t max_tokens) {
  const auto n = std::uniform_int_distribution<std::size_t>(1, max_tokens)(rng);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<int, std::string>> tokens(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& tok = tokens[perm[i]];
    if (i == 0) {
      tok = {0, "root"};
      continue;
    }
    const auto parent = perm[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
    std::string rel(kRelationNames[rng() % kRelationCount]);
    if (rel == "root") rel = "dep";
    if (rng() % 5 == 0) rel += ":sub";
    tok = {static_cast<int>(parent + 1), rel};
  }
  return tokens;
}

/// Writes `<lang>.conllu` for each language with sentences n01001, n01002, ...
/// (all in the ENG split by prefix). Returns the texts by language.
inline std::map<std::string, std::string> write_synthetic_dataset(const std::filesystem::path& dir,
                                                                  const std::vector<std::string>& languages,
                                                                  std::size_t sentences, std::uint64_t seed,
                                                                  std::size_t max_tokens = 12) {
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(seed);
  std::map<std::string, std::string> texts;
  for (const auto& lang : languages) {
    std::string text = "# generated treebank\n";
    for (std::size_t s = 0; s < sentences; ++s) {
      char id[16];
      std::snprintf(id, sizeof id, "n01%03zu", s + 1);
      text += conllu_sentence(id, random_sentence(rng, max_tokens));
    }
    std::ofstream(dir / (lang + ".conllu"), std::ios::binary) << text;
    texts[lang] = text;
  }
  return texts;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("synpoly_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace synpoly::testing
