#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "synpoly/conllu.hpp"
#include "synpoly/error.hpp"
#include "synpoly/relations.hpp"

namespace synpoly {

/// Rooted tree whose nodes carry relation indices. Immutable once built.
///
/// Children are kept in token-id order so traversals are reproducible, but
/// nothing computed from a tree may depend on that order.
class DepTree {
 public:
  using NodeId = std::size_t;

  struct Node {
    RelationIndex label;
    std::vector<NodeId> children;
  };

  /// Builds a tree from a parent array; exactly one entry must be empty (the root).
  static DepTree from_parents(std::span<const int> labels,
                              std::span<const std::optional<NodeId>> parents) {
    if (labels.size() != parents.size() || labels.empty()) {
      throw Error(ErrorKind::NonTreeStructure, "labels and parents must be non-empty and aligned");
    }
    DepTree tree;
    tree.nodes_.reserve(labels.size());
    for (int label : labels) tree.nodes_.push_back(Node{RelationIndex(label), {}});

    std::optional<NodeId> root;
    for (NodeId i = 0; i < parents.size(); ++i) {
      if (!parents[i]) {
        if (root) throw Error(ErrorKind::NonTreeStructure, "more than one root");
        root = i;
        continue;
      }
      if (*parents[i] >= parents.size() || *parents[i] == i) {
        throw Error(ErrorKind::NonTreeStructure, "bad parent for node " + std::to_string(i));
      }
      tree.nodes_[*parents[i]].children.push_back(i);
    }
    if (!root) throw Error(ErrorKind::NonTreeStructure, "no root");
    tree.root_ = *root;
    if (tree.post_order().size() != tree.nodes_.size()) {
      throw Error(ErrorKind::NonTreeStructure, "parent array contains a cycle");
    }
    return tree;
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  NodeId root() const noexcept { return root_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  /// Nodes reachable from the root, every child listed before its parent.
  std::vector<NodeId> post_order() const {
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
    std::vector<bool> seen(nodes_.size(), false);
    seen[root_] = true;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& children = nodes_[id].children;
      if (next < children.size()) {
        NodeId child = children[next++];
        if (seen[child]) break;  // cycle; caller detects the short order
        seen[child] = true;
        stack.emplace_back(child, 0);
      } else {
        order.push_back(id);
        stack.pop_back();
      }
    }
    return order;
  }

  /// Same tree with the children of node `id` replaced by `children` (a permutation).
  DepTree with_children(NodeId id, std::vector<NodeId> children) const {
    DepTree copy = *this;
    auto sorted_old = copy.nodes_.at(id).children;
    auto sorted_new = children;
    std::sort(sorted_old.begin(), sorted_old.end());
    std::sort(sorted_new.begin(), sorted_new.end());
    if (sorted_old != sorted_new) {
      throw Error(ErrorKind::NonTreeStructure, "children replacement is not a permutation");
    }
    copy.nodes_[id].children = std::move(children);
    return copy;
  }

 private:
  DepTree() = default;

  std::vector<Node> nodes_;
  NodeId root_ = 0;
};

/// One node per word token, labeled by its relation with the subtype dropped.
/// The root node is always labeled `root` (35) whatever its raw relation.
inline DepTree from_sentence(const SentenceRecord& rec) {
  validate_tree(rec);
  std::unordered_map<int, DepTree::NodeId> position;
  for (std::size_t i = 0; i < rec.tokens.size(); ++i) position.emplace(rec.tokens[i].id, i);

  // Token-id order fixes the child order.
  std::vector<std::size_t> by_id(rec.tokens.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
  std::stable_sort(by_id.begin(), by_id.end(),
                   [&](std::size_t a, std::size_t b) { return rec.tokens[a].id < rec.tokens[b].id; });

  std::vector<DepTree::NodeId> rank(by_id.size());
  for (std::size_t k = 0; k < by_id.size(); ++k) rank[by_id[k]] = k;

  std::vector<int> labels(rec.tokens.size());
  std::vector<std::optional<DepTree::NodeId>> parents(rec.tokens.size());
  for (std::size_t k = 0; k < by_id.size(); ++k) {
    const auto& tok = rec.tokens[by_id[k]];
    if (tok.head == 0) {
      labels[k] = kRootRelation;
    } else {
      labels[k] = relation_to_index(strip_subtype(tok.deprel)).value();
      parents[k] = rank[position.at(tok.head)];
    }
  }
  return DepTree::from_parents(labels, parents);
}

/// `(label child...)` with child encodings sorted; equal exactly for
/// isomorphic labeled rooted trees.
inline std::string canonical_encoding(const DepTree& tree) {
  std::vector<std::string> enc(tree.size());
  for (auto id : tree.post_order()) {
    const auto& node = tree.node(id);
    std::vector<std::string> parts;
    parts.reserve(node.children.size());
    for (auto child : node.children) parts.push_back(std::move(enc[child]));
    std::sort(parts.begin(), parts.end());
    std::string s = "(" + std::to_string(node.label.value());
    for (const auto& p : parts) s += p;
    s += ')';
    enc[id] = std::move(s);
  }
  return enc[tree.root()];
}

}  // namespace synpoly
