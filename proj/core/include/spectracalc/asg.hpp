#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spectracalc/jordan.hpp"

namespace spectracalc {

enum class NodeKind { projector, nilpotent, zero };
enum class EdgeLabel { self_idempotent, pn_interaction, nilpotent_decay };

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(EdgeLabel label) noexcept;

struct AsgNode {
  std::string id;
  NodeKind kind = NodeKind::zero;
  std::size_t group = 0;       // k, 1-based in canonical signature order; 0 for the zero node
  std::size_t block = 0;       // i, 1-based within the group
  std::size_t block_size = 0;  // m_{k,i}
  std::size_t power = 0;       // 1 for N itself, q >= 2 for the implicit N^q nodes, 0 otherwise
  std::string annotation;      // eigenvalue text; not part of the structure

  bool is_implicit() const { return kind == NodeKind::nilpotent && power >= 2; }
};

struct AsgEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeLabel label = EdgeLabel::self_idempotent;
};

/// Analogous Structure Graph: projector, nilpotent and zero nodes with edges for
/// P^2 = P, the P/N interaction of a block, and nilpotent decay towards zero.
/// Nilpotents of degree m > 2 decay through implicit N^2 .. N^(m-1) nodes.
struct AsgGraph {
  std::vector<AsgNode> nodes;  // sorted by (kind, k, i, power)
  std::vector<AsgEdge> edges;  // sorted by (from, to, label)

  /// Projector, nilpotent (power 1) and zero nodes: 2 * blocks + 1.
  std::size_t explicit_node_count() const;
  std::size_t self_loop_count() const;
  std::size_t zero_index() const;
};

/// Groups are numbered in canonical signature order (partition, then eigenvalue),
/// blocks by nonincreasing size, so analogous families give identical structure.
template <class T>
AsgGraph build_graph(const SpectralFamily<T>& family, const Tolerance& tol = {});

/// Deterministic Graphviz DOT. Eigenvalues appear only in per-cluster tooltip lines.
std::string export_dot(const AsgGraph& graph);

}  // namespace spectracalc
