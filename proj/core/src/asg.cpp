#include "spectracalc/asg.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

namespace spectracalc {

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::projector: return "projector";
    case NodeKind::nilpotent: return "nilpotent";
    case NodeKind::zero: return "zero";
  }
  return "unknown";
}

std::string_view to_string(EdgeLabel label) noexcept {
  switch (label) {
    case EdgeLabel::self_idempotent: return "idempotent";
    case EdgeLabel::pn_interaction: return "PN";
    case EdgeLabel::nilpotent_decay: return "decay";
  }
  return "unknown";
}

std::size_t AsgGraph::explicit_node_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const AsgNode& n) { return !n.is_implicit(); }));
}

std::size_t AsgGraph::self_loop_count() const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const AsgEdge& e) { return e.from == e.to; }));
}

std::size_t AsgGraph::zero_index() const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == NodeKind::zero) return i;
  throw SpectralError(ErrorKind::invalid_family, "graph has no zero node");
}

namespace {

std::string eigen_text(const Complex& z) {
  std::ostringstream os;
  os << std::setprecision(6) << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string eigen_text(const GaussQ& z) { return z.to_string(); }

std::string node_id(const AsgNode& n) {
  std::ostringstream os;
  switch (n.kind) {
    case NodeKind::projector: os << "P_" << n.group << "_" << n.block; break;
    case NodeKind::nilpotent:
      os << "N_" << n.group << "_" << n.block;
      if (n.power >= 2) os << "_pow" << n.power;
      break;
    case NodeKind::zero: os << "zero"; break;
  }
  return os.str();
}

auto node_key(const AsgNode& n) { return std::make_tuple(static_cast<int>(n.kind), n.group, n.block, n.power); }

}  // namespace

template <class T>
AsgGraph build_graph(const SpectralFamily<T>& family, const Tolerance& tol) {
  if (family.items.empty()) throw SpectralError(ErrorKind::invalid_family, "empty family");
  auto report = verify_family(family, tol);
  if (!report.ok()) {
    throw SpectralError(ErrorKind::invalid_family,
                        std::string("family fails ") + std::string(to_string(report.violations.front().check)));
  }

  // group -> (eigenvalue, item indices)
  std::map<std::size_t, std::vector<std::size_t>> by_group;
  for (std::size_t a = 0; a < family.items.size(); ++a) by_group[family.items[a].group].push_back(a);
  struct Group {
    T eigenvalue;
    std::vector<std::size_t> items;  // sorted by nonincreasing block size
    std::vector<std::size_t> partition;
  };
  std::vector<Group> groups;
  for (auto& [k, idx] : by_group) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return family.items[a].block_size > family.items[b].block_size;
    });
    Group g{family.items[idx.front()].eigenvalue, idx, {}};
    for (auto a : idx) g.partition.push_back(family.items[a].block_size);
    groups.push_back(std::move(g));
  }
  std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    if (a.partition != b.partition) return a.partition < b.partition;
    return lex_less(a.eigenvalue, b.eigenvalue);
  });

  AsgGraph g;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const std::string text = eigen_text(groups[k].eigenvalue);
    for (std::size_t i = 0; i < groups[k].items.size(); ++i) {
      const std::size_t m = family.items[groups[k].items[i]].block_size;
      g.nodes.push_back({"", NodeKind::projector, k + 1, i + 1, m, 0, text});
      g.nodes.push_back({"", NodeKind::nilpotent, k + 1, i + 1, m, 1, text});
      for (std::size_t q = 2; q < m; ++q) g.nodes.push_back({"", NodeKind::nilpotent, k + 1, i + 1, m, q, text});
    }
  }
  g.nodes.push_back({"", NodeKind::zero, 0, 0, 0, 0, ""});
  std::sort(g.nodes.begin(), g.nodes.end(), [](const AsgNode& a, const AsgNode& b) { return node_key(a) < node_key(b); });
  std::map<std::tuple<int, std::size_t, std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    g.nodes[n].id = node_id(g.nodes[n]);
    index[node_key(g.nodes[n])] = n;
  }
  const std::size_t zero = g.zero_index();
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    const auto& node = g.nodes[n];
    if (node.kind == NodeKind::projector) {
      g.edges.push_back({n, n, EdgeLabel::self_idempotent});
      auto nil = index.at({static_cast<int>(NodeKind::nilpotent), node.group, node.block, 1});
      g.edges.push_back({n, nil, EdgeLabel::pn_interaction});
    } else if (node.kind == NodeKind::nilpotent) {
      const bool last = node.power + 1 >= node.block_size;
      const std::size_t next =
          last ? zero : index.at({static_cast<int>(NodeKind::nilpotent), node.group, node.block, node.power + 1});
      g.edges.push_back({n, next, EdgeLabel::nilpotent_decay});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const AsgEdge& a, const AsgEdge& b) {
    return std::make_tuple(a.from, a.to, static_cast<int>(a.label)) <
           std::make_tuple(b.from, b.to, static_cast<int>(b.label));
  });
  return g;
}

std::string export_dot(const AsgGraph& graph) {
  std::ostringstream os;
  os << "digraph ASG {\n";
  os << "  rankdir=LR;\n";
  for (const auto& n : graph.nodes) {
    os << "  " << n.id << " [";
    switch (n.kind) {
      case NodeKind::projector: os << "shape=box, label=\"P(" << n.group << "," << n.block << ")\""; break;
      case NodeKind::nilpotent:
        if (n.power >= 2) {
          os << "shape=ellipse, style=dashed, label=\"N(" << n.group << "," << n.block << ")^" << n.power << "\"";
        } else {
          os << "shape=ellipse, label=\"N(" << n.group << "," << n.block << ") m=" << n.block_size << "\"";
        }
        break;
      case NodeKind::zero: os << "shape=doublecircle, label=\"0\""; break;
    }
    os << "];\n";
  }
  std::size_t max_group = 0;
  for (const auto& n : graph.nodes) max_group = std::max(max_group, n.group);
  for (std::size_t k = 1; k <= max_group; ++k) {
    os << "  subgraph cluster_" << k << " {\n";
    os << "    label=\"k=" << k << "\";\n";
    for (const auto& n : graph.nodes) {
      if (n.group == k && !n.annotation.empty()) {
        os << "    tooltip=\"lambda=" << n.annotation << "\";\n";
        break;
      }
    }
    for (const auto& n : graph.nodes)
      if (n.group == k) os << "    " << n.id << ";\n";
    os << "  }\n";
  }
  for (const auto& e : graph.edges) {
    os << "  " << graph.nodes[e.from].id << " -> " << graph.nodes[e.to].id << " [label=\"" << to_string(e.label)
       << "\"";
    if (e.label == EdgeLabel::pn_interaction) os << ", dir=none";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

template AsgGraph build_graph(const SpectralFamily<Complex>&, const Tolerance&);
template AsgGraph build_graph(const SpectralFamily<GaussQ>&, const Tolerance&);

}  // namespace spectracalc
