#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace exciton
{

using Length = std::int64_t;

struct UndirectedEdge
{
  std::string a;
  std::string b;
  Length length = 1;

  bool operator==(const UndirectedEdge &) const = default;
};

// Weighted simple graph Y. Vertex order is the order of `vertices` and is the
// total order used for every basis built from this graph.
struct MolecularGraph
{
  std::vector<std::string> vertices;
  std::vector<UndirectedEdge> edges;

  bool operator==(const MolecularGraph &) const = default;

  // Position of `name` in `vertices`, or vertices.size() when absent.
  std::size_t index_of(const std::string &name) const;
};

// Throws exciton::Error naming the first violated invariant:
// UnknownVertex, SelfLoop, DuplicateEdge, NonPositiveLength, EmptyGraph or
// Disconnected (in that order of checking).
void validate_graph(const MolecularGraph &g);

struct DirectedEdge
{
  std::size_t tail = 0;
  std::size_t head = 0;
  Length length = 1;
  std::size_t undirected = 0;  // index into MolecularGraph::edges

  bool operator==(const DirectedEdge &) const = default;
};

// Directed double X of a MolecularGraph. Directed edges are sorted
// left-lexicographically by (tail, head) under the vertex order, so the edges
// leaving a vertex form one contiguous block.
class DoubleGraph
{
public:
  // Validates `g` and builds the double.
  static DoubleGraph build(const MolecularGraph &g);

  std::size_t size() const noexcept { return edges_.size(); }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  const std::vector<std::string> &vertices() const noexcept { return vertices_; }
  const std::vector<DirectedEdge> &edges() const noexcept { return edges_; }
  const DirectedEdge &edge(std::size_t i) const { return edges_.at(i); }

  // Half-open index range [first, second) of directed edges with tail v.
  std::pair<std::size_t, std::size_t> tail_block(std::size_t v) const { return blocks_.at(v); }
  std::size_t degree(std::size_t v) const;
  std::size_t reversal(std::size_t i) const { return reversal_.at(i); }

  // Index of directed edge (tail, head); size() when absent.
  std::size_t find(std::size_t tail, std::size_t head) const;

  // Sum of L over directed edges (twice the undirected sum).
  Length total_length() const;

  // Copy with every length multiplied by `scale`.
  DoubleGraph scaled(Length scale) const;

  bool operator==(const DoubleGraph &) const = default;

private:
  std::vector<std::string> vertices_;
  std::vector<DirectedEdge> edges_;
  std::vector<std::pair<std::size_t, std::size_t>> blocks_;
  std::vector<std::size_t> reversal_;
};

}  // namespace exciton
