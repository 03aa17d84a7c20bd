#include "exciton/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "exciton/errors.hpp"

namespace exciton
{

std::size_t MolecularGraph::index_of(const std::string &name) const
{
  auto it = std::find(vertices.begin(), vertices.end(), name);
  return static_cast<std::size_t>(it - vertices.begin());
}

namespace
{

std::string edge_name(const UndirectedEdge &e)
{
  return "{" + e.a + "," + e.b + "}";
}

}  // namespace

void validate_graph(const MolecularGraph &g)
{
  {
    std::set<std::string> seen;
    for (const auto &v : g.vertices)
    {
      if (!seen.insert(v).second)
      {
        throw Error(ErrorKind::Parse, "vertex '" + v + "' listed twice");
      }
    }
  }
  const std::size_t nv = g.vertices.size();
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto &e : g.edges)
  {
    const std::size_t a = g.index_of(e.a);
    const std::size_t b = g.index_of(e.b);
    if (a == nv || b == nv)
    {
      throw Error(ErrorKind::UnknownVertex, "edge " + edge_name(e) + " references vertex '" +
                                                (a == nv ? e.a : e.b) + "'");
    }
    if (a == b)
    {
      throw Error(ErrorKind::SelfLoop, e.a);
    }
    if (!seen.insert(std::minmax(a, b)).second)
    {
      throw Error(ErrorKind::DuplicateEdge, edge_name(e));
    }
    if (e.length < 1)
    {
      throw Error(ErrorKind::NonPositiveLength,
                  edge_name(e) + " has length " + std::to_string(e.length));
    }
  }
  if (g.edges.empty())
  {
    throw Error(ErrorKind::EmptyGraph, "graph has no edges");
  }

  // Union-find over vertex indices.
  std::vector<std::size_t> parent(nv);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x)
    {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto &e : g.edges)
  {
    parent[root(g.index_of(e.a))] = root(g.index_of(e.b));
  }
  std::vector<std::vector<std::string>> components;
  std::vector<std::size_t> component_of(nv, nv);
  for (std::size_t v = 0; v < nv; ++v)
  {
    const std::size_t r = root(v);
    if (component_of[r] == nv)
    {
      component_of[r] = components.size();
      components.emplace_back();
    }
    components[component_of[r]].push_back(g.vertices[v]);
  }
  if (components.size() > 1)
  {
    std::ostringstream os;
    for (std::size_t c = 0; c < components.size(); ++c)
    {
      os << (c ? " " : "") << "{";
      for (std::size_t i = 0; i < components[c].size(); ++i)
      {
        os << (i ? "," : "") << components[c][i];
      }
      os << "}";
    }
    throw Error(ErrorKind::Disconnected, os.str());
  }
}

DoubleGraph DoubleGraph::build(const MolecularGraph &g)
{
  validate_graph(g);
  DoubleGraph x;
  x.vertices_ = g.vertices;
  for (std::size_t u = 0; u < g.edges.size(); ++u)
  {
    const auto &e = g.edges[u];
    const std::size_t a = g.index_of(e.a);
    const std::size_t b = g.index_of(e.b);
    x.edges_.push_back({a, b, e.length, u});
    x.edges_.push_back({b, a, e.length, u});
  }
  std::sort(x.edges_.begin(), x.edges_.end(), [](const DirectedEdge &l, const DirectedEdge &r) {
    return std::tie(l.tail, l.head) < std::tie(r.tail, r.head);
  });

  const std::size_t nv = x.vertices_.size();
  x.blocks_.assign(nv, {0, 0});
  std::size_t i = 0;
  for (std::size_t v = 0; v < nv; ++v)
  {
    const std::size_t first = i;
    while (i < x.edges_.size() && x.edges_[i].tail == v)
    {
      ++i;
    }
    x.blocks_[v] = {first, i};
  }

  x.reversal_.resize(x.edges_.size());
  for (std::size_t j = 0; j < x.edges_.size(); ++j)
  {
    x.reversal_[j] = x.find(x.edges_[j].head, x.edges_[j].tail);
  }
  return x;
}

std::size_t DoubleGraph::degree(std::size_t v) const
{
  const auto [first, last] = tail_block(v);
  return last - first;
}

std::size_t DoubleGraph::find(std::size_t tail, std::size_t head) const
{
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{tail, head},
                             [](const DirectedEdge &e, const std::pair<std::size_t, std::size_t> &key) {
                               return std::tie(e.tail, e.head) < std::tie(key.first, key.second);
                             });
  if (it == edges_.end() || it->tail != tail || it->head != head)
  {
    return edges_.size();
  }
  return static_cast<std::size_t>(it - edges_.begin());
}

Length DoubleGraph::total_length() const
{
  Length sum = 0;
  for (const auto &e : edges_)
  {
    sum += e.length;
  }
  return sum;
}

DoubleGraph DoubleGraph::scaled(Length scale) const
{
  DoubleGraph copy = *this;
  for (auto &e : copy.edges_)
  {
    e.length *= scale;
  }
  return copy;
}

}  // namespace exciton
