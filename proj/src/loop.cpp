#include "exciton/loop.hpp"

#include <cmath>
#include <complex>

#include "exciton/errors.hpp"

namespace exciton
{

using namespace std::complex_literals;

std::string_view to_string(LoopKind kind)
{
  switch (kind)
  {
    case LoopKind::GraphBacked: return "graph-backed";
    case LoopKind::DiagonalModel: return "diagonal-model";
    case LoopKind::SingleFamily: return "single-family";
    case LoopKind::Custom: return "custom";
  }
  return "custom";
}

int GraphContext::total_winding() const
{
  int w = 0;
  for (const auto &f : families)
  {
    w += f.winding();
  }
  return w;
}

UnitaryLoop::UnitaryLoop(std::size_t dimension, Evaluator eval, Evaluator derivative, LoopKind kind)
  : dimension_(dimension), eval_(std::move(eval)), derivative_(std::move(derivative)), kind_(kind)
{
}

Matrix UnitaryLoop::derivative(double k) const
{
  if (!derivative_)
  {
    throw Error(ErrorKind::Usage, "loop has no derivative evaluator");
  }
  return derivative_(k);
}

UnitaryLoop UnitaryLoop::conjugated(const Matrix &v) const
{
  Evaluator eval = [inner = eval_, v](double k) -> Matrix { return v * inner(k) * v.adjoint(); };
  Evaluator deriv;
  if (derivative_)
  {
    deriv = [inner = derivative_, v](double k) -> Matrix { return v * inner(k) * v.adjoint(); };
  }
  UnitaryLoop out(dimension_, std::move(eval), std::move(deriv), kind_);
  out.context_ = context_;
  return out;
}

Matrix block_sum(const DoubleGraph &graph, const std::vector<ScatteringFamily> &families, double k)
{
  const auto n = static_cast<Eigen::Index>(graph.size());
  Matrix g0 = Matrix::Zero(n, n);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v)
  {
    const auto [first, last] = graph.tail_block(v);
    if (first == last)
    {
      continue;
    }
    const auto d = static_cast<Eigen::Index>(last - first);
    g0.block(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(first), d, d) =
        families[v].eval(k);
  }
  return g0;
}

namespace
{

Matrix block_sum_derivative(const DoubleGraph &graph, const std::vector<ScatteringFamily> &families,
                            double k)
{
  const auto n = static_cast<Eigen::Index>(graph.size());
  Matrix d0 = Matrix::Zero(n, n);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v)
  {
    const auto [first, last] = graph.tail_block(v);
    if (first == last || families[v].is_constant())
    {
      continue;
    }
    const auto d = static_cast<Eigen::Index>(last - first);
    d0.block(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(first), d, d) =
        families[v].derivative(k);
  }
  return d0;
}

Vector length_phases(const DoubleGraph &graph, double k)
{
  Vector p(static_cast<Eigen::Index>(graph.size()));
  for (std::size_t i = 0; i < graph.size(); ++i)
  {
    p(static_cast<Eigen::Index>(i)) = std::exp(1i * (k * static_cast<double>(graph.edge(i).length)));
  }
  return p;
}

std::vector<ScatteringFamily> families_in_vertex_order(const DoubleGraph &graph, const FamilyMap &families)
{
  std::vector<ScatteringFamily> ordered;
  ordered.reserve(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v)
  {
    const auto &name = graph.vertices()[v];
    auto it = families.find(name);
    if (it == families.end())
    {
      throw Error(ErrorKind::MissingFamily, name);
    }
    if (it->second.dimension() != graph.degree(v))
    {
      throw Error(ErrorKind::DegreeMismatch, "vertex '" + name + "' has degree " +
                                                 std::to_string(graph.degree(v)) + " but its family has dimension " +
                                                 std::to_string(it->second.dimension()));
    }
    ordered.push_back(it->second);
  }
  return ordered;
}

}  // namespace

UnitaryLoop assemble_graph_loop(const DoubleGraph &graph, const FamilyMap &families)
{
  auto ctx = std::make_shared<GraphContext>(GraphContext{graph, families_in_vertex_order(graph, families)});
  std::shared_ptr<const GraphContext> c = ctx;

  UnitaryLoop::Evaluator eval = [c](double k) -> Matrix {
    return length_phases(c->graph, k).asDiagonal() * block_sum(c->graph, c->families, k);
  };
  UnitaryLoop::Evaluator deriv = [c](double k) -> Matrix {
    const auto &g = c->graph;
    const Vector phase = length_phases(g, k);
    Vector lphase(phase.size());
    for (Eigen::Index i = 0; i < phase.size(); ++i)
    {
      lphase(i) = 1i * static_cast<double>(g.edge(static_cast<std::size_t>(i)).length) * phase(i);
    }
    return lphase.asDiagonal() * block_sum(g, c->families, k) +
           phase.asDiagonal() * block_sum_derivative(g, c->families, k);
  };
  UnitaryLoop loop(graph.size(), std::move(eval), std::move(deriv), LoopKind::GraphBacked);
  loop.context_ = std::move(c);
  return loop;
}

UnitaryLoop family_loop(const ScatteringFamily &f)
{
  return UnitaryLoop(
      f.dimension(), [f](double k) { return f.eval(k); }, [f](double k) { return f.derivative(k); },
      LoopKind::SingleFamily);
}

double TrigPhase::operator()(double k) const
{
  double t = slope * k + offset;
  for (std::size_t m = 0; m < cosines.size(); ++m)
  {
    t += cosines[m] * std::cos(static_cast<double>(m + 1) * k);
  }
  for (std::size_t m = 0; m < sines.size(); ++m)
  {
    t += sines[m] * std::sin(static_cast<double>(m + 1) * k);
  }
  return t;
}

double TrigPhase::derivative(double k) const
{
  double d = slope;
  for (std::size_t m = 0; m < cosines.size(); ++m)
  {
    const double order = static_cast<double>(m + 1);
    d -= order * cosines[m] * std::sin(order * k);
  }
  for (std::size_t m = 0; m < sines.size(); ++m)
  {
    const double order = static_cast<double>(m + 1);
    d += order * sines[m] * std::cos(order * k);
  }
  return d;
}

bool TrigPhase::is_linear() const
{
  for (double c : cosines)
  {
    if (c != 0.0) return false;
  }
  for (double s : sines)
  {
    if (s != 0.0) return false;
  }
  return true;
}

UnitaryLoop DiagonalModel::loop() const
{
  const auto n = static_cast<Eigen::Index>(phases.size());
  if (conjugation && (conjugation->rows() != n || conjugation->cols() != n))
  {
    throw Error(ErrorKind::DimensionMismatch, "conjugation does not match the number of phases");
  }
  if (conjugation && !(unitarity_defect(*conjugation) <= kInputTolerance))
  {
    throw Error(ErrorKind::InvalidFamily, "conjugation is not unitary");
  }
  auto eval = [p = phases, n](double k) -> Matrix {
    Vector d(n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
      d(j) = std::exp(1i * p[static_cast<std::size_t>(j)](k));
    }
    return d.asDiagonal();
  };
  auto deriv = [p = phases, n](double k) -> Matrix {
    Vector d(n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
      const auto &ph = p[static_cast<std::size_t>(j)];
      d(j) = 1i * ph.derivative(k) * std::exp(1i * ph(k));
    }
    return d.asDiagonal();
  };
  UnitaryLoop base(phases.size(), eval, deriv, LoopKind::DiagonalModel);
  return conjugation ? base.conjugated(*conjugation) : base;
}

DiagonalModel monomial_model(std::vector<int> slopes)
{
  DiagonalModel model;
  for (int s : slopes)
  {
    model.phases.push_back(TrigPhase{s, 0.0, {}, {}});
  }
  return model;
}

EsResidual es_residual(const DoubleGraph &graph, const FamilyMap &families, double k, const Vector &psi)
{
  if (static_cast<std::size_t>(psi.size()) != graph.size())
  {
    throw Error(ErrorKind::DimensionMismatch, "amplitude vector has length " + std::to_string(psi.size()) +
                                                  ", expected " + std::to_string(graph.size()));
  }
  const auto ordered = families_in_vertex_order(graph, families);
  std::vector<Matrix> gamma;
  gamma.reserve(ordered.size());
  for (const auto &f : ordered)
  {
    gamma.push_back(f.eval(k));
  }

  EsResidual r;
  for (std::size_t ab = 0; ab < graph.size(); ++ab)
  {
    const auto &e = graph.edge(ab);
    const std::size_t ba = graph.reversal(ab);
    const auto i_ab = static_cast<Eigen::Index>(ab);
    const auto i_ba = static_cast<Eigen::Index>(ba);
    const std::complex<double> prop = std::exp(1i * (k * static_cast<double>(e.length)));
    r.propagation = std::max(r.propagation, std::abs(psi(i_ba) - prop * psi(i_ab)));

    // Row {a,b} of Gamma^a; columns {a,c} run over the tail block of a.
    const auto [first, last] = graph.tail_block(e.tail);
    std::complex<double> scattered = 0.0;
    for (std::size_t ac = first; ac < last; ++ac)
    {
      scattered += gamma[e.tail](static_cast<Eigen::Index>(ab - first), static_cast<Eigen::Index>(ac - first)) *
                   psi(static_cast<Eigen::Index>(ac));
    }
    r.scattering = std::max(r.scattering, std::abs(psi(i_ba) - scattered));
  }
  return r;
}

}  // namespace exciton
