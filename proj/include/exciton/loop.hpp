#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exciton/graph.hpp"
#include "exciton/scattering.hpp"

namespace exciton
{

enum class LoopKind
{
  GraphBacked,
  DiagonalModel,
  SingleFamily,
  Custom,
};

std::string_view to_string(LoopKind kind);

using FamilyMap = std::map<std::string, ScatteringFamily>;

// Graph data a graph-backed loop was assembled from. Families are stored in
// vertex order.
struct GraphContext
{
  DoubleGraph graph;
  std::vector<ScatteringFamily> families;

  Length total_length() const { return graph.total_length(); }
  int total_winding() const;
};

// A 2 pi-periodic map k -> U(k) into U(n), with an optional closed-form
// derivative. Immutable; copies share the underlying evaluators.
class UnitaryLoop
{
public:
  using Evaluator = std::function<Matrix(double)>;

  UnitaryLoop(std::size_t dimension, Evaluator eval, Evaluator derivative = {},
              LoopKind kind = LoopKind::Custom);

  std::size_t dimension() const noexcept { return dimension_; }
  LoopKind kind() const noexcept { return kind_; }

  Matrix eval(double k) const { return eval_(k); }
  bool has_derivative() const noexcept { return static_cast<bool>(derivative_); }
  Matrix derivative(double k) const;

  // Non-null only for graph-backed loops.
  const GraphContext *graph_context() const noexcept { return context_.get(); }

  // Loop k -> V U(k) V* for a constant unitary V.
  UnitaryLoop conjugated(const Matrix &v) const;

private:
  friend UnitaryLoop assemble_graph_loop(const DoubleGraph &, const FamilyMap &);

  std::size_t dimension_;
  Evaluator eval_;
  Evaluator derivative_;
  LoopKind kind_;
  std::shared_ptr<const GraphContext> context_;
};

// Gamma(k) = exp(i k Lhat) Gamma_0(k), where Gamma_0 is the block sum of the
// vertex families in the tail-grouped left-lex basis. Within the block of
// vertex a, rows and columns follow the directed edges ab in basis order.
// Throws MissingFamily or DegreeMismatch.
UnitaryLoop assemble_graph_loop(const DoubleGraph &graph, const FamilyMap &families);

// The block-diagonal factor Gamma_0(k) on its own.
Matrix block_sum(const DoubleGraph &graph, const std::vector<ScatteringFamily> &families, double k);

// Single vertex family viewed as a loop in U(d).
UnitaryLoop family_loop(const ScatteringFamily &f);

// theta(k) = slope * k + offset + sum_m (cosines[m-1] cos(m k) + sines[m-1] sin(m k))
struct TrigPhase
{
  int slope = 0;
  double offset = 0.0;
  std::vector<double> cosines;
  std::vector<double> sines;

  double operator()(double k) const;
  double derivative(double k) const;
  bool is_linear() const;
};

// Closed-form test loop V diag(exp(i theta_j(k))) V*. No Kramers requirement.
struct DiagonalModel
{
  std::vector<TrigPhase> phases;
  std::optional<Matrix> conjugation;

  UnitaryLoop loop() const;
};

// Diagonal model with purely linear phases slope_j * k.
DiagonalModel monomial_model(std::vector<int> slopes);

struct EsResidual
{
  double propagation = 0.0;  // max_ab |psi_ba - exp(i k L_ab) psi_ab|
  double scattering = 0.0;   // max_ab |psi_ba - sum_c Gamma^a_{ab,ac}(k) psi_ac|
};

// Residuals of the two exciton-scattering equations for amplitudes psi
// indexed by directed edges. Throws DimensionMismatch.
EsResidual es_residual(const DoubleGraph &graph, const FamilyMap &families, double k,
                       const Vector &psi);

}  // namespace exciton
