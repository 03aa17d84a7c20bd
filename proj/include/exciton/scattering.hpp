#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace exciton
{

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Constant term of a channel phase. Restricted to 0 and pi so that the
// phase family is odd up to a multiple of 2 pi, which makes Kramers symmetry
// an identity rather than an approximation.
enum class PhaseConstant
{
  Zero,
  Pi,
};

double value(PhaseConstant c);

// phi(k) = slope * k + c + sum_m sines[m-1] * sin(m k)
struct ChannelPhase
{
  int slope = 0;
  PhaseConstant constant = PhaseConstant::Zero;
  std::vector<double> sines;

  double operator()(double k) const;
  double derivative(double k) const;

  bool operator==(const ChannelPhase &) const = default;
};

// Analytic 2 pi-periodic unitary family k -> Gamma(k) attached to a vertex.
// Two closed-form variants, both unitary by construction:
//   constant involution   Gamma(k) = C with C = C* and C C* = I;
//   conjugated phase      Gamma(k) = V diag(exp(i phi_j(k))) V*, V unitary.
class ScatteringFamily
{
public:
  struct ConstantInvolution
  {
    Matrix matrix;
  };
  struct ConjugatedPhase
  {
    Matrix basis;
    std::vector<ChannelPhase> phases;
  };

  // Both factories throw Error(InvalidFamily) when the input matrix violates
  // its invariant at tolerance 1e-12 or dimensions disagree.
  static ScatteringFamily constant_involution(Matrix c);
  static ScatteringFamily conjugated_phase(Matrix v, std::vector<ChannelPhase> phases);
  // Scalar shorthand for conjugated_phase with V = [1].
  static ScatteringFamily scalar_phase(ChannelPhase phase);

  std::size_t dimension() const noexcept { return dimension_; }
  bool is_constant() const noexcept { return std::holds_alternative<ConstantInvolution>(data_); }
  const ConstantInvolution *as_constant() const { return std::get_if<ConstantInvolution>(&data_); }
  const ConjugatedPhase *as_conjugated() const { return std::get_if<ConjugatedPhase>(&data_); }

  Matrix eval(double k) const;
  Matrix derivative(double k) const;
  // Degree of k -> det Gamma(k) on the circle.
  int winding() const;

  // Exact equality of the stored data.
  bool operator==(const ScatteringFamily &other) const;

private:
  ScatteringFamily() = default;

  std::size_t dimension_ = 0;
  std::variant<ConstantInvolution, ConjugatedPhase> data_;
};

// Verifies ||Gamma(-k) - Gamma(k)*|| <= 1e-10 on a uniform grid of `samples`
// points in [0, 2 pi). Throws KramersViolation with the worst k and norm.
void check_kramers(const ScatteringFamily &f, std::size_t samples = 64);

inline constexpr double kInputTolerance = 1e-12;
inline constexpr double kRuntimeTolerance = 1e-10;

// Largest entry of |A A* - I|.
double unitarity_defect(const Matrix &a);

}  // namespace exciton
