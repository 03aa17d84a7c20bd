#include "exciton/scattering.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "exciton/errors.hpp"

namespace exciton
{

using namespace std::complex_literals;

double value(PhaseConstant c)
{
  return c == PhaseConstant::Pi ? std::numbers::pi : 0.0;
}

double ChannelPhase::operator()(double k) const
{
  double phi = slope * k + value(constant);
  for (std::size_t m = 0; m < sines.size(); ++m)
  {
    phi += sines[m] * std::sin(static_cast<double>(m + 1) * k);
  }
  return phi;
}

double ChannelPhase::derivative(double k) const
{
  double d = slope;
  for (std::size_t m = 0; m < sines.size(); ++m)
  {
    const double order = static_cast<double>(m + 1);
    d += order * sines[m] * std::cos(order * k);
  }
  return d;
}

double unitarity_defect(const Matrix &a)
{
  return (a * a.adjoint() - Matrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
}

ScatteringFamily ScatteringFamily::constant_involution(Matrix c)
{
  if (c.rows() == 0 || c.rows() != c.cols())
  {
    throw Error(ErrorKind::InvalidFamily, "constant involution must be a non-empty square matrix");
  }
  if (const double u = unitarity_defect(c); !(u <= kInputTolerance))
  {
    throw Error(ErrorKind::InvalidFamily, "constant involution is not unitary (defect " +
                                              std::to_string(u) + ")");
  }
  if (const double h = (c - c.adjoint()).cwiseAbs().maxCoeff(); !(h <= kInputTolerance))
  {
    throw Error(ErrorKind::InvalidFamily, "constant involution is not Hermitian (defect " +
                                              std::to_string(h) + ")");
  }
  ScatteringFamily f;
  f.dimension_ = static_cast<std::size_t>(c.rows());
  f.data_ = ConstantInvolution{std::move(c)};
  return f;
}

ScatteringFamily ScatteringFamily::conjugated_phase(Matrix v, std::vector<ChannelPhase> phases)
{
  if (v.rows() == 0 || v.rows() != v.cols())
  {
    throw Error(ErrorKind::InvalidFamily, "conjugating matrix must be a non-empty square matrix");
  }
  if (static_cast<std::size_t>(v.rows()) != phases.size())
  {
    throw Error(ErrorKind::InvalidFamily, "conjugating matrix is " + std::to_string(v.rows()) +
                                              "x" + std::to_string(v.rows()) + " but " +
                                              std::to_string(phases.size()) + " phases given");
  }
  if (const double u = unitarity_defect(v); !(u <= kInputTolerance))
  {
    throw Error(ErrorKind::InvalidFamily,
                "conjugating matrix is not unitary (defect " + std::to_string(u) + ")");
  }
  for (const auto &p : phases)
  {
    for (double s : p.sines)
    {
      if (!std::isfinite(s))
      {
        throw Error(ErrorKind::InvalidFamily, "non-finite sine coefficient");
      }
    }
  }
  ScatteringFamily f;
  f.dimension_ = phases.size();
  f.data_ = ConjugatedPhase{std::move(v), std::move(phases)};
  return f;
}

ScatteringFamily ScatteringFamily::scalar_phase(ChannelPhase phase)
{
  return conjugated_phase(Matrix::Identity(1, 1), {std::move(phase)});
}

Matrix ScatteringFamily::eval(double k) const
{
  if (const auto *c = as_constant())
  {
    return c->matrix;
  }
  const auto &cp = std::get<ConjugatedPhase>(data_);
  Vector diag(static_cast<Eigen::Index>(dimension_));
  for (std::size_t j = 0; j < dimension_; ++j)
  {
    diag(static_cast<Eigen::Index>(j)) = std::exp(1i * cp.phases[j](k));
  }
  return cp.basis * diag.asDiagonal() * cp.basis.adjoint();
}

Matrix ScatteringFamily::derivative(double k) const
{
  const auto n = static_cast<Eigen::Index>(dimension_);
  if (is_constant())
  {
    return Matrix::Zero(n, n);
  }
  const auto &cp = std::get<ConjugatedPhase>(data_);
  Vector diag(n);
  for (std::size_t j = 0; j < dimension_; ++j)
  {
    const auto &p = cp.phases[j];
    diag(static_cast<Eigen::Index>(j)) = 1i * p.derivative(k) * std::exp(1i * p(k));
  }
  return cp.basis * diag.asDiagonal() * cp.basis.adjoint();
}

int ScatteringFamily::winding() const
{
  if (is_constant())
  {
    return 0;
  }
  int w = 0;
  for (const auto &p : std::get<ConjugatedPhase>(data_).phases)
  {
    w += p.slope;
  }
  return w;
}

namespace
{

bool same(const Matrix &a, const Matrix &b)
{
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

bool ScatteringFamily::operator==(const ScatteringFamily &other) const
{
  if (dimension_ != other.dimension_ || data_.index() != other.data_.index())
  {
    return false;
  }
  if (const auto *c = as_constant())
  {
    return same(c->matrix, other.as_constant()->matrix);
  }
  const auto *l = as_conjugated();
  const auto *r = other.as_conjugated();
  return same(l->basis, r->basis) && l->phases == r->phases;
}

void check_kramers(const ScatteringFamily &f, std::size_t samples)
{
  if (samples < 8)
  {
    throw Error(ErrorKind::Usage, "check_kramers needs at least 8 samples");
  }
  double worst = 0.0;
  double worst_k = 0.0;
  for (std::size_t i = 0; i < samples; ++i)
  {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    const double v = (f.eval(-k) - f.eval(k).adjoint()).cwiseAbs().maxCoeff();
    if (!(v <= worst))
    {
      worst = v;
      worst_k = k;
    }
  }
  if (!(worst <= kRuntimeTolerance))
  {
    std::ostringstream os;
    os << "||Gamma(-k) - Gamma(k)*|| = " << worst;
    throw Error(ErrorKind::KramersViolation, os.str(), worst_k);
  }
}

}  // namespace exciton
