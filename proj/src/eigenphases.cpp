#include "exciton/eigenphases.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "exciton/errors.hpp"

namespace exciton
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string sci(double x)
{
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

double to_unit_interval(std::complex<double> z)
{
  double t = std::arg(z);
  if (t < 0.0)
  {
    t += kTwoPi;
  }
  if (t >= kTwoPi)
  {
    t -= kTwoPi;
  }
  return t;
}

}  // namespace

double recenter(double theta)
{
  double r = std::remainder(theta, kTwoPi);
  if (r <= -std::numbers::pi)
  {
    r += kTwoPi;
  }
  return r;
}

Eigenphases unitary_eigenphases(const Matrix &u, const Tolerances &tol)
{
  if (u.rows() != u.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "eigenphases of a non-square matrix");
  }
  const double defect = unitarity_defect(u);
  if (!(defect <= tol.unitarity))
  {
    throw Error(ErrorKind::NotUnitary, "||UU* - I|| = " + sci(defect));
  }
  const Eigen::Index n = u.rows();
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success)
  {
    throw Error(ErrorKind::EigensolverFailure, "Schur factorization did not converge");
  }
  const Matrix &t = schur.matrixT();
  const Matrix &q = schur.matrixU();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> raw(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
  {
    raw[static_cast<std::size_t>(i)] = to_unit_interval(t(i, i));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return raw[a] < raw[b]; });

  Eigenphases out;
  out.phases.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    const double theta = raw[static_cast<std::size_t>(src)];
    out.phases[static_cast<std::size_t>(j)] = theta;
    out.vectors.col(j) = q.col(src);
    const double residual = (u * q.col(src) - std::polar(1.0, theta) * q.col(src)).norm();
    if (!(residual <= tol.eigen_residual))
    {
      throw Error(ErrorKind::EigensolverFailure, "eigenpair residual " + sci(residual));
    }
  }
  return out;
}

std::vector<double> eigenphases_only(const Matrix &u)
{
  Eigen::ComplexSchur<Matrix> schur(u, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
  {
    throw Error(ErrorKind::EigensolverFailure, "Schur factorization did not converge");
  }
  const Matrix &t = schur.matrixT();
  std::vector<double> phases(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index i = 0; i < u.rows(); ++i)
  {
    phases[static_cast<std::size_t>(i)] = to_unit_interval(t(i, i));
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

SignCounts count_unit_eigenvalues(const Matrix &u, double eps)
{
  SignCounts c;
  for (double theta : eigenphases_only(u))
  {
    const std::complex<double> z = std::polar(1.0, theta);
    if (std::abs(z - 1.0) < eps) ++c.plus;
    if (std::abs(z + 1.0) < eps) ++c.minus;
  }
  return c;
}

PhaseSpeed phase_speed(const Matrix &u, const Matrix &du)
{
  using namespace std::complex_literals;
  Matrix h = -1i * (u.adjoint() * du);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  PhaseSpeed s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
  {
    const double a = std::abs(es.eigenvalues()(i));
    s.spectral = std::max(s.spectral, a);
    s.nuclear += a;
  }
  return s;
}

}  // namespace exciton
