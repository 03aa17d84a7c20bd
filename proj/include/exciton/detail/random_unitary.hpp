#pragma once

#include <complex>
#include <random>

#include <Eigen/QR>

namespace exciton
{

template <class Rng>
Matrix random_unitary(Eigen::Index n, Rng &rng)
{
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(i, j) = {re, im};
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
  {
    const std::complex<double> d = r(j, j);
    if (std::abs(d) > 0.0)
    {
      q.col(j) *= d / std::abs(d);
    }
  }
  return q;
}

}  // namespace exciton
