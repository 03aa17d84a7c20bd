#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include <doctest.h>

#include "exciton/errors.hpp"
#include "exciton/scattering.hpp"

namespace support
{

inline constexpr double pi = std::numbers::pi;

// Kind of the exciton::Error thrown by fn, checked against `expected`.
template <class Fn>
void require_error(Fn &&fn, exciton::ErrorKind expected)
{
  try
  {
    fn();
  }
  catch (const exciton::Error &e)
  {
    CHECK_MESSAGE(e.kind() == expected, e.what());
    return;
  }
  FAIL("no exciton::Error thrown, expected " << exciton::to_string(expected));
}

// Degree of k -> det f(k) by brute-force unwrapping on a fine uniform grid;
// deliberately independent of the adaptive pipeline routine.
inline double numeric_winding(const std::function<exciton::Matrix(double)> &f, int samples = 20000)
{
  double total = 0.0;
  std::complex<double> prev = f(0.0).determinant();
  for (int i = 1; i <= samples; ++i)
  {
    const std::complex<double> cur = f(2.0 * pi * i / samples).determinant();
    total += std::arg(cur / prev);
    prev = cur;
  }
  return total / (2.0 * pi);
}

inline exciton::Matrix central_difference(const std::function<exciton::Matrix(double)> &f, double k,
                                          double h = 1e-6)
{
  return (f(k + h) - f(k - h)) / (2.0 * h);
}

inline double max_abs(const exciton::Matrix &m)
{
  return m.cwiseAbs().maxCoeff();
}

inline double periodic_distance(double a, double b)
{
  const double d = std::fmod(std::abs(a - b), 2.0 * pi);
  return std::min(d, 2.0 * pi - d);
}

}  // namespace support
