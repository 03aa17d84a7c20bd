#pragma once

#include <vector>

#include "exciton/scattering.hpp"
#include "exciton/tolerances.hpp"

namespace exciton
{

// Eigen-decomposition of a unitary matrix: phases in [0, 2 pi) sorted
// ascending, with orthonormal eigenvectors in matching columns.
struct Eigenphases
{
  std::vector<double> phases;
  Matrix vectors;
};

// Uses a complex Schur factorization, which is diagonal for normal input and
// therefore yields an orthonormal eigenbasis even inside eigenvalue clusters.
// Throws NotUnitary when ||U U* - I|| exceeds tol.unitarity and
// EigensolverFailure when a residual exceeds tol.eigen_residual.
Eigenphases unitary_eigenphases(const Matrix &u, const Tolerances &tol = {});

// Phases only, skipping eigenvector bookkeeping and residual checks.
std::vector<double> eigenphases_only(const Matrix &u);

// Representative of theta mod 2 pi in (-pi, pi].
double recenter(double theta);

// Eigenvalue counts of u within `eps` of +1 and -1.
struct SignCounts
{
  int plus = 0;
  int minus = 0;
};
SignCounts count_unit_eigenvalues(const Matrix &u, double eps);

// Bounds on the eigenphase velocity of a loop at one point, from the
// Hermitian generator H = -i U* U': `spectral` = max |eig H| bounds each
// eigenphase speed, `nuclear` = sum |eig H| bounds the speed of arg det U.
struct PhaseSpeed
{
  double spectral = 0.0;
  double nuclear = 0.0;
};
PhaseSpeed phase_speed(const Matrix &u, const Matrix &du);

}  // namespace exciton
