#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exciton/instance_io.hpp"
#include "exciton/loop.hpp"
#include "exciton/spectral_flow.hpp"
#include "exciton/tolerances.hpp"

namespace exciton
{

// Independent verifiers for the spectral-flow pipeline. Nothing here reuses
// the tracer, the Schur-based eigenphase routine or its intermediate data:
// eigenvalues come from a general complex eigensolver on fresh evaluations.

struct OracleCrossing
{
  enum class Source
  {
    DenseScan,
    ClosedForm,
  };

  double k_star = 0.0;
  int multiplicity = 0;
  Source source = Source::DenseScan;
};

// Uniform scan of the distance of the spectrum to +1, golden-section
// refinement of every grid-local minimum no deeper than its rise to a
// neighbour (plus 1e-3), kept when the refined distance is below tol.eigen_cluster. Throws GridTooCoarse when two kept
// minima sit on adjacent grid points.
std::vector<OracleCrossing> dense_scan_crossings(const UnitaryLoop &loop, std::size_t grid_size = 100000,
                                                 const Tolerances &tol = {});

// Pairs located crossings with oracle crossings by periodic distance.
// Returns a description of the first disagreement in count, position
// (beyond k_tolerance) or multiplicity, or nullopt when they agree.
std::optional<std::string> compare_crossings(std::span<const Crossing> located, std::span<const OracleCrossing> oracle,
                                             double k_tolerance = 1e-6);

struct PredictedCrossing
{
  double k_star = 0.0;
  int multiplicity = 0;
  int iota_plus = 0;
  int iota_minus = 0;
  int iota = 0;
};

struct DiagonalPrediction
{
  std::vector<PredictedCrossing> crossings;
  int alpha = 0;  // sum of branch slopes
};

// Crossings of a diagonal model. Linear phases slope*k + offset are solved
// in closed form: k = (2 pi r - offset) / slope, each branch contributing
// sign(slope) to the local index. With `exact` false, non-linear phases are
// handled by scanning each scalar phase separately. Throws UnsupportedPhase
// (exact requested on a non-linear phase) or DiscretenessViolated (a branch
// identically at +1).
DiagonalPrediction diagonal_model_predict(const DiagonalModel &model, bool exact = true);

struct InstanceLimits
{
  std::size_t min_vertices = 2;
  std::size_t max_vertices = 6;
  Length max_length = 4;
  int max_slope = 2;
  std::size_t max_sines = 2;
  double max_sine = 1.0;
  double extra_edge_probability = 0.3;
  double constant_probability = 0.3;
};

// Deterministic random molecule for a seed: a random spanning tree plus
// random extra edges, with Haar-random conjugating unitaries. Constant
// involutions are V diag(+-1) V*; conjugated-phase families draw slopes,
// constants and sine coefficients within the limits.
Instance random_instance(std::uint64_t seed, const InstanceLimits &limits = {});

// Haar-random unitary from the QR factorization of a complex Gaussian matrix.
template <class Rng>
Matrix random_unitary(Eigen::Index n, Rng &rng);

}  // namespace exciton

#include "exciton/detail/random_unitary.hpp"
