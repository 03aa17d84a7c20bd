#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exciton/loop.hpp"
#include "exciton/tolerances.hpp"

namespace exciton
{

// Continuous eigenphase branches of a loop sampled on [0, 2 pi]. The grid
// starts at 0 and ends at 2 pi; branches[j][i] is the unwrapped phase of
// branch j at grid[i].
struct EigenphaseTrace
{
  std::vector<double> grid;
  std::vector<std::vector<double>> branches;

  std::size_t branch_count() const noexcept { return branches.size(); }
  double increment(std::size_t branch) const;
  // Sum of branch increments over the circle; equals 2 pi times the winding.
  double total_increment() const;
};

// Tracks eigenphases from k = 0 to 2 pi. Consecutive samples are matched by
// an optimal assignment on circular phase distance and intervals are bisected
// until every branch step is below tol.branch_step_cap. When the loop carries
// a derivative, the generator norm is used as a speed bound so that fast
// phases cannot alias across a coarse step. Throws RefinementLimit.
EigenphaseTrace trace_eigenphases(const UnitaryLoop &loop, std::size_t initial_grid = 64,
                                  const Tolerances &tol = {});

struct Crossing
{
  double k_star = 0.0;
  std::complex<double> z_star{1.0, 0.0};
  int multiplicity = 0;
  int iota_plus = 0;
  int iota_minus = 0;
  int iota = 0;
  double arc_half_angle = 0.0;  // eta: J = {exp(i t) : |t| < eta}
  double delta = 0.0;           // one-sided window actually used
};

// Points of the circle where U(k) has eigenvalue +1, in increasing k in
// [0, 2 pi), with multiplicities and local indices filled in. Transversal
// crossings are bracketed per branch and bisected; tangential touches are
// found as local minima of the distance of the spectrum to +1.
// Throws DiscretenessViolated when the solution set is not discrete.
std::vector<Crossing> locate_crossings(const EigenphaseTrace &trace, const UnitaryLoop &loop,
                                       const Tolerances &tol = {});

// Dimension of the +1 eigenspace of U(k). Throws NotACrossing when zero.
int multiplicity_at(const UnitaryLoop &loop, double k, const Tolerances &tol = {});

struct LocalIndex
{
  int iota_minus = 0;
  int iota_plus = 0;
  int iota = 0;
  double arc_half_angle = 0.0;
  double delta = 0.0;
};

// One-sided counts of eigenvalues in a small arc J around +1 having positive
// imaginary part, just before and just after k_star. `crossings` holds the
// positions of all located crossings (k_star may be among them).
// Throws NotACrossing or IndexUnstable.
LocalIndex local_index_at(const UnitaryLoop &loop, double k_star, std::span<const double> crossings,
                          const Tolerances &tol = {});

// Degree of k -> det U(k), from principal-value increments of arg det on an
// adaptive grid. Throws WindingResidual.
int winding_number(const UnitaryLoop &loop, const Tolerances &tol = {});

struct IndexReport
{
  LoopKind kind = LoopKind::Custom;
  std::vector<std::string> vertex_order;  // graph-backed only
  int alpha = 0;
  std::vector<Crossing> crossings;
  int q = 0;
  int m = 0;
  int d0_plus = 0;
  int d0_minus = 0;
  int dpi_plus = 0;
  int dpi_minus = 0;
  int d0 = 0;
  int dpi = 0;
  std::optional<int> N;
  std::optional<long long> lower_bound;
  bool theorem_a_ok = false;
  std::optional<bool> bound_ok;
  bool pi_involution_holds = false;  // ||U(pi)^2 - I|| <= 1e-8
  std::vector<std::string> warnings;
};

struct ReportOptions
{
  Tolerances tol;
  std::size_t initial_grid = 64;
  // Band count requested: an odd m + d0 + dpi raises ParityViolation instead
  // of only withholding N.
  bool band = false;
};

IndexReport index_report(const UnitaryLoop &loop, const ReportOptions &options = {});

struct SweepRow
{
  Length t = 1;
  int alpha = 0;
  int q = 0;
  int m = 0;
  int gap = 0;  // m - alpha
};

// Index data for the loops with all lengths scaled by each t.
std::vector<SweepRow> long_arm_sweep(const DoubleGraph &graph, const FamilyMap &families,
                                     std::span<const Length> scales, const ReportOptions &options = {});

}  // namespace exciton
