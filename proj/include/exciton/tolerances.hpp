#pragma once

#include <numbers>

namespace exciton
{

// Numeric witnesses for the exact statements the pipeline checks. A single
// instance of this struct is threaded through every stage; instance files may
// override individual entries.
struct Tolerances
{
  double eigen_cluster = 1e-8;       // |lambda - 1| below this counts as +1
  double bisection_k = 1e-10;        // crossing localization in k
  double branch_step_cap = std::numbers::pi / 4;
  double det_step_cap = std::numbers::pi / 2;
  double merge_radius = 1e-8;        // crossings closer than this are one point
  double delta_cap = 1e-3;           // one-sided window for local indices
  double winding_residual = 1e-6;
  double unitarity = 1e-8;           // precondition on eigensolver input
  double eigen_residual = 1e-9;      // ||Uv - lambda v|| contract

  bool operator==(const Tolerances &) const = default;
};

}  // namespace exciton
