#include "exciton/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "exciton/eigenphases.hpp"
#include "exciton/errors.hpp"

namespace exciton
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxBisections = 40;
// Below this interval width an ambiguous assignment is accepted as intrinsic
// (two branches crossing each other) rather than refined further.
constexpr double kAmbiguityFloor = 1e-4;
constexpr double kDominance = 0.5;
constexpr double kCoincident = 1e-9;
// A matched step may miss its velocity-based prediction by at most this much.
constexpr double kPredictionSlack = 0.05;
constexpr double kDiscretenessLevel = 1e-9;
constexpr double kDiscretenessWidth = 1e-4;

double circular_distance(double a, double b)
{
  return std::abs(recenter(b - a));
}

double wrap_2pi(double k)
{
  double r = std::fmod(k, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// Minimum-cost perfect assignment; returns target[row].
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>> &cost)
{
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i)
  {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do
    {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j)
      {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j])
        {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j)
      {
        if (used[j])
        {
          u[p[j]] += delta;
          v[j] -= delta;
        }
        else
        {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do
    {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> target(n);
  for (std::size_t j = 1; j <= n; ++j)
  {
    target[p[j] - 1] = j - 1;
  }
  return target;
}

struct Sample
{
  double k = 0.0;
  std::vector<double> phases;
  std::vector<double> velocity;  // d theta / dk per phase, empty when unknown
  double speed = 0.0;            // eigenphase speed bound, 0 when unknown
};

// First-order eigenphase velocities are the eigenvalues of H = -i U* U'
// compressed to each eigenspace; inside a cluster the Schur basis is
// arbitrary, so the compressed block is diagonalized rather than read off.
std::vector<double> phase_velocities(const std::vector<double> &phases, const Matrix &vectors, const Matrix &u,
                                     const Matrix &du)
{
  const Matrix h = std::complex<double>(0.0, -1.0) * (u.adjoint() * du);
  const Matrix hv = vectors.adjoint() * ((0.5 * (h + h.adjoint())) * vectors);
  const std::size_t n = phases.size();
  std::vector<double> v(n);
  std::size_t start = 0;
  while (start < n)
  {
    std::size_t end = start + 1;
    while (end < n && circular_distance(phases[end - 1], phases[end]) < kCoincident) ++end;
    const auto len = static_cast<Eigen::Index>(end - start);
    if (len == 1)
    {
      v[start] = hv(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(start)).real();
    }
    else
    {
      const auto s0 = static_cast<Eigen::Index>(start);
      Eigen::SelfAdjointEigenSolver<Matrix> es(hv.block(s0, s0, len, len), Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < len; ++i) v[start + static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    }
    start = end;
  }
  return v;
}

// Samples go through the checked eigen-decomposition, so every grid point
// honours the unitarity and residual contract of the tolerance ledger.
Sample take_sample(const UnitaryLoop &loop, double k, const Tolerances &tol)
{
  Sample s;
  s.k = k;
  const Matrix u = loop.eval(k);
  Eigenphases e;
  try
  {
    e = unitary_eigenphases(u, tol);
  }
  catch (const Error &err)
  {
    throw Error(err.kind(), err.detail(), k);
  }
  s.phases = std::move(e.phases);
  if (loop.has_derivative())
  {
    const Matrix du = loop.derivative(k);
    s.velocity = phase_velocities(s.phases, e.vectors, u, du);
    s.speed = phase_speed(u, du).spectral;
  }
  return s;
}

class Tracer
{
public:
  Tracer(const UnitaryLoop &loop, const Tolerances &tol, EigenphaseTrace &out)
    : loop_(loop), tol_(tol), out_(out)
  {
  }

  void start(const Sample &s)
  {
    current_ = s.phases;
    velocity_ = s.velocity;
    out_.grid.push_back(s.k);
    out_.branches.assign(current_.size(), {});
    for (std::size_t j = 0; j < current_.size(); ++j)
    {
      out_.branches[j].push_back(current_[j]);
    }
  }

  void advance(const Sample &a, const Sample &b, int depth)
  {
    const std::size_t n = current_.size();
    const bool predicted = velocity_.size() == n && b.velocity.size() == n;
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
    {
      for (std::size_t j = 0; j < n; ++j)
      {
        // Trapezoid prediction when velocities are known; plain proximity otherwise.
        const double drift = predicted ? 0.5 * (b.k - a.k) * (velocity_[i] + b.velocity[j]) : 0.0;
        cost[i][j] = circular_distance(current_[i] + drift, b.phases[j]);
      }
    }
    const auto target = hungarian(cost);

    double max_step = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
      max_step = std::max(max_step, cost[i][target[i]]);
    }
    const double width = b.k - a.k;
    const bool too_far = !(max_step < (predicted ? kPredictionSlack : tol_.branch_step_cap));
    const bool too_fast = width * std::max(a.speed, b.speed) >= tol_.branch_step_cap;
    const double reach = width * std::max(a.speed, b.speed);
    const bool ambiguous = width > kAmbiguityFloor && (is_ambiguous(cost, target, b.phases) ||
                                                       tangled_near_zero(a.phases, reach) ||
                                                       tangled_near_zero(b.phases, reach));

    if (too_far || too_fast || ambiguous)
    {
      if (depth < kMaxBisections)
      {
        const Sample mid = take_sample(loop_, 0.5 * (a.k + b.k), tol_);
        advance(a, mid, depth + 1);
        advance(mid, b, depth + 1);
        return;
      }
      if (too_far || too_fast)
      {
        std::ostringstream os;
        os << "branch step " << max_step << " after " << kMaxBisections << " bisections";
        throw Error(ErrorKind::RefinementLimit, os.str(), a.k);
      }
    }

    for (std::size_t i = 0; i < n; ++i)
    {
      current_[i] += recenter(b.phases[target[i]] - current_[i]);
      if (predicted) velocity_[i] = b.velocity[target[i]];
      out_.branches[i].push_back(current_[i]);
    }
    out_.grid.push_back(b.k);
  }

private:
  // Labels matter only where branches can wrap through zero: there, two
  // phases that could meet within the step make any assignment a guess.
  static bool tangled_near_zero(const std::vector<double> &phases, double reach)
  {
    if (reach <= 0.0) return false;
    std::vector<double> near;
    for (double t : phases)
    {
      const double c = recenter(t);
      if (std::abs(c) <= 2.0 * reach) near.push_back(c);
    }
    std::sort(near.begin(), near.end());
    for (std::size_t i = 1; i < near.size(); ++i)
    {
      const double gap = near[i] - near[i - 1];
      if (gap >= kCoincident && gap < 2.0 * reach) return true;
    }
    return false;
  }

  // Matching is trusted only when every branch lands clearly nearer its
  // target than any other distinct eigenphase; otherwise a uniform drift of
  // the whole spectrum can be mistaken for a cyclic relabelling.
  bool is_ambiguous(const std::vector<std::vector<double>> &cost, const std::vector<std::size_t> &target,
                    const std::vector<double> &next) const
  {
    const std::size_t n = cost.size();
    for (std::size_t i = 0; i < n; ++i)
    {
      const double chosen = cost[i][target[i]];
      for (std::size_t j = 0; j < n; ++j)
      {
        if (j == target[i] || circular_distance(next[j], next[target[i]]) < kCoincident)
        {
          continue;
        }
        if (chosen >= kDominance * cost[i][j])
        {
          return true;
        }
      }
    }
    return false;
  }

  const UnitaryLoop &loop_;
  const Tolerances &tol_;
  EigenphaseTrace &out_;
  std::vector<double> current_;
  std::vector<double> velocity_;
};

// Velocity of the eigenphase nearest to 0 at k.
double touching_velocity(const UnitaryLoop &loop, double k, const Tolerances &tol)
{
  const Matrix u = loop.eval(k);
  const Eigenphases e = unitary_eigenphases(u, tol);
  const auto v = phase_velocities(e.phases, e.vectors, u, loop.derivative(k));
  std::size_t best = 0;
  for (std::size_t j = 1; j < e.phases.size(); ++j)
  {
    if (std::abs(recenter(e.phases[j])) < std::abs(recenter(e.phases[best]))) best = j;
  }
  return v[best];
}

// A quadratic minimum of the distance pins k only to about sqrt(machine
// epsilon); the touching phase's velocity changes sign linearly there, so
// bisecting on it recovers the point to full precision.
template <class F>
double polish_touch(const UnitaryLoop &loop, double k, F distance, const Tolerances &tol)
{
  if (!loop.has_derivative()) return k;
  constexpr double kWindow = 1e-6;
  double lo = k - kWindow, hi = k + kWindow;
  const double vlo = touching_velocity(loop, lo, tol);
  if (vlo * touching_velocity(loop, hi, tol) > 0.0) return k;
  for (int it = 0; it < 60 && hi - lo > 1e-16; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    if ((touching_velocity(loop, mid, tol) > 0.0) == (vlo > 0.0))
    {
      lo = mid;
    }
    else
    {
      hi = mid;
    }
  }
  const double polished = 0.5 * (lo + hi);
  return distance(polished) <= distance(k) ? polished : k;
}

// Distance of the spectrum of U(k) to +1, measured in phase.
double spectral_gap_to_one(const UnitaryLoop &loop, double k)
{
  double best = kPi;
  for (double t : eigenphases_only(loop.eval(k)))
  {
    best = std::min(best, std::abs(recenter(t)));
  }
  return best;
}

// Golden-section minimization of f on [lo, hi].
template <class F>
double golden_minimum(F f, double lo, double hi, double tol)
{
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > tol; ++it)
  {
    if (f1 <= f2)
    {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    }
    else
    {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

struct Candidate
{
  double k = 0.0;
  bool transversal = false;
};

// Branch j followed into the interval [k_a, k_b]: the eigenphase of U(k)
// nearest the linear interpolant, unwrapped against it.
double follow_branch(const UnitaryLoop &loop, double k, double k_a, double theta_a, double k_b, double theta_b)
{
  const double s = (k - k_a) / (k_b - k_a);
  const double guess = theta_a + s * (theta_b - theta_a);
  double best = std::numeric_limits<double>::infinity();
  double value = guess;
  for (double t : eigenphases_only(loop.eval(k)))
  {
    const double d = recenter(t - guess);
    if (std::abs(d) < best)
    {
      best = std::abs(d);
      value = guess + d;
    }
  }
  return value;
}

double periodic_distance(double a, double b)
{
  const double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

}  // namespace

double EigenphaseTrace::increment(std::size_t branch) const
{
  const auto &b = branches.at(branch);
  return b.back() - b.front();
}

double EigenphaseTrace::total_increment() const
{
  double sum = 0.0;
  for (std::size_t j = 0; j < branches.size(); ++j)
  {
    sum += increment(j);
  }
  return sum;
}

EigenphaseTrace trace_eigenphases(const UnitaryLoop &loop, std::size_t initial_grid, const Tolerances &tol)
{
  if (initial_grid < 64)
  {
    throw Error(ErrorKind::Usage, "initial grid must have at least 64 points");
  }
  auto uniform = [&](std::size_t count) {
    std::vector<Sample> samples;
    samples.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i)
    {
      const double k = i == count ? kTwoPi : kTwoPi * static_cast<double>(i) / static_cast<double>(count);
      samples.push_back(take_sample(loop, k, tol));
    }
    return samples;
  };

  std::vector<Sample> samples = uniform(initial_grid);
  double max_speed = 0.0;
  for (const auto &s : samples)
  {
    max_speed = std::max(max_speed, s.speed);
  }
  // Aim for half the step cap at the fastest sampled speed.
  const auto needed = static_cast<std::size_t>(std::ceil(kTwoPi * max_speed / (0.5 * tol.branch_step_cap)));
  if (needed > initial_grid)
  {
    samples = uniform(needed);
  }

  EigenphaseTrace trace;
  Tracer tracer(loop, tol, trace);
  tracer.start(samples.front());
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
  {
    tracer.advance(samples[i], samples[i + 1], 0);
  }
  return trace;
}

int multiplicity_at(const UnitaryLoop &loop, double k, const Tolerances &tol)
{
  const int m = count_unit_eigenvalues(loop.eval(k), tol.eigen_cluster).plus;
  if (m == 0)
  {
    throw Error(ErrorKind::NotACrossing, "U(k) has no eigenvalue +1", k);
  }
  return m;
}

LocalIndex local_index_at(const UnitaryLoop &loop, double k_star, std::span<const double> crossings,
                          const Tolerances &tol)
{
  const std::vector<double> phases = unitary_eigenphases(loop.eval(k_star), tol).phases;
  int m = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (double t : phases)
  {
    const double r = recenter(t);
    if (std::abs(std::polar(1.0, r) - 1.0) < tol.eigen_cluster)
    {
      ++m;
    }
    else
    {
      gap = std::min(gap, std::abs(r));
    }
  }
  if (m == 0)
  {
    throw Error(ErrorKind::NotACrossing, "U(k) has no eigenvalue +1", k_star);
  }

  LocalIndex out;
  out.arc_half_angle = std::isfinite(gap) ? 0.5 * gap : 0.5 * kPi;

  double delta = tol.delta_cap;
  for (double other : crossings)
  {
    const double d = periodic_distance(other, k_star);
    if (d > tol.merge_radius)
    {
      delta = std::min(delta, 0.5 * d);
    }
  }

  struct Counts
  {
    int in_arc = 0;
    int upper = 0;
  };
  auto counts_at = [&](double k) {
    Counts c;
    for (double t : eigenphases_only(loop.eval(k)))
    {
      const double r = recenter(t);
      if (std::abs(r) < out.arc_half_angle)
      {
        ++c.in_arc;
        if (r > 0.0) ++c.upper;
      }
    }
    return c;
  };

  for (int attempt = 0; attempt <= 20; ++attempt, delta *= 0.5)
  {
    bool stable = true;
    int upper[2] = {-1, -1};
    for (int side = 0; side < 2 && stable; ++side)
    {
      const double sign = side == 0 ? -1.0 : 1.0;
      for (int s = 1; s <= 8 && stable; ++s)
      {
        const Counts c = counts_at(k_star + sign * delta * s / 9.0);
        if (c.in_arc != m || (upper[side] >= 0 && c.upper != upper[side]))
        {
          stable = false;
        }
        upper[side] = c.upper;
      }
    }
    if (!stable)
    {
      continue;
    }
    const Counts before = counts_at(k_star - 0.5 * delta);
    const Counts after = counts_at(k_star + 0.5 * delta);
    if (before.in_arc != m || after.in_arc != m || before.upper != upper[0] || after.upper != upper[1])
    {
      continue;
    }
    out.iota_minus = before.upper;
    out.iota_plus = after.upper;
    out.iota = out.iota_plus - out.iota_minus;
    out.delta = delta;
    return out;
  }
  throw Error(ErrorKind::IndexUnstable, "eigenvalue count in the arc never settled", k_star);
}

std::vector<Crossing> locate_crossings(const EigenphaseTrace &trace, const UnitaryLoop &loop, const Tolerances &tol)
{
  const auto &grid = trace.grid;
  const std::size_t points = grid.size() - 1;  // grid.back() == 2 pi duplicates grid[0]
  const std::size_t nb = trace.branch_count();

  std::vector<double> dist(points, kPi);
  for (std::size_t i = 0; i < points; ++i)
  {
    for (std::size_t j = 0; j < nb; ++j)
    {
      dist[i] = std::min(dist[i], std::abs(recenter(trace.branches[j][i])));
    }
  }

  // A run of grid points pinned to +1 means a continuum of solutions.
  for (std::size_t i = 0; i < points;)
  {
    if (dist[i] >= kDiscretenessLevel)
    {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < points && dist[j + 1] < kDiscretenessLevel)
    {
      ++j;
    }
    const double end = (j + 1 == points && dist[0] < kDiscretenessLevel) ? grid[points] : grid[j];
    if (end - grid[i] > kDiscretenessWidth)
    {
      throw Error(ErrorKind::DiscretenessViolated, "an eigenvalue stays at +1 over an interval", grid[i]);
    }
    i = j + 1;
  }

  std::vector<Candidate> candidates;
  for (std::size_t j = 0; j < nb; ++j)
  {
    const auto &theta = trace.branches[j];
    for (std::size_t i = 0; i < points; ++i)
    {
      const double a = theta[i];
      const double b = theta[i + 1];
      const double ra = std::floor(a / kTwoPi);
      const double rb = std::floor(b / kTwoPi);
      if (ra == rb)
      {
        continue;
      }
      const double level = kTwoPi * std::max(ra, rb);
      double lo = grid[i];
      double hi = grid[i + 1];
      const bool rising = b > a;
      for (int it = 0; it < 200; ++it)
      {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= 1e-3 * tol.bisection_k)
        {
          break;
        }
        const double v = follow_branch(loop, mid, grid[i], a, grid[i + 1], b) - level;
        if ((v < 0.0) == rising)
        {
          lo = mid;
        }
        else
        {
          hi = mid;
        }
      }
      candidates.push_back({wrap_2pi(0.5 * (lo + hi)), true});
    }
  }

  // Tangential touches: local minima of the branch-free distance to +1.
  auto transversal_between = [&](double lo, double hi) {
    for (const auto &c : candidates)
    {
      if (!c.transversal) continue;
      for (double shift : {-kTwoPi, 0.0, kTwoPi})
      {
        if (c.k + shift >= lo && c.k + shift <= hi) return true;
      }
    }
    return false;
  };
  const std::size_t transversal_count = candidates.size();
  for (std::size_t i = 0; i < points; ++i)
  {
    const std::size_t prev = (i + points - 1) % points;
    const std::size_t next = (i + 1) % points;
    if (!(dist[i] < tol.branch_step_cap) || dist[i] > dist[prev] || dist[i] > dist[next])
    {
      continue;
    }
    const double lo = i == 0 ? grid[points - 1] - kTwoPi : grid[i - 1];
    const double hi = grid[i + 1];
    if (transversal_count > 0 && transversal_between(lo, hi))
    {
      continue;
    }
    auto f = [&](double k) { return spectral_gap_to_one(loop, k); };
    double k = golden_minimum(f, lo, hi, 1e-3 * tol.bisection_k);
    if (f(k) < tol.eigen_cluster)
    {
      k = polish_touch(loop, k, f, tol);
    }
    if (f(k) < tol.eigen_cluster)
    {
      candidates.push_back({wrap_2pi(k), false});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate &l, const Candidate &r) { return l.k < r.k; });
  std::vector<Candidate> merged;
  for (const auto &c : candidates)
  {
    if (!merged.empty() && c.k - merged.back().k <= tol.merge_radius)
    {
      merged.back().transversal = merged.back().transversal || c.transversal;
      continue;
    }
    merged.push_back(c);
  }
  if (merged.size() > 1 && merged.front().k + kTwoPi - merged.back().k <= tol.merge_radius)
  {
    merged.front().transversal = merged.front().transversal || merged.back().transversal;
    merged.pop_back();
  }

  if (!merged.empty() && kTwoPi - merged.back().k <= tol.merge_radius)
  {
    merged.back().k = 0.0;
    std::rotate(merged.rbegin(), merged.rbegin() + 1, merged.rend());
  }

  std::vector<Crossing> out;
  std::vector<double> positions;
  for (const auto &c : merged)
  {
    const int m = count_unit_eigenvalues(loop.eval(c.k), tol.eigen_cluster).plus;
    if (m == 0)
    {
      if (c.transversal)
      {
        throw Error(ErrorKind::NotACrossing, "bracketed crossing has no eigenvalue +1", c.k);
      }
      continue;
    }
    Crossing x;
    x.k_star = c.k;
    x.z_star = std::polar(1.0, c.k);
    x.multiplicity = m;
    out.push_back(x);
    positions.push_back(c.k);
  }
  for (auto &x : out)
  {
    const LocalIndex li = local_index_at(loop, x.k_star, positions, tol);
    x.iota_minus = li.iota_minus;
    x.iota_plus = li.iota_plus;
    x.iota = li.iota;
    x.arc_half_angle = li.arc_half_angle;
    x.delta = li.delta;
  }
  return out;
}

int winding_number(const UnitaryLoop &loop, const Tolerances &tol)
{
  struct DetSample
  {
    double k;
    std::complex<double> det;
    double speed;
  };
  auto sample = [&](double k) {
    const Matrix u = loop.eval(k);
    DetSample s{k, u.determinant(), 0.0};
    if (loop.has_derivative())
    {
      s.speed = phase_speed(u, loop.derivative(k)).nuclear;
    }
    return s;
  };

  std::size_t count = 64;
  std::vector<DetSample> samples;
  auto uniform = [&](std::size_t c) {
    samples.clear();
    for (std::size_t i = 0; i <= c; ++i)
    {
      samples.push_back(sample(i == c ? kTwoPi : kTwoPi * static_cast<double>(i) / static_cast<double>(c)));
    }
  };
  uniform(count);
  double max_speed = 0.0;
  for (const auto &s : samples)
  {
    max_speed = std::max(max_speed, s.speed);
  }
  const auto needed = static_cast<std::size_t>(std::ceil(kTwoPi * max_speed / (0.5 * tol.det_step_cap)));
  if (needed > count)
  {
    uniform(needed);
  }

  double total = 0.0;
  auto accumulate = [&](auto &&self, const DetSample &a, const DetSample &b, int depth) -> void {
    const double step = std::arg(b.det / a.det);
    const bool refine = !(std::abs(step) < tol.det_step_cap) ||
                        (b.k - a.k) * std::max(a.speed, b.speed) >= tol.det_step_cap;
    if (refine)
    {
      if (depth >= kMaxBisections)
      {
        throw Error(ErrorKind::RefinementLimit, "determinant phase step does not shrink", a.k);
      }
      const DetSample mid = sample(0.5 * (a.k + b.k));
      self(self, a, mid, depth + 1);
      self(self, mid, b, depth + 1);
      return;
    }
    total += step;
  };
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
  {
    accumulate(accumulate, samples[i], samples[i + 1], 0);
  }

  const double turns = total / kTwoPi;
  const double alpha = std::round(turns);
  if (!(std::abs(turns - alpha) < tol.winding_residual))
  {
    std::ostringstream os;
    os.precision(12);
    os << "accumulated " << turns << " turns";
    throw Error(ErrorKind::WindingResidual, os.str());
  }
  return static_cast<int>(alpha);
}

IndexReport index_report(const UnitaryLoop &loop, const ReportOptions &options)
{
  const Tolerances &tol = options.tol;
  IndexReport r;
  r.kind = loop.kind();

  const EigenphaseTrace trace = trace_eigenphases(loop, options.initial_grid, tol);
  r.crossings = locate_crossings(trace, loop, tol);
  for (const auto &c : r.crossings)
  {
    r.q += c.iota;
    r.m += c.multiplicity;
  }
  r.alpha = winding_number(loop, tol);
  r.theorem_a_ok = r.alpha == r.q;

  const Matrix u0 = loop.eval(0.0);
  const Matrix upi = loop.eval(kPi);
  const SignCounts c0 = count_unit_eigenvalues(u0, tol.eigen_cluster);
  const SignCounts cpi = count_unit_eigenvalues(upi, tol.eigen_cluster);
  r.d0_plus = c0.plus;
  r.d0_minus = c0.minus;
  r.dpi_plus = cpi.plus;
  r.dpi_minus = cpi.minus;
  r.d0 = r.d0_plus - r.d0_minus;
  r.dpi = r.dpi_plus - r.dpi_minus;

  const Matrix sq = upi * upi - Matrix::Identity(upi.rows(), upi.cols());
  r.pi_involution_holds = sq.size() == 0 || sq.cwiseAbs().maxCoeff() <= 1e-8;

  if (!r.theorem_a_ok)
  {
    r.warnings.push_back("winding number " + std::to_string(r.alpha) + " differs from the sum of local indices " +
                         std::to_string(r.q));
  }

  const GraphContext *ctx = loop.graph_context();
  bool kramers = false;
  if (ctx)
  {
    r.vertex_order = ctx->graph.vertices();
    r.lower_bound = static_cast<long long>(ctx->total_length()) + ctx->total_winding();
    r.bound_ok = r.m >= *r.lower_bound;
    kramers = true;
    for (const auto &f : ctx->families)
    {
      check_kramers(f, 16);
    }
    if (!r.pi_involution_holds)
    {
      r.warnings.push_back("U(pi)^2 != I for this instance; d_pi is taken from eigenvalue counts");
    }
  }

  const int twice_n = r.m + r.d0 + r.dpi;
  if (!kramers)
  {
    r.warnings.push_back("band count N withheld: loop is not graph-backed with Kramers families");
  }
  else if (twice_n % 2 != 0)
  {
    if (options.band)
    {
      throw Error(ErrorKind::ParityViolation, "m + d0 + dpi = " + std::to_string(twice_n) + " is odd");
    }
    r.warnings.push_back("band count N withheld: m + d0 + dpi = " + std::to_string(twice_n) + " is odd");
  }
  else
  {
    r.N = twice_n / 2;
  }
  return r;
}

std::vector<SweepRow> long_arm_sweep(const DoubleGraph &graph, const FamilyMap &families,
                                     std::span<const Length> scales, const ReportOptions &options)
{
  std::vector<SweepRow> rows;
  for (Length t : scales)
  {
    if (t < 1)
    {
      throw Error(ErrorKind::Usage, "length scales must be positive integers");
    }
    ReportOptions opts = options;
    opts.band = false;
    const IndexReport r = index_report(assemble_graph_loop(graph.scaled(t), families), opts);
    rows.push_back({t, r.alpha, r.q, r.m, r.m - r.alpha});
  }
  return rows;
}

}  // namespace exciton
