#include "exciton/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "exciton/errors.hpp"
#include "exciton/parallel.hpp"

namespace exciton
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXcd spectrum(const Matrix &u)
{
  Eigen::ComplexEigenSolver<Matrix> es(u, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
  {
    throw Error(ErrorKind::EigensolverFailure, "oracle eigensolver did not converge");
  }
  return es.eigenvalues();
}

double distance_to_one(const UnitaryLoop &loop, double k)
{
  const Eigen::VectorXcd ev = spectrum(loop.eval(k));
  double best = std::numbers::pi;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
  {
    best = std::min(best, std::abs(std::arg(ev(i))));
  }
  return best;
}

int count_near_one(const UnitaryLoop &loop, double k, double eps)
{
  const Eigen::VectorXcd ev = spectrum(loop.eval(k));
  int m = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
  {
    if (std::abs(ev(i) - 1.0) < eps) ++m;
  }
  return m;
}

template <class F>
double golden(F f, double lo, double hi, double tol)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo);
  double b = lo + g * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  while (hi - lo > tol)
  {
    if (fa <= fb)
    {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    }
    else
    {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  return fa <= fb ? a : b;
}

double wrap(double k)
{
  double r = std::fmod(k, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// Distance of a real phase to the nearest multiple of 2 pi.
double lattice_distance(double theta)
{
  return std::abs(theta - kTwoPi * std::round(theta / kTwoPi));
}

void merge_into(std::vector<PredictedCrossing> &out, double k, int sign_minus, int sign_plus, double radius)
{
  for (auto &c : out)
  {
    const double d = std::abs(c.k_star - k);
    if (std::min(d, kTwoPi - d) <= radius)
    {
      c.multiplicity += 1;
      c.iota_minus += sign_minus;
      c.iota_plus += sign_plus;
      c.iota = c.iota_plus - c.iota_minus;
      return;
    }
  }
  out.push_back({k, 1, sign_plus, sign_minus, sign_plus - sign_minus});
}

// Zeros of exp(i theta(k)) - 1 for one scalar trigonometric phase, found by
// scanning theta on a grid fine enough that it moves less than 0.1 rad per
// step, bisecting lattice crossings and golden-refining near-touches.
void scan_scalar_phase(const TrigPhase &phase, std::vector<PredictedCrossing> &out)
{
  double bound = std::abs(phase.slope);
  for (std::size_t m = 0; m < phase.cosines.size(); ++m) bound += (m + 1) * std::abs(phase.cosines[m]);
  for (std::size_t m = 0; m < phase.sines.size(); ++m) bound += (m + 1) * std::abs(phase.sines[m]);
  const auto steps = std::max<std::size_t>(4096, static_cast<std::size_t>(std::ceil(kTwoPi * bound / 0.1)));
  const double h = kTwoPi / static_cast<double>(steps);
  const double side = 1e-5;

  std::vector<double> found;
  for (std::size_t i = 0; i < steps; ++i)
  {
    const double a = h * static_cast<double>(i);
    const double b = a + h;
    const double ta = phase(a);
    const double tb = phase(b);
    const double ra = std::floor(ta / kTwoPi);
    const double rb = std::floor(tb / kTwoPi);
    if (ra != rb)
    {
      const double level = kTwoPi * std::max(ra, rb);
      double lo = a, hi = b;
      const bool rising = tb > ta;
      for (int it = 0; it < 100 && hi - lo > 1e-14; ++it)
      {
        const double mid = 0.5 * (lo + hi);
        if (((phase(mid) - level) < 0.0) == rising) lo = mid; else hi = mid;
      }
      found.push_back(wrap(0.5 * (lo + hi)));
      continue;
    }
    // Interior minimum of the lattice distance: a possible tangential touch.
    const double tm = phase(a - h);
    if (lattice_distance(ta) <= lattice_distance(tm) && lattice_distance(ta) <= lattice_distance(tb) &&
        lattice_distance(ta) < 0.2)
    {
      const double k = golden([&](double x) { return lattice_distance(phase(x)); }, a - h, b, 1e-13);
      if (lattice_distance(phase(k)) < 1e-9)
      {
        found.push_back(wrap(k));
      }
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<double> unique;
  for (double k : found)
  {
    if (unique.empty() || k - unique.back() > 1e-8) unique.push_back(k);
  }
  if (unique.size() > 1 && unique.front() + kTwoPi - unique.back() <= 1e-8) unique.pop_back();

  for (double k : unique)
  {
    const double before = phase(k - side);
    const double after = phase(k + side);
    const double r = std::round(phase(k) / kTwoPi) * kTwoPi;
    merge_into(out, k, before - r > 0.0 ? 1 : 0, after - r > 0.0 ? 1 : 0, 1e-8);
  }
}

}  // namespace

std::vector<OracleCrossing> dense_scan_crossings(const UnitaryLoop &loop, std::size_t grid_size, const Tolerances &tol)
{
  if (grid_size < 10000)
  {
    throw Error(ErrorKind::Usage, "dense scan needs at least 10^4 grid points");
  }
  const double h = kTwoPi / static_cast<double>(grid_size);
  std::vector<double> dist(grid_size);
  parallel_for(grid_size, [&](std::size_t i) { dist[i] = distance_to_one(loop, h * static_cast<double>(i)); });

  std::vector<std::size_t> kept_index;
  std::vector<OracleCrossing> out;
  for (std::size_t i = 0; i < grid_size; ++i)
  {
    const std::size_t prev = (i + grid_size - 1) % grid_size;
    const std::size_t next = (i + 1) % grid_size;
    if (!(dist[i] < dist[prev]) || dist[i] > dist[next])
    {
      continue;
    }
    // A zero between grid points leaves a V or U shaped dip whose depth is
    // at most the rise to a neighbour; fast phases make that rise large, so
    // the cutoff scales with it instead of being fixed.
    const double rise = std::max(dist[prev], dist[next]) - dist[i];
    if (!(dist[i] <= rise + 1e-3))
    {
      continue;
    }
    const double k = golden([&](double x) { return distance_to_one(loop, x); }, h * (static_cast<double>(i) - 1.0),
                            h * (static_cast<double>(i) + 1.0), 1e-3 * tol.bisection_k);
    if (!(distance_to_one(loop, k) < tol.eigen_cluster))
    {
      continue;
    }
    const int m = count_near_one(loop, k, tol.eigen_cluster);
    if (m == 0)
    {
      continue;
    }
    kept_index.push_back(i);
    double kw = wrap(k);
    if (kTwoPi - kw <= tol.merge_radius)
    {
      kw = 0.0;
    }
    out.push_back({kw, m, OracleCrossing::Source::DenseScan});
  }
  for (std::size_t a = 0; a < kept_index.size(); ++a)
  {
    const std::size_t b = (a + 1) % kept_index.size();
    if (b == a) break;
    const std::size_t gap = (kept_index[b] + grid_size - kept_index[a]) % grid_size;
    if (gap == 1)
    {
      throw Error(ErrorKind::GridTooCoarse, "two crossings on adjacent grid points",
                  h * static_cast<double>(kept_index[a]));
    }
  }
  std::sort(out.begin(), out.end(), [](const OracleCrossing &l, const OracleCrossing &r) { return l.k_star < r.k_star; });
  return out;
}

DiagonalPrediction diagonal_model_predict(const DiagonalModel &model, bool exact)
{
  DiagonalPrediction p;
  for (const auto &phase : model.phases)
  {
    p.alpha += phase.slope;
  }
  for (const auto &phase : model.phases)
  {
    if (!phase.is_linear())
    {
      if (exact)
      {
        throw Error(ErrorKind::UnsupportedPhase, "closed-form prediction needs linear phases");
      }
      scan_scalar_phase(phase, p.crossings);
      continue;
    }
    const double offset = phase.offset;
    if (phase.slope == 0)
    {
      if (lattice_distance(offset) < 1e-15)
      {
        throw Error(ErrorKind::DiscretenessViolated, "constant branch at +1");
      }
      continue;
    }
    const int n = phase.slope;
    const int sign = n > 0 ? 1 : -1;
    // k = (2 pi r - offset) / n in [0, 2 pi)
    const auto r_lo = static_cast<long long>(std::floor(std::min(offset, offset + kTwoPi * n) / kTwoPi)) - 1;
    const auto r_hi = static_cast<long long>(std::ceil(std::max(offset, offset + kTwoPi * n) / kTwoPi)) + 1;
    for (long long r = r_lo; r <= r_hi; ++r)
    {
      const double k = (kTwoPi * static_cast<double>(r) - offset) / static_cast<double>(n);
      if (k < -1e-14 || k >= kTwoPi - 1e-14)
      {
        continue;
      }
      merge_into(p.crossings, std::max(0.0, k), sign < 0 ? 1 : 0, sign > 0 ? 1 : 0, 1e-12);
    }
  }
  std::sort(p.crossings.begin(), p.crossings.end(),
            [](const PredictedCrossing &l, const PredictedCrossing &r) { return l.k_star < r.k_star; });
  return p;
}

namespace
{

Instance draw_instance(std::mt19937_64 &rng, const InstanceLimits &limits);

// det(U(k) - I) vanishing at several unrelated k means a continuum of
// solutions, which the discreteness hypothesis excludes.
bool has_continuum(const Instance &inst)
{
  const UnitaryLoop loop = inst.loop();
  const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(loop.dimension()),
                                     static_cast<Eigen::Index>(loop.dimension()));
  for (double k : {0.3183098861837907, 1.7320508075688772, 4.123105625617661})
  {
    if (std::abs((loop.eval(k) - id).determinant()) > 1e-10)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

Instance random_instance(std::uint64_t seed, const InstanceLimits &limits)
{
  std::mt19937_64 rng(seed);
  for (;;)
  {
    Instance inst = draw_instance(rng, limits);
    if (!has_continuum(inst))
    {
      return inst;
    }
  }
}

namespace
{

Instance draw_instance(std::mt19937_64 &rng, const InstanceLimits &limits)
{
  auto uniform_int = [&](long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng); };
  auto uniform_real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  Instance inst;
  const auto nv = static_cast<std::size_t>(
      uniform_int(static_cast<long long>(limits.min_vertices), static_cast<long long>(limits.max_vertices)));
  for (std::size_t v = 0; v < nv; ++v)
  {
    inst.graph.vertices.push_back("v" + std::to_string(v));
  }
  std::vector<std::vector<bool>> adjacent(nv, std::vector<bool>(nv, false));
  auto add_edge = [&](std::size_t a, std::size_t b) {
    adjacent[a][b] = adjacent[b][a] = true;
    inst.graph.edges.push_back({inst.graph.vertices[a], inst.graph.vertices[b], uniform_int(1, limits.max_length)});
  };
  for (std::size_t v = 1; v < nv; ++v)
  {
    add_edge(static_cast<std::size_t>(uniform_int(0, static_cast<long long>(v) - 1)), v);
  }
  for (std::size_t a = 0; a < nv; ++a)
  {
    for (std::size_t b = a + 1; b < nv; ++b)
    {
      if (!adjacent[a][b] && uniform_real(0.0, 1.0) < limits.extra_edge_probability)
      {
        add_edge(a, b);
      }
    }
  }

  std::vector<std::size_t> degree(nv, 0);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b)
      if (adjacent[a][b]) ++degree[a];

  for (std::size_t v = 0; v < nv; ++v)
  {
    const auto d = static_cast<Eigen::Index>(degree[v]);
    const Matrix basis = random_unitary(d, rng);
    if (uniform_real(0.0, 1.0) < limits.constant_probability)
    {
      Eigen::VectorXcd signs(d);
      for (Eigen::Index j = 0; j < d; ++j)
      {
        signs(j) = uniform_int(0, 1) ? 1.0 : -1.0;
      }
      Matrix c = basis * signs.asDiagonal() * basis.adjoint();
      c = (0.5 * (c + c.adjoint())).eval();
      inst.families.emplace(inst.graph.vertices[v], ScatteringFamily::constant_involution(std::move(c)));
      continue;
    }
    std::vector<ChannelPhase> phases;
    for (Eigen::Index j = 0; j < d; ++j)
    {
      ChannelPhase p;
      p.slope = static_cast<int>(uniform_int(-limits.max_slope, limits.max_slope));
      p.constant = uniform_int(0, 1) ? PhaseConstant::Pi : PhaseConstant::Zero;
      const auto terms = static_cast<std::size_t>(uniform_int(0, static_cast<long long>(limits.max_sines)));
      for (std::size_t m = 0; m < terms; ++m)
      {
        p.sines.push_back(uniform_real(-limits.max_sine, limits.max_sine));
      }
      phases.push_back(std::move(p));
    }
    inst.families.emplace(inst.graph.vertices[v], ScatteringFamily::conjugated_phase(basis, std::move(phases)));
  }
  return inst;
}

}  // namespace

std::optional<std::string> compare_crossings(std::span<const Crossing> located, std::span<const OracleCrossing> oracle,
                                             double k_tolerance)
{
  if (located.size() != oracle.size())
  {
    return "count differs: " + std::to_string(located.size()) + " located vs " + std::to_string(oracle.size()) +
           " from the oracle";
  }
  std::vector<bool> used(oracle.size(), false);
  for (const auto &c : located)
  {
    std::size_t best = oracle.size();
    double best_d = k_tolerance;
    for (std::size_t j = 0; j < oracle.size(); ++j)
    {
      const double d = std::abs(c.k_star - oracle[j].k_star);
      const double pd = std::min(d, kTwoPi - d);
      if (!used[j] && pd <= best_d)
      {
        best_d = pd;
        best = j;
      }
    }
    if (best == oracle.size())
    {
      return "no oracle crossing within " + std::to_string(k_tolerance) + " of k=" + std::to_string(c.k_star);
    }
    used[best] = true;
    if (oracle[best].multiplicity != c.multiplicity)
    {
      return "multiplicity differs at k=" + std::to_string(c.k_star) + ": " + std::to_string(c.multiplicity) +
             " vs " + std::to_string(oracle[best].multiplicity);
    }
  }
  return std::nullopt;
}

}  // namespace exciton
