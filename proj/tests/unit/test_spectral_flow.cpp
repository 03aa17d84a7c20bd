#include <algorithm>
#include <cstdlib>
#include <random>

#include "exciton/instance_io.hpp"
#include "exciton/oracle.hpp"
#include "exciton/spectral_flow.hpp"
#include "support.hpp"

using namespace exciton;
using support::periodic_distance;
using support::pi;
using support::require_error;

namespace
{

const auto kMinusOne = ScatteringFamily::constant_involution(-Matrix::Identity(1, 1));

UnitaryLoop path_loop(Length len, const ScatteringFamily &a, const ScatteringFamily &b)
{
  return assemble_graph_loop(DoubleGraph::build({{"a", "b"}, {{"a", "b", len}}}), {{"a", a}, {"b", b}});
}

// exp(i (1 - cos k)): touches +1 at k = 0 without crossing.
UnitaryLoop touching_loop()
{
  DiagonalModel m;
  m.phases.push_back({0, 1.0, {-1.0}, {}});
  return m.loop();
}

}  // namespace

TEST_CASE("path molecule crossings")
{
  const auto report = index_report(path_loop(3, kMinusOne, kMinusOne));
  // -exp(3ik) = 1  <=>  k = (2r + 1) pi / 3; the eigenvalue is double.
  REQUIRE(report.crossings.size() == 3);
  for (int r = 0; r < 3; ++r)
  {
    const auto &c = report.crossings[static_cast<std::size_t>(r)];
    CHECK(std::abs(c.k_star - (2 * r + 1) * pi / 3) < 1e-8);
    CHECK(c.multiplicity == 2);
    CHECK(c.iota == 2);
  }
  CHECK(report.alpha == 6);
  CHECK(report.m == 6);
  CHECK(report.q == 6);
  CHECK(report.d0 == -2);
  CHECK(report.dpi == 2);
  CHECK(report.N == 3);
  CHECK(report.lower_bound == 6);
  CHECK(report.theorem_a_ok);
  CHECK(report.bound_ok == true);
}

TEST_CASE("diag(z^2, z^3)")
{
  const auto report = index_report(monomial_model({2, 3}).loop());
  // z^2 = 1 at 0, pi; z^3 = 1 at 0, 2pi/3, 4pi/3.
  const std::vector<std::pair<double, int>> expect{{0.0, 2}, {2 * pi / 3, 1}, {pi, 1}, {4 * pi / 3, 1}};
  REQUIRE(report.crossings.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
  {
    CHECK(periodic_distance(report.crossings[i].k_star, expect[i].first) < 1e-8);
    CHECK(report.crossings[i].multiplicity == expect[i].second);
    CHECK(report.crossings[i].iota == expect[i].second);
  }
  CHECK(report.alpha == 5);
  CHECK(report.q == 5);
  CHECK(report.m == 5);
  CHECK_FALSE(report.N.has_value());
}

TEST_CASE("tangential touch carries zero index")
{
  const auto loop = touching_loop();
  const auto report = index_report(loop);
  REQUIRE(report.crossings.size() == 1);
  CHECK(periodic_distance(report.crossings[0].k_star, 0.0) < 1e-6);
  CHECK(report.crossings[0].multiplicity == 1);
  CHECK(report.crossings[0].iota == 0);
  CHECK(report.alpha == 0);
  CHECK(report.m == 1);
  CHECK(report.theorem_a_ok);
}

TEST_CASE("trace covers the circle and sums to the winding")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    const auto loop = random_instance(seed).loop();
    const auto trace = trace_eigenphases(loop);
    CHECK(trace.grid.front() == 0.0);
    CHECK(trace.grid.back() == doctest::Approx(2 * pi));
    CHECK(trace.branch_count() == loop.dimension());
    for (std::size_t i = 1; i < trace.grid.size(); ++i)
    {
      for (const auto &b : trace.branches) CHECK(std::abs(b[i] - b[i - 1]) < pi / 4);
    }
    CHECK(trace.total_increment() / (2 * pi) == doctest::Approx(winding_number(loop)).epsilon(1e-9));
  }
}

TEST_CASE("winding of closed-form loops")
{
  CHECK(winding_number(monomial_model({2, 3}).loop()) == 5);
  CHECK(winding_number(monomial_model({-4, 1, 0, 7}).loop()) == 4);
  DiagonalModel wiggly;
  wiggly.phases.push_back({-3, 0.2, {0.5}, {2.0, -1.0}});
  CHECK(winding_number(wiggly.loop()) == -3);
}

TEST_CASE("index relations on random instances")
{
  for (std::uint64_t seed = 100; seed < 140; ++seed)
  {
    CAPTURE(seed);
    const auto report = index_report(random_instance(seed).loop());
    int sum_iota = 0;
    for (const auto &c : report.crossings)
    {
      CHECK(c.multiplicity >= 1);
      CHECK(c.multiplicity >= std::abs(c.iota));
      CHECK(c.k_star >= 0.0);
      CHECK(c.k_star < 2 * pi);
      sum_iota += c.iota;
    }
    CHECK(report.alpha == sum_iota);
    CHECK(report.theorem_a_ok);
    CHECK(report.m >= report.q);
    REQUIRE(report.lower_bound.has_value());
    CHECK(report.m >= *report.lower_bound);
    for (std::size_t i = 1; i < report.crossings.size(); ++i)
    {
      CHECK(report.crossings[i - 1].k_star < report.crossings[i].k_star);
    }
  }
}

TEST_CASE("constant scattering gives monotone flow")
{
  InstanceLimits limits;
  limits.constant_probability = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    const auto report = index_report(random_instance(seed, limits).loop());
    for (const auto &c : report.crossings) CHECK(c.iota == c.multiplicity);
    CHECK(report.m == report.q);
    CHECK(report.q == report.alpha);
  }
}

TEST_CASE("crossings pair up under time reversal")
{
  for (std::uint64_t seed = 200; seed < 220; ++seed)
  {
    const auto loop = random_instance(seed).loop();
    const auto report = index_report(loop);
    for (const auto &c : report.crossings)
    {
      if (periodic_distance(c.k_star, 0.0) < 1e-6 || std::abs(c.k_star - pi) < 1e-6) continue;
      const auto partner = std::find_if(report.crossings.begin(), report.crossings.end(), [&](const Crossing &o) {
        return periodic_distance(o.k_star, 2 * pi - c.k_star) < 1e-6;
      });
      REQUIRE(partner != report.crossings.end());
      CHECK(partner->multiplicity == c.multiplicity);
      CHECK(multiplicity_at(loop, 2 * pi - c.k_star) == c.multiplicity);
    }
  }
}

TEST_CASE("report is invariant under constant conjugation")
{
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 300; seed < 310; ++seed)
  {
    const auto loop = random_instance(seed).loop();
    const auto v = random_unitary(static_cast<Eigen::Index>(loop.dimension()), rng);
    const auto a = index_report(loop);
    const auto b = index_report(loop.conjugated(v));
    CHECK(a.alpha == b.alpha);
    CHECK(a.m == b.m);
    CHECK(a.q == b.q);
    CHECK(a.d0 == b.d0);
    CHECK(a.dpi == b.dpi);
    REQUIRE(a.crossings.size() == b.crossings.size());
    for (std::size_t i = 0; i < a.crossings.size(); ++i)
    {
      CHECK(std::abs(a.crossings[i].k_star - b.crossings[i].k_star) <= 1e-8);
      CHECK(a.crossings[i].multiplicity == b.crossings[i].multiplicity);
      CHECK(a.crossings[i].iota == b.crossings[i].iota);
    }
  }
}

TEST_CASE("reports do not depend on the thread count")
{
  const auto loop = random_instance(17).loop();
  ::setenv("EXCITON_INDEX_THREADS", "1", 1);
  const auto serial = to_json(index_report(loop)).dump();
  ::setenv("EXCITON_INDEX_THREADS", "4", 1);
  const auto threaded = to_json(index_report(loop)).dump();
  ::unsetenv("EXCITON_INDEX_THREADS");
  CHECK(serial == threaded);
}

TEST_CASE("parity of the band count")
{
  // Odd total winding: exp(ik) at a, -1 at b, L = 1.
  const auto odd = path_loop(1, ScatteringFamily::scalar_phase({1, PhaseConstant::Zero, {}}), kMinusOne);
  const auto report = index_report(odd);
  CHECK((report.m + report.d0 + report.dpi) % 2 != 0);
  CHECK_FALSE(report.N.has_value());
  CHECK_FALSE(report.warnings.empty());
  ReportOptions band;
  band.band = true;
  require_error([&] { index_report(odd, band); }, ErrorKind::ParityViolation);
}

TEST_CASE("pipeline errors")
{
  const auto path = path_loop(3, kMinusOne, kMinusOne);
  require_error([&] { multiplicity_at(path, 0.5); }, ErrorKind::NotACrossing);
  const std::vector<double> none;
  require_error([&] { local_index_at(path, 0.5, none); }, ErrorKind::NotACrossing);
  require_error([&] { trace_eigenphases(path, 8); }, ErrorKind::Usage);
  // exp(ik) exp(-ik) = 1 identically: the solution set is the whole circle.
  const auto flat = path_loop(1, ScatteringFamily::scalar_phase({-1, PhaseConstant::Zero, {}}),
                              ScatteringFamily::scalar_phase({-1, PhaseConstant::Zero, {}}));
  require_error([&] { index_report(flat); }, ErrorKind::DiscretenessViolated);
}
