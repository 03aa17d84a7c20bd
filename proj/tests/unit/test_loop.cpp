#include <random>

#include "exciton/loop.hpp"
#include "exciton/oracle.hpp"
#include "support.hpp"

using namespace exciton;
using namespace std::complex_literals;
using support::max_abs;
using support::pi;
using support::require_error;

namespace
{

ScatteringFamily minus_one()
{
  return ScatteringFamily::constant_involution(-Matrix::Identity(1, 1));
}

DoubleGraph path_graph(Length len)
{
  return DoubleGraph::build({{"a", "b"}, {{"a", "b", len}}});
}

UnitaryLoop path_loop()
{
  return assemble_graph_loop(path_graph(3), {{"a", minus_one()}, {"b", minus_one()}});
}

UnitaryLoop star_loop()
{
  const Matrix kirchhoff = (2.0 / 3.0) * Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  const auto leaf = ScatteringFamily::constant_involution(Matrix::Identity(1, 1));
  const auto g = DoubleGraph::build({{"c", "v1", "v2", "v3"}, {{"c", "v1", 1}, {"c", "v2", 2}, {"c", "v3", 3}}});
  return assemble_graph_loop(g, {{"c", ScatteringFamily::constant_involution(kirchhoff)},
                                 {"v1", leaf},
                                 {"v2", leaf},
                                 {"v3", leaf}});
}

// Greedy multiset match of the spectra of a and b (|a| = |b|).
double spectrum_mismatch(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
{
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
  {
    Eigen::Index best = -1;
    double bd = 1e300;
    for (Eigen::Index j = 0; j < b.size(); ++j)
    {
      if (!used[j] && std::abs(a(i) - b(j)) < bd)
      {
        bd = std::abs(a(i) - b(j));
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

Eigen::VectorXcd eigenvalues(const Matrix &m)
{
  return Eigen::ComplexEigenSolver<Matrix>(m, false).eigenvalues();
}

}  // namespace

TEST_CASE("path molecule assembles to a scalar multiple of the identity")
{
  const auto loop = path_loop();
  CHECK(loop.kind() == LoopKind::GraphBacked);
  REQUIRE(loop.dimension() == 2);
  for (double k : {0.0, 0.3, pi / 3, 2.0, 5.9})
  {
    const Matrix expect = -std::exp(3i * k) * Matrix::Identity(2, 2);
    CHECK(max_abs(loop.eval(k) - expect) < 1e-14);
  }
  CHECK(max_abs(loop.eval(pi / 3) - Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("k = 0 gives the bare scattering block sum")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    const auto inst = random_instance(seed);
    const auto loop = inst.loop();
    const auto *ctx = loop.graph_context();
    REQUIRE(ctx != nullptr);
    CHECK(max_abs(loop.eval(0.0) - block_sum(ctx->graph, ctx->families, 0.0)) < 1e-14);
  }
}

TEST_CASE("star with constant scattering")
{
  const auto loop = star_loop();
  const auto *ctx = loop.graph_context();
  const Matrix g0 = block_sum(ctx->graph, ctx->families, 0.0);
  // Block placement: the centre's three edges come first.
  CHECK(std::abs(g0(0, 1) - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(g0(3, 3) - 1.0) < 1e-15);
  CHECK(std::abs(g0(0, 3)) == 0.0);
  for (double k : {0.2, 1.7, 4.4})
  {
    Eigen::VectorXcd phase(6);
    for (std::size_t i = 0; i < 6; ++i)
    {
      phase(static_cast<Eigen::Index>(i)) = std::exp(1i * (k * static_cast<double>(ctx->graph.edge(i).length)));
    }
    CHECK(max_abs(loop.eval(k) - phase.asDiagonal() * g0) < 1e-14);
    // Constant families: U' = i Lhat U.
    Eigen::VectorXcd lhat(6);
    for (std::size_t i = 0; i < 6; ++i) lhat(static_cast<Eigen::Index>(i)) = static_cast<double>(ctx->graph.edge(i).length);
    CHECK(max_abs(loop.derivative(k) - 1i * (lhat.asDiagonal() * loop.eval(k))) < 1e-13);
  }
}

TEST_CASE("diagonal model at pi")
{
  const auto loop = monomial_model({2, 3}).loop();
  CHECK(loop.kind() == LoopKind::DiagonalModel);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  expect(1, 1) = -1.0;
  CHECK(max_abs(loop.eval(pi) - expect) < 1e-14);
}

TEST_CASE("graph loop contract on random instances")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> kdist(0.0, 2 * pi);
  for (std::uint64_t seed = 0; seed < 30; ++seed)
  {
    CAPTURE(seed);
    const auto loop = random_instance(seed).loop();
    const auto *ctx = loop.graph_context();
    const auto n = static_cast<Eigen::Index>(loop.dimension());
    for (int i = 0; i < 32; ++i)
    {
      const double k = kdist(rng);
      const Matrix u = loop.eval(k);
      CHECK(max_abs(u * u.adjoint() - Matrix::Identity(n, n)) <= 1e-10);
      CHECK(max_abs(loop.eval(k + 2 * pi) - u) <= 1e-10);
      if (i < 16)
      {
        const Matrix fd = support::central_difference([&](double x) { return loop.eval(x); }, k);
        CHECK(max_abs(fd - loop.derivative(k)) <= 1e-7);
        // Time reversal: spectrum of U(-k) = conjugated spectrum of U(k).
        CHECK(spectrum_mismatch(eigenvalues(loop.eval(-k)), eigenvalues(u).conjugate()) <= 1e-8);
      }
      // det U(k) = exp(i k sum L) det Gamma_0(k)
      const std::complex<double> lhs = u.determinant();
      const std::complex<double> rhs = std::exp(1i * (k * static_cast<double>(ctx->total_length()))) *
                                       block_sum(ctx->graph, ctx->families, k).determinant();
      CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
  }
}

TEST_CASE("assembly errors")
{
  const auto g = path_graph(1);
  require_error([&] { assemble_graph_loop(g, {{"a", minus_one()}}); }, ErrorKind::MissingFamily);
  const auto two = ScatteringFamily::constant_involution(Matrix::Identity(2, 2));
  require_error([&] { assemble_graph_loop(g, {{"a", minus_one()}, {"b", two}}); }, ErrorKind::DegreeMismatch);
}

TEST_CASE("conjugated loop")
{
  std::mt19937_64 rng(3);
  const auto loop = random_instance(4).loop();
  const auto n = static_cast<Eigen::Index>(loop.dimension());
  const Matrix v = random_unitary(n, rng);
  const auto w = loop.conjugated(v);
  CHECK(max_abs(w.eval(1.1) - v * loop.eval(1.1) * v.adjoint()) < 1e-13);
  CHECK(max_abs(w.derivative(1.1) - v * loop.derivative(1.1) * v.adjoint()) < 1e-13);
}

TEST_CASE("exciton scattering residuals")
{
  const auto g = path_graph(3);
  const FamilyMap fam{{"a", minus_one()}, {"b", minus_one()}};

  const auto zero = es_residual(g, fam, 0.4, Vector::Zero(2));
  CHECK(zero.propagation == 0.0);
  CHECK(zero.scattering == 0.0);

  Vector psi(2);
  psi << 1.0, -1.0;
  const auto sol = es_residual(g, fam, pi / 3, psi);
  CHECK(sol.propagation < 1e-14);
  CHECK(sol.scattering < 1e-14);

  // k = 0.5 is not a crossing (solutions need exp(3ik) = -1).
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 10; ++i)
  {
    Vector r(2);
    r << std::complex<double>(nd(rng), nd(rng)), std::complex<double>(nd(rng), nd(rng));
    const auto res = es_residual(g, fam, 0.5, r);
    CHECK(res.propagation > 0.0);
    CHECK(res.scattering > 0.0);
  }

  require_error([&] { es_residual(g, fam, 0.0, Vector::Zero(3)); }, ErrorKind::DimensionMismatch);
}
