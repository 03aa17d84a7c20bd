#include <sstream>

#include "exciton/instance_io.hpp"
#include "exciton/oracle.hpp"
#include "support.hpp"

using namespace exciton;
using nlohmann::json;
using support::require_error;

namespace
{

json path_doc()
{
  return json::parse(R"({
    "vertices": ["a", "b"],
    "edges": [{"ends": ["a", "b"], "length": 3}],
    "scattering": {
      "a": {"type": "constant_involution", "matrix": [[[-1, 0]]]},
      "b": {"type": "conjugated_phase", "V": [[[1, 0]]], "phases": [{"n": 2, "c": "pi", "sin": [0.5]}]}
    }
  })");
}

std::string parse_message(const json &doc)
{
  try
  {
    parse_instance(doc);
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

bool all_finite(const json &j)
{
  if (j.is_number_float()) return std::isfinite(j.get<double>());
  if (j.is_structured())
  {
    for (const auto &v : j) if (!all_finite(v)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parse a small instance")
{
  const auto inst = parse_instance(path_doc());
  CHECK(inst.graph.vertices == std::vector<std::string>{"a", "b"});
  CHECK(inst.graph.edges.at(0).length == 3);
  const auto &b = inst.families.at("b");
  REQUIRE(b.as_conjugated() != nullptr);
  CHECK(b.as_conjugated()->phases.at(0).constant == PhaseConstant::Pi);
  CHECK(b.winding() == 2);
  CHECK_FALSE(inst.tolerances.has_value());
}

TEST_CASE("round trip")
{
  CHECK(parse_instance(to_json(parse_instance(path_doc()))) == parse_instance(path_doc()));
  for (std::uint64_t seed = 0; seed < 30; ++seed)
  {
    const auto inst = random_instance(seed);
    const auto again = parse_instance(json::parse(to_json(inst).dump()));
    CHECK(again == inst);
  }
  auto doc = path_doc();
  doc["tolerances"] = {{"delta_cap", 5e-4}};
  const auto inst = parse_instance(doc);
  REQUIRE(inst.tolerances.has_value());
  CHECK(inst.effective_tolerances().delta_cap == 5e-4);
  CHECK(inst.effective_tolerances().eigen_cluster == Tolerances{}.eigen_cluster);
  CHECK(parse_instance(to_json(inst)) == inst);
}

TEST_CASE("parse errors name the field")
{
  auto doc = path_doc();
  doc["scattering"]["b"]["phases"][0]["c"] = "pi/2";
  CHECK(parse_message(doc).find("scattering.b.phases[0].c") != std::string::npos);

  doc = path_doc();
  doc["edges"][0]["length"] = 2.5;
  CHECK(parse_message(doc).find("length") != std::string::npos);

  doc = path_doc();
  doc.erase("vertices");
  CHECK(parse_message(doc).find("vertices") != std::string::npos);

  doc = path_doc();
  doc["tolerances"] = {{"no_such_tolerance", 1.0}};
  CHECK(parse_message(doc).find("no_such_tolerance") != std::string::npos);

  // Structural problems keep their own kinds.
  doc = path_doc();
  doc["edges"][0]["ends"] = {"a", "a"};
  require_error([&] { parse_instance(doc).loop(); }, ErrorKind::SelfLoop);

  doc = path_doc();
  doc["scattering"]["a"]["matrix"] = {{{0.5, 0}}};
  require_error([&] { parse_instance(doc); }, ErrorKind::InvalidFamily);
}

TEST_CASE("report serialization")
{
  const auto report = index_report(parse_instance(path_doc()).loop());
  const json j = to_json(report);
  for (const char *key : {"alpha", "q", "m", "d0", "dpi", "d0_plus", "d0_minus", "dpi_plus", "dpi_minus"})
  {
    CAPTURE(key);
    CHECK(j.at(key).is_number_integer());
  }
  for (const auto &c : j.at("crossings"))
  {
    CHECK(c.at("multiplicity").is_number_integer());
    CHECK(c.at("iota").is_number_integer());
  }
  CHECK(j.at("lower_bound").is_number_integer());
  CHECK(j.at("vertex_order") == json{"a", "b"});
  CHECK(all_finite(j));
}

TEST_CASE("csv writers")
{
  const auto loop = parse_instance(path_doc()).loop();
  std::ostringstream trace;
  write_trace_csv(trace, trace_eigenphases(loop));
  const auto text = trace.str();
  CHECK(text.rfind("k,branch_id,theta_unwrapped\n", 0) == 0);

  std::ostringstream sweep;
  const std::vector<SweepRow> rows{{1, 6, 6, 6, 0}, {2, 12, 12, 14, 2}};
  write_sweep_csv(sweep, rows);
  CHECK(sweep.str() == "t,alpha,q,m,gap\n1,6,6,6,0\n2,12,12,14,2\n");
}
