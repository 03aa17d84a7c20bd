#include "exciton/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>

#include "exciton/errors.hpp"

namespace exciton
{

using nlohmann::json;

namespace
{

[[noreturn]] void fail(const std::string &field, const std::string &what)
{
  throw Error(ErrorKind::Parse, field + ": " + what);
}

const json &member(const json &obj, const std::string &key, const std::string &field)
{
  if (!obj.is_object())
  {
    fail(field, "expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end())
  {
    fail(field + "." + key, "missing");
  }
  return *it;
}

double real_number(const json &v, const std::string &field)
{
  if (!v.is_number())
  {
    fail(field, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x))
  {
    fail(field, "non-finite value");
  }
  return x;
}

long long integer(const json &v, const std::string &field)
{
  if (!v.is_number_integer())
  {
    fail(field, "expected an integer");
  }
  return v.get<long long>();
}

Matrix parse_matrix(const json &v, const std::string &field)
{
  if (!v.is_array() || v.empty())
  {
    fail(field, "expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(v.size());
  Matrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i)
  {
    const json &row = v[static_cast<std::size_t>(i)];
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
    {
      fail(rf, "expected a row of " + std::to_string(rows) + " complex entries");
    }
    for (Eigen::Index j = 0; j < rows; ++j)
    {
      const json &z = row[static_cast<std::size_t>(j)];
      const std::string zf = rf + "[" + std::to_string(j) + "]";
      if (!z.is_array() || z.size() != 2)
      {
        fail(zf, "expected [re, im]");
      }
      m(i, j) = {real_number(z[0], zf + "[0]"), real_number(z[1], zf + "[1]")};
    }
  }
  return m;
}

json matrix_json(const Matrix &m)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ScatteringFamily parse_family(const json &v, const std::string &field)
{
  const json &type = member(v, "type", field);
  if (type == "constant_involution")
  {
    return ScatteringFamily::constant_involution(parse_matrix(member(v, "matrix", field), field + ".matrix"));
  }
  if (type != "conjugated_phase")
  {
    fail(field + ".type", "expected \"constant_involution\" or \"conjugated_phase\", got " + type.dump());
  }
  Matrix basis = parse_matrix(member(v, "V", field), field + ".V");
  const json &phases = member(v, "phases", field);
  if (!phases.is_array())
  {
    fail(field + ".phases", "expected an array");
  }
  std::vector<ChannelPhase> parsed;
  for (std::size_t j = 0; j < phases.size(); ++j)
  {
    const std::string pf = field + ".phases[" + std::to_string(j) + "]";
    const json &p = phases[j];
    ChannelPhase ch;
    const long long n = integer(member(p, "n", pf), pf + ".n");
    if (n < -1'000'000 || n > 1'000'000)
    {
      fail(pf + ".n", "slope out of range");
    }
    ch.slope = static_cast<int>(n);
    const json &c = member(p, "c", pf);
    if (c == "0")
    {
      ch.constant = PhaseConstant::Zero;
    }
    else if (c == "pi")
    {
      ch.constant = PhaseConstant::Pi;
    }
    else
    {
      fail(pf + ".c", "expected \"0\" or \"pi\", got " + c.dump());
    }
    if (auto it = p.find("sin"); it != p.end())
    {
      if (!it->is_array())
      {
        fail(pf + ".sin", "expected an array");
      }
      for (std::size_t m = 0; m < it->size(); ++m)
      {
        ch.sines.push_back(real_number((*it)[m], pf + ".sin[" + std::to_string(m) + "]"));
      }
    }
    parsed.push_back(std::move(ch));
  }
  return ScatteringFamily::conjugated_phase(std::move(basis), std::move(parsed));
}

Tolerances parse_tolerances(const json &v)
{
  if (!v.is_object())
  {
    fail("tolerances", "expected an object");
  }
  Tolerances tol;
  const std::pair<const char *, double *> fields[] = {
      {"eigen_cluster", &tol.eigen_cluster}, {"bisection_k", &tol.bisection_k},
      {"branch_step_cap", &tol.branch_step_cap}, {"det_step_cap", &tol.det_step_cap},
      {"merge_radius", &tol.merge_radius},   {"delta_cap", &tol.delta_cap},
      {"winding_residual", &tol.winding_residual}, {"unitarity", &tol.unitarity},
      {"eigen_residual", &tol.eigen_residual},
  };
  for (const auto &[key, value] : v.items())
  {
    bool known = false;
    for (const auto &[name, slot] : fields)
    {
      if (key == name)
      {
        *slot = real_number(value, "tolerances." + key);
        if (!(*slot > 0.0))
        {
          fail("tolerances." + key, "must be positive");
        }
        known = true;
      }
    }
    if (!known)
    {
      fail("tolerances." + key, "unknown tolerance");
    }
  }
  return tol;
}

void write_double(std::ostream &out, double x)
{
  out << std::setprecision(17) << x;
}

}  // namespace

UnitaryLoop Instance::loop() const
{
  return assemble_graph_loop(DoubleGraph::build(graph), families);
}

Instance parse_instance(const json &doc)
{
  Instance inst;
  const json &vertices = member(doc, "vertices", "instance");
  if (!vertices.is_array())
  {
    fail("vertices", "expected an array of strings");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i)
  {
    if (!vertices[i].is_string())
    {
      fail("vertices[" + std::to_string(i) + "]", "expected a string");
    }
    inst.graph.vertices.push_back(vertices[i].get<std::string>());
  }
  const json &edges = member(doc, "edges", "instance");
  if (!edges.is_array())
  {
    fail("edges", "expected an array");
  }
  for (std::size_t i = 0; i < edges.size(); ++i)
  {
    const std::string ef = "edges[" + std::to_string(i) + "]";
    const json &ends = member(edges[i], "ends", ef);
    if (!ends.is_array() || ends.size() != 2 || !ends[0].is_string() || !ends[1].is_string())
    {
      fail(ef + ".ends", "expected two vertex names");
    }
    UndirectedEdge e;
    e.a = ends[0].get<std::string>();
    e.b = ends[1].get<std::string>();
    e.length = integer(member(edges[i], "length", ef), ef + ".length");
    inst.graph.edges.push_back(std::move(e));
  }
  const json &scattering = member(doc, "scattering", "instance");
  if (!scattering.is_object())
  {
    fail("scattering", "expected an object keyed by vertex");
  }
  for (const auto &[name, family] : scattering.items())
  {
    if (inst.graph.index_of(name) == inst.graph.vertices.size())
    {
      fail("scattering." + name, "not a vertex of the graph");
    }
    inst.families.emplace(name, parse_family(family, "scattering." + name));
  }
  if (auto it = doc.find("tolerances"); it != doc.end())
  {
    inst.tolerances = parse_tolerances(*it);
  }
  return inst;
}

Instance load_instance(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorKind::Io, "cannot read " + path.string());
  }
  json doc;
  try
  {
    doc = json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return parse_instance(doc);
}

json to_json(const ScatteringFamily &family)
{
  if (const auto *c = family.as_constant())
  {
    return {{"type", "constant_involution"}, {"matrix", matrix_json(c->matrix)}};
  }
  const auto *cp = family.as_conjugated();
  json phases = json::array();
  for (const auto &p : cp->phases)
  {
    phases.push_back({{"n", p.slope}, {"c", p.constant == PhaseConstant::Pi ? "pi" : "0"}, {"sin", p.sines}});
  }
  return {{"type", "conjugated_phase"}, {"V", matrix_json(cp->basis)}, {"phases", std::move(phases)}};
}

json to_json(const Tolerances &tol)
{
  return {
      {"eigen_cluster", tol.eigen_cluster},       {"bisection_k", tol.bisection_k},
      {"branch_step_cap", tol.branch_step_cap},   {"det_step_cap", tol.det_step_cap},
      {"merge_radius", tol.merge_radius},         {"delta_cap", tol.delta_cap},
      {"winding_residual", tol.winding_residual}, {"unitarity", tol.unitarity},
      {"eigen_residual", tol.eigen_residual},
  };
}

json to_json(const Instance &instance)
{
  json doc;
  doc["vertices"] = instance.graph.vertices;
  doc["edges"] = json::array();
  for (const auto &e : instance.graph.edges)
  {
    doc["edges"].push_back({{"ends", {e.a, e.b}}, {"length", e.length}});
  }
  doc["scattering"] = json::object();
  for (const auto &[name, f] : instance.families)
  {
    doc["scattering"][name] = to_json(f);
  }
  if (instance.tolerances)
  {
    doc["tolerances"] = to_json(*instance.tolerances);
  }
  return doc;
}

json to_json(const IndexReport &r)
{
  json doc;
  doc["kind"] = std::string(to_string(r.kind));
  if (!r.vertex_order.empty())
  {
    doc["vertex_order"] = r.vertex_order;
  }
  doc["alpha"] = r.alpha;
  doc["crossings"] = json::array();
  for (const auto &c : r.crossings)
  {
    doc["crossings"].push_back({
        {"k_star", c.k_star},
        {"z_star", {c.z_star.real(), c.z_star.imag()}},
        {"multiplicity", c.multiplicity},
        {"iota_plus", c.iota_plus},
        {"iota_minus", c.iota_minus},
        {"iota", c.iota},
        {"arc_half_angle", c.arc_half_angle},
        {"delta", c.delta},
    });
  }
  doc["q"] = r.q;
  doc["m"] = r.m;
  doc["d0_plus"] = r.d0_plus;
  doc["d0_minus"] = r.d0_minus;
  doc["dpi_plus"] = r.dpi_plus;
  doc["dpi_minus"] = r.dpi_minus;
  doc["d0"] = r.d0;
  doc["dpi"] = r.dpi;
  if (r.N)
  {
    doc["N"] = *r.N;
  }
  if (r.lower_bound)
  {
    doc["lower_bound"] = *r.lower_bound;
  }
  doc["theorem_a_ok"] = r.theorem_a_ok;
  if (r.bound_ok)
  {
    doc["bound_ok"] = *r.bound_ok;
  }
  doc["pi_involution_holds"] = r.pi_involution_holds;
  doc["warnings"] = r.warnings;
  return doc;
}

void write_trace_csv(std::ostream &out, const EigenphaseTrace &trace)
{
  out << "k,branch_id,theta_unwrapped\n";
  for (std::size_t i = 0; i < trace.grid.size(); ++i)
  {
    for (std::size_t j = 0; j < trace.branch_count(); ++j)
    {
      write_double(out, trace.grid[i]);
      out << ',' << j << ',';
      write_double(out, trace.branches[j][i]);
      out << '\n';
    }
  }
}

void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows)
{
  out << "t,alpha,q,m,gap\n";
  for (const auto &r : rows)
  {
    out << r.t << ',' << r.alpha << ',' << r.q << ',' << r.m << ',' << r.gap << '\n';
  }
}

}  // namespace exciton
