#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "exciton/graph.hpp"
#include "exciton/loop.hpp"
#include "exciton/spectral_flow.hpp"
#include "exciton/tolerances.hpp"

namespace exciton
{

// A molecule together with its vertex scattering data, as read from an
// instance file. Vertex order is file order.
struct Instance
{
  MolecularGraph graph;
  FamilyMap families;
  std::optional<Tolerances> tolerances;

  bool operator==(const Instance &) const = default;

  // Validates the graph and assembles Gamma(k).
  UnitaryLoop loop() const;
  Tolerances effective_tolerances() const { return tolerances.value_or(Tolerances{}); }
};

// Instance file schema:
//   { "vertices": ["a", "b", ...],
//     "edges": [ {"ends": ["a", "b"], "length": 3}, ... ],
//     "scattering": {
//       "a": {"type": "constant_involution", "matrix": [[[re, im], ...], ...]},
//       "b": {"type": "conjugated_phase", "V": <matrix>,
//             "phases": [{"n": 1, "c": "0" | "pi", "sin": [s1, s2, ...]}, ...]} },
//     "tolerances": { "eigen_cluster": 1e-8, ... }   (optional) }
// Throws Error(Parse) naming the offending field; graph and family
// invariants surface as their own error kinds.
Instance parse_instance(const nlohmann::json &doc);
Instance load_instance(const std::filesystem::path &path);
nlohmann::json to_json(const Instance &instance);

nlohmann::json to_json(const ScatteringFamily &family);
nlohmann::json to_json(const Tolerances &tol);
nlohmann::json to_json(const IndexReport &report);

// CSV with header "k,branch_id,theta_unwrapped".
void write_trace_csv(std::ostream &out, const EigenphaseTrace &trace);
// CSV with header "t,alpha,q,m,gap".
void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows);

}  // namespace exciton
