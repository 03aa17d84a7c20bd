#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace exciton
{

enum class ErrorKind
{
  // graph_model
  SelfLoop,
  DuplicateEdge,
  Disconnected,
  NonPositiveLength,
  UnknownVertex,
  EmptyGraph,
  // scattering
  InvalidFamily,
  KramersViolation,
  // loop
  DegreeMismatch,
  MissingFamily,
  DimensionMismatch,
  // spectral_flow
  NotUnitary,
  EigensolverFailure,
  RefinementLimit,
  DiscretenessViolated,
  NotACrossing,
  IndexUnstable,
  WindingResidual,
  ParityViolation,
  // oracle
  GridTooCoarse,
  UnsupportedPhase,
  // io / cli
  Parse,
  Usage,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Exit status the CLI maps an error to: 1 for user/input errors, 2 for
// internal-consistency failures.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &detail, std::optional<double> k = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string &detail() const noexcept { return detail_; }
  // Circle parameter at which a pipeline error was raised, when meaningful.
  std::optional<double> k() const noexcept { return k_; }

private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<double> k_;
};

}  // namespace exciton
