#include "exciton/errors.hpp"

#include <sstream>

namespace exciton
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NonPositiveLength: return "NonPositiveLength";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::InvalidFamily: return "InvalidFamily";
    case ErrorKind::KramersViolation: return "KramersViolation";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::MissingFamily: return "MissingFamily";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::EigensolverFailure: return "EigensolverFailure";
    case ErrorKind::RefinementLimit: return "RefinementLimit";
    case ErrorKind::DiscretenessViolated: return "DiscretenessViolated";
    case ErrorKind::NotACrossing: return "NotACrossing";
    case ErrorKind::IndexUnstable: return "IndexUnstable";
    case ErrorKind::WindingResidual: return "WindingResidual";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::UnsupportedPhase: return "UnsupportedPhase";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Usage: return "UsageError";
    case ErrorKind::Io: return "IOError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::EigensolverFailure:
    case ErrorKind::RefinementLimit:
    case ErrorKind::NotACrossing:
    case ErrorKind::IndexUnstable:
    case ErrorKind::WindingResidual:
    case ErrorKind::ParityViolation:
    case ErrorKind::GridTooCoarse:
      return 2;
    default:
      return 1;
  }
}

namespace
{

std::string render(ErrorKind kind, const std::string &detail, std::optional<double> k)
{
  std::ostringstream os;
  os << to_string(kind);
  if (!detail.empty())
  {
    os << ": " << detail;
  }
  if (k)
  {
    os.precision(17);
    os << " (at k=" << *k << ")";
  }
  return os.str();
}

}  // namespace

Error::Error(ErrorKind kind, const std::string &detail, std::optional<double> k)
  : std::runtime_error(render(kind, detail, k)), kind_(kind), detail_(detail), k_(k)
{
}

}  // namespace exciton
