#ifndef TPLP_DIAGNOSTICS_HPP
#define TPLP_DIAGNOSTICS_HPP

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tplp {

/// Location of a node in source text. Lines and columns are 1-based, byte
/// offsets 0-based and half-open. Spans are provenance only: they compare
/// equal regardless of position so that ASTs compare structurally.
struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

enum class Severity { Error, Warning };

enum class DiagnosticKind {
  Syntax,
  EmptySolutionSet,
  LengthMismatch,
  SharpCardinality,
  LowerExceedsUpper,
  ValueOutOfRange,
  NonNormalConstraint,
  PrincipalMismatch,
  ArityMismatch,
  TimeOutsideCalendar,
  InvalidCalendar,
  NonGroundQuery,
};

std::string_view kind_name(DiagnosticKind kind);

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagnosticKind kind = DiagnosticKind::Syntax;
  std::string message;
  SourceSpan span;
};

std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);
std::size_t count_severity(const std::vector<Diagnostic>& diags, Severity severity);

}  // namespace tplp

#endif
