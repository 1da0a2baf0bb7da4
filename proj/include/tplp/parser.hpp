#ifndef TPLP_PARSER_HPP
#define TPLP_PARSER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tplp/core.hpp"
#include "tplp/diagnostics.hpp"

namespace tplp {

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value() && !has_errors(diagnostics); }
};

/// A ground query. ENTAIL carries an annotation to check; TIGHTEN asks for
/// the tightest entailed interval at one time point or at every calendar
/// point (`at` empty). For TIGHTEN-at-all the formula keeps the temporal
/// variable `Y`; otherwise its atoms are ground.
struct Query {
  enum class Kind { Entail, Tighten };
  Kind kind = Kind::Entail;
  BasicFormula formula;
  std::optional<TPAnnotation> annotation;
  std::optional<TimePoint> at;
  SourceSpan span;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Timeless clause shape used to build evolution programs. Atoms carry no
/// temporal position and no annotation.
struct ClauseSkeleton {
  TAtom head;
  std::vector<BasicFormula> body;
  SourceSpan span;
};

struct ProgramSkeleton {
  Calendar calendar;
  std::vector<ClauseSkeleton> clauses;
};

ParseResult<PTProgram> parse_program(std::string_view text);
ParseResult<Query> parse_query(std::string_view text);
/// `calendar a..b.` followed by clauses `h :- f1 and f2.` without `@` or annotations.
ParseResult<ProgramSkeleton> parse_skeleton(std::string_view text);

/// Text form accepted by parse_program; parse_program(render(p)) == p.
std::string render(const PTProgram& p);
std::string render(const TPClause& c);
std::string render(const TPAnnotation& a);
std::string render(const TemporalConstraint& c);
std::string render(const TimeExpr& e);
std::string render(const WeightFunction& w);

}  // namespace tplp

#endif
