#ifndef TPLP_TESTS_SUPPORT_HPP
#define TPLP_TESTS_SUPPORT_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tplp/core.hpp"
#include "tplp/parser.hpp"

namespace support {

inline std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TPLP_FIXTURES) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) { return std::string(TPLP_FIXTURES) + "/" + name; }

inline tplp::PTProgram program(std::string_view text) {
  auto r = tplp::parse_program(text);
  if (!r.ok()) {
    std::ostringstream ss;
    for (const auto& d : r.diagnostics) ss << d << "\n";
    throw std::runtime_error("program does not parse:\n" + ss.str());
  }
  return *r.value;
}

inline tplp::PTProgram load(const std::string& name) { return program(slurp(name)); }

inline tplp::Rational q(long n, long d = 1) { return tplp::Rational(n, d); }

inline tplp::TAtom atom(const std::string& pred, std::vector<std::string> args, std::int64_t t) {
  tplp::TAtom a;
  a.predicate = pred;
  for (auto& s : args) a.args.push_back(tplp::ObjectTerm::constant(s));
  a.time = tplp::TimeTerm::at(tplp::TimePoint{t});
  return a;
}

inline tplp::TAtom atom(const std::string& pred, std::int64_t t) { return atom(pred, {}, t); }

inline tplp::BasicFormula single(const std::string& pred, std::int64_t t) {
  return tplp::BasicFormula::single(atom(pred, t));
}

}  // namespace support

#endif
