#include "tplp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "tplp/compression.hpp"
#include "tplp/errors.hpp"
#include "tplp/grounder.hpp"
#include "tplp/interval.hpp"
#include "tplp/maxent.hpp"
#include "tplp/parser.hpp"
#include "tplp/psat.hpp"

namespace tplp::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised inside a command to end it with the given code; the message goes
// to the diagnostics stream.
struct Exit {
  int code;
  std::string message;
};

struct Options {
  std::string epsilon = "1/1000000";
  std::size_t max_world_atoms = 16;
  std::string grounding = "relevant";
  std::string lp = "exact";
  bool json = false;
  unsigned threads = 1;
};

struct Context {
  Options opts;
  std::ostringstream out;
  std::ostringstream err;

  SolveOptions solve_options() const {
    SolveOptions s;
    auto eps = parse_rational(opts.epsilon, 18);
    if (!eps || *eps < 0 || *eps >= 1) throw Exit{kUsage, "--epsilon must be a number in [0, 1)"};
    s.epsilon = *eps;
    s.max_world_atoms = opts.max_world_atoms;
    s.lp_mode = opts.lp == "float" ? LpMode::Float : LpMode::Exact;
    s.threads = std::max(1U, opts.threads);
    return s;
  }
  GroundingMode grounding() const {
    return opts.grounding == "full" ? GroundingMode::Full : GroundingMode::Relevant;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kUsage, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_diagnostics(Context& ctx, const std::string& file, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) ctx.err << file << ':' << d << '\n';
}

PTProgram load_program(Context& ctx, const std::string& path) {
  auto parsed = parse_program(read_file(path));
  print_diagnostics(ctx, path, parsed.diagnostics);
  if (!parsed.ok()) throw Exit{kUsage, path + ": parse failed"};
  auto diags = validate_program(*parsed.value);
  print_diagnostics(ctx, path, diags);
  if (has_errors(diags)) throw Exit{kUsage, path + ": invalid program"};
  return std::move(*parsed.value);
}

Query load_query(Context& ctx, const std::string& path) {
  auto parsed = parse_query(read_file(path));
  print_diagnostics(ctx, path, parsed.diagnostics);
  if (!parsed.ok()) throw Exit{kUsage, path + ": parse failed"};
  return std::move(*parsed.value);
}

PProgram load_unfolded(Context& ctx, const std::string& path, Calendar* calendar = nullptr) {
  PTProgram p = load_program(ctx, path);
  if (calendar) *calendar = p.calendar;
  std::vector<Diagnostic> warnings;
  PProgram pp = unfold(ground_program(p, ctx.grounding()), &warnings);
  print_diagnostics(ctx, path, warnings);
  pp.base = herbrand_base(pp, ctx.opts.max_world_atoms);
  return pp;
}

std::string frac(const Rational& r) { return to_fraction_string(r); }

Json interval_json(const ProbInterval& iv) { return Json::array({frac(iv.lo), frac(iv.hi)}); }

Json witness_json(const WorldDistribution& ki, const HerbrandBase& base) {
  Json arr = Json::array();
  for (const auto& [w, p] : ki) {
    Json atoms = Json::array();
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w.test(i)) atoms.push_back(to_string(base[i]));
    arr.push_back({{"world", atoms}, {"p", frac(p)}});
  }
  return arr;
}

std::string world_text(const World& w, const HerbrandBase& base) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w.test(i)) continue;
    s += (first ? "" : ", ") + to_string(base[i]);
    first = false;
  }
  return s + "}";
}

void witness_text(std::ostream& os, const WorldDistribution& ki, const HerbrandBase& base) {
  for (const auto& [w, p] : ki) os << "  " << world_text(w, base) << " : " << to_decimal_string(p) << '\n';
}

// ---------------------------------------------------------------- commands

int cmd_validate(Context& ctx, const std::string& path) {
  auto parsed = parse_program(read_file(path));
  std::vector<Diagnostic> diags = parsed.diagnostics;
  if (parsed.value) {
    auto more = validate_program(*parsed.value);
    diags.insert(diags.end(), more.begin(), more.end());
  }
  print_diagnostics(ctx, path, diags);
  std::size_t errors = count_severity(diags, Severity::Error);
  std::size_t warnings = count_severity(diags, Severity::Warning);
  if (ctx.opts.json) {
    Json j = {{"valid", errors == 0}, {"errors", errors}, {"warnings", warnings}};
    Json list = Json::array();
    for (const auto& d : diags)
      list.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                      {"kind", kind_name(d.kind)},
                      {"line", d.span.line},
                      {"column", d.span.column},
                      {"message", d.message}});
    j["diagnostics"] = list;
    ctx.out << j.dump(2) << '\n';
  } else {
    ctx.out << (errors == 0 ? "valid" : "invalid") << ": " << errors << " error(s), " << warnings
            << " warning(s)\n";
  }
  return errors == 0 ? kOk : kUsage;
}

int cmd_ground(Context& ctx, const std::string& path) {
  PTProgram g = ground_program(load_program(ctx, path), ctx.grounding());
  if (ctx.opts.json) {
    Json clauses = Json::array();
    for (const auto& c : g.clauses) clauses.push_back(render(c));
    ctx.out << Json{{"clauses", clauses}}.dump(2) << '\n';
  } else {
    ctx.out << render(g);
  }
  return kOk;
}

int cmd_unfold(Context& ctx, const std::string& path) {
  PTProgram p = load_program(ctx, path);
  std::vector<Diagnostic> warnings;
  PProgram pp = unfold(ground_program(p, ctx.grounding()), &warnings);
  print_diagnostics(ctx, path, warnings);
  if (ctx.opts.json) {
    Json clauses = Json::array();
    for (const auto& c : pp.clauses) {
      Json body = Json::array();
      for (const auto& b : c.body) body.push_back({{"formula", to_string(b.formula)}, {"interval", interval_json(b.interval)}});
      clauses.push_back({{"head", to_string(c.head)}, {"interval", interval_json(c.head_interval)}, {"body", body}});
    }
    ctx.out << Json{{"clauses", clauses}, {"base_size", pp.base.size()}}.dump(2) << '\n';
    return kOk;
  }
  ctx.out << render(to_pt_program(pp, p.calendar));
  ctx.out << "% " << pp.clauses.size() << " p-clauses over " << pp.base.size() << " atoms\n";
  return kOk;
}

int cmd_consistent(Context& ctx, const std::string& path) {
  auto opts = ctx.solve_options();
  PProgram pp = load_unfolded(ctx, path);
  PsatEngine engine(pp, opts);
  auto r = engine.check_consistency();
  if (ctx.opts.json) {
    Json j = {{"verdict", verdict_name(r.verdict)}};
    j["witness"] = r.witness ? witness_json(*r.witness, engine.base()) : Json::array();
    Json intervals = Json::object();
    if (r.witness)
      for (const auto& a : engine.base().atoms()) {
        Rational m = formula_mass(*r.witness, BasicFormula::single(a), engine.base());
        intervals[to_string(a)] = interval_json({m, m});
      }
    j["intervals"] = intervals;
    j["branch_count"] = r.branch_count;
    j["eps"] = frac(opts.epsilon);
    ctx.out << j.dump(2) << '\n';
  } else {
    ctx.out << verdict_name(r.verdict) << '\n';
    ctx.out << "branches solved: " << r.branch_count << '\n';
    if (r.witness) {
      ctx.out << "witness:\n";
      witness_text(ctx.out, *r.witness, engine.base());
    }
  }
  return r.verdict == Verdict::Consistent ? kOk : kNegative;
}

int cmd_entail(Context& ctx, const std::string& path, const std::string& query_path) {
  auto opts = ctx.solve_options();
  Calendar cal;
  PProgram pp = load_unfolded(ctx, path, &cal);
  Query q = load_query(ctx, query_path);
  if (q.kind != Query::Kind::Entail) throw Exit{kUsage, query_path + ": expected an ?entail query"};
  auto r = entails(pp, q, cal, opts);
  print_diagnostics(ctx, query_path, r.warnings);
  if (ctx.opts.json) {
    Json per = Json::array();
    Json intervals = Json::object();
    for (const auto& at : r.per_time) {
      per.push_back({{"formula", to_string(at.formula)},
                     {"entailed", interval_json(at.entailed)},
                     {"required", interval_json(at.required)},
                     {"holds", at.holds}});
      intervals[to_string(at.formula)] = interval_json(at.entailed);
    }
    Json j = {{"verdict", r.entailed ? "ENTAILED" : "NOT_ENTAILED"},
              {"per_time", per},
              {"intervals", intervals},
              {"branch_count", r.branch_count},
              {"eps", frac(opts.epsilon)}};
    ctx.out << j.dump(2) << '\n';
  } else {
    for (const auto& at : r.per_time)
      ctx.out << to_string(at.formula) << " : tightest " << at.entailed << ", required " << at.required << ' '
              << (at.holds ? "ok" : "FAILS") << '\n';
    ctx.out << (r.entailed ? "ENTAILED" : "NOT ENTAILED") << '\n';
  }
  return r.entailed ? kOk : kNegative;
}

int cmd_tighten(Context& ctx, const std::string& path, const std::string& query_path) {
  auto opts = ctx.solve_options();
  Calendar cal;
  PProgram pp = load_unfolded(ctx, path, &cal);
  Query q = load_query(ctx, query_path);
  if (q.kind != Query::Kind::Tighten) throw Exit{kUsage, query_path + ": expected a ?tighten query"};
  std::vector<BasicFormula> targets;
  if (q.at) {
    targets.push_back(q.formula);
  } else {
    for (TimePoint t : cal.points) targets.push_back(substitute_time(q.formula, t));
  }
  std::vector<BasicFormula> solved;
  for (const auto& f : targets)
    if (!outside_base(f, pp.base)) solved.push_back(f);
  PsatEngine engine(pp, opts, solved);
  std::size_t branches = 0;
  auto leaves = engine.feasible_leaves(opts.epsilon, &branches);
  if (leaves.empty()) throw InconsistentProgram("program has no model; nothing to tighten");
  Json intervals = Json::object();
  for (const auto& f : targets) {
    std::optional<ProbInterval> acc;
    if (outside_base(f, pp.base)) {
      acc = ProbInterval(0, 1);
    } else {
      std::size_t id = engine.formula_id(f);
      for (const auto& leaf : leaves) {
        ProbInterval iv{*engine.optimize(leaf.constraints, id, false), *engine.optimize(leaf.constraints, id, true)};
        acc = acc ? meet_k(*acc, iv) : iv;
      }
    }
    if (ctx.opts.json) {
      intervals[to_string(f)] = interval_json(*acc);
    } else {
      ctx.out << to_string(f) << " : " << *acc << '\n';
    }
  }
  if (ctx.opts.json)
    ctx.out << Json{{"verdict", "CONSISTENT"},
                    {"intervals", intervals},
                    {"branch_count", branches},
                    {"eps", frac(opts.epsilon)}}
                   .dump(2)
            << '\n';
  return kOk;
}

int cmd_maxent(Context& ctx, const std::string& path) {
  auto opts = ctx.solve_options();
  PProgram pp = load_unfolded(ctx, path);
  auto r = max_entropy_model(pp, opts);
  const HerbrandBase& base = pp.base;
  if (ctx.opts.json) {
    Json intervals = Json::object();
    for (const auto& a : base.atoms()) {
      Rational m = formula_mass(r.distribution, BasicFormula::single(a), base);
      intervals[to_string(a)] = interval_json({m, m});
    }
    ctx.out << Json{{"verdict", "CONSISTENT"},
                    {"witness", witness_json(r.distribution, base)},
                    {"intervals", intervals},
                    {"entropy", r.entropy},
                    {"sweeps", r.sweeps},
                    {"exact_projection", r.exact_projection},
                    {"eps", frac(opts.epsilon)}}
                   .dump(2)
            << '\n';
  } else {
    ctx.out << "entropy: " << r.entropy << " nats\n";
    witness_text(ctx.out, r.distribution, base);
    for (const auto& a : base.atoms())
      ctx.out << "P(" << to_string(a) << ") = "
              << to_decimal_string(formula_mass(r.distribution, BasicFormula::single(a), base)) << '\n';
  }
  return kOk;
}

// PI from a file of rows `time,atom;atom;...,p` over the skeleton's atoms.
EvolutionProfile read_profile(const std::string& path, const CompressedBase& base, const std::vector<TimePoint>& delta) {
  EvolutionProfile pi;
  pi.base = base;
  pi.interval = delta;
  for (TimePoint t : delta) pi.dists[t] = WorldDistribution(base.size());
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("time,", 0) == 0) continue;
    auto c1 = line.find(','), c2 = line.rfind(',');
    if (c1 == std::string::npos || c1 == c2) throw Exit{kUsage, path + ":" + std::to_string(line_no) + ": expected time,world,p"};
    TimePoint t{std::stoll(line.substr(0, c1))};
    auto p = parse_rational(line.substr(c2 + 1));
    if (!p || !pi.dists.count(t)) throw Exit{kUsage, path + ":" + std::to_string(line_no) + ": bad time or probability"};
    World w(base.size());
    std::istringstream atoms(line.substr(c1 + 1, c2 - c1 - 1));
    std::string name;
    while (std::getline(atoms, name, ';')) {
      name.erase(std::remove_if(name.begin(), name.end(), [](unsigned char ch) { return std::isspace(ch); }), name.end());
      if (name.empty()) continue;
      std::optional<std::size_t> idx;
      for (std::size_t i = 0; i < base.size(); ++i)
        if (to_string(base[i]) == name) idx = i;
      if (!idx) throw Exit{kUsage, path + ":" + std::to_string(line_no) + ": unknown atom " + name};
      w.set(*idx);
    }
    pi.dists[t].add(w, *p);
  }
  for (const auto& [t, d] : pi.dists)
    if (!d.is_normalized()) {
      std::ostringstream os;
      os << path << ": distribution at time " << t << " does not sum to 1";
      throw Exit{kUsage, os.str()};
    }
  return pi;
}

// PI(t) = maximum-entropy model of the time-t slice program.
EvolutionProfile maxent_profile(const ProgramSkeleton& sk, const SliceTable& slices, const CompressedBase& base,
                                const std::vector<TimePoint>& delta, const SolveOptions& opts) {
  EvolutionProfile pi;
  pi.base = base;
  pi.interval = delta;
  for (TimePoint t : delta) {
    PProgram pp = slice_program(sk, slices, t);
    std::vector<TAtom> all;
    for (const auto& a : base.atoms()) all.push_back(a.at(t));
    pp.base = HerbrandBase(all);
    auto model = max_entropy_model(pp, opts);
    WorldDistribution d(base.size());
    for (const auto& [w, p] : model.distribution) {
      World j(base.size());
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w.test(i)) j.set(*base.index_of(CompressedAtom::of(pp.base[i])));
      d.add(j, p);
    }
    pi.dists[t] = std::move(d);
  }
  return pi;
}

int cmd_evolve(Context& ctx, const std::string& skeleton_path, const std::string& csv_path,
               const std::string& verify, const std::string& dist_path) {
  auto parsed = parse_skeleton(read_file(skeleton_path));
  print_diagnostics(ctx, skeleton_path, parsed.diagnostics);
  if (!parsed.ok()) throw Exit{kUsage, skeleton_path + ": parse failed"};
  const ProgramSkeleton& sk = *parsed.value;
  std::vector<Diagnostic> csv_diags;
  auto slices = parse_slice_csv(read_file(csv_path), csv_diags);
  print_diagnostics(ctx, csv_path, csv_diags);
  if (!slices) throw Exit{kUsage, csv_path + ": invalid slice table"};
  std::set<TimePoint> times;
  for (const auto& [id, per] : *slices)
    for (const auto& [t, iv] : per) times.insert(t);
  std::vector<TimePoint> delta(times.begin(), times.end());
  PTProgram p_delta = build_evolution_program(sk, *slices, delta);
  std::string program_text = render(p_delta);
  if (verify.empty()) {
    if (ctx.opts.json) {
      ctx.out << Json{{"program", program_text}}.dump(2) << '\n';
    } else {
      ctx.out << program_text;
    }
    return kOk;
  }
  std::vector<TAtom> atoms;
  for (const auto& c : sk.clauses) {
    atoms.push_back(substitute_time(c.head, sk.calendar.points.front()));
    for (const auto& b : c.body)
      for (const auto& a : b.atoms) atoms.push_back(substitute_time(a, sk.calendar.points.front()));
  }
  for (const auto& a : atoms)
    for (const auto& arg : a.args)
      if (arg.is_variable()) throw Exit{kUsage, "verification needs a skeleton without object variables"};
  CompressedBase base = CompressedBase::of(HerbrandBase(atoms));
  EvolutionProfile pi = dist_path.empty() ? maxent_profile(sk, *slices, base, delta, ctx.solve_options())
                                          : read_profile(dist_path, base, delta);
  auto report = verify_evolution(pi, p_delta, verify == "literal" ? VerifyMode::Literal : VerifyMode::Conditional);
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"formula_id", to_string(FormulaId{c.clause, c.position})},
                      {"formula", to_string(c.formula)},
                      {"time", c.time.value},
                      {"mass", frac(c.mass)},
                      {"required", interval_json(c.required)},
                      {"pass", c.pass}});
  }
  Json j = {{"mode", verify}, {"all_pass", report.all_pass}, {"checks", checks}};
  if (report.program_satisfied) j["program_satisfied"] = *report.program_satisfied;
  if (ctx.opts.json) {
    ctx.out << Json{{"program", program_text}, {"report", j}}.dump(2) << '\n';
  } else {
    ctx.out << program_text << j.dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- ialg

// expr := interval | name '(' expr {',' expr} ')'
// interval := '[' number ',' number ']'
class IalgParser {
public:
  explicit IalgParser(std::string_view s) : s_(s) {}

  struct Value {
    std::optional<ProbInterval> interval;
    std::optional<bool> truth;
  };

  Value parse() {
    Value v = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected text");
    return v;
  }

private:
  [[noreturn]] void error(const std::string& what) {
    throw Exit{kUsage, "ialg: " + what + " at offset " + std::to_string(pos_)};
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }
  Rational number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == '/'))
      ++pos_;
    auto r = parse_rational(s_.substr(start, pos_ - start), 18);
    if (!r) error("expected a number");
    return *r;
  }
  ProbInterval interval_arg() {
    Value v = expr();
    if (!v.interval) error("expected an interval argument");
    return *v.interval;
  }
  Value expr() {
    if (accept('[')) {
      Rational lo = number();
      expect(',');
      Rational hi = number();
      expect(']');
      if (lo > 1 || hi > 1) error("interval bounds must lie in [0, 1]");
      return {ProbInterval{lo, hi}, std::nullopt};
    }
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name.empty()) error("expected an interval or an operator");
    expect('(');
    std::vector<ProbInterval> args{interval_arg()};
    while (accept(',')) args.push_back(interval_arg());
    expect(')');
    auto binary = [&](auto op) -> Value {
      if (args.size() < 2) error(name + " takes at least two arguments");
      ProbInterval acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = op(acc, args[i]);
      return {acc, std::nullopt};
    };
    auto relation = [&](auto rel) -> Value {
      if (args.size() != 2) error(name + " takes two arguments");
      return {std::nullopt, rel(args[0], args[1])};
    };
    if (name == "meet_k") return binary(meet_k);
    if (name == "join_k") return binary(join_k);
    if (name == "and_ig") return binary(and_ig);
    if (name == "or_ig") return binary(or_ig);
    if (name == "leq_k") return relation(leq_k);
    if (name == "leq_b") return relation(leq_b);
    if (name == "is_consistent") {
      if (args.size() != 1) error("is_consistent takes one argument");
      return {std::nullopt, is_consistent(args[0])};
    }
    error("unknown operator '" + name + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

int cmd_ialg(Context& ctx, const std::string& expr) {
  auto v = IalgParser(expr).parse();
  if (ctx.opts.json) {
    Json j;
    if (v.interval) {
      j = {{"result", interval_json(*v.interval)}, {"consistent", is_consistent(*v.interval)}};
    } else {
      j = {{"result", *v.truth}};
    }
    ctx.out << j.dump(2) << '\n';
  } else if (v.interval) {
    ctx.out << *v.interval << (is_consistent(*v.interval) ? "" : " (inconsistent)") << '\n';
  } else {
    ctx.out << (*v.truth ? "true" : "false") << '\n';
  }
  return kOk;
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  Context ctx;
  if (const char* env = std::getenv("TPLP_MAX_WORLD_ATOMS")) {
    try {
      ctx.opts.max_world_atoms = std::stoul(env);
    } catch (const std::exception&) {
      return {kUsage, "", "TPLP_MAX_WORLD_ATOMS is not a number\n"};
    }
  }

  CLI::App app{"Temporal probabilistic logic programs", "tplp"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--epsilon", ctx.opts.epsilon, "Strict-violation margin (decimal or n/d)");
  app.add_option("--max-world-atoms", ctx.opts.max_world_atoms, "Largest Herbrand base solved")
      ->check(CLI::Range(std::size_t{0}, std::size_t{30}));
  app.add_option("--grounding", ctx.opts.grounding, "full or relevant")
      ->check(CLI::IsMember({"full", "relevant"}));
  app.add_option("--lp", ctx.opts.lp, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_flag("--json", ctx.opts.json, "Machine-readable output");
  app.add_option("--threads", ctx.opts.threads, "Worker threads for branch LPs")->check(CLI::PositiveNumber);

  std::string file, second, verify, dist, expr;
  std::function<int()> action;
  auto with_file = [&](const char* name, const char* help, auto fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("FILE", file, "Program file")->required();
    sub->callback([&, fn] { action = [&, fn] { return fn(ctx, file); }; });
  };
  auto with_query = [&](const char* name, const char* help, auto fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("FILE", file, "Program file")->required();
    sub->add_option("QUERYFILE", second, "Query file")->required();
    sub->callback([&, fn] { action = [&, fn] { return fn(ctx, file, second); }; });
  };
  with_file("validate", "Parse and check a program", cmd_validate);
  with_file("ground", "Print the ground program", cmd_ground);
  with_file("unfold", "Print the unfolded p-program", cmd_unfold);
  with_file("consistent", "Decide consistency", cmd_consistent);
  with_query("entail", "Check an entailment query", cmd_entail);
  with_query("tighten", "Tightest entailed interval", cmd_tighten);
  with_file("maxent", "Maximum-entropy model", cmd_maxent);
  auto* evolve = app.add_subcommand("evolve", "Build (and verify) an evolution program");
  evolve->add_option("SKELETON", file, "Skeleton file")->required();
  evolve->add_option("PROFILE", second, "CSV of formula_id,time,lo,hi")->required();
  evolve->add_option("--verify", verify, "literal or conditional")->check(CLI::IsMember({"literal", "conditional"}));
  evolve->add_option("--dist", dist, "Per-time distributions (time,atom;atom,p); default maximum entropy");
  evolve->callback([&] { action = [&] { return cmd_evolve(ctx, file, second, verify, dist); }; });
  auto* ialg = app.add_subcommand("ialg", "Evaluate an interval-algebra expression");
  ialg->add_option("EXPR", expr, "e.g. join_k([0,0.3],[0.7,1])")->required();
  ialg->callback([&] { action = [&] { return cmd_ialg(ctx, expr); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return {kOk, app.help(), ""};
  } catch (const CLI::ParseError& e) {
    return {kUsage, "", std::string(e.what()) + "\n" + app.help()};
  }

  CommandResult result;
  try {
    result.exit_code = action ? action() : kUsage;
  } catch (const Exit& e) {
    result.exit_code = e.code;
    if (!e.message.empty()) ctx.err << e.message << '\n';
  } catch (const BaseTooLarge& e) {
    result.exit_code = kResource;
    ctx.err << "error: " << e.what() << '\n';
  } catch (const InconsistentProgram& e) {
    result.exit_code = kNegative;
    if (ctx.opts.json) {
      ctx.out << Json{{"verdict", "INCONSISTENT"}, {"error", e.what()}}.dump(2) << '\n';
    } else {
      ctx.out << "INCONSISTENT\n";
    }
    ctx.err << "error: " << e.what() << '\n';
  } catch (const Error& e) {
    result.exit_code = kUsage;
    ctx.err << "error: " << e.what() << '\n';
  }
  result.payload = ctx.out.str();
  result.diagnostics += ctx.err.str();
  return result;
}

}  // namespace tplp::cli
