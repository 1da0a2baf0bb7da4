#include <doctest.h>

#include <json.hpp>

#include "support.hpp"
#include "tplp/cli.hpp"

using tplp::cli::CommandResult;
using tplp::cli::run;
using support::fixture;
using Json = nlohmann::json;

namespace {

CommandResult cmd(std::vector<std::string> args) { return run(args); }

Json json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  auto r = run(args);
  return Json::parse(r.payload);
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("validate") {
  for (const char* f : {"example1.tpl", "p0.tpl", "p1.tpl", "mx.tpl", "empty.tpl"}) {
    auto r = cmd({"validate", fixture(f)});
    CHECK_MESSAGE(r.exit_code == 0, f);
  }
  CHECK(contains(cmd({"validate", fixture("empty.tpl")}).payload, "0 warning"));
  CHECK(cmd({"validate", "/nonexistent.tpl"}).exit_code == 2);
  CHECK(cmd({"validate", fixture("entail_letter.q")}).exit_code == 2);
}

TEST_CASE("ground and unfold") {
  auto g = cmd({"ground", fixture("example1.tpl")});
  CHECK(g.exit_code == 0);
  CHECK(contains(g.payload, "arrived(letter,paris)@Y"));
  CHECK_FALSE(contains(g.payload, "arrived(shoes,paris)"));

  auto full = cmd({"--grounding", "full", "ground", fixture("example1.tpl")});
  CHECK(contains(full.payload, "arrived(shoes,paris)"));

  auto u = cmd({"unfold", fixture("example1.tpl")});
  CHECK(u.exit_code == 0);
  CHECK(contains(u.payload, "arrived(letter,paris)@Y : <Y = 3, [0.25], [0.4]>"));
  // The unfolded output is itself a program.
  CHECK(tplp::parse_program(u.payload).ok());
}

TEST_CASE("consistency exit codes") {
  auto p0 = json({"consistent", fixture("p0.tpl")});
  CHECK(p0["verdict"] == "CONSISTENT");
  CHECK(p0["witness"].is_array());
  CHECK(cmd({"consistent", fixture("p0.tpl")}).exit_code == 0);

  auto p1 = cmd({"consistent", fixture("p1.tpl")});
  CHECK(p1.exit_code == 1);
  CHECK(contains(p1.payload, "INCONSISTENT"));
  CHECK(cmd({"consistent", fixture("empty.tpl")}).exit_code == 0);
}

TEST_CASE("tighten") {
  auto t = json({"tighten", fixture("example1.tpl"), fixture("tighten_letter.q")});
  CHECK(t["intervals"]["arrived(letter,paris)@3"] == Json::array({"3/10", "2/5"}));
  auto b = json({"tighten", fixture("p0.tpl"), fixture("tighten_b.q")});
  CHECK(b["intervals"]["b@1"] == Json::array({"2/5", "3/5"}));
  CHECK(cmd({"tighten", fixture("p1.tpl"), fixture("tighten_b.q")}).exit_code == 1);
  auto all = json({"tighten", fixture("p0.tpl"), fixture("tighten_b_all.q")});
  CHECK(all["intervals"]["b@1"] == Json::array({"2/5", "3/5"}));
  CHECK(all["intervals"]["b@2"] == Json::array({"0/1", "1/1"}));
}

TEST_CASE("entail") {
  auto yes = cmd({"entail", fixture("example1.tpl"), fixture("entail_letter.q")});
  CHECK(yes.exit_code == 0);
  CHECK(contains(yes.payload, "ENTAILED"));
  auto no = cmd({"entail", fixture("example1.tpl"), fixture("entail_letter_strict.q")});
  CHECK(no.exit_code == 1);
  CHECK(contains(no.payload, "NOT ENTAILED"));
}

TEST_CASE("maxent") {
  auto m = json({"maxent", fixture("mx.tpl")});
  CHECK(m["intervals"]["a@1"] == Json::array({"1/2", "1/2"}));
  CHECK(m["entropy"].get<double>() == doctest::Approx(0.6931471805599453));
  CHECK(cmd({"maxent", fixture("p1.tpl")}).exit_code == 1);
}

TEST_CASE("evolve") {
  auto plain = cmd({"evolve", fixture("evolve.skel"), fixture("evolve.csv")});
  CHECK(plain.exit_code == 0);
  CHECK(contains(plain.payload, "a@Y : <Y : 1 ~ 2, [0.3, 0.6], [0.3, 0.6]>."));

  auto lit = json({"evolve", "--verify", "literal", fixture("evolve.skel"), fixture("evolve.csv")});
  CHECK(lit["report"]["all_pass"] == false);
  CHECK(lit["report"]["checks"][0]["mass"] == "3/20");

  auto cond = json({"evolve", "--verify", "conditional", "--dist", fixture("evolve_dist.csv"), fixture("evolve.skel"),
                    fixture("evolve.csv")});
  CHECK(cond["report"]["all_pass"] == true);

  // Discrepancies are report content, not failures.
  CHECK(cmd({"evolve", "--verify", "literal", fixture("evolve.skel"), fixture("evolve.csv")}).exit_code == 0);
}

TEST_CASE("ialg") {
  auto j = cmd({"ialg", "join_k([0,0.3],[0.7,1])"});
  CHECK(j.exit_code == 0);
  CHECK(contains(j.payload, "[0.7, 0.3]"));
  CHECK(json({"ialg", "is_consistent([0.7,0.3])"})["result"] == false);
  CHECK(json({"ialg", "leq_k([0,1],[0.3,0.5])"})["result"] == true);
  CHECK(cmd({"ialg", "frobnicate([0,1])"}).exit_code == 2);
}

TEST_CASE("resource limits and usage errors") {
  CHECK(cmd({"--grounding", "full", "consistent", fixture("example1.tpl")}).exit_code == 3);
  CHECK(cmd({"--max-world-atoms", "2", "consistent", fixture("mx.tpl")}).exit_code == 0);
  CHECK(cmd({"--max-world-atoms", "1", "consistent", fixture("p0.tpl")}).exit_code == 3);
  CHECK(cmd({"--max-world-atoms", "31", "consistent", fixture("p0.tpl")}).exit_code == 2);
  CHECK(cmd({"--epsilon", "zero", "consistent", fixture("p0.tpl")}).exit_code == 2);
  CHECK(cmd({"nosuchcommand"}).exit_code == 2);
  CHECK(cmd({}).exit_code == 2);
}

TEST_CASE("output is deterministic") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"--json", "consistent", fixture("p0.tpl")},
           {"--json", "tighten", fixture("example1.tpl"), fixture("tighten_letter.q")},
           {"--json", "maxent", fixture("p0.tpl")},
           {"--json", "--threads", "3", "entail", fixture("example1.tpl"), fixture("entail_letter.q")},
           {"unfold", fixture("example1.tpl")}}) {
    auto a = run(args), b = run(args);
    CHECK(a.payload == b.payload);
    CHECK(a.exit_code == b.exit_code);
  }
}

TEST_CASE("floating-point LP mode") {
  auto t = json({"--lp", "float", "tighten", fixture("p0.tpl"), fixture("tighten_b.q")});
  CHECK(t["verdict"] == "CONSISTENT");
}
