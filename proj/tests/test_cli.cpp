#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "gmq/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  nlohmann::json doc() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gmq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = gmq::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("extendable") {
    Run yes = run({"extendable", "-g", "4", "t_{d_1}", "--format", "json"});
    CHECK(yes.code == 0);
    CHECK(yes.doc()["extendable"] == true);
    CHECK_FALSE(yes.doc().contains("witness"));
    Run no = run({"extendable", "-g", "4", "t_{a_1}", "--format", "json"});
    CHECK(no.code == 0);
    CHECK(no.doc()["extendable"] == false);
    CHECK(no.doc()["witness"] == "x1");
  }

  TEST_CASE("eval-form and act") {
    Run q = run({"eval-form", "-g", "5", "x1+x3", "--format", "json"});
    CHECK(q.code == 0);
    CHECK(q.doc()["q"] == 2);
    Run a = run({"act", "-g", "4", "t_{d_1}", "x1", "x2", "--format", "json"});
    CHECK(a.code == 0);
    CHECK(a.doc()["images"][0]["image"] == "x3");
    CHECK(a.doc()["images"][1]["image"] == "x2");
    Run text = run({"eval-form", "-g", "5", "x2"});
    CHECK(text.out.find("q: 3") != std::string::npos);
  }

  TEST_CASE("verify-lemma generation") {
    Run r = run({"verify-lemma", "4.8", "-g", "5", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(r.doc()["verified"] == true);
    CHECK(r.doc()["report"]["closure_order"] == 72);
    CHECK(r.doc()["report"]["enumeration_order"] == 72);
    Run alias = run({"verify-lemma", "gen-Og-os-red", "-g", "4", "--format", "json"});
    CHECK(alias.code == 0);
    CHECK(alias.doc()["lemma"] == "4.8");
  }

  TEST_CASE("verify-lemma rewriting systems") {
    for (const char* id : {"4.4", "4.6", "4.10", "thm4.1", "G-g-eq-r-circle", "product-Y-homeo",
                           "gamma2-short", "generator-pin"}) {
      Run r = run({"verify-lemma", id, "-g", "6", "--format", "json"});
      INFO(id << ": " << r.err);
      CHECK(r.code == 0);
      CHECK(r.doc()["verified"] == true);
    }
  }

  TEST_CASE("budget exhaustion exits 3") {
    CHECK(run({"enumerate", "-g", "9"}).code == 3);
    CHECK(run({"verify-lemma", "4.8", "-g", "9"}).code == 3);
    CHECK(run({"enumerate", "-g", "6", "--closure", "--cap", "5"}).code == 3);
    CHECK(run({"factorize", "-g", "6", "t_{a_1}", "--cap", "3"}).code == 3);
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"eval-form", "x1"}).code == 2);  // missing genus
    CHECK(run({"extendable", "-g", "4", "t_{b_1}"}).code == 2);
    CHECK(run({"verify-lemma", "9.9", "-g", "4"}).code == 2);
    CHECK(run({"reduce-q2", "-g", "4", "x1"}).code == 2);
    CHECK(run({"eval-form", "-g", "0", "x1"}).code == 2);
    Run bad = run({"act", "-g", "3", "t_{a_5}"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    CHECK(bad.out.empty());
  }

  TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == 0); }

  TEST_CASE("reductions") {
    Run p = run({"reduce-rseq", "[+ - P]", "--format", "json"});
    CHECK(p.code == 0);
    CHECK(p.doc()["end"] == "[⊕ − +]");
    CHECK(p.doc()["genus"] == 3);
    Run a = run({"reduce-alpha", "3", "5", "7", "--format", "json"});
    CHECK(a.code == 0);
    CHECK(a.doc()["terminal"] == "(1,3,5)");
    CHECK(a.doc()["class"] == "alpha_2");
    Run v = run({"reduce-q2", "-g", "4", "x2+x4", "--format", "json"});
    CHECK(v.code == 0);
    CHECK(v.doc()["end"] == "x1+x3");
    Run pr = run({"reduce-q2", "-g", "6", "x1+x2+x3+x4+x5+x6", "x1+x2", "--format", "json"});
    CHECK(pr.code == 0);
    CHECK(pr.doc()["branch"] == "full-support");
  }

  TEST_CASE("factorize") {
    Run f = run({"factorize", "-g", "4", "t_{d_2}", "--format", "json"});
    CHECK(f.code == 0);
    CHECK(f.doc()["status"] == "found");
    CHECK(f.doc()["word"] == "D_2");
    Run m = run({"factorize", "-g", "3", "--matrix", "001,010,100", "--format", "json"});
    CHECK(m.doc()["word"] == "D_1");
    Run n = run({"factorize", "-g", "4", "t_{a_1}", "--format", "json"});
    CHECK(n.code == 0);
    CHECK(n.doc()["status"] == "not-member");
  }

  TEST_CASE("json output does not depend on the worker count") {
    for (auto args : std::vector<std::vector<std::string>>{
             {"enumerate", "-g", "5", "--elements"},
             {"enumerate", "-g", "5", "--closure", "--elements"},
             {"verify-lemma", "4.8", "-g", "6"},
             {"verify-lemma", "thm4.1", "-g", "5"}}) {
      args.insert(args.end(), {"--format", "json", "--workers", "1"});
      Run one = run(args);
      args.back() = "4";
      Run four = run(args);
      CHECK(one.code == 0);
      CHECK(one.out == four.out);
    }
  }
}
