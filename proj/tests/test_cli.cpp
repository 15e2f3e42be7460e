#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eventua/eventua.hpp"

using namespace eventua;

namespace {

const char* w0_text =
    "world\n"
    "virtual a b c d\n"
    "potential a b c\n"
    "events i1 i2\n"
    "actual i1 : a b\n"
    "actual i2 : b c\n"
    "relation P/1 intensional\n"
    "  at i1 : (a)\n"
    "  at i2 : (b) (c)\n"
    "relation Q/2 extensional : (a,b) (b,c)\n";

struct Fixture {
  std::ostringstream out, err;
  Session session;

  Fixture()
      : session(load_world(w0_text), SessionOptions{temp_dir().string(), 10000}, out, err) {}

  static std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "eventua_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
  }

  bool run(const std::string& line) { return session.execute_line(line, 1); }
};

std::filesystem::path write_file(const std::string& name, const std::string& content) {
  auto path = Fixture::temp_dir() / name;
  std::ofstream f(path, std::ios::binary);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("eval and evalterm print single values") {
  Fixture fx;
  CHECK(fx.run("eval exists@ x. P(x) at i1"));
  CHECK(fx.run("eval forall x. P(x) at i2"));
  CHECK(fx.run("evalterm iota x. P(x) at i1"));
  CHECK(fx.run("evalterm iota x. P(x) at i2"));
  CHECK(fx.out.str() == "1\n0\na\nundefined\n");
  CHECK(fx.err.str().empty());
}

TEST_CASE("intension prints the event table") {
  Fixture fx;
  CHECK(fx.run("intension P(#a)"));
  CHECK(fx.out.str() == "i1 : 1\ni2 : 0\n");
}

TEST_CASE("set results print one name per line") {
  Fixture fx;
  CHECK(fx.run("setop union {x | P(x)} {x | x = #b} at i2"));
  CHECK(fx.out.str() == "b\nc\n");
}

TEST_CASE("pair results print sorted tuples") {
  Fixture fx;
  CHECK(fx.run("join = {x | P(x)} {y | P(y)} at i2"));
  CHECK(fx.run("junction always {x | P(x)} {y | P(y)} at i2"));
  CHECK(fx.run("restrict Q where x = #a at i1"));
  CHECK(fx.out.str() ==
        "(b,b)\n(c,c)\n"
        "(b,b)\n(b,c)\n(c,b)\n(c,c)\n"
        "(a,b)\n");
}

TEST_CASE("views print and export") {
  Fixture fx;
  CHECK(fx.run("evolvent f : b1 -> i2, b2 -> i1"));
  CHECK(fx.run("view setop union {x | P(x)} {x | x = #b} along f at b1"));
  CHECK(fx.out.str() == "view b1 source i2\n(b)\n(c)\n");
  std::ifstream exported(Fixture::temp_dir() / "b1.view");
  std::stringstream content;
  content << exported.rdbuf();
  CHECK(content.str() == "view b1 source i2\n(b)\n(c)\n");
}

TEST_CASE("types, extents and variable domains") {
  Fixture fx;
  CHECK(fx.run("type T_P = {x | P(x)}"));
  CHECK(fx.run("extent T_P at i2"));
  CHECK(fx.run("vardomain T_P over i1 i2"));
  CHECK(fx.run("vardomain T_P over i1 i2 limit 1"));
  CHECK(fx.out.str() ==
        "b\nc\n"
        "{i1->a, i2->b}\n{i1->a, i2->c}\ntotal 2\n"
        "{i1->a, i2->b}\ntotal 2\n");
}

TEST_CASE("comments and blank lines are skipped") {
  Fixture fx;
  CHECK(fx.run("# just a comment"));
  CHECK(fx.run(""));
  CHECK(fx.run("   "));
  CHECK(fx.out.str().empty());
  CHECK(fx.err.str().empty());
}

TEST_CASE("diagnostics name the line and leave stdout clean") {
  Fixture fx;
  CHECK_FALSE(fx.session.execute_line("eval P(x) at i1", 7));
  CHECK_FALSE(fx.session.execute_line("eval P(#a) at i9", 8));
  CHECK_FALSE(fx.session.execute_line("frobnicate", 9));
  CHECK_FALSE(fx.session.execute_line("eval P(#a)", 10));
  CHECK_FALSE(fx.session.execute_line("view eval P(#a) along zz at b1", 11));
  CHECK(fx.out.str().empty());
  auto text = fx.err.str();
  CHECK(text.find("line 7: unbound variable x") != std::string::npos);
  CHECK(text.find("line 8: unknown event i9") != std::string::npos);
  CHECK(text.find("line 9: unknown command 'frobnicate'") != std::string::npos);
  CHECK(text.find("line 10: missing 'at <event>'") != std::string::npos);
  CHECK(text.find("line 11: ") != std::string::npos);
}

TEST_CASE("colon commands") {
  Fixture fx;
  CHECK(fx.run(":world"));
  CHECK(fx.out.str() ==
        "|V|=4 |H|=3 |I|=2\n"
        "relation P/1 intensional\n"
        "relation Q/2 extensional\n");
  CHECK_FALSE(fx.session.quit_requested());
  CHECK(fx.run(":quit"));
  CHECK(fx.session.quit_requested());
  Fixture fy;
  CHECK(fy.run(":help"));
  CHECK(fy.out.str().find("eval <formula> at <event>") != std::string::npos);
}

TEST_CASE("run_script exit codes") {
  auto world = write_file("w.world", w0_text);
  auto good = write_file("good.script", "eval P(#a) at i1\n");
  auto bad = write_file("bad.script", "eval P(#a) at i1\neval P(x) at i1\n");
  std::ostringstream out, err;
  CHECK(run_script(world.string(), good.string(), out, err) == 0);
  CHECK(out.str() == "1\n");
  CHECK(err.str().empty());
  std::ostringstream out2, err2;
  CHECK(run_script(world.string(), bad.string(), out2, err2) == 1);
  CHECK(out2.str() == "1\n");
  CHECK(err2.str() == "line 2: unbound variable x\n");
  std::ostringstream out3, err3;
  auto bad_world = write_file("bad.world", "world\nvirtual a\npotential a b\n");
  CHECK(run_script(bad_world.string(), good.string(), out3, err3) == 2);
  CHECK(err3.str().find("error:") != std::string::npos);
  std::ostringstream out4, err4;
  CHECK(run_script(world.string(), "/nonexistent.script", out4, err4) == 2);
}

TEST_CASE("script and repl agree on output") {
  const std::string commands =
      "eval exists@ x. P(x) at i1\n"
      "setop union {x | P(x)} {x | x = #b} at i2\n"
      "evolvent f : b1 -> i2\n"
      "view setop union {x | P(x)} {x | x = #b} along f at b1\n";
  auto world = write_file("w.world", w0_text);
  auto script = write_file("parity.script", commands);
  SessionOptions opts{Fixture::temp_dir().string(), 10000};
  std::ostringstream sout, serr;
  REQUIRE(run_script(world.string(), script.string(), sout, serr, opts) == 0);
  std::istringstream rin(commands);
  std::ostringstream rout, rerr;
  REQUIRE(run_repl(world.string(), rin, rout, rerr, opts) == 0);
  CHECK(sout.str() == rout.str());
  // The prompt stays on the error stream.
  CHECK(rerr.str().find("eventua> ") != std::string::npos);
}

TEST_CASE("repl quits cleanly") {
  auto world = write_file("w.world", w0_text);
  std::istringstream in(":quit\neval P(#a) at i1\n");
  std::ostringstream out, err;
  CHECK(run_repl(world.string(), in, out, err) == 0);
  CHECK(out.str().empty());
}

TEST_CASE("check_world prints a summary or fails") {
  auto world = write_file("w.world", w0_text);
  std::ostringstream out, err;
  CHECK(check_world(world.string(), out, err) == 0);
  CHECK(out.str().find("|V|=4") != std::string::npos);
  std::ostringstream out2, err2;
  CHECK(check_world("/nonexistent.world", out2, err2) == 2);
  CHECK(err2.str().find("error:") != std::string::npos);
}

TEST_CASE("snapshots serialize deterministically") {
  Snapshot snap{"b1", "i2", {{"b"}, {"c"}}, "setop"};
  CHECK(snapshot_text(snap) == "view b1 source i2\n(b)\n(c)\n");
  Snapshot empty{"b1", "i2", {}, ""};
  CHECK(snapshot_text(empty) == "view b1 source i2\n");
  CHECK_THROWS_AS(export_snapshot(snap, "/nonexistent_dir/x.view"), EngineError);
}

TEST_CASE("session rejects malformed command syntax") {
  Fixture fx;
  CHECK_FALSE(fx.run("setop union {x | P(x)} at i1"));
  CHECK_FALSE(fx.run("setop frob {x | P(x)} {x | P(x)} at i1"));
  CHECK_FALSE(fx.run("join < {x | P(x)} {x | P(x)} extra at i1"));
  CHECK_FALSE(fx.run("evolvent f b1 -> i2"));
  CHECK_FALSE(fx.run("view eval P(#a) at b1"));
  CHECK_FALSE(fx.run("type T {x | P(x)}"));
  CHECK_FALSE(fx.run("extent T_missing at i1"));
  CHECK_FALSE(fx.run("vardomain T_missing over i1"));
  CHECK_FALSE(fx.run("eval P(#a) at i1 i2"));
  CHECK(fx.out.str().empty());
}
