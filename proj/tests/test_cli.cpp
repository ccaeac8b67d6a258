#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

std::string cli_path;
std::string fixture_dir;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = cli_path + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) result.output.append(buf, n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

} // namespace

TEST_CASE("law suites succeed for healthy effects") {
  for (const char* effect : {"identity", "rstate", "reader", "rewriter", "vector",
                             "serializer", "info"}) {
    CAPTURE(effect);
    RunResult r = run(std::string("laws ") + effect + " --fin 2 --maxlen 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("all laws hold") != std::string::npos);
  }
}

TEST_CASE("the weak error instance skips the first laws") {
  RunResult r = run("laws error --fin 2 --format machine");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("law=4 name=first-unit-ancilla verdict=skipped") != std::string::npos);
  CHECK(r.output.find("law=12 name=inv-first verdict=skipped") != std::string::npos);
  CHECK(r.output.find("result=pass") != std::string::npos);
}

TEST_CASE("mutants exit with a law failure and a witness") {
  RunResult r = run("laws mutant-noinv --fin 2 --format machine");
  CHECK(r.exit_code == 1);
  size_t at = r.output.find("law=13 name=do-undo-do verdict=fail");
  REQUIRE(at != std::string::npos);
  CHECK(r.output.find("witness=", at) != std::string::npos);
  RunResult v = run("laws mutant-vector-len --fin 2");
  CHECK(v.exit_code == 1);
}

TEST_CASE("unknown effects and bad flags exit with a usage error") {
  CHECK(run("laws nosuch").exit_code == 2);
  CHECK(run("laws").exit_code == 2);
  CHECK(run("laws identity --fin nope").exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("the effect can be named by flag instead of positionally") {
  RunResult r = run("laws --effect identity");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("all laws hold") != std::string::npos);
}

TEST_CASE("machine-format reports are byte-identical across runs") {
  for (const char* args : {"laws identity --format machine", "laws info --format machine",
                           "laws serializer --format machine"}) {
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
  }
}

TEST_CASE("demos run their round trips") {
  for (const char* which : {"serialize", "state", "info"}) {
    CAPTURE(which);
    RunResult r = run(std::string("demo ") + which);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("result=pass") != std::string::npos);
  }
  RunResult rw = run("demo rewriter --mod 3");
  CHECK(rw.exit_code == 0);
  CHECK(rw.output.find("rewrite-cycle=pass") != std::string::npos);
  CHECK(run("demo nothing").exit_code == 2);
}

TEST_CASE("the serialize demo shows a rejected non-canonical string") {
  RunResult r = run("demo serialize");
  CHECK(r.output.find("=undefined") != std::string::npos);
}

TEST_CASE("bundled fixtures meet their expectations") {
  for (const char* name : {"trivial", "z2_groupoid", "idempotent", "defect", "z2_monoid",
                           "pinj_two_object"}) {
    CAPTURE(name);
    RunResult r = run("profcheck " + fixture_dir + "/" + name + ".fixture");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("expectations met") != std::string::npos);
  }
}

TEST_CASE("the defect fixture reports the expected failures") {
  RunResult r = run("profcheck --format machine " + fixture_dir + "/defect.fixture");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("check=diagram5 verdict=fail witness=a") != std::string::npos);
  CHECK(r.output.find("check=reconstructed-inverse verdict=fail witness=a") != std::string::npos);
  CHECK(r.output.find("check=agreement verdict=pass") != std::string::npos);
  CHECK(r.output.find("expectations=met") != std::string::npos);
  RunResult again = run("profcheck --format machine " + fixture_dir + "/defect.fixture");
  CHECK(r.output == again.output);
}

TEST_CASE("profcheck rejects malformed fixtures with a parse diagnostic") {
  std::string path = "/tmp/invarr_truncated.fixture";
  {
    std::ofstream out(path);
    out << "category broken\nobjects star\nmorphism f : star -> star\nid star = f\n";
    // no compose table, no dagger rows
  }
  RunResult r = run("profcheck " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("parse error") != std::string::npos);
  CHECK(r.output.find("line") != std::string::npos);
  CHECK(run("profcheck /tmp/definitely_not_there.fixture").exit_code == 2);
  std::remove(path.c_str());
}

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <cli-binary> <fixture-dir>\n");
    return 1;
  }
  cli_path = argv[1];
  fixture_dir = argv[2];
  doctest::Context context;
  return context.run();
}
