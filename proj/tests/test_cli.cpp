#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string log = "cli_stdout.txt";
  const std::string cmd = std::string("\"") + ROF1D_CLI_PATH + "\" " + args + " > " + log + " 2>cli_stderr.txt";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream os;
  os << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("list") {
  const Result r = cli("list");
  CHECK(r.code == 0);
  CHECK(r.out.find("example-s4") != std::string::npos);
  CHECK(r.out.find("instability-a") != std::string::npos);
  CHECK(r.out.find("suite-all") != std::string::npos);
}

TEST_CASE("preset run") {
  fs::remove_all("cli_example");
  const Result r = cli("preset example-s4 --k 4 --out cli_example --svg");
  CHECK(r.code == 0);
  CHECK(r.out.find("T_ext: 0.75") != std::string::npos);
  CHECK(slurp("cli_example/terminal.csv") == "x_left,x_right,value\n0,1,-1\n1,2,1\n");
  CHECK(fs::exists("cli_example/plot.svg"));
  CHECK(fs::exists("cli_example/scenario.yaml"));

  // The recorded scenario replays to identical outputs.
  const Result again = cli("run cli_example/scenario.yaml --out cli_replay");
  CHECK(again.code == 0);
  CHECK(slurp("cli_replay/terminal.csv") == slurp("cli_example/terminal.csv"));
  CHECK(slurp("cli_replay/events.csv") == slurp("cli_example/events.csv"));
}

TEST_CASE("small data preset") {
  const Result r = cli("preset thm-4-2 --out cli_thm42");
  CHECK(r.code == 0);
  CHECK(slurp("cli_thm42/summary.txt").find("minimizer: constant 0") != std::string::npos);
}

TEST_CASE("usage and parse errors exit with 2") {
  { std::ofstream("cli_empty.yaml"); }
  CHECK(cli("run cli_empty.yaml --out cli_empty_out").code == 2);
  CHECK(cli("run does_not_exist.yaml --out x").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("preset example-s4").code == 2);
  CHECK(cli("preset no-such-preset --out x").code == 2);
  CHECK(cli("preset example-s4 --k banana --out x").code == 2);
  CHECK(cli("preset thm-4-1 --k 3 --out x").code == 2);
}

TEST_CASE("verdict failures exit with 1") {
  // A coarse oracle grid misses the breakpoint at 0.3, so the cross-check fails.
  std::ofstream("cli_fail.yaml") << "name: coarse\ntask: solve\n"
                                    "f: {domain_length: 2, breakpoints: [0.3], values: [1, -1]}\n"
                                    "phi: [0, 0]\nlambda: 10\noptions: {oracle_grid: 8}\n";
  const Result r = cli("run cli_fail.yaml --out cli_fail_out");
  CHECK(r.code == 1);
  CHECK(r.out.find("oracle_agreement: FAILS") != std::string::npos);
}
