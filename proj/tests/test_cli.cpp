// End-to-end checks of the command-line harness: exit codes, report shape,
// determinism, and artifact files that round-trip through the text formats.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "../vendor/json.hpp"
#include "cci/digraph.hpp"
#include "cci/matgroup.hpp"
#include "cci/schur.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() /
                       ("cci_cli_out_" + std::to_string(++counter) + ".json");
  const std::string cmd = std::string(CAYLEY_CI_BIN) + " " + args + " > " +
                          out.string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  fs::remove(out);
  return r;
}

}  // namespace

TEST_CASE("report shape and passing run") {
  const RunResult r = run_cli("orbits --q 3");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["command"] == "orbits");
  REQUIRE(doc["parameters"]["q"] == 3);
  REQUIRE(doc["runtime_ms"] == 0);
  REQUIRE(doc["claims"].is_array());
  REQUIRE(!doc["claims"].empty());
  for (const json& c : doc["claims"]) {
    REQUIRE(c.contains("name"));
    REQUIRE(c.contains("expected"));
    REQUIRE(c.contains("actual"));
    REQUIRE(c["pass"] == true);
    REQUIRE(c["expected"] == c["actual"]);
  }
  REQUIRE(doc["artifact_paths"].is_array());
}

TEST_CASE("claim values are the recomputed invariants") {
  const json two = json::parse(run_cli("two-closed --q 3").out);
  bool found = false;
  for (const json& c : two["claims"])
    if (c["name"] == "orbital closure order is 4q^3") {
      found = true;
      REQUIRE(c["expected"] == 108);
      REQUIRE(c["actual"] == 108);
    }
  REQUIRE(found);

  const json sg = json::parse(run_cli("schur-gen --q 7").out);
  REQUIRE(sg["parameters"]["x"] == 3);
  for (const json& c : sg["claims"]) {
    if (c["name"] == "generated ring equals the transitivity module")
      REQUIRE(c["actual"] == false);
    if (c["name"] == "generated ring rank") REQUIRE(c["actual"] == 7);
    if (c["name"] == "digraph automorphism group order") REQUIRE(c["actual"] == 1372);
    REQUIRE(c["pass"] == true);
  }

  const json nc = json::parse(run_cli("non-ci --q 5").out);
  for (const json& c : nc["claims"]) {
    if (c["name"] == "graph automorphism group order") REQUIRE(c["actual"] == 2000);
    if (c["name"] == "regular conjugacy classes") REQUIRE(c["actual"] == 2);
    REQUIRE(c["pass"] == true);
  }
}

TEST_CASE("usage errors exit with 64") {
  REQUIRE(run_cli("orbits --q 4").exit_code == 64);
  REQUIRE(run_cli("orbits --q 15").exit_code == 64);
  REQUIRE(run_cli("orbits").exit_code == 64);
  REQUIRE(run_cli("no-such-command").exit_code == 64);
  REQUIRE(run_cli("").exit_code == 64);
  REQUIRE(run_cli("schur-gen --q 5 --x 3").exit_code == 64);
  REQUIRE(run_cli("--help").exit_code == 0);
}

TEST_CASE("budget exhaustion exits with 2") {
  REQUIRE(run_cli("schur-gen --q 5 --budget 5").exit_code == 2);
  REQUIRE(run_cli("z27 --budget 50").exit_code == 2);
}

TEST_CASE("reports are byte-identical across reruns") {
  const RunResult a = run_cli("separate --q 5");
  const RunResult b = run_cli("separate --q 5");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);

  const RunResult c = run_cli("non-ci --q 3");
  const RunResult d = run_cli("non-ci --q 3");
  REQUIRE(c.exit_code == 0);
  REQUIRE(c.out == d.out);
}

TEST_CASE("artifact files round-trip through the text formats") {
  const fs::path dir = fs::temp_directory_path() / "cci_cli_artifacts";
  fs::remove_all(dir);

  SECTION("digraph artifacts") {
    const RunResult r = run_cli("non-ci --q 3 --out " + dir.string());
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc["artifact_paths"] ==
            json::array({"cay_t_q3.digraph.txt", "cay_tprime_q3.digraph.txt"}));
    const cci::Digraph got =
        cci::digraph_from_text(slurp(dir / "cay_t_q3.digraph.txt"));
    const cci::Digraph want =
        cci::cayley(cci::h_bracket_table(3), cci::build_t_set(3));
    REQUIRE(got == want);
    const cci::Digraph got2 =
        cci::digraph_from_text(slurp(dir / "cay_tprime_q3.digraph.txt"));
    REQUIRE(got2 == cci::cayley(cci::h_bracket_table(3), cci::build_t_prime_set(3)));
  }

  SECTION("partition artifacts") {
    const RunResult r = run_cli("orbits --q 5 --out " + dir.string());
    REQUIRE(r.exit_code == 0);
    const cci::SRingPartition p = cci::partition_from_text(
        cci::h_degree(5), slurp(dir / "orbits_q5.partition.txt"));
    REQUIRE(p.rank() == cci::family_count(5));
    std::vector<std::vector<int>> classes = p.classes;
    std::sort(classes.begin(), classes.end());
    std::vector<std::vector<int>> fams;
    for (const cci::Family& f : cci::orbit_families(5)) fams.push_back(f.members);
    std::sort(fams.begin(), fams.end());
    REQUIRE(classes == fams);
  }

  fs::remove_all(dir);
}

TEST_CASE("the combined sweep aggregates every subreport") {
  const RunResult r = run_cli("all --jobs 4");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["command"] == "all");
  REQUIRE(doc["parameters"]["sweep"] == json::array({3, 5, 7, 11}));
  REQUIRE(doc["claims"].size() == doc["reports"].size());
  for (const json& c : doc["claims"]) REQUIRE(c["actual"] == "pass");
  int nonci = 0, z27 = 0, oracle = 0;
  for (const json& sub : doc["reports"]) {
    for (const json& c : sub["claims"]) REQUIRE(c["pass"] == true);
    if (sub["command"] == "non-ci") ++nonci;
    if (sub["command"] == "z27") ++z27;
    if (sub["command"] == "oracle") ++oracle;
  }
  REQUIRE(nonci == 4);
  REQUIRE(z27 == 1);
  REQUIRE(oracle == 1);

  // concurrency must not change a byte
  const RunResult serial = run_cli("all --jobs 1");
  REQUIRE(serial.out == r.out);
}
