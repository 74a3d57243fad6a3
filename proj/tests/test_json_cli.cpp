#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "pmconv/json_io.hpp"
#include "pmconv/randgen.hpp"

using namespace pmconv;

namespace {

Interval ho(long long a, long long b) { return Interval::half_open(Rat(a), Rat(b)); }

std::string cli_binary() {
  for (const char* candidate : {"./pmconv", "./build/pmconv", "build/pmconv"}) {
    std::ifstream probe(candidate);
    if (probe.good()) return candidate;
  }
  return "";
}

struct CliRun {
  int exit_code;
  std::string out;
};

CliRun run_cli(const std::string& binary, const std::string& args) {
  std::string cmd = binary + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) out += buf;
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

}  // namespace

TEST_CASE("barcode json round trip") {
  Rng rng(71);
  for (int t = 0; t < 10; ++t) {
    Barcode b = random_barcode(rng, 5, -3, 12);
    b.add(Interval::ray_up(Rat(1)));
    b.add(Interval::ray_down(Rat(7, 2)));
    CHECK(barcode_from_json(barcode_to_json(b)) == b);
  }
  // Rationals survive as strings.
  Barcode q;
  q.add(Interval::half_open(Rat(1, 3), Rat(5, 2)));
  json j = barcode_to_json(q);
  CHECK(j["bars"][0]["left"] == "1/3");
  CHECK(barcode_from_json(j) == q);
}

TEST_CASE("graded barcode json round trip") {
  GradedBarcode g;
  g.add(0, ho(0, 2));
  g.add(1, ho(3, 5), 2);
  CHECK(graded_barcode_from_json(graded_barcode_to_json(g)) == g);
}

TEST_CASE("module json round trip") {
  Rng rng(72);
  auto base = std::make_shared<Base>(GridPoset({-1, 0}, {2, 2}));
  for (int t = 0; t < 6; ++t) {
    auto m = random_module(rng, base, 3, 2, t % 2 == 0);
    PersistenceModule back = module_from_json(module_to_json(m));
    CHECK(back == m);
  }
  // Schema errors are rejected.
  json bad = module_to_json(random_module(rng, base, 3, 2, false));
  bad["maps"] = json::array();
  bad["stalks"] = json::array({json{{"point", {0, 0}}, {"dim", 1}},
                               json{{"point", {2, 2}}, {"dim", 1}}});
  CHECK_NOTHROW(module_from_json(bad));  // disconnected but functorial
  bad["box"]["lo"] = {5, 5};
  CHECK_THROWS(module_from_json(bad));
}

TEST_CASE("serialization is deterministic") {
  Rng rng(73);
  Barcode b = random_barcode(rng, 6, 0, 9);
  CHECK(barcode_to_json(b).dump() == barcode_to_json(b).dump());
}

TEST_CASE("vertex functions parse rationals in several forms") {
  json j{{"0", 0.5}, {"1", "3/2"}, {"2", 2}};
  VertexFunction f = vertex_function_from_json(j, 3);
  CHECK(f[0] == Rat(1, 2));
  CHECK(f[1] == Rat(3, 2));
  CHECK(f[2] == Rat(2));
  CHECK_THROWS(vertex_function_from_json(json{{"0", 1}}, 2));  // missing vertex
}

TEST_CASE("cli runs the documented pipelines") {
  std::string bin = cli_binary();
  if (bin.empty()) return;  // binary not built next to the test runner

  write_file("cli_a.json", barcode_to_json(Barcode({{ho(0, 2), 1}})).dump());
  write_file("cli_b.json", barcode_to_json(Barcode({{ho(0, 3), 1}})).dump());

  CliRun conv = run_cli(bin, "convolve --cosheaf --derived cli_a.json cli_b.json");
  CHECK(conv.exit_code == 0);
  GradedBarcode g = graded_barcode_from_json(json::parse(conv.out));
  CHECK(g.at(0) == Barcode({{ho(0, 2), 1}}));
  CHECK(g.at(1) == Barcode({{ho(3, 5), 1}}));

  CliRun dist = run_cli(bin, "distance cli_a.json cli_a.json");
  CHECK(dist.exit_code == 0);
  CHECK(json::parse(dist.out)["value"] == "0");

  CliRun oracle = run_cli(bin, "oracle --seed 7 --trials 5");
  CHECK(oracle.exit_code == 0);
  json report = json::parse(oracle.out);
  CHECK(report["pass"] == 5);
  CHECK(report["fail"] == 0);

  // Determinism: same seed, byte-identical output.
  CliRun oracle2 = run_cli(bin, "oracle --seed 7 --trials 5");
  CHECK(oracle.out == oracle2.out);

  CliRun adj = run_cli(bin, "adjunction-check --seed 3 --trials 3");
  CHECK(adj.exit_code == 0);
  CHECK(json::parse(adj.out)["fail"] == 0);

  write_file("cli_k.json", R"({"simplices":[[0],[1],[2],[3],[0,1],[1,2],[2,3],[0,3]]})");
  write_file("cli_f.json", R"({"0":0,"1":1,"2":2,"3":1})");
  write_file("cli_g.json", R"({"0":"1/2","1":"3/2","2":"5/2","3":"3/2"})");
  CliRun stab = run_cli(bin, "stability --complex cli_k.json --f cli_f.json --g cli_g.json");
  CHECK(stab.exit_code == 0);
  json srep = json::parse(stab.out);
  CHECK(srep["holds"] == true);
  CHECK(srep["sup_norm"] == "1/2");

  // Singleton bars have no closed form; the grid fallback takes over.
  Barcode singleton;
  singleton.add(Interval::singleton(Rat(2)));
  write_file("cli_s.json", barcode_to_json(singleton).dump());
  CliRun fb = run_cli(bin, "convolve --cosheaf --derived cli_s.json cli_b.json");
  CHECK(fb.exit_code == 0);
  CHECK_NOTHROW(graded_barcode_from_json(json::parse(fb.out)));

  // Schema errors exit with 2.
  write_file("cli_bad.json", "{\"bars\": [{\"left\": \"x\"}]}");
  CliRun bad = run_cli(bin, "convolve --sheaf cli_bad.json cli_a.json");
  CHECK(bad.exit_code == 2);
}
