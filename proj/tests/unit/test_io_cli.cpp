#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anglers/io_json.hpp"
#include "support/instances.hpp"

using namespace anglers;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("anglers_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

CliResult run_cli(const TempDir& dir, const std::string& args) {
  std::string out_file = dir.file("__out.txt");
  std::string cmd = "cd '" + dir.path.string() + "' && '" + ANGLERS_BIN + "' " + args + " > '" +
                    out_file + "' 2>&1";
  int rc = std::system(cmd.c_str());
  CliResult res;
#ifdef WEXITSTATUS
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
#else
  res.exit_code = rc;
#endif
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  res.output = ss.str();
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("JSON round trips are bit-identical") {
  SECTION("triangulation") {
    json j = triangulation_to_json(instances::fmp_two_tet());
    auto data = triangulation_from_json(j);
    json j2 = triangulation_to_json(data.tet_count, data.gluings);
    CHECK(canonical_dump(j) == canonical_dump(j2));
  }
  SECTION("exact angle file with tags") {
    std::vector<Rational> v(12, Rational(1, 6));
    v[3] = Rational(7, 42);
    AngleAssignment a = AngleAssignment::exact(v);
    std::vector<TetTag> tags{TetTag::flat, TetTag::hyperideal};
    json j = angles_to_json(a, &tags);
    auto parsed = angles_from_json(j, 12);
    REQUIRE(parsed.tags);
    json j2 = angles_to_json(parsed.assignment, &*parsed.tags);
    CHECK(canonical_dump(j) == canonical_dump(j2));
    CHECK(parsed.assignment.pi_units(3) == Rational(1, 6));
  }
  SECTION("float angle file") {
    std::vector<double> v(12, 0.5236);
    json j = angles_to_json(AngleAssignment::floating(v));
    auto parsed = angles_from_json(j, 12);
    CHECK_FALSE(parsed.assignment.exact_mode());
    CHECK(canonical_dump(angles_to_json(parsed.assignment)) == canonical_dump(j));
  }
  SECTION("surface") {
    auto tri = instances::fmp_two_tet();
    auto tube = edge_tube_surface(tri, 0);
    json j = surface_to_json(tube);
    auto parsed = surface_from_json(j);
    CHECK(canonical_dump(surface_to_json(parsed)) == canonical_dump(j));
  }
  SECTION("decomposition") {
    auto dec = instances::figure3_decomposition();
    json j = decomposition_to_json(dec);
    auto parsed = decomposition_from_json(j);
    CHECK(canonical_dump(decomposition_to_json(parsed)) == canonical_dump(j));
  }
  SECTION("malformed files raise IOError") {
    CHECK_THROWS_AS(triangulation_from_json(json{{"tets", 1}}), IOError);
    CHECK_THROWS_AS(angles_from_json(json{{"mode", "nonsense"}, {"values", json::object()}}, 0),
                    IOError);
    CHECK_THROWS_AS(surface_from_json(json{{"disks", 3}}), IOError);
  }
}

TEST_CASE("cli: validate") {
  TempDir dir;
  write_json_file(dir.file("tri.json"), triangulation_to_json(instances::fmp_two_tet()));
  auto res = run_cli(dir, "validate tri.json");
  CHECK(res.exit_code == 0);
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("valence 12"));
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("chi -2"));
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("valid"));

  // even permutation: mathematical failure, exit 1
  auto gl = instances::fmp_two_tet_gluings();
  gl[0].perm = Perm4(3, 1, 0, 2);
  write_json_file(dir.file("even.json"), triangulation_to_json(2, gl));
  auto res1 = run_cli(dir, "validate even.json");
  CHECK(res1.exit_code == 1);
  CHECK_THAT(res1.output, Catch::Matchers::ContainsSubstring("orientability failure"));

  // malformed JSON: exit 2
  std::ofstream(dir.file("broken.json")) << "{ not json";
  auto res2 = run_cli(dir, "validate broken.json");
  CHECK(res2.exit_code == 2);
}

TEST_CASE("cli: angles find / verify") {
  TempDir dir;
  write_json_file(dir.file("tri.json"), triangulation_to_json(instances::valence8_four_tet()));
  auto res = run_cli(dir, "angles find tri.json -o witness.json");
  CHECK(res.exit_code == 0);
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("strictly_feasible"));
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("s* = 1/4"));
  auto res2 = run_cli(dir, "angles verify tri.json witness.json");
  CHECK(res2.exit_code == 0);
  CHECK_THAT(res2.output, Catch::Matchers::ContainsSubstring("valid strict angle structure"));

  // infeasible: exit 1, certificate written
  write_json_file(dir.file("dbl.json"), triangulation_to_json(instances::doubled_tetrahedron()));
  auto res3 = run_cli(dir, "angles find dbl.json -o w2.json --certificate cert.json");
  CHECK(res3.exit_code == 1);
  CHECK_THAT(res3.output, Catch::Matchers::ContainsSubstring("infeasible"));
  CHECK(fs::exists(dir.file("cert.json")));
  json cert = read_json_file(dir.file("cert.json"));
  CHECK(cert.at("kind") == "farkas");
  CHECK(parse_rational(cert.at("value").get<std::string>()) == Rational(-2));
}

TEST_CASE("cli: layered build then perturb chain") {
  TempDir dir;
  write_json_file(dir.file("dec.json"),
                  decomposition_to_json(instances::two_cell_geometric_decomposition()));
  auto res = run_cli(dir, "layered build dec.json --geometry --output-prefix out");
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir.file("out.tri.json")));
  CHECK(fs::exists(dir.file("out.beta.json")));
  CHECK(fs::exists(dir.file("out.provenance.json")));

  auto res2 = run_cli(dir, "angles perturb out.tri.json out.beta.json -o strict.json");
  CHECK(res2.exit_code == 0);
  CHECK_THAT(res2.output, Catch::Matchers::ContainsSubstring("strict angle structure written"));
  auto res3 = run_cli(dir, "angles verify out.tri.json strict.json --tol 1e-9");
  CHECK(res3.exit_code == 0);
}

TEST_CASE("cli: layered build of the three-flat configuration") {
  TempDir dir;
  write_json_file(dir.file("fig.json"),
                  decomposition_to_json(instances::figure3_decomposition()));
  auto res = run_cli(dir, "layered build fig.json --output-prefix fig");
  CHECK(res.exit_code == 0);
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("(3 flat)"));
  json prov = read_json_file(dir.file("fig.provenance.json"));
  std::vector<std::vector<int>> quads;
  for (const auto& p : prov)
    if (p.at("kind") == "flat") quads.push_back(p.at("vertices").get<std::vector<int>>());
  REQUIRE(quads.size() == 3);
  CHECK(quads[0] == std::vector<int>{1, 2, 3, 5});
  CHECK(quads[1] == std::vector<int>{1, 3, 4, 5});
  CHECK(quads[2] == std::vector<int>{1, 7, 6, 5});
}

TEST_CASE("cli: volume eval and maximize") {
  TempDir dir;
  write_json_file(dir.file("tri.json"), triangulation_to_json(instances::fmp_two_tet()));
  REQUIRE(run_cli(dir, "angles find tri.json -o w.json").exit_code == 0);
  auto res = run_cli(dir, "volume eval tri.json w.json");
  CHECK(res.exit_code == 0);
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("\"volume\""));

  auto res2 = run_cli(dir, "volume maximize tri.json w.json -o max.json --report rep.json");
  CHECK(res2.exit_code == 0);
  CHECK_THAT(res2.output, Catch::Matchers::ContainsSubstring("critical"));
  json rep = read_json_file(dir.file("rep.json"));
  // the maximizer of this census instance is the regular pi/6 structure
  CHECK_THAT(rep.at("volume").get<double>(),
             Catch::Matchers::WithinAbs(2 * 3.2259951354175, 1e-6));

  // non-strict input: exit 2
  write_json_file(dir.file("bad.json"),
                  angles_to_json(AngleAssignment::exact(std::vector<Rational>(12, Rational(1, 4)))));
  CHECK(run_cli(dir, "volume eval tri.json bad.json").exit_code == 2);
}

TEST_CASE("cli: surface check") {
  TempDir dir;
  auto tri = instances::fmp_two_tet();
  write_json_file(dir.file("tri.json"), triangulation_to_json(tri));
  REQUIRE(run_cli(dir, "angles find tri.json -o w.json").exit_code == 0);
  write_json_file(dir.file("tube.json"), surface_to_json(edge_tube_surface(tri, 0)));
  auto res = run_cli(dir, "surface check tri.json w.json tube.json");
  CHECK(res.exit_code == 0);
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("chi_combinatorial = 0"));
  CHECK_THAT(res.output, Catch::Matchers::ContainsSubstring("verdict: tube"));

  write_json_file(dir.file("bp.json"), surface_to_json(boundary_parallel_surface(tri)));
  auto res2 = run_cli(dir, "surface check tri.json w.json bp.json");
  CHECK(res2.exit_code == 0);
  CHECK_THAT(res2.output, Catch::Matchers::ContainsSubstring("chi_combinatorial = -2"));

  // broken pairing: exit 2
  auto tube = edge_tube_surface(tri, 0);
  std::swap(tube.pairings[0].disk_b, tube.pairings[1].disk_b);
  write_json_file(dir.file("broken.json"), surface_to_json(tube));
  auto res3 = run_cli(dir, "surface check tri.json w.json broken.json");
  CHECK(res3.exit_code == 2);
}

TEST_CASE("cli outputs re-read bit-identically") {
  TempDir dir;
  write_json_file(dir.file("tri.json"), triangulation_to_json(instances::valence8_four_tet()));
  REQUIRE(run_cli(dir, "angles find tri.json -o w.json").exit_code == 0);
  std::string first = slurp(dir.file("w.json"));
  auto parsed = angles_from_json(read_json_file(dir.file("w.json")), 24);
  CHECK(canonical_dump(angles_to_json(parsed.assignment)) == first);
  // determinism: a second run writes identical bytes
  REQUIRE(run_cli(dir, "angles find tri.json -o w2.json").exit_code == 0);
  CHECK(slurp(dir.file("w2.json")) == first);
}
