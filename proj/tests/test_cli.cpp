#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fockdens/cli.hpp"
#include "fockdens/errors.hpp"
#include "fockdens/scene.hpp"

using namespace fockdens;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = run_cli(args, o, e);
  return {c, o.str(), e.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("fockdens_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

const char* kPlane = R"({"dimension": 2, "weight": {"kind": "euclidean"}, "hypersurface": {"terms": [[[0,1], 1, 0]]}})";

}  // namespace

TEST_CASE("minimal scene gets defaults") {
  const Scene s = parse_scene(write("plane.json", kPlane));
  CHECK(s.dimension == 2);
  CHECK(s.hypersurface.has_value());
  CHECK(s.defaults.seed == 42);
  CHECK(s.defaults.budget == 20000);
  CHECK(s.weight.levi().matrix().isApprox(cmat::Identity(2, 2)));
}

TEST_CASE("scene validation names the offending field") {
  auto bad = [](const std::string& text) {
    return parse_scene_json(nlohmann::json::parse(text));
  };
  CHECK_THROWS_WITH_AS(
      bad(R"({"dimension": 2, "weight": {"kind": "quadratic", "Q": [[[1,0],[1,0]], [[0,0],[1,0]]]},
              "hypersurface": {"terms": [[[0,1], 1, 0]]}})"),
      doctest::Contains("weight.Q"), ValidationError);
  CHECK_THROWS_WITH_AS(bad(R"({"dimension": 2, "colour": 3, "hypersurface": {"terms": [[[0,1], 1, 0]]}})"),
                       doctest::Contains("colour"), ValidationError);
  CHECK_THROWS_WITH_AS(bad(R"({"dimension": 2, "hypersurface": {"terms": [[[0,1,0], 1, 0]]}})"),
                       doctest::Contains("hypersurface"), ValidationError);
  CHECK_THROWS_AS(bad(R"({"dimension": 2})"), ValidationError);
  CHECK_THROWS_AS(parse_scene((scratch() / "missing.json").string()), ValidationError);
  CHECK_THROWS_AS(parse_scene(write("broken.json", "{\"dimension\": ")), ValidationError);
}

TEST_CASE("scene round trip with hypersurface and product sequence") {
  const std::string text = R"({
    "dimension": 2,
    "weight": {"kind": "quadratic", "Q": [[[2,0],[1,0]], [[1,0],[1,0]]], "h": [[[1,0], 0.5, -0.25]]},
    "hypersurface": {"factors": [[[[1,0], 1, 0]], [[[1,0], 1, 0], [[0,0], -1, 0]]]},
    "product_sequence": {"gamma": [[0,0], [1,0]], "lambdas": [[[0,0], [0,2]], [[0,1]]]},
    "defaults": {"budget": 1234, "seed": 7}
  })";
  const Scene a = parse_scene_json(nlohmann::json::parse(text));
  REQUIRE(a.hypersurface.has_value());
  REQUIRE(a.product_sequence.has_value());
  const auto j = scene_to_json(a);
  const Scene b = parse_scene_json(j);
  CHECK(scene_to_json(b) == j);
  CHECK(b.product_sequence->lambdas.size() == 2);
  CHECK(b.defaults.budget == 1234);
  CHECK(b.hypersurface->factors().size() == 2);
}

TEST_CASE("sequence and points files") {
  const auto s = read_sequence_file(write("seq.txt", "# comment\n0 0\n1 0.5\n\n-2 3\n"));
  REQUIRE(s.size() == 3);
  CHECK(s.points[1] == cplx(1.0, 0.5));
  CHECK_THROWS_AS(read_sequence_file(write("seq_bad.txt", "0 0\n1\n")), ValidationError);
  CHECK_THROWS_AS(read_sequence_file(write("seq_dup.txt", "0 0\n0 0\n")), ValidationError);

  const auto ps = read_product_sequence_file(write("prod.txt", "[gamma]\n0 0\n1 0\n[lambda]\n0 0\n0 2\n[lambda]\n0 1\n"));
  CHECK(ps.gamma.size() == 2);
  REQUIRE(ps.lambdas.size() == 2);
  CHECK(ps.lambdas[0].size() == 2);
  CHECK_THROWS_AS(read_product_sequence_file(write("prod_bad.txt", "[gamma]\n0 0\n1 0\n[lambda]\n0 0\n")),
                  ValidationError);

  const auto pts = read_points_file(write("pts.txt", "0 0 1 0\n0.5 0 0 -1\n"), 2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1][1] == cplx(0.0, -1.0));
  CHECK_THROWS_AS(read_points_file(write("pts_bad.txt", "0 0 1\n"), 2), ValidationError);
}

TEST_CASE("complex list parsing") {
  const cvec z = parse_complex_list("1,2:0.5");
  REQUIRE(z.size() == 2);
  CHECK(z[1] == cplx(2.0, 0.5));
  CHECK_THROWS_AS(parse_complex_list("1,x"), ValidationError);
  CHECK_THROWS_AS(parse_complex_list("1:2:3"), ValidationError);
  CHECK(parse_real_list("2,4,8").size() == 3);
}

TEST_CASE("commands run and carry error columns") {
  const auto scene = write("plane.json", kPlane);
  auto r = run({"density", "--scene", scene, "--center", "0,0", "--radius", "4", "--budget", "4000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("std_error") != std::string::npos);

  write("pts.txt", "0 0 0.5 0\n1 0 0 0.3\n");
  r = run({"singularity", "--scene", scene, "--points", (scratch() / "pts.txt").string(), "--radius", "2",
           "--method", "both", "--budget", "2000"});
  CHECK(r.code == 0);
  CHECK(r.out.find(",route,value,error") != std::string::npos);
  CHECK(r.out.find(",newton,") != std::string::npos);
  CHECK(r.out.find(",logT,") != std::string::npos);

  r = run({"density-scan", "--scene", scene, "--center", "0,0", "--center", "1,0", "--radii", "2,4,8", "--budget",
           "2000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("not a limit") != std::string::npos);

  r = run({"flatness", "--scene", scene, "--center", "0,0", "--radius", "1", "--budget", "200"});
  CHECK(r.code == 0);

  r = run({"sampling-ratio", "--scene", scene, "--radius", "5", "--degree", "3", "--budget", "4000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("lower_error") != std::string::npos);

  r = run({"extend", "--scene", scene, "--degree", "3", "--radius", "3", "--monomial", "2,0", "--lambda", "1e-10",
           "--budget", "2000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("residual") != std::string::npos);

  const auto s1 = write("seq1.json", R"({"dimension": 1, "sequences": {"g": [[2,0], [0,3]]}})");
  r = run({"jensen", "--scene", s1, "--radius", "4"});
  CHECK(r.code == 0);
  r = run({"seq-density", "--scene", s1, "--radii", "1,5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("std_error") != std::string::npos);
  r = run({"sampling-ratio", "--scene", s1, "--radius", "6", "--degree", "10", "--target", "lattice", "--alphas",
           "0.5,0.8"});
  CHECK(r.code == 0);

  const auto s2 = write("prod.json", R"({"dimension": 2, "weight": {"kind": "quadratic",
      "Q": [[[2,0],[1,0]], [[1,0],[1,0]]]}, "product_sequence": {"gamma": [[0,0]], "lambdas": [[[0,0], [0,3], [3,0]]]}})");
  r = run({"product-check", "--scene", s2, "--mode", "interp", "--r", "1", "--eps", "0.1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("violated") != std::string::npos);
  CHECK(r.out.find("sufficient condition only") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto scene = write("plane.json", kPlane);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"density", "--scene", scene, "--center", "0,0"}).code == 2);  // missing --radius
  CHECK(run({"density", "--scene", scene, "--center", "0,0,0", "--radius", "1"}).code == 2);
  CHECK(run({"density", "--scene", scene, "--center", "0,0", "--radius", "-1"}).code == 2);
  const auto rep = run({"flatness", "--scene", scene, "--center", "0,10", "--radius", "1"});
  CHECK(rep.code == 2);
  CHECK(rep.err.find("empty region") != std::string::npos);
  // Gram of a tiny window is numerically singular.
  CHECK(run({"sampling-ratio", "--scene", scene, "--radius", "0.01", "--degree", "8", "--target", "ambient",
             "--max-leak", "1"})
            .code == 3);

#ifdef FOCKDENS_CLI_PATH
  const std::string bin = FOCKDENS_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status(bin + " --help") == 0);
  CHECK(status(bin + " nope") == 2);
  CHECK(status(bin + " density --scene " + scene + " --center 0,0 --radius 2 --budget 1000") == 0);
#endif
}

TEST_CASE("same seed gives byte-identical CSV") {
  const auto scene = write("plane.json", kPlane);
  const std::vector<std::string> args{"singularity", "--scene", scene, "--point", "0.3,0.2", "--radius", "1",
                                      "--method", "both", "--budget", "4000", "--seed", "9"};
  CHECK(run(args).out == run(args).out);

  const auto dir_a = (scratch() / "a").string(), dir_b = (scratch() / "b").string();
  std::vector<std::string> d{"density-scan", "--scene", scene, "--center", "0,0", "--radii", "2,4", "--budget", "3000"};
  auto da = d, db = d;
  da.insert(da.end(), {"--out", dir_a});
  db.insert(db.end(), {"--out", dir_b});
  REQUIRE(run(da).code == 0);
  REQUIRE(run(db).code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const auto a = slurp(fs::path(dir_a) / "density-scan.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(fs::path(dir_b) / "density-scan.csv"));

  std::vector<std::string> other = args;
  other.back() = "10";
  CHECK(run(other).out != run(args).out);
}
