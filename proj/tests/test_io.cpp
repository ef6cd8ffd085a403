#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "core/errors.hpp"
#include "io/config.hpp"
#include "io/sha1.hpp"
#include "io/writers.hpp"
#include "pipeline/pipeline.hpp"

using namespace wkam;

namespace {

const char* kSampleConfig = R"(
# two-component instance with a single well
[problem]
family = "quadratic"
potential = "sin(pi*x)^2"
d = 1
m = 2
coupling = [[0.0, 1.0], [1.0, 0.0]]

[discretization]
N = 32
Nq = 9
Qmax = 3.0
eps = [0.2, 0.1]

[solver]
seed = 7
tol = 1e-3

[output]
dir = "out"
formats = ["csv", "json"]
)";

struct TempDir {
  std::string path;
  explicit TempDir(const std::string& name) : path("wkam_test_" + name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing, defaults, validation") {
  auto cfg = RunConfig::from_text(kSampleConfig);
  CHECK(cfg.family == "quadratic");
  CHECK(cfg.n == 32);
  CHECK(cfg.nq == 9);
  CHECK(cfg.eps == std::vector<double>{0.2, 0.1});
  CHECK(cfg.seed == 7);
  CHECK(cfg.coupling[0][1] == 1.0);
  CHECK(cfg.wants_format("csv"));
  CHECK_FALSE(cfg.wants_format("bin"));

  auto spec = cfg.build_spec();
  CHECK(spec.m == 2);
  auto grid = cfg.build_grid();
  CHECK(grid.n == 32);

  CHECK_THROWS_AS(RunConfig::from_text("[problem]\nfamily = \"cubic\"\n"), ParseError);
  CHECK_THROWS_AS(RunConfig::from_text("[problem]\nunknown_key = 3\n"), ParseError);
  CHECK_THROWS_AS(RunConfig::from_text("[discretization]\nN = 4\n"), ParseError);
  CHECK_THROWS_AS(RunConfig::from_text("[problem\nd = 1\n"), ParseError);
  CHECK_THROWS_AS(RunConfig::from_text("[problem]\nd = \n"), ParseError);
  CHECK_THROWS_AS(RunConfig::from_text("[problem]\nm = 2\ncoupling = [[0,1]]\n"), ParseError);
}

TEST_CASE("config overrides") {
  auto cfg = RunConfig::from_text(kSampleConfig);
  cfg.apply_override("grid", "64");
  CHECK(cfg.n == 64);
  cfg.apply_override("eps", "0.3,0.15");
  CHECK(cfg.eps == std::vector<double>{0.3, 0.15});
  cfg.apply_override("seed", "99");
  CHECK(cfg.seed == 99);
  cfg.apply_override("out", "elsewhere");
  CHECK(cfg.out_dir == "elsewhere");
  CHECK_THROWS_AS(cfg.apply_override("nope", "1"), ParseError);
  CHECK_THROWS_AS(cfg.apply_override("grid", "four"), ParseError);
}

TEST_CASE("double rendering round-trips") {
  for (double v : {0.0, 1.0, -0.015625, M_PI, 1e-300, 6.02e23}) {
    CHECK(std::stod(fmt_double(v)) == v);
  }
}

TEST_CASE("sha1 known vectors") {
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("The quick brown fox jumps over the lazy dog") ==
        "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
}

TEST_CASE("binary slab container round-trips") {
  auto g = make_grid(1, 8, 2);
  TimeSlab slab;
  slab.grid = g;
  slab.eps = 0.1;
  slab.dt = 0.25;
  slab.times = {0.0, 0.5, 1.0};
  slab.steps = {0, 2, 4};
  slab.total_steps = 4;
  slab.stride = 2;
  for (int j = 0; j < 3; ++j) {
    GridFunction f(g);
    for (int k = 0; k < g.dofs(); ++k) f.v[k] = std::sin(j + 0.37 * k) * 1e3;
    slab.frames.push_back(f);
  }
  const auto bytes = slab_binary(slab);
  const auto header = read_slab_header(bytes);
  CHECK(header.version == 1);
  CHECK(header.d == 1);
  CHECK(header.n == 8);
  CHECK(header.m == 2);
  CHECK(header.frames == 3);
  const auto frames = read_slab_frames(bytes);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < g.dofs(); ++k) CHECK(frames[j][k] == slab.frames[j].v[k]);

  auto corrupt = bytes;
  corrupt[0] = 'X';
  CHECK_THROWS_AS(read_slab_header(corrupt), ParseError);
  corrupt = bytes;
  corrupt.pop_back();
  CHECK_THROWS_AS(read_slab_frames(corrupt), ParseError);
}

TEST_CASE("table potential loading from CSV") {
  TempDir dir("table");
  const std::string path = dir.path + "/pot.csv";
  std::string csv = "# samples\n";
  for (int k = 0; k < 16; ++k) {
    const double x = k / 16.0;
    const double f = std::sin(M_PI * x) * std::sin(M_PI * x);
    csv += fmt_double(f) + "," + fmt_double(f + 1.0) + "\n";
  }
  write_text_file(path, csv);

  RunConfig cfg;
  cfg.potential_table = path;
  cfg.m = 2;
  auto spec = cfg.build_spec();
  CHECK(spec.potential.is_table());
  CHECK(spec.potential.value(vec1(0.25), 1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(spec.potential.value(vec1(0.25), 2) == doctest::Approx(1.5).epsilon(1e-10));

  RunConfig missing;
  missing.potential_table = dir.path + "/nope.csv";
  CHECK_THROWS_AS(missing.build_spec(), IoError);
}

TEST_CASE("check pipeline writes assumptions and a complete manifest") {
  TempDir dir("check");
  auto cfg = RunConfig::from_text(kSampleConfig);
  cfg.out_dir = dir.path;
  auto res = run_command("check", cfg, kSampleConfig);
  CHECK(res.exit_code == 0);
  CHECK(res.summary["all_pass"] == true);

  auto manifest = nlohmann::json::parse(read_text_file(dir.path + "/manifest.json"));
  CHECK(manifest["command"] == "check");
  CHECK(manifest["config_sha1"] == sha1_hex(kSampleConfig));
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest["config"]["solver"]["seed"] == 7);
  CHECK(manifest["config"]["solver"]["tol"] == 1e-3);
  const auto files = manifest["artifacts"].get<std::vector<std::string>>();
  CHECK(std::find(files.begin(), files.end(), "assumptions.json") != files.end());

  // an asymmetric coupling block turns the run into a verification failure
  cfg.coupling = {{0.0, 1.0}, {0.0, 0.0}};
  auto res2 = run_command("check", cfg, "");
  CHECK(res2.exit_code == 1);
}

TEST_CASE("unknown subcommand is a configuration error") {
  auto cfg = RunConfig::from_text(kSampleConfig);
  TempDir dir("bad");
  cfg.out_dir = dir.path;
  CHECK_THROWS_AS(run_command("frobnicate", cfg, ""), ParseError);
}

TEST_CASE("mather-lp pipeline artifacts") {
  TempDir dir("lp");
  auto cfg = RunConfig::from_text(kSampleConfig);
  cfg.out_dir = dir.path;
  cfg.eps = {0.2};
  auto res = run_command("mather-lp", cfg, "");
  CHECK(res.exit_code == 0);
  CHECK(std::abs(res.summary["lp_value"].get<double>()) <= 5.0 / 32.0);
  const std::string csv = read_text_file(dir.path + "/measure_lp.csv");
  CHECK(csv.find("x0,q0,component,weight") == 0);
  auto summary = nlohmann::json::parse(read_text_file(dir.path + "/mather_lp.json"));
  CHECK(summary["mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}
