#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cline/config.hpp"
#include "cline/errors.hpp"
#include "cline/io.hpp"
#include "test_helpers.hpp"

using namespace cline;
using namespace testutil;

namespace {

const char* kFigPiConfig = R"(
# one-period figure weight
run.id = t
weight.period = 3.141592653589793
weight.bc_profile = neumann
weight.pieces[0].x0 = 0
weight.pieces[0].x1 = 3.141592653589793
weight.pieces[0].expr = 2*sin(2*x) - max(0, sin(x))
g.builtin = logistic_dominant
problem.c = 1
problem.lambda = 12
problem.mu = 12
problem.bc = neumann
bands.rho = 0.5
bands.r = 0.05
bands.R = 0.99
)";

std::string temp_dir() {
  std::string dir = std::filesystem::temp_directory_path() / "cline_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing: dotted keys, lists, validation errors") {
  RunConfig cfg = RunConfig::from_keyvalues(KeyValues::parse_text(kFigPiConfig));
  CHECK(cfg.lambda == 12.0);
  CHECK(cfg.bc == BcKind::neumann);
  CHECK(cfg.weight.pieces.size() == 1);
  CHECK(cfg.r_override.has_value());

  // malformed: rho >= 1 names the field
  std::string bad = std::string(kFigPiConfig) + "\nbands.rho = 1.5\n";
  try {
    RunConfig::from_keyvalues(KeyValues::parse_text(bad));
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.exit_code() == 1);
    CHECK(std::string(e.what()).find("rho") != std::string::npos);
  }

  // duplicate keys are rejected
  CHECK_THROWS_AS(KeyValues::parse_text("a = 1\na = 2\n"), Error);
  // sweep lists must increase
  CHECK_THROWS_AS(RunConfig::from_keyvalues(KeyValues::parse_text(
                      std::string(kFigPiConfig) + "\nsweep.mu = 10, 5\n")),
                  Error);
}

TEST_CASE("run context wires the band auto-policy and overrides") {
  RunConfig cfg = RunConfig::from_keyvalues(KeyValues::parse_text(kFigPiConfig));
  auto ctx = RunContext::make(std::move(cfg));
  CHECK(ctx->bands.r == 0.05);
  CHECK(ctx->bands.R == 0.99);
  CHECK(ctx->decomp.m == 1);
  CHECK(ctx->params.lambda == 12.0);

  // without overrides the auto policy keeps r <= rho/10 and R < 1
  std::string no_r(kFigPiConfig);
  size_t pos = no_r.find("bands.r = 0.05\n");
  no_r.erase(pos, 15);
  pos = no_r.find("bands.R = 0.99\n");
  no_r.erase(pos, 15);
  auto ctx2 = RunContext::make(RunConfig::from_keyvalues(KeyValues::parse_text(no_r)));
  CHECK(ctx2->bands.r <= 0.05 + 1e-12);
  CHECK(ctx2->bands.r > 0.0);
  CHECK(ctx2->bands.R < 1.0);
  CHECK(ctx2->bands.R >= 0.75);
}

TEST_CASE("profile round-trip") {
  auto fx = figpi_fixture(1.0, 12.0, 12.0);
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  NewtonOptions opts;
  opts.h = 2e-3;
  SolutionProfile prof = newton(neu, {0.93}, fx->params, opts);
  prof.symbols = {2};
  std::string path = temp_dir() + "/profile.dat";
  write_profile(path, prof);
  SolutionProfile back = read_profile(path);
  CHECK(back.traj.x.size() == prof.traj.x.size());
  CHECK(back.lambda == prof.lambda);
  CHECK(back.symbols == prof.symbols);
  CHECK(back.bc.kind == BcKind::neumann);
  for (size_t i = 0; i < prof.traj.x.size(); i += 97)
    CHECK(back.traj.u[i] == doctest::Approx(prof.traj.u[i]).epsilon(1e-14));
}

TEST_CASE("ledger round-trip keeps the headline constants") {
  auto fx = figpi_fixture(1.0, 12.0, 12.0);
  MuStarLedger led = mu_star(12.0, 0.05, 0.5, 0.99, fx->params);
  LambdaStarCert cert = lambda_star(0.5, fx->params);
  std::string dir = temp_dir();
  write_ledger(dir + "/ledger.txt", dir + "/ledger.json", led, cert);
  MuStarLedger back = read_ledger_json(dir + "/ledger.json");
  CHECK(back.mu_star == doctest::Approx(led.mu_star));
  CHECK(back.mu_sharp == doctest::Approx(led.mu_sharp));
  CHECK(back.r == led.r);
  // flat text has one constant per line
  std::ifstream txt(dir + "/ledger.txt");
  std::string line;
  int lines = 0;
  while (std::getline(txt, line))
    if (line.find(" = ") != std::string::npos) ++lines;
  CHECK(lines >= 20);
}

TEST_CASE("manifest determinism modulo the wall-time field") {
  RunConfig cfg = RunConfig::from_keyvalues(KeyValues::parse_text(kFigPiConfig));
  std::string dir = temp_dir();
  write_manifest(dir, cfg, {"a.dat"}, 1.0);
  std::ifstream in1(dir + "/t_manifest.json");
  std::string m1((std::istreambuf_iterator<char>(in1)), std::istreambuf_iterator<char>());
  write_manifest(dir, cfg, {"a.dat"}, 2.0);
  std::ifstream in2(dir + "/t_manifest.json");
  std::string m2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
  auto strip = [](std::string s) {
    size_t p = s.find("wall_seconds");
    size_t q = s.find('\n', p);
    return s.substr(0, p) + s.substr(q);
  };
  CHECK(strip(m1) == strip(m2));
  CHECK(m1 != m2);
}

TEST_CASE("census report files are deterministic from run id and string") {
  auto fx = figpi_fixture(1.0, 12.0, 12.0);
  BoundaryCondition neu{BcKind::neumann, 1, 0.0};
  Bands bands{0.05, 0.5, 0.99};
  CensusOptions opts;
  opts.h = 2e-3;
  opts.scan_points = 300;
  CensusReport rep = run_census(fx->params, neu, bands, opts);
  std::string dir = temp_dir() + "/census";
  std::vector<std::string> files = write_census_report(dir, "t", rep);
  CHECK(std::filesystem::exists(dir + "/t_census.json"));
  for (const CensusEntry& e : rep.entries)
    if (e.profile)
      CHECK(std::filesystem::exists(dir + "/t_profile_" + e.target.str() + ".dat"));
}
