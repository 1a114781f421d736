#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "deconv/model.hpp"
#include "deconv/scene_io.hpp"

namespace {

const std::string kCli = DECONV_CLI_PATH;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " > cli_stdout.txt 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate is deterministic per seed") {
  const deconv::Scene scene{deconv::DiscreteMeasure({-0.37, 0.37}, {1.0, 1.0}),
                            deconv::SamplingGrid(100.0, 2.0),
                            {7.1e-6, deconv::NoiseModel::kUniformExperiment, 11}};
  deconv::save_scene(scene, "cli_scene.json");

  REQUIRE(run("simulate --scene cli_scene.json --out cli_a.csv") == 0);
  REQUIRE(run("simulate --scene cli_scene.json --out cli_b.csv") == 0);
  const std::string a = slurp("cli_a.csv");
  CHECK(a == slurp("cli_b.csv"));
  CHECK(a.substr(0, 8) == "x,value\n");

  REQUIRE(run("simulate --scene cli_scene.json --noiseless --out cli_c.csv") == 0);
  CHECK(a != slurp("cli_c.csv"));
}

TEST_CASE("bounds emits a report and the sigma_min curve") {
  REQUIRE(run("bounds --d 0.5 --sigma 7.1e-6 --M 3 --n 2 --m-min 1 --json "
              "--out cli_bounds.json --sigma-min-curve cli_curve.csv "
              "--curve-max-s 10") == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp("cli_bounds.json"));
  CHECK(j.at("s_star").get<int>() == 7);
  CHECK(j.at("sigma_min_s_star").get<double>() == doctest::Approx(0.0578).epsilon(0.02));
  CHECK(j.at("number_upper_bound").get<double>() == doctest::Approx(0.1353).epsilon(0.01));
  CHECK(j.at("music_s").get<int>() == 7);

  std::ifstream curve("cli_curve.csv");
  std::string header;
  std::getline(curve, header);
  CHECK(header == "s,sigma_min");
  double previous = 1e9;
  int rows = 0;
  std::string line;
  while (std::getline(curve, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const double value = std::stod(line.substr(comma + 1));
    CHECK(value <= previous);
    previous = value;
    ++rows;
  }
  CHECK(rows == 10);
}

TEST_CASE("detect reports the source number") {
  REQUIRE(run("detect --scene cli_scene.json --d 0.5 --M 3 --s 5 "
              "--out cli_detect.json") == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp("cli_detect.json"));
  CHECK(j.at("estimated_n").get<int>() == 2);
  CHECK(j.at("s_used").get<int>() == 5);
  CHECK(j.at("singular_values")[0].get<double>() == doctest::Approx(2.0375).epsilon(0.01));
}

TEST_CASE("construct verifies the pair it emits") {
  REQUIRE(run("construct --kind number --n 2 --sigma 1e-4 --m-star 2 "
              "--out cli_pair.json") == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp("cli_pair.json"));
  CHECK(j.at("image_distance").get<double>() <= 1e-4);
  CHECK(j.at("target").at("sources").size() == 2);
  CHECK(j.at("decoy").at("sources").size() == 1);

  REQUIRE(run("construct --kind support --n 3 --sigma 1e-5 --m-star 2 "
              "--out cli_sup.json") == 0);
  const nlohmann::json s = nlohmann::json::parse(slurp("cli_sup.json"));
  CHECK(s.at("image_distance").get<double>() <= 1e-5);
  CHECK(s.at("target").at("sources").size() == 3);
  CHECK(s.at("decoy").at("sources").size() == 3);
}

TEST_CASE("detect accepts a raw image csv") {
  REQUIRE(run("simulate --scene cli_scene.json --out cli_img.csv") == 0);
  REQUIRE(run("detect --image cli_img.csv --d 0.5 --M 3 --sigma 7.1e-6 --s 5 "
              "--out cli_detect_img.json") == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp("cli_detect_img.json"));
  CHECK(j.at("estimated_n").get<int>() == 2);
}

TEST_CASE("relative outputs honor the output directory variable") {
  REQUIRE(std::system("mkdir -p cli_outdir") == 0);
  setenv("DECONV_OUT_DIR", "cli_outdir", 1);
  REQUIRE(run("simulate --scene cli_scene.json --out env_image.csv") == 0);
  unsetenv("DECONV_OUT_DIR");
  CHECK(slurp("cli_outdir/env_image.csv").substr(0, 8) == "x,value\n");
}

TEST_CASE("sweep emits deterministic rows") {
  REQUIRE(run("sweep --mode exp1 --sep-min 0.2 --sep-max 0.3 --sep-step 0.05 "
              "--seeds 2 --out cli_sweep_a.csv") == 0);
  REQUIRE(run("sweep --mode exp1 --sep-min 0.2 --sep-max 0.3 --sep-step 0.05 "
              "--seeds 2 --out cli_sweep_b.csv") == 0);
  const std::string a = slurp("cli_sweep_a.csv");
  CHECK(a == slurp("cli_sweep_b.csv"));
  std::istringstream ss(a);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "separation,sigma_hat_n,threshold,detected_n");
  int rows = 0;
  for (std::string line; std::getline(ss, line);) ++rows;
  CHECK(rows == 6);  // 3 separations x 2 seeds
}

TEST_CASE("oracle suites pass end to end") {
  CHECK(run("oracle") == 0);
}

TEST_CASE("exit codes distinguish usage errors") {
  CHECK(run("bogus-subcommand") == 2);
  CHECK(run("bounds --d 1") == 2);  // missing required flags
  CHECK(run("simulate --scene missing-file.json --out x.csv") == 1);
}

} // TEST_SUITE
