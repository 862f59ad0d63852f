#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "miscls/mathutil.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("miscls_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MISCLS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_small_dataset(const std::string& path, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  std::ofstream out(path);
  out << "y_star,y,z1,z2,z3\n";
  for (int i = 0; i < n; ++i) {
    const double z1 = gauss(rng), z2 = gauss(rng), z3 = gauss(rng);
    const double mu = miscls::expit(0.4 + 1.2 * z1 - 0.8 * z2);
    const int y = unif(rng) < mu ? 1 : 0;
    const int ystar = unif(rng) < 0.1 ? 1 - y : y;
    out << ystar << ',' << (i % 2 == 0 ? std::to_string(y) : "") << ',' << z1 << ',' << z2 << ','
        << z3 << "\n";
  }
}

}  // namespace

TEST_CASE("fit subcommand writes a result with the requested method") {
  TempDir tmp;
  write_small_dataset(tmp.path("d.csv"), 150, 1);
  const int rc = run_cli("fit --data " + tmp.path("d.csv") +
                         " --method parametric --penalty scad --criterion gcv --out-dir " +
                         tmp.path("out"));
  REQUIRE(rc == 0);
  const auto j = nlohmann::json::parse(slurp(tmp.path("out/fit.json")));
  CHECK(j.at("method") == "parametric");
  CHECK(j.contains("nu"));
  CHECK(fs::exists(tmp.path("out/coefficients.csv")));
  CHECK(fs::exists(tmp.path("out/run.json")));
}

TEST_CASE("simulate twice produces byte-identical outputs") {
  TempDir tmp;
  const std::string common =
      " --setting I --n 120 --delta 0.5 --M 2 --method naive --penalty scad --criterion gcv "
      "--seed 7 --out-dir ";
  REQUIRE(run_cli("simulate" + common + tmp.path("a")) == 0);
  REQUIRE(run_cli("simulate" + common + tmp.path("b")) == 0);
  CHECK(slurp(tmp.path("a/metrics.json")) == slurp(tmp.path("b/metrics.json")));
  CHECK(slurp(tmp.path("a/replications.csv")) == slurp(tmp.path("b/replications.csv")));
  CHECK(!slurp(tmp.path("a/metrics.json")).empty());
}

TEST_CASE("tune dumps a grid trace") {
  TempDir tmp;
  write_small_dataset(tmp.path("d.csv"), 120, 3);
  REQUIRE(run_cli("tune --data " + tmp.path("d.csv") + " --method naive --out-dir " +
                  tmp.path("t")) == 0);
  const std::string trace = slurp(tmp.path("t/tuning_trace.csv"));
  CHECK(trace.find("lambda,h,omega,df,deviance,gcv,bic") != std::string::npos);
}

TEST_CASE("predict and evaluate round trip; mismatched width exits 2") {
  TempDir tmp;
  write_small_dataset(tmp.path("train.csv"), 150, 5);
  REQUIRE(run_cli("fit --data " + tmp.path("train.csv") + " --method naive --out-dir " +
                  tmp.path("m")) == 0);

  {
    std::ofstream out(tmp.path("test.csv"));
    out << "y,z1,z2,z3\n1,0.5,0.2,-0.1\n0,-1.0,0.3,0.2\n1,2.0,-0.4,0.0\n0,0.1,1.2,0.4\n";
  }
  REQUIRE(run_cli("predict --fit " + tmp.path("m/fit.json") + " --data " + tmp.path("test.csv") +
                  " --out-dir " + tmp.path("p")) == 0);
  CHECK(slurp(tmp.path("p/predictions.csv")).rfind("mu,y_hat", 0) == 0);

  REQUIRE(run_cli("evaluate --fit " + tmp.path("m/fit.json") + " --data " + tmp.path("test.csv") +
                  " --out-dir " + tmp.path("e")) == 0);
  const auto ej = nlohmann::json::parse(slurp(tmp.path("e/evaluation.json")));
  CHECK(ej.contains("acc"));
  CHECK(ej.contains("brier"));
  CHECK(ej.contains("auc"));

  {
    std::ofstream out(tmp.path("narrow.csv"));
    out << "y,z1,z2\n1,0.5,0.2\n0,-1.0,0.3\n";
  }
  CHECK(run_cli("evaluate --fit " + tmp.path("m/fit.json") + " --data " + tmp.path("narrow.csv") +
                " --out-dir " + tmp.path("e2")) == 2);
}

TEST_CASE("usage errors exit 1") {
  TempDir tmp;
  CHECK(run_cli("fit --no-such-flag") == 1);
  CHECK(run_cli("fit --data " + tmp.path("absent.csv")) == 1);
  CHECK(run_cli("") == 1);
}
