#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "xtrapulp/cli.hpp"

using namespace xtrapulp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("xpulp_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generate then partition") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  REQUIRE(cli({"generate", "rmat", "--scale", "10", "--davg", "16", "-o", graph}).code == kExitOk);
  CHECK(lines(slurp(graph)) == 8192);
  const auto again = dir / "g2.txt";
  cli({"generate", "rmat", "--scale", "10", "--davg", "16", "-o", again});
  CHECK(slurp(graph) == slurp(again));

  const auto parts = dir / "p.txt";
  const auto report = dir / "r.json";
  const auto r = cli({"partition", "-i", graph, "-p", "4", "-T", "2", "--seed", "1", "-o", parts,
                      "--report", report});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(report));
  const auto n = doc["quality"]["num_vertices"].get<std::size_t>();
  CHECK(lines(slurp(parts)) == n);
  CHECK(doc["manifest"]["version"] == kToolVersion);
  CHECK(doc["run"]["supersteps"].get<int>() > 0);

  SUBCASE("evaluate reproduces the embedded report") {
    const auto e = cli({"evaluate", "-i", graph, "--parts", parts, "-p", "4"});
    REQUIRE(e.code == kExitOk);
    const auto ev = nlohmann::json::parse(e.out);
    auto a = ev["partitions"][0]["quality"];
    auto b = doc["quality"];
    a.erase("metadata");
    b.erase("metadata");
    CHECK(a == b);
  }
  SUBCASE("rerun reproduces the partition bytes") {
    const auto first = slurp(parts);
    fs::remove(parts);
    CHECK(cli({"rerun", report}).code == kExitOk);
    CHECK(slurp(parts) == first);
  }
}

TEST_CASE("randhd output is local") {
  TempDir dir;
  const auto graph = dir / "h.txt";
  REQUIRE(cli({"generate", "randhd", "--n", "512", "--davg", "8", "-o", graph}).code == kExitOk);
  std::istringstream in(slurp(graph));
  long u, v;
  std::size_t count = 0;
  while (in >> u >> v) {
    CHECK(std::abs(u - v) < 8);
    ++count;
  }
  CHECK(count == 512 * 8);
}

TEST_CASE("baselines through the cli") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  cli({"generate", "er", "--scale", "14", "--davg", "16", "--seed", "3", "-o", graph});
  const auto r = cli({"partition", "-i", graph, "-p", "8", "--method", "random", "--report", "-"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["quality"]["cut_ratio"].get<double>() == doctest::Approx(7.0 / 8.0).epsilon(0.02));

  const auto one = cli({"partition", "-i", graph, "-p", "1", "-T", "1", "--report", "-"});
  CHECK(nlohmann::json::parse(one.out)["quality"]["edge_cut"] == 0);
}

TEST_CASE("two-method evaluation table") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  cli({"generate", "er", "--scale", "10", "--davg", "8", "-o", graph});
  cli({"partition", "-i", graph, "-p", "4", "--method", "vblock", "-o", dir / "a.txt", "--report", dir / "a.json"});
  cli({"partition", "-i", graph, "-p", "4", "--method", "random", "-o", dir / "b.txt", "--report", dir / "b.json"});
  const auto e = cli({"evaluate", "-i", graph, "--parts", dir / "a.txt", "--parts", dir / "b.txt",
                      "--names", "vblock", "--names", "random", "--csv", dir / "t.csv"});
  REQUIRE(e.code == kExitOk);
  const auto doc = nlohmann::json::parse(e.out);
  const double ca = doc["partitions"][0]["quality"]["edge_cut"].get<double>();
  const double cb = doc["partitions"][1]["quality"]["edge_cut"].get<double>();
  const double best = std::min(ca, cb);
  CHECK(doc["performance_ratio"]["vblock"].get<double>() == doctest::Approx(ca / best));
  CHECK(doc["performance_ratio"]["random"].get<double>() == doctest::Approx(cb / best));
  CHECK(slurp(dir / "t.csv").find("random") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(cli({"partition", "-i", dir / "missing.txt", "-p", "2"}).code == kExitInput);
  CHECK(cli({"partition", "-p", "2"}).code == kExitInput);
  CHECK(cli({"frobnicate"}).code == kExitInput);

  const auto graph = dir / "star.txt";
  std::ofstream(graph) << "0 1\n0 2\n0 3\n0 4\n";
  CHECK(cli({"partition", "-i", graph, "-p", "9"}).code == kExitInput);
  CHECK(cli({"partition", "-i", graph, "-p", "2", "--method", "bogus"}).code == kExitInput);
  // Vertex blocks of five vertices in two parts are 3/2, imbalance 1.2.
  const auto strict = cli({"partition", "-i", graph, "-p", "2", "--method", "vblock", "--strict"});
  CHECK(strict.code == kExitStrict);
  CHECK(strict.err.find("constraint") != std::string::npos);
  CHECK(cli({"partition", "-i", graph, "-p", "2", "--method", "vblock"}).code == kExitOk);

  std::ofstream(dir / "short.txt") << "0\n1\n";
  CHECK(cli({"evaluate", "-i", graph, "--parts", dir / "short.txt"}).code == kExitInput);
}

TEST_CASE("environment supplies defaults") {
  TempDir dir;
  const auto graph = dir / "g.txt";
  std::ofstream(graph) << "0 1\n1 2\n2 3\n3 0\n";
  ::setenv("XPULP_PARTS", "3", 1);
  const auto r = cli({"partition", "-i", graph, "-T", "1", "--report", "-"});
  ::unsetenv("XPULP_PARTS");
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["quality"]["num_parts"] == 3);
}
