#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "specbound/cli.hpp"
#include "specbound/json_io.hpp"

using namespace specbound;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "specbound");
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "specbound_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_CASE("bound command") {
  const auto r = run({"bound", "--profile", "wigner", "--n", "100", "--j", "10"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["trivial_bound"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(j["improved_bound"].get<double>() == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(j["manifest"]["command"] == "bound");
  CHECK(j["manifest"]["parameters"]["J"] == 10);
  CHECK(j["manifest"]["source"]["name"] == "wigner");
  CHECK(j["manifest"]["tool_version"] == kToolVersion);
  CHECK(r.err.find("improved bound") != std::string::npos);
  for (const char* key : {"n", "J", "norm_s", "w_c", "trivial_bound", "improved_bound", "z", "tol"})
    CHECK(j.contains(key));
}

TEST_CASE("bound on the exponential profile") {
  const auto j = run({"bound", "--profile", "expprofile", "--n", "500", "--j", "50"}).json();
  CHECK(j["trivial_bound"].get<double>() == doctest::Approx(4.316).epsilon(0.01 / 4.316));
  CHECK(j["w_c"].get<double>() == doctest::Approx(1.0783599600).epsilon(1e-9));
}

TEST_CASE("matrix files") {
  const auto good = scratch("good.txt");
  write_file(good, "2\n0.5 0.25\n0.25 1\n");
  const auto r = run({"bound", "--matrix", good.string(), "--j", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["n"] == 2);

  const auto bad = scratch("bad.txt");
  write_file(bad, "2\n0.5 0.25\n0.3 1\n");
  const auto b = run({"bound", "--matrix", bad.string()});
  CHECK(b.code == 2);
  CHECK(b.err.find("[0][1]") != std::string::npos);

  const auto repaired = run({"bound", "--matrix", bad.string(), "--repair"});
  CHECK(repaired.code == 0);
  CHECK(repaired.err.find("warning") != std::string::npos);

  CHECK(run({"bound", "--matrix", scratch("missing.txt").string()}).code == 2);
}

TEST_CASE("gram source") {
  const auto rect = scratch("rect.txt");
  write_file(rect, "2 3\n1 1 1\n1 1 1\n");
  const auto r = run({"bound", "--profile", "gram:" + rect.string(), "--j", "5"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["n"] == 5);
  CHECK(j["norm_s"].get<double>() == doctest::Approx(3.0));
  CHECK(j.contains("gram_note"));
  CHECK(j["gram_improved_bound"].get<double>() ==
        doctest::Approx(std::pow(j["improved_bound"].get<double>(), 2)));
}

TEST_CASE("qve command") {
  const auto csv = scratch("density.csv");
  const auto r = run({"qve", "--profile", "wigner", "--n", "200", "--csv", csv.string()});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["found"] == true);
  CHECK(std::abs(j["support"].get<double>() - 2.0) <= 0.05);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "tau,density");

  const auto zero = scratch("zero.txt");
  write_file(zero, "2\n0 0\n0 0\n");
  const auto z = run({"qve", "--matrix", zero.string()});
  REQUIRE(z.code == 0);
  CHECK(z.json()["found"] == false);
  CHECK(z.json()["support"].get<double>() == 0.0);
}

TEST_CASE("mc command") {
  const auto r = run({"mc", "--profile", "wigner", "--n", "60", "--trials", "3", "--seed", "5"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["per_trial"].size() == 3);
  CHECK(j["seed"] == 5);
  CHECK(run({"mc", "--profile", "wigner", "--n", "10", "--trials", "0"}).code == 2);
  CHECK(run({"mc", "--profile", "wigner", "--ensemble", "bogus"}).code == 2);

  const auto again = run({"mc", "--profile", "wigner", "--n", "60", "--trials", "3", "--seed", "5"});
  CHECK(again.json()["per_trial"] == j["per_trial"]);
}

TEST_CASE("oracle command") {
  const auto r = run({"oracle", "--k", "5"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["violations"].empty());
  CHECK(j["n_trees"] == 42);
  CHECK(j["manifest"]["source"]["n"] == 6);

  const auto w = run({"oracle", "--k", "6", "--profile", "wigner", "--n", "4"}).json();
  const std::vector<double> catalan = {1, 1, 2, 5, 14, 42, 132};
  for (std::size_t k = 0; k <= 6; ++k)
    for (const auto& v : w["tree_sums"][k]) CHECK(v.get<double>() == doctest::Approx(catalan[k]));

  CHECK(run({"oracle", "--k", "11"}).code == 2);
}

TEST_CASE("report command") {
  const auto r = run({"report", "--profile", "wigner", "--n", "200", "--trials", "4"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  for (const char* key : {"trivial_bound", "improved_bound", "qve_support", "moment_proxy", "mc_mean"})
    CHECK(std::abs(j[key].get<double>() - 2.0) <= 0.08);
  CHECK(j["ordering_holds"] == true);
  CHECK(j["manifest"]["parameters"].contains("eta"));
  CHECK(j["manifest"]["parameters"].contains("trials"));
}

TEST_CASE("output file and errors") {
  const auto path = scratch("out.json");
  const auto r = run({"bound", "--profile", "wigner", "--n", "10", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("improved bound") != std::string::npos);
  std::ifstream f(path);
  CHECK(Json::parse(f)["n"] == 10);

  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"bound"}).code == 2);
  CHECK(run({"bound", "--profile", "nope"}).code == 2);
  CHECK(run({"bound", "--profile", "wigner", "--j", "x"}).code == 2);
  CHECK(run({"bound", "--profile", "wigner", "--matrix", "a.txt"}).code == 2);

  const auto zero = scratch("zero2.txt");
  write_file(zero, "1\n0\n");
  CHECK(run({"bound", "--matrix", zero.string()}).code == 3);
  CHECK(run({"qve", "--profile", "wigner", "--n", "5", "--max-iter", "1", "--qve-tol", "1e-15"}).code == 3);
}

TEST_CASE("rerun from the manifest reproduces the numbers") {
  const auto first = run({"mc", "--profile", "random", "--n", "20", "--profile-seed", "3", "--trials", "2"}).json();
  const auto& m = first["manifest"];
  std::vector<std::string> args = {"mc", "--profile", m["source"]["name"].get<std::string>(),
                                   "--n", std::to_string(m["source"]["n"].get<int>()),
                                   "--profile-seed", std::to_string(m["source"]["profile_seed"].get<int>()),
                                   "--trials", std::to_string(m["parameters"]["trials"].get<int>()),
                                   "--seed", std::to_string(m["parameters"]["seed"].get<int>()),
                                   "--ensemble", m["parameters"]["ensemble"].get<std::string>()};
  const auto second = run(args).json();
  CHECK(second["per_trial"] == first["per_trial"]);
}

TEST_CASE("installed executable") {
  const std::string cmd = std::string(SPECBOUND_CLI_PATH) + " bound --profile wigner --n 10 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string fail = std::string(SPECBOUND_CLI_PATH) + " oracle --k 11 > /dev/null 2>&1";
  const int status = std::system(fail.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
