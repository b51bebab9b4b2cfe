#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "commands.hpp"

using nlohmann::json;
using namespace bloch::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  return v;
}

// Drops the manifest, whose wall time varies between runs.
std::string payload(const std::string& text) {
  std::string out;
  for (const auto& l : lines(text)) {
    if (l.rfind("# manifest", 0) == 0 || l.find("\"manifest\"") != std::string::npos) continue;
    out += l + "\n";
  }
  return out;
}

std::string temp_path(const std::string& name) { return "cli_test_" + name; }

}  // namespace

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0:0.99:100");
  REQUIRE(g.size() == 100);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 0.99);
  CHECK(parse_grid("0.5:0.5:1") == std::vector<double>{0.5});
  CHECK_THROWS_AS(parse_grid("0:1"), UsageError);
  CHECK_THROWS_AS(parse_grid("0:1:x"), UsageError);
  CHECK_THROWS_AS(parse_grid("1:0:5"), UsageError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), UsageError);
}

TEST_CASE("config overrides") {
  std::istringstream in("# coarse\nradial_nodes = 48\n\ntolerance=1e-6\nsine_substitution=false\n");
  const auto s = apply_config({}, in);
  CHECK(s.radial_nodes == 48);
  CHECK(s.tolerance == 1e-6);
  CHECK_FALSE(s.sine_substitution);
  CHECK(s.polar_nodes == bloch::QuadratureSpec{}.polar_nodes);
  std::istringstream unknown("nodes=3\n");
  CHECK_THROWS_AS(apply_config({}, unknown), UsageError);
  std::istringstream tiny("polar_nodes=4\n");
  CHECK_THROWS_AS(apply_config({}, tiny), UsageError);
}

TEST_CASE("metric command") {
  auto r = run({"metric", "--id", "BH", "--r", "0.646675"});
  REQUIRE(r.code == 0);
  auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0].rfind("# manifest {", 0) == 0);
  CHECK(l[1] == "metric,r,radial,normal");
  auto f = fields(l[2]);
  CHECK(std::stod(f[2]) == doctest::Approx(0.0816194).epsilon(1e-6));
  CHECK(std::stod(f[3]) == doctest::Approx(0.0827582).epsilon(1e-6));

  r = run({"metric", "--id", "MONOTONE:BURES", "--r", "0.5"});
  f = fields(lines(r.out)[2]);
  CHECK(std::stod(f[2]) == doctest::Approx(4.0 / 3));
  CHECK(std::stod(f[3]) == 1.0);

  r = run({"metric", "--id", "BH", "--id", "MONOTONE:BURES", "--grid", "0:0.99:100"});
  l = lines(r.out);
  REQUIRE(l.size() == 2 + 200);
  for (int i = 0; i < 100; ++i) {
    const auto bh = fields(l[2 + i]);
    const auto mono = fields(l[102 + i]);
    REQUIRE(bh[1] == mono[1]);
    REQUIRE(std::stod(bh[2]) < std::stod(mono[2]));
  }
}

TEST_CASE("metric command usage errors") {
  auto r = run({"metric", "--id", "NOPE", "--r", "0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("NOPE") != std::string::npos);
  CHECK(run({"metric", "--id", "BH"}).code == 2);
  CHECK(run({"metric", "--id", "BH", "--r", "1.5"}).code == 2);
  CHECK(run({"metric", "--id", "BH", "--r", "abc"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("imputed f series") {
  const auto r = run({"metric", "--imputed-f", "--grid", "0:1:11"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 13);
  CHECK(l[1] == "t,imputed_f,series");
  CHECK(std::stod(fields(l[12])[1]) == doctest::Approx(12.0));
}

TEST_CASE("divergence command") {
  auto r = run({"divergence", "--p", "MC", "--q", "BH"});
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(std::abs(doc["value"].get<double>() - 1.99971) <= 2e-3);
  CHECK(doc.contains("spec"));
  CHECK(doc["manifest"]["command"] == "divergence");
  CHECK(doc["manifest"]["quadrature"]["radial_nodes"] == 96);

  r = run({"divergence", "--p", "B", "--q", "B"});
  CHECK(std::abs(json::parse(r.out)["value"].get<double>()) <= 1e-6);

  r = run({"divergence", "--p", "B", "--likelihood", "cube4", "--q", "BH"});
  REQUIRE(r.code == 0);
  doc = json::parse(r.out);
  CHECK(std::abs(doc["value"].get<double>() - 0.0774351) <= 2e-3);
  CHECK(doc["p"] == "P_B^(4/cube)");

  CHECK(run({"divergence", "--p", "XYZ", "--q", "BH"}).code == 2);
  CHECK(run({"divergence", "--p", "B:posterior:oct4", "--q", "BH"}).code == 2);
  CHECK(run({"divergence", "--p", "B"}).code == 2);
}

TEST_CASE("accuracy failures exit with code 3") {
  const auto path = temp_path("strict.cfg");
  {
    std::ofstream cfg(path);
    cfg << "radial_nodes=8\npolar_nodes=8\nazimuthal_nodes=8\ntolerance=1e-15\n";
  }
  const auto r = run({"--config", path, "divergence", "--p", "B:posterior:cube4", "--q", "BH"});
  CHECK(r.code == 3);
  CHECK(r.err.find("accuracy") != std::string::npos);
  std::remove(path.c_str());
  CHECK(run({"--config", "missing.cfg", "metric", "--id", "BH", "--r", "0.5"}).code == 2);
}

TEST_CASE("marginal command") {
  const auto path = temp_path("marginal.csv");
  const auto r = run({"marginal", "--density", "B", "--density", "BH:posterior:oct3", "--grid", "0.1:0.9:9",
                      "--critical", "0.5:0.95", "--out", path});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const auto l = lines(text.str());
  REQUIRE(l.size() == 1 + 2 + 1 + 9);
  CHECK(l[0].rfind("# manifest", 0) == 0);
  CHECK(l[1] == "# critical p_B");
  CHECK(l[2].rfind("# critical P_BH^(3) 0.77275", 0) == 0);
  CHECK(l[3] == "r,p_B,P_BH^(3)");
  const auto row = fields(l[3 + 5]);
  const double rr = std::stod(row[0]);
  CHECK(std::stod(row[1]) == doctest::Approx(rr * rr / std::sqrt(1 - rr * rr) * 4 / std::numbers::pi).epsilon(1e-12));
  std::remove(path.c_str());
  CHECK(run({"marginal", "--density", "nope"}).code == 2);
}

TEST_CASE("falsify command and replay") {
  const auto path = temp_path("records.jsonl");
  auto r = run({"falsify", "--metric", "BH", "--trials", "100000", "--seed", "7", "--unital", "--out", path});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  const auto l = lines(text.str());
  REQUIRE(l.size() >= 2);
  const auto manifest = json::parse(l.front());
  CHECK(manifest["type"] == "manifest");
  CHECK(manifest["manifest"]["seed"] == 7);
  const auto summary = json::parse(l.back());
  CHECK(summary["type"] == "summary");
  CHECK(summary["trials"] == 100000);
  CHECK(summary["violations"].get<std::size_t>() == l.size() - 2);
  REQUIRE(l.size() > 2);
  const auto rec = json::parse(l[1]);
  CHECK(rec["post_distance"].get<double>() > rec["pre_distance"].get<double>());

  r = run({"falsify", "--replay", path});
  REQUIRE(r.code == 0);
  const auto replay = lines(r.out);
  const auto rs = json::parse(replay.back());
  CHECK(rs["records"] == summary["violations"]);
  CHECK(rs["identical"] == rs["records"]);

  // A tampered record no longer verifies.
  {
    auto tampered = json::parse(l[1]);
    tampered["post_distance"] = tampered["post_distance"].get<double>() * (1 + 1e-15);
    std::ofstream out(path);
    out << tampered.dump() << '\n';
  }
  r = run({"falsify", "--replay", path});
  CHECK(r.code == 3);
  std::remove(path.c_str());

  r = run({"falsify", "--metric", "MONOTONE:BURES", "--trials", "20000"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(lines(r.out).back())["violations"] == 0);
  CHECK(run({"falsify", "--trials", "0"}).code == 2);
  CHECK(run({"falsify", "--replay", "missing.jsonl"}).code == 2);
}

TEST_CASE("redundancy command") {
  auto r = run({"redundancy", "--metric", "BH"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(-6.57644).epsilon(2e-6));
  r = run({"redundancy", "--metric", "MONOTONE:IDENTRIC"});
  CHECK(std::abs(json::parse(r.out)["value"].get<double>() - (-1.77062)) <= 2e-3);
  r = run({"redundancy", "--volume", "1"});
  CHECK(json::parse(r.out)["value"].get<double>() ==
        doctest::Approx(-1.5 * std::log(2 * std::numbers::pi * std::numbers::e)));
  CHECK(run({"redundancy"}).code == 2);
  CHECK(run({"redundancy", "--volume", "-1"}).code == 2);
}

TEST_CASE("dominance command") {
  const auto r = run({"dominance", "--a", "BH", "--b", "MONOTONE:BURES", "--grid", "0.1:0.9:9"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  CHECK(l[2] == "# a_dominates false");
  CHECK(l[3] == "# b_radial_exceeds_a true");
  CHECK(l.back().rfind("0.9", 0) == 0);
  CHECK(run({"dominance", "--b", "BH", "--normalization", "odd"}).code == 2);
  const auto same = run({"dominance", "--a", "MONOTONE:MAXIMAL", "--b", "MONOTONE:BURES"});
  CHECK(same.out.find("# a_dominates true") != std::string::npos);
}

TEST_CASE("identical invocations give identical payloads") {
  const std::vector<std::string> args{"metric", "--id", "MONOTONE:MC", "--grid", "0:0.9:10"};
  CHECK(payload(run(args).out) == payload(run(args).out));
  const std::vector<std::string> fal{"falsify", "--trials", "30000", "--seed", "4", "--unital"};
  CHECK(payload(run(fal).out) == payload(run(fal).out));
}

TEST_CASE("reproduce-paper report") {
  const auto r = run({"reproduce-paper", "--criteria", "1,4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("PASS criterion 1") != std::string::npos);
  CHECK(r.out.find("PASS criterion 4") != std::string::npos);
  CHECK(r.out.find("# summary checks=") != std::string::npos);
  CHECK(run({"reproduce-paper", "--criteria", "9"}).code == 2);
}
