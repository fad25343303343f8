#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "generators.hpp"
#include "symcone/cli.hpp"
#include "symcone/problem_file.hpp"
#include "symcone/schemes.hpp"

using namespace symcone;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test binary run.
const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("symcone_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

const char* kAntiDiagonal =
    "SYMCONE 1\n"
    "CONE 1\n"
    "ORTHANT 2\n"
    "SUBSPACE SPAN 1\n"
    "0.7071067811865476 -0.7071067811865476\n"
    "END\n";

const char* kIdentityInL =
    "SYMCONE 1\n"
    "# the identity of Orthant(3) x Soc(3) lies in L\n"
    "NAME identity\n"
    "CONE 2\n"
    "ORTHANT 3\n"
    "SOC 3\n"
    "SUBSPACE KERNEL 2\n"
    "1 -1 0 0 0 0\n"
    "0 0 0 0 1 0\n"
    "END\n";

std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
  std::vector<std::map<std::string, std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    return f;
  };
  std::getline(in, line);
  header = split(line);
  while (std::getline(in, line)) {
    const auto f = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < f.size(); ++i) row[header[i]] = f[i];
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("solve: identity in L") {
  const std::string path = write_file("identity.txt", kIdentityInL);
  const Run r = run({"solve", path, "--json"});
  CHECK(r.code == cli::kExitSolved);
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"status", "outer_iterations", "rescalings", "bp_iterations",
                                         "certificate"});
  CHECK(j["status"] == "solved");
  CHECK(j["rescalings"] == 0);
  CHECK(j["outer_iterations"] == 1);
  CHECK(j["certificate"].size() == 6);

  const Run text = run({"solve", path});
  CHECK(text.code == 0);
  CHECK(text.out.find("status: solved") != std::string::npos);
  CHECK(text.out.find("certificate (primal):") != std::string::npos);
}

TEST_CASE("solve: infeasible primal, feasible dual") {
  const std::string path = write_file("anti.txt", kAntiDiagonal);
  const Run primal = run({"solve", path, "--max-outer", "50", "--json"});
  CHECK(primal.code == cli::kExitOuterLimit);
  const auto jp = nlohmann::json::parse(primal.out);
  CHECK(jp["status"] == "outer_limit");
  CHECK(jp["rescalings"] == 50);
  CHECK(jp["certificate"].is_null());

  const std::string cert = (scratch() / "dual_cert.json").string();
  const Run ext = run({"solve", path, "--mode", "extended", "--json", "--certificate-out", cert});
  CHECK(ext.code == cli::kExitDualSolved);
  const auto je = nlohmann::json::parse(ext.out);
  CHECK(je["status"] == "dual_solved");
  const double a = je["certificate"][0], b = je["certificate"][1];
  CHECK(a > 0.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));

  const auto jc = nlohmann::json::parse(read_file(cert));
  CHECK(jc["side"] == "dual");
  CHECK(run({"verify", path, cert}).code == 0);
}

TEST_CASE("solve: usage errors") {
  const std::string bad = write_file("bad.txt",
                                     "SYMCONE 1\n"
                                     "CONE 1\n"
                                     "ORTHAN 2\n"
                                     "SUBSPACE SPAN 1\n"
                                     "1 1\n"
                                     "END\n");
  const Run r = run({"solve", bad});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("line 3") != std::string::npos);

  const std::string short_row = write_file("short.txt",
                                           "SYMCONE 1\nCONE 1\nPSD 2\nSUBSPACE SPAN 1\n1 0\nEND\n");
  const Run rs = run({"solve", short_row});
  CHECK(rs.code == cli::kExitUsage);
  CHECK(rs.err.find("line 5") != std::string::npos);

  const std::string ok = write_file("anti2.txt", kAntiDiagonal);
  CHECK(run({"solve", ok, "--scheme", "simplex"}).code == cli::kExitUsage);
  CHECK(run({"solve", ok, "--mode", "dual"}).code == cli::kExitUsage);
  CHECK(run({"solve", ok, "--eps", "2"}).code == cli::kExitUsage);
  CHECK(run({"solve", ok, "--max-outer", "0"}).code == cli::kExitUsage);
  CHECK(run({"solve", ok, "--bogus"}).code == cli::kExitUsage);
  CHECK(run({"solve"}).code == cli::kExitUsage);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"solve", (scratch() / "missing.txt").string()}).code == cli::kExitNoInput);
  CHECK(run({"solve", write_file("psd.txt", "SYMCONE 1\nCONE 1\nPSD 2\nSUBSPACE SPAN 1\n1 0 1\nEND\n"),
             "--mode", "orthant"})
            .code == cli::kExitUsage);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify: closed loop and perturbations") {
  const std::string path = (scratch() / "mixed.txt").string();
  REQUIRE(run({"gen", "--kind", "mixed", "--size", "3", "--seed", "4", "-o", path}).code == 0);
  const std::string cert = (scratch() / "mixed_cert.json").string();
  REQUIRE(run({"solve", path, "--certificate-out", cert}).code == cli::kExitSolved);
  CHECK(run({"verify", path, cert}).code == 0);

  auto j = nlohmann::ordered_json::parse(read_file(cert));
  j["coordinates"][0] = -j["coordinates"][0].get<double>();
  const std::string negated = write_file("negated.json", j.dump());
  CHECK(run({"verify", path, negated}).code == cli::kExitVerifyFailed);

  auto k = nlohmann::ordered_json::parse(read_file(cert));
  k["coordinates"].erase(k["coordinates"].begin());
  CHECK(run({"verify", path, write_file("short.json", k.dump())}).code == cli::kExitVerifyFailed);

  auto d = nlohmann::ordered_json::parse(read_file(cert));
  d["side"] = "dual";
  CHECK(run({"verify", path, write_file("wrong_side.json", d.dump())}).code == cli::kExitVerifyFailed);

  CHECK(run({"verify", path, write_file("garbage.json", "{not json")}).code == cli::kExitUsage);
}

TEST_CASE("problem files round-trip byte for byte") {
  const std::string path = (scratch() / "psd.txt").string();
  REQUIRE(run({"gen", "--kind", "psd", "--size", "3", "--seed", "2", "-o", path}).code == 0);
  const std::string text = read_file(path);
  CHECK(write_problem(parse_problem(text)) == text);

  Rng rng(70);
  for (int trial = 0; trial < 50; ++trial) {
    const ConeDescriptor cone = gen::random_cone(rng);
    ProblemFile p = ProblemFile::from_basis(gen::random_subspace(cone, 1 + rng.below(cone.ambient_dim()), rng));
    if (trial % 2) p.mode = ProblemFile::Mode::Kernel;
    if (trial % 3 == 0) {
      p.name = "case " + std::to_string(trial);
      p.seed = -trial;
      p.delta_lb = rng.uniform() * 1e-7;
    }
    p.rows(0, 0) = trial % 5 == 0 ? 1e-300 : p.rows(0, 0);
    const std::string once = write_problem(p);
    const ProblemFile back = parse_problem(once);
    CHECK(back.rows == p.rows);
    CHECK(write_problem(back) == once);
  }
}

TEST_CASE("bench: smooth caps, growth, and agreement with solve") {
  const Run r = run({"bench", "--kind", "orthant", "--sizes", "8,16,32", "--seeds", "20", "--csv"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows.size() == 12);
  std::map<int, double> smooth_max;
  for (const auto& row : rows) {
    CHECK(row.at("solved") == "20");
    if (row.at("scheme") != "smooth") continue;
    const int size = std::stoi(row.at("size"));
    const std::int64_t cap = iteration_cap(Scheme::Smooth, size);
    CHECK(std::stoll(row.at("cap")) == cap);
    CHECK(std::stoll(row.at("max_iter")) <= cap);
    smooth_max[size] = std::stod(row.at("max_iter"));
  }
  REQUIRE(smooth_max.size() == 3);
  CHECK(smooth_max[16] / smooth_max[8] <= 4.5);
  CHECK(smooth_max[32] / smooth_max[16] <= 4.5);

  const std::string path = (scratch() / "orthant8.txt").string();
  REQUIRE(run({"gen", "--kind", "orthant", "--size", "8", "--seed", "0", "-o", path}).code == 0);
  for (const char* scheme : {"perceptron", "vn", "smooth", "vn-away"}) {
    const Run cell =
        run({"bench", "--kind", "orthant", "--sizes", "8", "--seeds", "1", "--schemes", scheme, "--csv"});
    const auto c = parse_csv(cell.out);
    REQUIRE(c.size() == 1);
    const Run s = run({"solve", path, "--scheme", scheme, "--json"});
    const auto j = nlohmann::json::parse(s.out);
    CHECK(std::stod(c[0].at("mean_total_bp")) == doctest::Approx(j["bp_iterations"].get<double>()));
    CHECK(std::stod(c[0].at("mean_rescalings")) == doctest::Approx(j["rescalings"].get<double>()));
  }

  const Run table = run({"bench", "--kind", "soc", "--sizes", "3", "--seeds", "2"});
  CHECK(table.code == 0);
  CHECK(table.out.find("scheme") == 0);
  CHECK(run({"bench", "--kind", "cube"}).code == cli::kExitUsage);
  CHECK(run({"bench", "--kind", "psd", "--mode", "orthant"}).code == cli::kExitUsage);
}

TEST_CASE("json output is byte-identical across runs") {
  const std::string mixed = (scratch() / "det_mixed.txt").string();
  const std::string orth = (scratch() / "det_orth.txt").string();
  REQUIRE(run({"gen", "--kind", "mixed", "--size", "4", "--seed", "11", "-o", mixed}).code == 0);
  REQUIRE(run({"gen", "--kind", "orthant", "--size", "12", "--seed", "11", "-o", orth}).code == 0);
  for (const char* scheme : {"perceptron", "vn", "smooth", "vn-away"}) {
    for (const char* mode : {"primal", "extended", "orthant"}) {
      const std::string& file = std::string(mode) == "orthant" ? orth : mixed;
      const std::vector<std::string> args{"solve", file, "--scheme", scheme, "--mode", mode,
                                          "--seed", "3", "--json"};
      const Run a = run(args), b = run(args);
      CHECK(a.code == b.code);
      CHECK(a.out == b.out);
      CHECK(a.code <= cli::kExitOuterLimit);
    }
  }
}

TEST_CASE("gen writes metadata") {
  const Run r = run({"gen", "--kind", "soc", "--size", "4", "--seed", "6"});
  REQUIRE(r.code == 0);
  const ProblemFile p = parse_problem(r.out);
  CHECK(p.name == "soc-4-seed6");
  CHECK(p.seed == 6);
  REQUIRE(p.delta_lb.has_value());
  CHECK(*p.delta_lb == doctest::Approx(bench_instance(BenchKind::Soc, 4, 6).delta_lb));
  CHECK(run({"gen", "--kind", "soc", "--size", "1"}).code == cli::kExitUsage);
}
