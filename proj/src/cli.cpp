#include "symcone/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symcone/instances.hpp"
#include "symcone/jordan.hpp"
#include "symcone/problem_file.hpp"

namespace symcone::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string to_string(Side side) { return side == Side::Primal ? "primal" : "dual"; }

// Failure with a ready-made message and exit code.
struct CommandError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError{kExitNoInput, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemFile load_problem(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_problem(text);
  } catch (const ParseError& e) {
    throw CommandError{kExitUsage, path + ": " + e.what()};
  } catch (const std::invalid_argument& e) {
    throw CommandError{kExitUsage, path + ": " + e.what()};
  }
}

SubspaceBasis problem_basis(const ProblemFile& p, const std::string& path) {
  try {
    return p.basis();
  } catch (const std::invalid_argument& e) {
    throw CommandError{kExitUsage, path + ": " + e.what()};
  }
}

ordered_json coordinates_json(const Element& x) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < x.coords().size(); ++i) arr.push_back(x.coords()[i]);
  return arr;
}

ordered_json cone_json(const ConeDescriptor& cone) {
  ordered_json arr = ordered_json::array();
  for (const Block& b : cone.blocks()) {
    ordered_json o;
    o["kind"] = symcone::to_string(b.kind);
    o["size"] = b.size;
    arr.push_back(o);
  }
  return arr;
}

SolveOptions make_options(Scheme scheme, std::optional<double> eps, std::optional<std::int64_t> max_outer,
                          SolveMode mode, const ConeDescriptor& cone) {
  SolveOptions opts;
  opts.scheme = scheme;
  opts.outer_limit = max_outer;
  if (eps) {
    SchemeConfig cfg = mode == SolveMode::Orthant
                           ? SchemeConfig::for_orthant(scheme, cone.ambient_dim())
                           : SchemeConfig::for_cone(scheme, cone);
    cfg.epsilon = *eps;
    opts.config = cfg;
  }
  return opts;
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return kExitSolved;
    case SolveStatus::DualSolved:
      return kExitDualSolved;
    case SolveStatus::OuterLimit:
      return kExitOuterLimit;
  }
  return kExitOuterLimit;
}

std::int64_t rescaling_count(const SolveReport& r) {
  return static_cast<std::int64_t>(r.rescalings.size() + r.dual_rescalings.size());
}

struct SolveArgs {
  std::string problem;
  std::string scheme = "smooth";
  std::string mode = "primal";
  std::optional<double> eps;
  std::optional<std::int64_t> max_outer;
  std::int64_t seed = 0;
  bool json = false;
  std::string certificate_out;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const std::optional<Scheme> scheme = parse_scheme(a.scheme);
  if (!scheme) throw CommandError{kExitUsage, "unknown scheme '" + a.scheme + "'"};
  const std::optional<SolveMode> mode = parse_mode(a.mode);
  if (!mode) throw CommandError{kExitUsage, "unknown mode '" + a.mode + "'"};
  const ProblemFile p = load_problem(a.problem);
  const SubspaceBasis basis = problem_basis(p, a.problem);
  if (*mode == SolveMode::Orthant && !basis.cone().is_pure_orthant()) {
    throw CommandError{kExitUsage, "orthant mode requires a pure orthant cone"};
  }
  if (a.eps && !(*a.eps > 0.0 && *a.eps < 1.0)) throw CommandError{kExitUsage, "--eps must lie in (0,1)"};
  if (a.max_outer && *a.max_outer < 1) throw CommandError{kExitUsage, "--max-outer must be >= 1"};

  const SolveReport r =
      solve(basis, *mode, make_options(*scheme, a.eps, a.max_outer, *mode, basis.cone()));
  // meaningful only when a point was returned
  const Side side = r.status == SolveStatus::DualSolved ? Side::Dual : Side::Primal;

  if (a.json) {
    ordered_json j;
    j["status"] = symcone::to_string(r.status);
    j["outer_iterations"] = r.outer_iterations;
    j["rescalings"] = rescaling_count(r);
    j["bp_iterations"] = r.bp_iterations;
    j["certificate"] = r.x ? coordinates_json(*r.x) : ordered_json(nullptr);
    out << j.dump() << "\n";
  } else {
    out << "status: " << symcone::to_string(r.status) << "\n";
    out << "scheme: " << symcone::to_string(r.scheme) << "\n";
    out << "mode: " << symcone::to_string(*mode) << "\n";
    out << "outer_iterations: " << r.outer_iterations << "\n";
    out << "rescalings: " << rescaling_count(r) << "\n";
    out << "bp_iterations: " << r.bp_iterations << "\n";
    if (r.x) {
      out << "certificate (" << to_string(side) << "):";
      for (Eigen::Index i = 0; i < r.x->coords().size(); ++i) out << ' ' << format_double(r.x->coords()[i]);
      out << "\n";
    }
  }
  if (!a.certificate_out.empty() && r.x) {
    std::ofstream f(a.certificate_out, std::ios::binary);
    if (!f) throw CommandError{kExitNoInput, "cannot write '" + a.certificate_out + "'"};
    f << certificate_json(side, *r.x) << "\n";
  }
  return exit_code(r.status);
}

int cmd_verify(const std::string& problem, const std::string& certificate, double tol,
               std::ostream& out) {
  const ProblemFile p = load_problem(problem);
  const SubspaceBasis basis = problem_basis(p, problem);
  const std::string text = read_file(certificate);
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CommandError{kExitUsage, certificate + ": " + e.what()};
  }
  Side side = Side::Primal;
  std::vector<Block> blocks;
  std::vector<double> coords;
  try {
    const std::string s = j.at("side").get<std::string>();
    if (s == "dual") {
      side = Side::Dual;
    } else if (s != "primal") {
      throw CommandError{kExitUsage, certificate + ": side must be primal or dual"};
    }
    for (const auto& b : j.at("cone")) {
      const std::string kind = b.at("kind").get<std::string>();
      const int size = b.at("size").get<int>();
      if (kind == "ORTHANT") {
        blocks.push_back({BlockKind::Orthant, size});
      } else if (kind == "PSD") {
        blocks.push_back({BlockKind::Psd, size});
      } else if (kind == "SOC") {
        blocks.push_back({BlockKind::Soc, size});
      } else {
        throw CommandError{kExitUsage, certificate + ": unknown cone block '" + kind + "'"};
      }
    }
    coords = j.at("coordinates").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw CommandError{kExitUsage, certificate + ": " + e.what()};
  }

  if (blocks != p.blocks) {
    out << "fail: certificate cone does not match the problem cone\n";
    return kExitVerifyFailed;
  }
  if (static_cast<int>(coords.size()) != basis.ambient_dim()) {
    out << "fail: certificate has " << coords.size() << " coordinates, expected "
        << basis.ambient_dim() << "\n";
    return kExitVerifyFailed;
  }
  const Element x(basis.cone(), Eigen::Map<const Eigen::VectorXd>(coords.data(), coords.size()));
  std::optional<Projector> proj;
  if (side == Side::Primal) {
    proj.emplace(basis);
  } else if (basis.dim() < basis.ambient_dim()) {
    proj.emplace(complement(basis));
  }
  const double nx = norm_frob(x);
  const double residual = proj ? norm_frob(x - proj->apply(x)) : nx;
  const double lmin = lambda_min(x);
  const bool ok = nx > 0.0 && residual <= tol * nx && lmin > 0.0;
  out << (ok ? "ok" : "fail") << ": side " << to_string(side) << ", relative residual "
      << (nx > 0.0 ? residual / nx : 0.0) << ", lambda_min " << lmin << "\n";
  return ok ? 0 : kExitVerifyFailed;
}

struct BenchArgs {
  std::string kind = "orthant";
  std::vector<int> sizes{8, 16, 32};
  int seeds = 20;
  std::vector<std::string> schemes;
  std::string mode = "primal";
  bool csv = false;
  std::optional<std::int64_t> max_outer;
};

struct BenchCell {
  std::string scheme;
  int size;
  int rank;
  int seeds = 0;
  int solved = 0;
  std::int64_t calls = 0;
  std::int64_t call_iterations = 0;
  std::int64_t max_iterations = 0;
  std::int64_t total_bp = 0;
  std::int64_t rescalings = 0;
  std::int64_t cap = 0;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  BenchKind kind;
  if (!parse_bench_kind(a.kind, kind)) throw CommandError{kExitUsage, "unknown kind '" + a.kind + "'"};
  const std::optional<SolveMode> mode = parse_mode(a.mode);
  if (!mode) throw CommandError{kExitUsage, "unknown mode '" + a.mode + "'"};
  if (*mode == SolveMode::Orthant && kind != BenchKind::Orthant) {
    throw CommandError{kExitUsage, "orthant mode requires --kind orthant"};
  }
  std::vector<Scheme> schemes;
  if (a.schemes.empty()) {
    schemes.assign(std::begin(kAllSchemes), std::end(kAllSchemes));
  } else {
    for (const std::string& s : a.schemes) {
      const std::optional<Scheme> sc = parse_scheme(s);
      if (!sc) throw CommandError{kExitUsage, "unknown scheme '" + s + "'"};
      schemes.push_back(*sc);
    }
  }
  if (a.seeds < 1) throw CommandError{kExitUsage, "--seeds must be >= 1"};
  for (int size : a.sizes) {
    const int min_size = kind == BenchKind::Soc ? 2 : 1;
    if (size < min_size) throw CommandError{kExitUsage, "invalid size " + std::to_string(size)};
  }

  std::vector<BenchCell> cells;
  for (Scheme scheme : schemes) {
    for (int size : a.sizes) {
      const ConeDescriptor cone = bench_cone(kind, size);
      BenchCell cell{symcone::to_string(scheme), size, cone.rank()};
      cell.cap = *mode == SolveMode::Orthant ? orthant_iteration_cap(scheme, cone.ambient_dim())
                                             : iteration_cap(scheme, cone.rank());
      for (int seed = 0; seed < a.seeds; ++seed) {
        const PlantedInstance inst = bench_instance(kind, size, static_cast<std::uint64_t>(seed));
        const SolveReport r =
            solve(inst.basis, *mode, make_options(scheme, std::nullopt, a.max_outer, *mode, cone));
        ++cell.seeds;
        if (r.status != SolveStatus::OuterLimit) ++cell.solved;
        for (const BasicProcedureCall& c : r.calls) {
          ++cell.calls;
          cell.call_iterations += c.iterations;
          cell.max_iterations = std::max(cell.max_iterations, c.iterations);
        }
        cell.total_bp += r.bp_iterations;
        cell.rescalings += rescaling_count(r);
      }
      cells.push_back(cell);
    }
  }

  const std::vector<std::string> header{"scheme",    "size",     "rank",         "seeds",
                                        "solved",    "mean_iter", "max_iter",    "cap",
                                        "mean_total_bp", "mean_rescalings"};
  std::vector<std::vector<std::string>> table;
  auto fixed = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
  };
  for (const BenchCell& c : cells) {
    table.push_back({c.scheme, std::to_string(c.size), std::to_string(c.rank),
                     std::to_string(c.seeds), std::to_string(c.solved),
                     fixed(c.calls ? double(c.call_iterations) / double(c.calls) : 0.0),
                     std::to_string(c.max_iterations), std::to_string(c.cap),
                     fixed(double(c.total_bp) / c.seeds), fixed(double(c.rescalings) / c.seeds)});
  }
  if (a.csv) {
    auto row = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    };
    row(header);
    for (const auto& r : table) row(r);
    return 0;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : table)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  auto row = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << "  ";
      // first column left-aligned, numbers right-aligned
      if (i == 0) {
        out << std::left << std::setw(static_cast<int>(width[i])) << r[i];
      } else {
        out << std::right << std::setw(static_cast<int>(width[i])) << r[i];
      }
    }
    out << "\n";
  };
  row(header);
  for (const auto& r : table) row(r);
  return 0;
}

struct GenArgs {
  std::string kind = "orthant";
  int size = 8;
  std::int64_t seed = 0;
  std::string out_path;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  BenchKind kind;
  if (!parse_bench_kind(a.kind, kind)) throw CommandError{kExitUsage, "unknown kind '" + a.kind + "'"};
  if (a.size < (kind == BenchKind::Soc ? 2 : 1)) throw CommandError{kExitUsage, "invalid size"};
  if (a.seed < 0) throw CommandError{kExitUsage, "--seed must be >= 0"};
  const PlantedInstance inst = bench_instance(kind, a.size, static_cast<std::uint64_t>(a.seed));
  ProblemFile p = ProblemFile::from_basis(inst.basis);
  p.name = a.kind + "-" + std::to_string(a.size) + "-seed" + std::to_string(a.seed);
  p.seed = a.seed;
  p.delta_lb = inst.delta_lb;
  const std::string text = write_problem(p);
  if (a.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(a.out_path, std::ios::binary);
    if (!f) throw CommandError{kExitNoInput, "cannot write '" + a.out_path + "'"};
    f << text;
  }
  return 0;
}

}  // namespace

std::string certificate_json(Side side, const Element& x) {
  ordered_json j;
  j["side"] = to_string(side);
  j["cone"] = cone_json(x.cone());
  j["coordinates"] = coordinates_json(x);
  return j.dump();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projection-and-rescaling solver for symmetric-cone feasibility problems"};
  app.name("symcone");
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Find a point of L in the open cone");
  solve_cmd->add_option("problem", solve_args.problem, "Problem file")->required();
  solve_cmd->add_option("--scheme", solve_args.scheme, "perceptron | vn | smooth | vn-away")
      ->capture_default_str();
  solve_cmd->add_option("--mode", solve_args.mode, "primal | extended | orthant")->capture_default_str();
  solve_cmd->add_option("--eps", solve_args.eps, "Cap tolerance epsilon (default per scheme)");
  solve_cmd->add_option("--max-outer", solve_args.max_outer,
                        "Maximum rescalings per side (default 10 x ambient dimension)");
  solve_cmd->add_option("--seed", solve_args.seed,
                        "Accepted for scripting; the solver itself draws no random numbers");
  solve_cmd->add_flag("--json", solve_args.json, "Machine-readable report");
  solve_cmd->add_option("--certificate-out", solve_args.certificate_out, "Write the certificate JSON");

  std::string verify_problem, verify_cert;
  double verify_tol = 1e-8;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Check a certificate against a problem");
  verify_cmd->add_option("problem", verify_problem, "Problem file")->required();
  verify_cmd->add_option("certificate", verify_cert, "Certificate JSON")->required();
  verify_cmd->add_option("--tol", verify_tol, "Relative subspace residual tolerance")
      ->capture_default_str();

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Iteration counts on planted instances");
  bench_cmd->add_option("--kind", bench_args.kind, "orthant | psd | soc | mixed")->capture_default_str();
  bench_cmd->add_option("--sizes", bench_args.sizes, "Block sizes")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--seeds", bench_args.seeds, "Seeds 0..N-1 per cell")->capture_default_str();
  bench_cmd->add_option("--schemes", bench_args.schemes, "Schemes (default all)")->delimiter(',');
  bench_cmd->add_option("--mode", bench_args.mode, "primal | extended | orthant")->capture_default_str();
  bench_cmd->add_option("--max-outer", bench_args.max_outer, "Maximum rescalings per side");
  bench_cmd->add_flag("--csv", bench_args.csv, "CSV instead of an aligned table");

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Write a planted problem file");
  gen_cmd->add_option("--kind", gen_args.kind, "orthant | psd | soc | mixed")->capture_default_str();
  gen_cmd->add_option("--size", gen_args.size, "Block size")->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("-o,--out", gen_args.out_path, "Output path (default standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_args, out);
    if (*verify_cmd) return cmd_verify(verify_problem, verify_cert, verify_tol, out);
    if (*bench_cmd) return cmd_bench(bench_args, out);
    if (*gen_cmd) return cmd_gen(gen_args, out);
  } catch (const CommandError& e) {
    err << "symcone: " << e.message << "\n";
    return e.code;
  }
  return kExitUsage;
}

}  // namespace symcone::cli
