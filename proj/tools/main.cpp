#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "meanfield/csv.hpp"
#include "meanfield/diluted.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/graph_oracle.hpp"
#include "meanfield/grid_distribution.hpp"
#include "meanfield/order_parameter.hpp"
#include "meanfield/population.hpp"

namespace {

using nlohmann::json;
namespace mf = meanfield;

struct CommonOpts {
  bool no_timestamp = false;
  int threads = 0;  // 0: resolve from env, else 1
};

int resolve_threads(const CommonOpts& common) {
  if (common.threads > 0) return common.threads;
  if (const char* env = std::getenv("MEANFIELD_OPT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void add_common(CLI::App* sub, CommonOpts& common) {
  sub->add_flag("--no-timestamp", common.no_timestamp,
                "Omit the timestamp from artifact metadata (byte-identical reruns)");
  sub->add_option("--threads", common.threads,
                  "Worker threads (fallback: MEANFIELD_OPT_THREADS, then 1)");
}

std::string iso_now() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_meta(const std::string& out_path, const std::string& command,
                const json& config, const CommonOpts& common) {
  json meta;
  meta["command"] = command;
  meta["config"] = config;
  if (!common.no_timestamp) meta["timestamp"] = iso_now();
  std::ofstream file(out_path + ".meta.json");
  file << meta.dump(2) << '\n';
}

void emit_json(const json& record, const std::string& out_path) {
  std::cout << record.dump(2) << std::endl;
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    file << record.dump(2) << '\n';
  }
}

mf::cavity::Kernel kernel_by_name(const std::string& name) {
  return name == "matching" ? mf::cavity::Kernel::matching() : mf::cavity::Kernel::tsp();
}

mf::grid::RecursionMode mode_by_name(const std::string& name) {
  return name == "min" ? mf::grid::RecursionMode::kMin : mf::grid::RecursionMode::kMinSecond;
}

std::vector<double> lambda_sweep(double lambda, double lambda_max, int steps) {
  std::vector<double> values;
  if (steps <= 1 || !(lambda_max > lambda)) {
    values.push_back(lambda);
    return values;
  }
  for (int i = 0; i < steps; ++i) {
    values.push_back(lambda + (lambda_max - lambda) * i / (steps - 1));
  }
  return values;
}

// --- subcommand bodies -----------------------------------------------------

void run_constants(const std::string& kernel_name, double x_limit, int n_points,
                   const std::string& out, const CommonOpts& common) {
  const auto kernel = kernel_by_name(kernel_name);
  const double c = kernel.full_constant();
  const auto curve = mf::cavity::solve_curve(kernel, c, x_limit, n_points);
  json record;
  record["kernel"] = kernel_name;
  record["c"] = c;
  record["g0"] = curve.g0;
  record["ground_state"] = mf::cavity::ground_state_energy(kernel);
  record["consistency_residual"] = mf::cavity::consistency_residual(kernel, curve);
  record["config"] = {{"kernel", kernel_name}, {"x_limit", x_limit}, {"grid", n_points}};
  if (!common.no_timestamp) record["timestamp"] = iso_now();
  emit_json(record, out);
}

void run_curve(const std::string& kernel_name, double c_opt, double x_limit, int n_points,
               const std::string& out, const CommonOpts& common) {
  const auto kernel = kernel_by_name(kernel_name);
  const double c = c_opt > 0 ? c_opt : kernel.full_constant();
  const auto curve = mf::cavity::solve_curve(kernel, c, x_limit, n_points);
  mf::io::CsvTable table;
  table.header = "x,G,W_residual";
  const std::size_t n = curve.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = curve.points[i];
    const auto& mirror = curve.points[n - 1 - i];  // tabulation is symmetric in x
    const double residual =
        std::abs(kernel.pair_value(p.g) + kernel.pair_value(mirror.g) - c);
    table.rows.push_back({p.x, p.g, residual});
  }
  mf::io::write_csv(out, table);
  write_meta(out, "curve",
             {{"kernel", kernel_name}, {"c", c}, {"x_limit", x_limit}, {"grid", n_points}},
             common);
}

void run_finite_lambda(double lambda, double lambda_max, int steps, int h_points,
                       const std::string& out, const std::string& h_out,
                       const CommonOpts& common) {
  mf::io::CsvTable sweep;
  sweep.header = "lambda,q,edge_cost,penalty_cost,total_cost,longest_edge";
  double last_lambda = lambda;
  for (double l : lambda_sweep(lambda, lambda_max, steps)) {
    const double q = mf::diluted::unmatched_density(l);
    const double edge = mf::diluted::edge_cost(q);
    const double penalty = 0.5 * l * q;
    sweep.rows.push_back({l, q, edge, penalty, edge + penalty,
                          mf::diluted::penalty_from_density(q)});
    last_lambda = l;
  }
  mf::io::write_csv(out, sweep);
  const json config = {{"lambda", lambda}, {"lambda_max", lambda_max}, {"steps", steps},
                       {"h_points", h_points}};
  write_meta(out, "finite-lambda", config, common);

  if (!h_out.empty()) {
    const double q = mf::diluted::unmatched_density(last_lambda);
    mf::io::CsvTable h_table;
    h_table.header = "x,q,h";
    for (int i = 0; i <= h_points; ++i) {
      const double x = last_lambda * i / h_points;
      h_table.rows.push_back({x, q, mf::diluted::participation_probability(x, q)});
    }
    mf::io::write_csv(h_out, h_table);
    write_meta(h_out, "finite-lambda.h", config, common);
  }
}

void run_iterate(const std::string& mode_name, double lambda, int n_cells, int k_max,
                 const std::string& out, const std::string& dist_out,
                 const CommonOpts& common) {
  const auto mode = mode_by_name(mode_name);
  const auto result = mf::grid::run_iteration(mode, lambda, n_cells, k_max);
  mf::io::CsvTable trace;
  trace.header = "k,sup_gap,terminal_gap,expectation_gap,bound";
  for (const auto& row : result.trace.rows) {
    trace.rows.push_back({static_cast<double>(row.step), row.sup_gap, row.terminal_gap,
                          row.expectation_gap, row.bound});
  }
  mf::io::write_csv(out, trace);
  const json config = {{"mode", mode_name}, {"lambda", lambda}, {"grid", n_cells},
                       {"k", k_max}, {"converged", result.trace.converged}};
  write_meta(out, "iterate", config, common);

  if (!dist_out.empty()) {
    mf::io::CsvTable dist;
    dist.header = "x,survival";
    for (int i = 0; i <= result.lower.n_cells(); ++i) {
      dist.rows.push_back({result.lower.node(i), result.lower.values[i]});
    }
    mf::io::write_csv(dist_out, dist);
    json header = config;
    header["atom"] = result.lower.atom();
    header["n_cells"] = n_cells;
    write_meta(dist_out, "iterate.distribution", header, common);
  }
}

void run_popdyn(const std::string& mode_name, double lambda, std::size_t pop_size,
                int generations, std::uint64_t seed, int n_cells, const std::string& out,
                const CommonOpts& common) {
  const auto mode = mode_by_name(mode_name);
  const int threads = resolve_threads(common);
  const auto pop = mf::popdyn::run_chain(lambda, mode, generations, pop_size, seed, threads);

  // Reference survival: closed form for the min recursion, the converged grid
  // fixed point for second-min.
  const mf::grid::GridDistribution reference =
      mode == mf::grid::RecursionMode::kMin
          ? mf::grid::tabulate_limit_survival(lambda, n_cells)
          : mf::grid::run_iteration(mode, lambda, n_cells, 100000).lower;

  std::vector<double> sorted(pop.samples);
  std::sort(sorted.begin(), sorted.end());
  mf::io::CsvTable hist;
  hist.header = "x,empirical_survival,reference_survival";
  for (int i = 0; i <= reference.n_cells(); ++i) {
    const double x = reference.node(i);
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    const double empirical = static_cast<double>(sorted.end() - it) / sorted.size();
    hist.rows.push_back({x, empirical, reference.values[i]});
  }
  if (!out.empty()) {
    mf::io::write_csv(out, hist);
    write_meta(out, "popdyn",
               {{"mode", mode_name}, {"lambda", lambda}, {"pop", pop_size},
                {"k", generations}, {"seed", seed}, {"grid", n_cells},
                {"threads", threads}},
               common);
  }

  json summary;
  summary["lambda"] = lambda;
  summary["mode"] = mode_name;
  summary["generations"] = generations;
  summary["pop_size"] = pop_size;
  summary["seed"] = seed;
  summary["ks"] = mf::popdyn::ks_distance(pop, reference);
  summary["atom_fraction"] = mf::popdyn::atom_fraction(pop);
  summary["mean"] = mf::popdyn::mean_value(pop);
  if (!common.no_timestamp) summary["timestamp"] = iso_now();
  emit_json(summary, out.empty() ? "" : out + ".summary.json");
}

void run_simulate(int n, double lambda, int replicas, std::uint64_t seed, int bins,
                  const std::string& out, const std::string& participation_out,
                  const CommonOpts& common) {
  const auto summary = mf::oracle::run_ensemble({n, lambda, replicas, seed, bins});
  if (!out.empty()) {
    mf::io::CsvTable table;
    table.header = "replica,cost,unmatched,longest_edge";
    for (const auto& row : summary.rows) {
      table.rows.push_back({static_cast<double>(row.replica), row.cost,
                            static_cast<double>(row.unmatched), row.longest_edge});
    }
    mf::io::write_csv(out, table);
    write_meta(out, "simulate",
               {{"n", n}, {"lambda", lambda}, {"replicas", replicas}, {"seed", seed},
                {"bins", bins}},
               common);
  }
  if (!participation_out.empty()) {
    mf::io::CsvTable table;
    table.header = "length_bin,participated,total,h_predicted";
    for (const auto& bin : summary.bins) {
      table.rows.push_back({0.5 * (bin.length_lo + bin.length_hi),
                            static_cast<double>(bin.participated),
                            static_cast<double>(bin.total), bin.predicted});
    }
    mf::io::write_csv(participation_out, table);
    write_meta(participation_out, "simulate.participation",
               {{"n", n}, {"lambda", lambda}, {"replicas", replicas}, {"seed", seed},
                {"bins", bins}},
               common);
  }

  json record;
  record["n"] = n;
  record["lambda"] = lambda;
  record["replicas"] = replicas;
  record["seed"] = seed;
  record["mean_unmatched_fraction"] = summary.mean_unmatched_fraction;
  record["mean_cost_per_vertex"] = summary.mean_cost_per_vertex;
  record["mean_longest_edge"] = summary.mean_longest_edge;
  record["predicted_unmatched_fraction"] = mf::diluted::unmatched_density(lambda);
  record["predicted_cost_per_vertex"] = mf::diluted::total_cost(lambda);
  if (!common.no_timestamp) record["timestamp"] = iso_now();
  emit_json(record, "");
}

void run_tsp_c(double lambda, double lambda_max, int steps, int n_cells, int k_max,
               const std::string& out, const CommonOpts& common) {
  mf::io::CsvTable table;
  table.header = "lambda,C,lambda_residual,half_area,grid_cost,cost_mismatch";
  const auto kernel = mf::cavity::Kernel::tsp();
  for (double l : lambda_sweep(lambda, lambda_max, steps)) {
    const auto constant = mf::cavity::tsp_constant(l);
    if (constant.clamped) {
      std::cerr << "warning: lambda = " << l
                << " exceeds the precision floor of C - 2; constant clamped\n";
    }
    const double half_area = 0.5 * mf::cavity::curve_area(kernel, constant.c);
    const auto fixed_point =
        mf::grid::run_iteration(mf::grid::RecursionMode::kMinSecond, l, n_cells, k_max);
    const double grid_cost =
        mf::grid::edge_cost(fixed_point.lower, mf::grid::RecursionMode::kMinSecond);
    table.rows.push_back({l, constant.c, constant.lambda_residual, half_area, grid_cost,
                          std::abs(half_area - grid_cost)});
  }
  mf::io::write_csv(out, table);
  write_meta(out, "tsp-c",
             {{"lambda", lambda}, {"lambda_max", lambda_max}, {"steps", steps},
              {"grid", n_cells}, {"k", k_max}},
             common);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meanfield-opt: cavity and exact-oracle computations for random-link "
               "matching and TSP"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 domain error, 2 numeric or capacity error, "
             "64 usage error.");

  const auto kernel_check = CLI::IsMember({"matching", "tsp"});
  const auto mode_check = CLI::IsMember({"min", "min2"});

  CommonOpts constants_common;
  std::string constants_kernel;
  double constants_x_limit = 12.0;
  int constants_grid = 1200;
  std::string constants_out;
  auto* constants = app.add_subcommand(
      "constants", "Ground-state energies and consistency residuals (JSON)");
  constants->add_option("--kernel", constants_kernel, "Problem family")
      ->required()
      ->check(kernel_check);
  constants->add_option("--x-limit", constants_x_limit, "Curve tabulation half-range");
  constants->add_option("--grid", constants_grid, "Curve points on the positive side");
  constants->add_option("--out", constants_out, "Also write the JSON record here");
  add_common(constants, constants_common);
  constants->callback([&] {
    run_constants(constants_kernel, constants_x_limit, constants_grid, constants_out,
                  constants_common);
  });

  CommonOpts curve_common;
  std::string curve_kernel, curve_out;
  double curve_c = 0.0, curve_x_limit = 10.0;
  int curve_grid = 1000;
  auto* curve = app.add_subcommand("curve", "Order-parameter curve tabulation (CSV)");
  curve->add_option("--kernel", curve_kernel, "Problem family")
      ->required()
      ->check(kernel_check);
  curve->add_option("--c", curve_c, "Conserved constant (default: full problem)");
  curve->add_option("--x-limit", curve_x_limit, "Tabulation half-range");
  curve->add_option("--grid", curve_grid, "Points on the positive side");
  curve->add_option("--out", curve_out, "Output CSV path")->required();
  add_common(curve, curve_common);
  curve->callback([&] {
    run_curve(curve_kernel, curve_c, curve_x_limit, curve_grid, curve_out, curve_common);
  });

  CommonOpts fl_common;
  double fl_lambda = 0.0, fl_lambda_max = 0.0;
  int fl_steps = 1, fl_h_points = 200;
  std::string fl_out, fl_h_out;
  auto* fl = app.add_subcommand(
      "finite-lambda", "Diluted matching sweep: q, costs, longest edge (CSV)");
  fl->add_option("--lambda", fl_lambda, "Penalty parameter (sweep start)")->required();
  fl->add_option("--lambda-max", fl_lambda_max, "Sweep end (inclusive)");
  fl->add_option("--steps", fl_steps, "Sweep length");
  fl->add_option("--out", fl_out, "Sweep CSV path")->required();
  fl->add_option("--h-out", fl_h_out, "Participation-curve CSV for the last lambda");
  fl->add_option("--grid", fl_h_points, "Points on the participation curve");
  add_common(fl, fl_common);
  fl->callback([&] {
    run_finite_lambda(fl_lambda, fl_lambda_max, fl_steps, fl_h_points, fl_out, fl_h_out,
                      fl_common);
  });

  CommonOpts it_common;
  std::string it_mode, it_out, it_dist_out;
  double it_lambda = 0.0;
  int it_grid = 2000, it_k = 400;
  auto* iterate = app.add_subcommand(
      "iterate", "Grid recursion from both boundary starts with gap trace (CSV)");
  iterate->add_option("--mode", it_mode, "Recursion mode")->required()->check(mode_check);
  iterate->add_option("--lambda", it_lambda, "Penalty parameter")->required();
  iterate->add_option("--grid", it_grid, "Grid cells");
  iterate->add_option("--k", it_k, "Maximum sweeps");
  iterate->add_option("--out", it_out, "Trace CSV path")->required();
  iterate->add_option("--dist-out", it_dist_out, "Converged survival CSV path");
  add_common(iterate, it_common);
  iterate->callback([&] {
    run_iterate(it_mode, it_lambda, it_grid, it_k, it_out, it_dist_out, it_common);
  });

  CommonOpts pd_common;
  std::string pd_mode, pd_out;
  double pd_lambda = 0.0;
  std::size_t pd_pop = 1000000;
  int pd_k = 100, pd_grid = 2000;
  std::uint64_t pd_seed = 1;
  auto* popdyn = app.add_subcommand(
      "popdyn", "Population dynamics on the limiting tree (CSV histogram + JSON summary)");
  popdyn->add_option("--mode", pd_mode, "Recursion mode")->required()->check(mode_check);
  popdyn->add_option("--lambda", pd_lambda, "Penalty parameter")->required();
  popdyn->add_option("--pop", pd_pop, "Population size");
  popdyn->add_option("--k", pd_k, "Generations");
  popdyn->add_option("--seed", pd_seed, "Root seed");
  popdyn->add_option("--grid", pd_grid, "Reference grid cells");
  popdyn->add_option("--out", pd_out, "Histogram CSV path");
  add_common(popdyn, pd_common);
  popdyn->callback([&] {
    run_popdyn(pd_mode, pd_lambda, pd_pop, pd_k, pd_seed, pd_grid, pd_out, pd_common);
  });

  CommonOpts sim_common;
  std::string sim_out, sim_part_out;
  int sim_n = 16, sim_replicas = 200, sim_bins = 12;
  double sim_lambda = 0.0;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand(
      "simulate", "Exact diluted-matching ensemble on random instances (CSV + JSON)");
  simulate->add_option("--n", sim_n, "Vertices per instance (exact solver, n <= 22)");
  simulate->add_option("--lambda", sim_lambda, "Penalty parameter")->required();
  simulate->add_option("--replicas", sim_replicas, "Instances");
  simulate->add_option("--seed", sim_seed, "Ensemble seed");
  simulate->add_option("--bins", sim_bins, "Participation bins on [0, lambda]");
  simulate->add_option("--out", sim_out, "Per-replica CSV path");
  simulate->add_option("--participation-out", sim_part_out, "Participation CSV path");
  add_common(simulate, sim_common);
  simulate->callback([&] {
    run_simulate(sim_n, sim_lambda, sim_replicas, sim_seed, sim_bins, sim_out,
                 sim_part_out, sim_common);
  });

  CommonOpts tc_common;
  double tc_lambda = 0.0, tc_lambda_max = 0.0;
  int tc_steps = 1, tc_grid = 2000, tc_k = 40000;
  std::string tc_out;
  auto* tsp_c = app.add_subcommand(
      "tsp-c", "Finite-penalty TSP constant C(lambda) with cost cross-check (CSV)");
  tsp_c->add_option("--lambda", tc_lambda, "Penalty parameter (sweep start)")->required();
  tsp_c->add_option("--lambda-max", tc_lambda_max, "Sweep end (inclusive)");
  tsp_c->add_option("--steps", tc_steps, "Sweep length");
  tsp_c->add_option("--grid", tc_grid, "Grid cells for the fixed point");
  tsp_c->add_option("--k", tc_k, "Maximum sweeps for the fixed point");
  tsp_c->add_option("--out", tc_out, "Output CSV path")->required();
  add_common(tsp_c, tc_common);
  tsp_c->callback([&] {
    run_tsp_c(tc_lambda, tc_lambda_max, tc_steps, tc_grid, tc_k, tc_out, tc_common);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  } catch (const mf::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const mf::contract_error& e) {
    std::cerr << "contract error: " << e.what() << '\n';
    return 1;
  } catch (const mf::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 2;
  } catch (const mf::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
