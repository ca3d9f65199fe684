// Command-line driver: generate benchmark instances, run the learners and
// baselines on them, compute brute-force dimensions, verify traces, and run
// the built-in experiment sweeps to CSV.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "grails/bench.hpp"

using json = nlohmann::json;
using namespace grails;

namespace {

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

struct GenParams {
  std::string tag;
  int n = 16;
  uint64_t seed = 0;
  double sigma = 0.15;
  double radius = 1.0;
  double delta = 100.0;  // two-arm gap
  double alpha = 0.0;
  int constraints = 0;
  int grid_cells = 100;
  int truth = 0;
};

Instance build_instance(const GenParams& p) {
  if (p.tag == "prop6_linear") return gen_prop6(p.n, p.truth);
  if (p.tag == "prop6_table") return gen_prop6_table(p.n, p.truth);
  if (p.tag == "thresholds") return gen_thresholds(p.n, p.truth);
  if (p.tag == "coupled_thresholds") return gen_coupled_thresholds(p.n, p.truth);
  if (p.tag == "regret_gap") return gen_regret_gap(p.n, p.truth);
  if (p.tag == "loss_gap") return gen_loss_gap(p.n, 1.0, 20.0, p.truth);
  if (p.tag == "two_arm_tradeoff") return gen_two_arm(p.delta, p.truth);
  if (p.tag == "oful_bad") return gen_oful_bad(p.n, p.truth);
  if (p.tag == "rkhs_random") return gen_rkhs_random(p.n, p.sigma, p.radius, p.seed, p.grid_cells);
  if (p.tag == "rkhs_prior_knowledge")
    return gen_rkhs_prior(p.n, p.sigma, p.radius, p.constraints, p.seed, p.grid_cells);
  if (p.tag == "convex_quadratic")
    return gen_convex_quadratic(p.n, p.seed, p.grid_cells, p.alpha);
  if (p.tag == "strongly_convex_grid") return gen_strongly_convex(p.n, p.alpha, p.truth);
  throw CLI::ValidationError("unknown generator tag: " + p.tag);
}

json params_to_json(const GenParams& p) {
  return {{"tag", p.tag},         {"n", p.n},
          {"seed", p.seed},       {"sigma", p.sigma},
          {"radius", p.radius},   {"delta", p.delta},
          {"alpha", p.alpha},     {"constraints", p.constraints},
          {"grid_cells", p.grid_cells}, {"truth", p.truth}};
}

GenParams params_from_json(const json& j) {
  GenParams p;
  p.tag = j.at("tag");
  p.n = j.value("n", 16);
  p.seed = j.value("seed", 0ull);
  p.sigma = j.value("sigma", 0.15);
  p.radius = j.value("radius", 1.0);
  p.delta = j.value("delta", 100.0);
  p.alpha = j.value("alpha", 0.0);
  p.constraints = j.value("constraints", 0);
  p.grid_cells = j.value("grid_cells", 100);
  p.truth = j.value("truth", 0);
  return p;
}

Instance load_instance(const std::string& path, GenParams* out_params = nullptr) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open instance file: " + path);
  json j;
  in >> j;
  GenParams p = params_from_json(j.at("params"));
  if (out_params) *out_params = p;
  Instance inst = build_instance(p);
  // sanity: regenerated labels must match the materialized ones
  if (j.contains("labels")) {
    Vec l = inst.labels();
    auto& jl = j.at("labels");
    for (int i = 0; i < inst.n; ++i)
      if (std::abs(l[i] - jl.at(i).get<double>()) > 1e-9)
        throw CLI::ValidationError("instance file labels disagree with generator output");
  }
  return inst;
}

RunRecord dispatch_run(const Instance& inst, const std::string& alg, double eps,
                       const AlgoConfig& cfg) {
  Rng rng(cfg.seed ^ 0x5bd1e995u);
  auto oracle = inst.oracle();
  if (alg == "unif") return run_unif(inst.n, oracle, rng);
  if (alg == "gp_ucb") {
    const Mat& pts = inst.cls ? inst.cls->arms.points : Mat();
    if (!inst.cls) throw CLI::ValidationError("gp_ucb needs a sampled instance");
    return run_gp_ucb(pts, 0.15, oracle);
  }
  if (alg == "enum_best") {
    if (!inst.finite) throw CLI::ValidationError("enum_best needs a finite instance");
    return run_enum_best_arm(*inst.finite, inst.grid, eps, oracle);
  }
  if (alg == "enum_loss") {
    if (!inst.finite) throw CLI::ValidationError("enum_loss needs a finite instance");
    return run_enum_loss_min(*inst.finite, inst.grid, oracle);
  }

  VersionSpace vs = inst.make_vs(eps);
  std::unique_ptr<Backend> backend;
  if (inst.finite) {
    auto fb = std::make_unique<FiniteBackend>(&*inst.finite);
    fb->set_truth(inst.truth_index);
    backend = std::move(fb);
  } else {
    auto gb = std::make_unique<GeometryBackend>(&*inst.cls, cfg);
    gb->set_truth(inst.truth_piece, inst.truth_params);
    backend = std::move(gb);
  }
  if (alg == "grails_best") return run_best_arm(vs, *backend, oracle, cfg);
  if (alg == "grails_best_est") return run_best_arm_estimated(vs, *backend, oracle, cfg);
  if (alg == "grails_loss") {
    vs.eps = 0.0;
    return run_loss_min(vs, *backend, oracle, cfg);
  }
  if (alg == "grails_loss_est") {
    vs.eps = 0.0;
    return run_loss_min_estimated(vs, *backend, oracle, cfg);
  }
  if (alg == "grails_continuous") return run_continuous(vs, *backend, oracle, cfg);
  if (alg == "grails_class") return run_active_classification(vs, *backend, oracle, cfg);
  if (alg == "grails_threshold") return run_threshold(vs, *backend, oracle, eps, cfg);
  if (alg == "oful") return run_oful_style(vs, *backend, oracle, eps, cfg);
  throw CLI::ValidationError("unknown algorithm: " + alg);
}

json record_to_json(const RunRecord& rec) {
  json rounds = json::array();
  for (const auto& r : rec.rounds)
    rounds.push_back({{"t", r.t},
                      {"phase", r.phase},
                      {"arm", r.arm},
                      {"label", r.label},
                      {"objective", std::isfinite(r.objective) ? r.objective : -1.0},
                      {"survival", r.survival},
                      {"truth_ok", r.truth_ok}});
  return {{"rounds", rounds},
          {"returned_arm", rec.returned_arm},
          {"total_loss", rec.total_loss},
          {"stop_reason", rec.stop_reason},
          {"audit_ok", rec.audit_ok}};
}

int cmd_verify(const std::string& inst_path, const std::string& trace_path) {
  Instance inst = load_instance(inst_path);
  auto oracle = inst.oracle();
  std::ifstream in(trace_path);
  if (!in) {
    std::cerr << "verify: cannot open trace " << trace_path << "\n";
    return 1;
  }
  std::string line;
  std::vector<char> seen(inst.n, 0);
  int failures = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("returned_arm")) continue;  // summary line
    int arm = j.at("arm");
    double label = j.at("label");
    if (arm < 0 || arm >= inst.n) {
      std::cerr << "verify: arm out of range: " << arm << "\n";
      ++failures;
      continue;
    }
    if (seen[arm]) {
      std::cerr << "verify: arm queried twice: " << arm << "\n";
      ++failures;
    }
    seen[arm] = 1;
    if (std::abs(label - oracle(arm)) > 1e-9) {
      std::cerr << "verify: label mismatch at arm " << arm << ": trace " << label << " oracle "
                << oracle(arm) << "\n";
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "verify: OK" : "verify: FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Realizability-based interactive learning toolkit"};
  app.require_subcommand(1);

  // shared knobs
  uint64_t seed = 0;
  int trials = 1;
  int budget_samples = 300;
  int burn_in = 50;
  int grid_cells = 100;
  double epsilon = 0.0;
  std::string out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--trials", trials, "number of trials");
    sub->add_option("--budget-samples", budget_samples, "mixture draws per round");
    sub->add_option("--burn-in", burn_in, "hit-and-run burn-in steps");
    sub->add_option("--grid-cells", grid_cells, "continuous-output grid cells");
    sub->add_option("--epsilon", epsilon, "target accuracy / threshold");
    sub->add_option("--out", out_path, "output file");
  };

  // gen
  GenParams gp;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--tag", gp.tag, "generator tag")->required();
  gen->add_option("--n", gp.n, "size parameter");
  gen->add_option("--sigma", gp.sigma, "RBF bandwidth");
  gen->add_option("--radius", gp.radius, "norm-ball radius");
  gen->add_option("--delta", gp.delta, "two-arm gap");
  gen->add_option("--alpha", gp.alpha, "strong-convexity parameter");
  gen->add_option("--constraints", gp.constraints, "prior-knowledge constraints");
  gen->add_option("--truth", gp.truth, "truth index / piece");
  add_common(gen);

  // run
  std::string inst_path, alg;
  auto* runc = app.add_subcommand("run", "run an algorithm on an instance");
  runc->add_option("--instance", inst_path, "instance file")->required();
  runc->add_option("--alg", alg, "algorithm")->required();
  add_common(runc);

  // dims
  auto* dimsc = app.add_subcommand("dims", "brute-force dimensions of a finite instance");
  dimsc->add_option("--instance", inst_path, "instance file")->required();
  add_common(dimsc);

  // verify
  std::string trace_path;
  auto* verc = app.add_subcommand("verify", "verify a trace against an instance");
  verc->add_option("--instance", inst_path, "instance file")->required();
  verc->add_option("--trace", trace_path, "trace file (line JSON)")->required();

  // sweep
  std::string experiment;
  auto* sweepc = app.add_subcommand("sweep", "run an experiment sweep to CSV");
  sweepc->add_option("--experiment", experiment, "sigma | prior | convex")->required();
  add_common(sweepc);

  CLI11_PARSE(app, argc, argv);

  auto make_cfg = [&]() {
    AlgoConfig cfg;
    cfg.seed = seed;
    cfg.budget_samples = budget_samples;
    cfg.chain.burn_in = burn_in;
    return cfg;
  };

  try {
    if (gen->parsed()) {
      gp.seed = seed;
      gp.grid_cells = grid_cells;
      Instance inst = build_instance(gp);
      json j = {{"params", params_to_json(gp)},
                {"tag", inst.tag},
                {"n", inst.n},
                {"labels", vec_to_json(inst.labels())},
                {"truth_values", vec_to_json(inst.truth_values)},
                {"grid", inst.grid.values}};
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      *os << j.dump(2) << "\n";
    } else if (runc->parsed()) {
      Instance inst = load_instance(inst_path);
      AlgoConfig cfg = make_cfg();
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      for (int trial = 0; trial < trials; ++trial) {
        cfg.seed = seed + trial;
        RunRecord rec = dispatch_run(inst, alg, epsilon, cfg);
        for (const auto& r : rec.rounds) {
          json line = {{"trial", trial}, {"t", r.t},     {"phase", r.phase},
                       {"arm", r.arm},   {"label", r.label}, {"survival", r.survival}};
          *os << line.dump() << "\n";
        }
        json summary = record_to_json(rec);
        summary["trial"] = trial;
        summary.erase("rounds");
        summary["queries"] = rec.queries();
        *os << summary.dump() << "\n";
      }
    } else if (dimsc->parsed()) {
      Instance inst = load_instance(inst_path);
      if (!inst.finite) throw CLI::ValidationError("dims requires a finite instance");
      json j;
      j["upsilon_best"] = upsilon_best(*inst.finite, inst.grid, epsilon);
      j["upsilon_loss"] = upsilon_loss(*inst.finite, inst.grid);
      j["upsilon_class"] = upsilon_class(*inst.finite, inst.grid);
      try {
        j["haystack"] = haystack_dimension(*inst.finite, inst.grid);
      } catch (const std::invalid_argument& e) {
        j["haystack"] = nullptr;
      }
      try {
        j["minimax_best_arm"] = minimax_best_arm(*inst.finite, inst.grid, epsilon);
      } catch (const std::invalid_argument& e) {
        j["minimax_best_arm"] = nullptr;
      }
      std::cout << j.dump(2) << "\n";
    } else if (verc->parsed()) {
      return cmd_verify(inst_path, trace_path);
    } else if (sweepc->parsed()) {
      std::ostream* os = &std::cout;
      std::ofstream f;
      if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
      }
      AlgoConfig cfg = make_cfg();
      if (experiment == "sigma") {
        *os << "sigma,trial,alg,queries_to_regret\n";
        for (double sg : {0.12, 0.2, 0.4}) {
          for (int trial = 0; trial < trials; ++trial) {
            Instance inst = gen_rkhs_random(10, sg, 1.0, seed + trial, grid_cells);
            auto oracle = inst.oracle();
            cfg.seed = seed + trial;
            GeometryBackend gb(&*inst.cls, cfg);
            gb.set_truth(0, inst.truth_params);
            VersionSpace vs = inst.make_vs(epsilon > 0 ? epsilon : 0.01);
            RunRecord g = run_continuous(vs, gb, oracle, cfg);
            Rng rng(cfg.seed);
            RunRecord u = run_unif(inst.n, oracle, rng);
            RunRecord ucb = run_gp_ucb(inst.cls->arms.points, sg, oracle);
            *os << sg << "," << trial << ",grails,"
                << queries_to_simple_regret(g, inst.truth_values, 0.01) << "\n";
            *os << sg << "," << trial << ",unif,"
                << queries_to_simple_regret(u, inst.truth_values, 0.01) << "\n";
            *os << sg << "," << trial << ",gp_ucb,"
                << queries_to_simple_regret(ucb, inst.truth_values, 0.01) << "\n";
          }
        }
      } else if (experiment == "prior") {
        *os << "constraints,trial,queries_to_regret\n";
        for (int k : {0, 25, 50}) {
          for (int trial = 0; trial < trials; ++trial) {
            Instance inst = gen_rkhs_prior(100, 0.3, 1.0, k, seed + trial, grid_cells);
            cfg.seed = seed + trial;
            GeometryBackend gb(&*inst.cls, cfg);
            gb.set_truth(0, inst.truth_params);
            VersionSpace vs = inst.make_vs(epsilon > 0 ? epsilon : 0.005);
            RunRecord g = run_continuous(vs, gb, inst.oracle(), cfg);
            *os << k << "," << trial << ","
                << queries_to_simple_regret(g, inst.truth_values, 0.005) << "\n";
          }
        }
      } else if (experiment == "convex") {
        *os << "epsilon,trial,alg,queries_to_regret\n";
        // thin slab constraints: give the projection search a deeper budget
        cfg.interior.restarts = 6;
        cfg.interior.max_iters = 5000;
        for (double ep : {0.1, 0.03, 0.01}) {
          for (int trial = 0; trial < trials; ++trial) {
            Instance inst = gen_convex_quadratic(100, seed + trial, grid_cells);
            auto oracle = inst.oracle();
            cfg.seed = seed + trial;
            GeometryBackend gb(&*inst.cls, cfg);
            gb.set_truth(0, inst.truth_params);
            VersionSpace vs = inst.make_vs(ep);
            RunRecord g = run_continuous(vs, gb, oracle, cfg);
            Rng rng(cfg.seed);
            RunRecord u = run_unif(inst.n, oracle, rng);
            GeometryBackend gb2(&*inst.cls, cfg);
            RunRecord of = run_oful_style(inst.make_vs(ep), gb2, oracle, ep, cfg);
            *os << ep << "," << trial << ",grails,"
                << queries_to_simple_regret(g, inst.truth_values, ep) << "\n";
            *os << ep << "," << trial << ",unif,"
                << queries_to_simple_regret(u, inst.truth_values, ep) << "\n";
            *os << ep << "," << trial << ",oful,"
                << queries_to_simple_regret(of, inst.truth_values, ep) << "\n";
          }
        }
      } else {
        throw CLI::ValidationError("unknown experiment: " + experiment);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
