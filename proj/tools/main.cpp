#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

using namespace epinet::cli;

namespace {

constexpr const char* kVersion = "0.1.0";

void common_flags(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--format", c.format, "report format")->check(CLI::IsMember({"csv", "json", "text"}));
  app->add_option("--out", c.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network epidemic toolkit: graphs, simulation, limit ODEs, indicators, network statistics"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  GenerateOptions gen;
  SimulateOptions sim;
  OdeOptions ode;
  IndicatorOptions ind;
  AnalyzeOptions ana;
  CompareOptions cmp;

  auto* g = app.add_subcommand("generate", "write a random graph as an edge list");
  common_flags(g, common);
  g->add_option("--family", gen.family, "complete | er | sbm | cm | household")
      ->required()
      ->check(CLI::IsMember({"complete", "er", "sbm", "cm", "household"}));
  g->add_option("--n", gen.n, "vertex count");
  g->add_option("--p", gen.p, "edge probability (er)");
  g->add_option("--degree-dist", gen.degree_dist, "degree law for cm, e.g. poisson:5");
  g->add_option("--degrees", gen.degrees_file, "file with one degree per line (cm)");
  g->add_option("--rho", gen.rho, "type fractions, comma separated (sbm)");
  g->add_option("--pi", gen.pi, "type link probabilities, rows split by ';' (sbm)");
  g->add_option("--sizes", gen.sizes, "household size law (household)");
  g->add_option("--global-p", gen.global_p, "edge probability of the global layer (household)");
  g->add_option("--attributes", gen.attributes, "also write the vertex,type,household sidecar");

  auto* s = app.add_subcommand("simulate", "run SIR/SEIR replicas on a graph file or online");
  common_flags(s, common);
  s->add_option("--graph", sim.graph, "edge-list file");
  s->add_option("--attributes", sim.attributes, "attribute sidecar for --graph");
  s->add_flag("--online", sim.online, "reveal a configuration model during the run");
  s->add_option("--degree-dist", sim.degree_dist, "degree law (online population, branching cross-check)");
  s->add_option("--n", sim.n, "population size (online)");
  s->add_option("--lambda", sim.lambda, "per-edge transmission rate");
  s->add_option("--gamma", sim.gamma, "removal rate");
  s->add_option("--delta", sim.delta, "latent activation rate (SEIR)");
  s->add_option("--lambda-h", sim.lambda_h, "within-household rate");
  s->add_option("--initial", sim.initial, "index cases");
  s->add_option("--replicas", sim.replicas, "replica count")->check(CLI::PositiveNumber);
  s->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
  s->add_option("--t-end", sim.t_end, "last sample time");
  s->add_option("--steps", sim.steps, "sample intervals on [0, t-end]")->check(CLI::PositiveNumber);
  s->add_option("--t-max", sim.t_max, "stop each run at this time");
  s->add_option("--epsilon", sim.epsilon, "online: stop when N^IS < epsilon N");
  s->add_option("--major-fraction", sim.major_fraction, "final-size fraction counted as a major outbreak");
  s->add_option("--out-dir", sim.out_dir, "directory for per-replica trajectories");
  s->add_flag("--events", sim.events, "also write per-replica event logs");

  auto* o = app.add_subcommand("ode", "integrate a deterministic limit system");
  common_flags(o, common);
  o->add_option("--system", ode.system, "km | mc | miller | volz | ballneal")
      ->required()
      ->check(CLI::IsMember({"km", "mc", "miller", "volz", "ballneal"}));
  o->add_option("--degree-dist", ode.degree_dist, "degree law of the population");
  o->add_option("--lambda", ode.lambda, "per-edge rate");
  o->add_option("--lambda-prime", ode.lambda_prime, "mass-action rate (km)");
  o->add_option("--gamma", ode.gamma, "removal rate");
  o->add_option("--s0", ode.s0, "initial susceptible fraction (km, mc)");
  o->add_option("--i0", ode.i0, "initial infectious fraction");
  o->add_option("--itilde0", ode.itilde0, "initial selection pressure (mc; default C i0)");
  o->add_option("--C", ode.C, "pair constant (mc; default mean degree)");
  o->add_option("--pI0", ode.p_i0, "initial infectious-alter edge fraction");
  o->add_option("--pS0", ode.p_s0, "initial susceptible-alter edge fraction");
  o->add_option("--t-end", ode.t_end, "horizon");
  o->add_option("--steps", ode.steps, "grid intervals")->check(CLI::PositiveNumber);

  auto* i = app.add_subcommand("indicators", "R0, growth rate, control effort and ratios");
  common_flags(i, common);
  i->add_option("--model", ind.model, "complete | cm | sbm")->required()->check(CLI::IsMember({"complete", "cm", "sbm"}));
  i->add_option("--lambda", ind.lambda, "per-contact rate");
  i->add_option("--gamma", ind.gamma, "removal rate");
  i->add_option("--kappa", ind.kappa, "mean excess degree (cm)");
  i->add_option("--degree-dist", ind.degree_dist, "degree law giving kappa (cm)");
  i->add_option("--Lambda", ind.Lambda, "rate matrix, rows split by ';' (sbm)");
  i->add_option("--rho", ind.rho, "type fractions (sbm)");
  i->add_option("--alpha", ind.alpha, "observed growth rate for the ratios");
  i->add_option("--period", ind.period, "exp | gamma:<mean>:<sd> | det:<T>");

  auto* a = app.add_subcommand("analyze", "network statistics of an edge-list file");
  common_flags(a, common);
  a->add_option("--graph", ana.graph, "edge-list file")->required();
  a->add_option("--attributes", ana.attributes, "attribute sidecar");
  a->add_option("--null-samples", ana.null_samples, "degree-preserving null samples")->check(CLI::NonNegativeNumber);
  a->add_option("--k0", ana.k0, "threshold for the KL tail fit (default: flattest scan point)");
  a->add_option("--coords", ana.coords, "write layout coordinates vertex,x,y");
  a->add_option("--delta", ana.delta, "layout length scale");
  a->add_option("--layout-iters", ana.layout_iters, "layout iterations");
  a->add_flag("--all-components", ana.whole, "analyse the whole graph, not only the giant component");

  auto* c = app.add_subcommand("compare", "distances between a simulated and an ODE trajectory");
  common_flags(c, common);
  c->add_option("--sim", cmp.sim, "trajectory CSV from simulate")->required();
  c->add_option("--ode", cmp.ode, "trajectory CSV from ode")->required();
  c->add_option("--columns", cmp.columns, "pairs sim:ode, comma separated");
  c->add_option("--threshold", cmp.threshold, "sup-distance pass threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string flags;
  for (int k = 1; k < argc; ++k) flags += (k > 1 ? " " : "") + std::string(argv[k]);
  common.provenance = {kVersion, flags, common.seed};

  try {
    if (*g) cmd_generate(common, gen);
    else if (*s) cmd_simulate(common, sim);
    else if (*o) cmd_ode(common, ode);
    else if (*i) cmd_indicators(common, ind);
    else if (*a) cmd_analyze(common, ana);
    else if (*c) cmd_compare(common, cmp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
