#include "commands.hpp"

#include "CLI11.hpp"
#include "gradsym/error.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>

using namespace gradsym::cli;

namespace {

void add_common(CLI::App* sub, Common& c, std::string& report) {
  sub->add_option("--seed", c.seed, "Sampler seed")->capture_default_str();
  sub->add_option("--samples", c.samples, "Jet points per identity check")->capture_default_str();
  sub->add_option("--tol", c.tol, "Float-path residual tolerance (ODE tolerance for reduce)")->capture_default_str();
  sub->add_option("--report", report, "Write a JSON report here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry verification, reductions and finite-difference oracles for gradient-dependent diffusion"};
  app.require_subcommand(1);
  Common common;
  std::string report;
  std::function<Result()> run;
  std::string command;

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Check the symmetry tables");
  verify->add_option("--table", vo.table, "T1, T2, T3, principal-1d, principal-2d, principal-noQ, theorem9, corollary or all")
      ->capture_default_str();
  verify->add_option("--catalog", vo.catalog, "Read cases from a JSON catalog instead of the built-in tables");
  add_common(verify, common, report);
  verify->callback([&] { run = [&] { return cmd_verify(vo, common, std::cout); }; });

  auto* det = app.add_subcommand("determining", "Extract the determining equations of the 1-D class");
  add_common(det, common, report);
  det->callback([&] { run = [&] { return cmd_determining(common, std::cout); }; });

  ReduceOptions ro;
  auto* reduce = app.add_subcommand("reduce", "Reduce the radial equation to an ODE");
  reduce->add_option("--case", ro.id, "i, ii, iii, iii-l0, iv or all")->capture_default_str();
  reduce->add_option("--k", ro.k, "Exponent k in D = W^k")->capture_default_str();
  reduce->add_option("--lambda", ro.lambda, "Ansatz parameter lambda (1 for iii and iv, 0 otherwise)");
  reduce->add_flag("--integrate", ro.integrate, "Integrate the derived ODE");
  reduce->add_option("--from", ro.from, "Start of the integration range")->capture_default_str();
  reduce->add_option("--to", ro.to, "End of the integration range")->capture_default_str();
  reduce->add_option("--init", ro.init, "Initial values phi[, phi']")->delimiter(',');
  reduce->add_option("--out", ro.profile, "Write the integrated profile as comma-separated text");
  add_common(reduce, common, report);
  reduce->callback([&] { run = [&] { return cmd_reduce(ro, common, std::cout); }; });

  ExactOptions eo;
  auto* exact = app.add_subcommand("exact", "Evaluate an exact solution family against the residual oracle");
  exact->add_option("--family", eo.family, "4-15, 4-16, 4-17 or 4-11")->capture_default_str();
  exact->add_option("--k", eo.k, "Exponent k (family default when omitted)");
  exact->add_option("--lambda", eo.lambda, "lambda")->capture_default_str();
  exact->add_option("--c1", eo.c1, "C1")->capture_default_str();
  exact->add_option("--c2", eo.c2, "C2")->capture_default_str();
  exact->add_option("--sign", eo.sign, "Branch sign for 4-16/4-17")->check(CLI::IsMember({-1, 1}))->capture_default_str();
  exact->add_option("--variant", eo.variant, "4-17 exponent: derived, printed or both")
      ->check(CLI::IsMember({"derived", "printed", "both"}))
      ->capture_default_str();
  exact->add_option("--grid", eo.grid, "Points per axis on the coarsest level")->check(CLI::Range(5, 257))
      ->capture_default_str();
  exact->add_option("--refine", eo.refine, "Number of halvings")->check(CLI::Range(1, 4))->capture_default_str();
  add_common(exact, common, report);
  exact->callback([&] { run = [&] { return cmd_exact(eo, common, std::cout); }; });

  HodographOptions ho;
  auto* hod = app.add_subcommand("hodograph", "Check the hodograph linearizations");
  hod->add_option("--q", ho.q, "Source Q: 0, u or both")->capture_default_str();
  hod->add_option("--grid", ho.grid, "Points per axis on the coarsest level")->check(CLI::Range(5, 257))
      ->capture_default_str();
  hod->add_option("--refine", ho.refine, "Number of halvings")->check(CLI::Range(1, 4))->capture_default_str();
  add_common(hod, common, report);
  hod->callback([&] { run = [&] { return cmd_hodograph(ho, common, std::cout); }; });

  FilterOptions fo;
  auto* pm = app.add_subcommand("pm-filter", "Perona-Malik filter of a PGM image");
  pm->add_option("--in", fo.in, "Input PGM (P5, maxval 255)")->required();
  pm->add_option("--out", fo.out, "Output PGM");
  pm->add_option("--model", fo.model, "exponential, rational or linear")->capture_default_str();
  pm->add_option("--d0", fo.d0, "D0")->capture_default_str();
  pm->add_option("--time", fo.time, "Final time")->capture_default_str();
  pm->add_option("--safety", fo.safety, "Step safety factor")->capture_default_str();
  pm->add_option("--report", report, "Write a JSON report here");
  pm->callback([&] { run = [&] { return cmd_pm_filter(fo, std::cout); }; });

  FlowOptions wo;
  auto* fl = app.add_subcommand("flow", "Integrate the flow of a catalog generator from a point");
  fl->add_option("--table", wo.table, "Table id")->capture_default_str();
  fl->add_option("--row", wo.row, "Row")->capture_default_str();
  fl->add_option("--reading", wo.reading, "Row reading, when a row has several");
  fl->add_option("--generator", wo.generator, "Generator name")->capture_default_str();
  fl->add_option("--param", wo.params, "name=value (defaults to the first sample)");
  fl->add_option("--point", wo.point, "t, x.., u")->delimiter(',')->required();
  fl->add_option("--eps", wo.eps, "Group parameter")->capture_default_str();
  add_common(fl, common, report);
  fl->callback([&] { run = [&] { return cmd_flow(wo, common, std::cout); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  command = app.get_subcommands().front()->get_name();

  auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r = run();
  } catch (const gradsym::Error& e) {
    std::cerr << "gradsym " << command << ": error: " << e.what() << "\n";
    return 2;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << command << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
  if (!report.empty()) {
    nlohmann::json doc = {{"schema", kReportSchema}, {"command", command}, {"seed", common.seed}};
    doc.update(r.report);
    doc["pass"] = r.pass;
    doc["wall_time_s"] = wall;
    std::ofstream out(report);
    if (!out) {
      std::cerr << "gradsym: cannot write " << report << "\n";
      return 2;
    }
    out << doc.dump(2) << "\n";
  }
  return r.pass ? 0 : 1;
}
