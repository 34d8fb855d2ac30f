// asw: formula tables, genericity tests and end-to-end verification of generic
// Newton polygons for Artin-Schreier-Witt towers over a rectangle.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "asw/cli.hpp"

namespace {

struct Flags {
  long d1 = 3, d2 = 3;
  long p = 0;
  int a = 1, m = 1, np = 2, nt = 0;
  std::string f, wmax, config, out, residue, bound = "1", model = "formula";
  long kmax = 0, budget = 1'000'000, imax = 3;
  std::vector<long> primes;
  std::vector<int> ks{1, 2};
  bool json = false;
};

void add_common(CLI::App* sub, Flags& fl) {
  sub->add_option("--d1", fl.d1, "first side of the rectangle")->capture_default_str();
  sub->add_option("--d2", fl.d2, "second side of the rectangle")->capture_default_str();
  sub->add_option("--p", fl.p, "prime");
  sub->add_option("--a", fl.a, "q = p^a")->capture_default_str();
  sub->add_option("--m", fl.m, "character conductor exponent")->capture_default_str();
  sub->add_option("--f", fl.f, "polynomial JSON file");
  sub->add_option("--np", fl.np, "p-adic precision")->capture_default_str();
  sub->add_option("--nt", fl.nt, "T-adic precision (0: default)")->capture_default_str();
  sub->add_option("--wmax", fl.wmax, "basis weight bound (rational)");
  sub->add_option("--kmax", fl.kmax, "largest H_k (0: D)")->capture_default_str();
  sub->add_option("--budget", fl.budget, "oracle point budget")->capture_default_str();
  sub->add_option("--class", fl.residue, "residue class r1,r2");
  sub->add_option("--primes", fl.primes, "extra primes for beta columns");
  sub->add_option("--imax", fl.imax, "eigencurve buckets")->capture_default_str();
  sub->add_option("--bound", fl.bound, "slope bound for C-side multisets")->capture_default_str();
  sub->add_option("--model", fl.model, "cost model: formula or exact")->capture_default_str();
  sub->add_option("--k", fl.ks, "extension degrees for crosscheck");
  sub->add_option("--config", fl.config, "JSON config; its keys override flags");
  sub->add_option("--out", fl.out, "write the JSON report to this path");
  sub->add_flag("--json", fl.json, "print the JSON report to stdout");
}

asw::JobConfig to_job(const std::string& command, const Flags& fl) {
  asw::JobConfig cfg;
  cfg.command = command;
  cfg.d1 = fl.d1;
  cfg.d2 = fl.d2;
  cfg.a = fl.a;
  cfg.m = fl.m;
  cfg.np = fl.np;
  cfg.nt = fl.nt;
  cfg.kmax = fl.kmax;
  cfg.budget = fl.budget;
  cfg.imax = fl.imax;
  cfg.model = fl.model;
  cfg.primes = fl.primes;
  cfg.ks = fl.ks;
  cfg.bound = asw::parse_rational(fl.bound);
  if (!fl.wmax.empty()) cfg.wmax = asw::parse_rational(fl.wmax);
  if (!fl.residue.empty()) {
    auto pt = asw::parse_point(fl.residue);
    cfg.residue = asw::ResidueClass{pt.v1, pt.v2};
  }
  if (!fl.f.empty()) {
    auto in = asw::parse_polynomial(asw::read_json_file(fl.f));
    cfg.f = in.coeffs;
    // Fields of the polynomial file fill in what the flags left unset.
    if (in.p && fl.p == 0) cfg.p = *in.p;
    if (in.d1) cfg.d1 = *in.d1;
    if (in.d2) cfg.d2 = *in.d2;
    if (in.a) cfg.a = *in.a;
  }
  if (fl.p != 0) cfg.p = fl.p;
  if (!fl.config.empty()) asw::apply_config(cfg, asw::read_json_file(fl.config));
  return cfg;
}

void print_text(const asw::Json& j, const std::string& indent = "") {
  for (const auto& [key, v] : j.items()) {
    if (v.is_object()) {
      std::cout << indent << key << ":\n";
      print_text(v, indent + "  ");
    } else {
      std::cout << indent << key << ": " << v.dump() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generic Newton polygons of Artin-Schreier-Witt towers over a rectangle"};
  app.set_version_flag("--version", std::string(asw::kVersion));
  app.require_subcommand(1);
  Flags fl;
  const char* commands[][2] = {
      {"hodge", "Hodge polygons and weight counts"},
      {"gnp", "formula-side generic Newton polygon"},
      {"table", "formula tables for residue classes"},
      {"eigencurve", "slope buckets of the eigencurve"},
      {"zeta", "slopes of the zeta function of the cover"},
      {"genericity", "membership of f in the generic locus"},
      {"verify", "end-to-end verification for one f"},
      {"crosscheck", "Dwork power sums against brute-force sums"},
  };
  for (const auto& c : commands) add_common(app.add_subcommand(c[0], c[1]), fl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return asw::kExitConfig;
  }

  asw::CommandResult result;
  try {
    result = asw::run_command(to_job(app.get_subcommands().front()->get_name(), fl));
  } catch (const asw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return asw::exit_code_for(e);
  }
  if (!fl.out.empty()) {
    std::ofstream out(fl.out);
    if (!out) {
      std::cerr << "error: cannot write " << fl.out << "\n";
      return asw::kExitConfig;
    }
    out << result.report.dump(2) << "\n";
  }
  if (result.report.contains("error")) std::cerr << "error: " << result.report["error"].get<std::string>() << "\n";
  if (fl.json) std::cout << result.report.dump(2) << "\n";
  else if (!result.report.contains("error")) print_text(result.report);
  return result.exit_code;
}
