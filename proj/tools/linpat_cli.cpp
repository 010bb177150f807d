#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "linpat/amplify.hpp"
#include "linpat/density.hpp"
#include "linpat/errors.hpp"
#include "linpat/functions.hpp"
#include "linpat/systems.hpp"
#include "linpat/witness.hpp"

using namespace linpat;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitExhausted = 4;

struct RunConfig {
  std::string system;
  std::string function;
  std::string sub;
  std::string out;
  std::string verify;
  std::string certificate;
  bool automatic = false;
  int n = 2;
  std::uint64_t seed = 1;
  std::uint64_t iters = 10'000;
  std::uint64_t samples = 2'000;
  std::string method = "both";
  std::uint64_t budget = 10'000'000;
  unsigned workers = 1;
  std::string format = "text";
};

DensityOptions density_options(const RunConfig& cfg) {
  DensityOptions o;
  o.budget = cfg.budget;
  o.workers = cfg.workers;
  return o;
}

void print_text(const ordered_json& j, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix + it.key();
    if (it->is_object()) {
      print_text(*it, key + ".");
    } else if (it->is_string()) {
      std::cout << key << ": " << it->get<std::string>() << '\n';
    } else {
      std::cout << key << ": " << it->dump() << '\n';
    }
  }
}

void emit(const RunConfig& cfg, const ordered_json& report) {
  if (cfg.format == "json") {
    std::cout << report.dump(2) << '\n';
  } else {
    print_text(report);
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LinearSystem load_system(const std::string& path) {
  if (path.empty()) throw UsageError("--system is required");
  return LinearSystem::load(path);
}

ordered_json summary_json(const SampleSummary& s) {
  return {{"iterations", s.iterations}, {"negatives", s.negatives}, {"mean", s.mean},
          {"stddev", s.stddev},         {"standard_error", s.standard_error}, {"min", s.min},
          {"max", s.max}};
}

int cmd_analyze(const RunConfig& cfg) {
  const LinearSystem sys = load_system(cfg.system);
  const std::size_t s = shortest_equation_length(sys);
  ordered_json r;
  r["seed"] = cfg.seed;
  r["p"] = sys.prime();
  r["m"] = sys.equations();
  r["t"] = sys.variables();
  r["rank"] = sys.rank();
  r["deg"] = sys.degrees_of_freedom();
  r["s"] = s;
  const bool two_rows = sys.equations() == 2;
  if (two_rows) {
    const bool generic = minors_generic(sys);
    const bool additive = contains_additive_tuple(sys);
    r["generic_minors"] = generic;
    r["additive_tuple"] = additive;
    const bool even = sys.variables() % 2 == 0;
    r["restricted_support_construction"] = generic && !additive && even ? "hypotheses met" : "not applicable";
    r["full_phase_construction"] =
        generic ? (even ? "hypotheses met" : "hypotheses met (odd k: negation fast path)") : "not applicable";
  } else {
    r["generic_minors"] = "skipped (m != 2)";
    r["additive_tuple"] = "skipped (m != 2)";
  }
  const std::size_t k = s + 1;
  std::string verdict = "not applicable (s + 1 is odd or below 4)";
  if (k % 2 == 0 && k >= 4) {
    if (sys.variables() > 24) {
      verdict = "not checked (too many variables)";
    } else {
      try {
        const LinearSystem sub = find_generic_subsystem(sys);
        verdict = "hypotheses met: contains a generic 2 x " + std::to_string(k) + " subsystem";
        std::string text = sub.to_text();
        while (!text.empty() && text.back() == '\n') text.pop_back();
        for (char& ch : text) {
          if (ch == '\n') ch = ';';
        }
        r["generic_subsystem"] = text;
      } catch (const UsageError&) {
        verdict = "not applicable (no generic 2 x " + std::to_string(k) + " subsystem)";
      }
    }
  }
  r["amplification"] = verdict;
  emit(cfg, r);
  return 0;
}

int cmd_density(const RunConfig& cfg) {
  const LinearSystem sys = load_system(cfg.system);
  if (cfg.function.empty()) throw UsageError("--function is required");
  const GroupFunction f = load_function_file(cfg.function).to_function();
  if (f.space().prime() != sys.prime()) {
    throw UsageError("system is over F_" + std::to_string(sys.prime()) + " but the function is over F_" +
                     std::to_string(f.space().prime()));
  }
  DensityMethod method = DensityMethod::both;
  if (cfg.method == "direct") method = DensityMethod::direct;
  if (cfg.method == "fourier") method = DensityMethod::fourier;
  if (cfg.method == "auto") method = DensityMethod::automatic;
  const DensityReport rep = density_report(sys.solutions(), f, method, density_options(cfg));
  ordered_json r;
  r["seed"] = cfg.seed;
  r["p"] = sys.prime();
  r["n"] = f.space().dim();
  r["method"] = cfg.method;
  if (rep.has_direct) {
    r["direct"] = {{"value", rep.value_direct}, {"imag", rep.imag_direct}, {"terms", rep.terms_direct}};
  }
  if (rep.has_fourier) {
    r["fourier"] = {{"value", rep.value_fourier}, {"imag", rep.imag_fourier}, {"terms", rep.terms_fourier}};
  }
  if (rep.has_direct && rep.has_fourier) r["discrepancy"] = rep.discrepancy;
  r["density"] = rep.value();
  emit(cfg, r);
  return 0;
}

int cmd_defect(const RunConfig& cfg) {
  const LinearSystem sys = load_system(cfg.system);
  if (cfg.function.empty()) throw UsageError("--function is required");
  const GroupFunction f = load_function_file(cfg.function).to_function();
  const DefectReport rep = commonness_defect(sys, f, density_options(cfg));
  ordered_json r;
  r["seed"] = cfg.seed;
  r["baseline"] = rep.baseline;
  r["defect_direct"] = rep.defect_direct;
  r["defect_expansion"] = rep.defect_expansion;
  r["discrepancy"] = rep.discrepancy;
  r["subsets"] = rep.terms.size();
  r["verdict"] = rep.defect() < 0 ? "negative defect: the function witnesses uncommonness" : "no violation";
  emit(cfg, r);
  return 0;
}

ordered_json witness_report(const WitnessCertificate& c) {
  return {{"seed", c.seed},           {"method", to_string(c.method)}, {"p", c.p},
          {"n", c.n},                 {"iteration", c.iteration},      {"negated", c.negated},
          {"mean", c.mean},           {"sup_norm", c.sup_norm},        {"density_direct", c.density_direct},
          {"density_fourier", c.density_fourier}, {"raw_density", c.raw_density}, {"threshold", c.threshold}};
}

int cmd_witness(const RunConfig& cfg) {
  if (!cfg.verify.empty()) {
    const WitnessCertificate cert = witness_from_json(read_file(cfg.verify));
    const WitnessVerification v = verify_witness(cert, density_options(cfg));
    ordered_json r = witness_report(cert);
    r["verified"] = v.ok;
    r["failures"] = v.failures;
    emit(cfg, r);
    return v.ok ? 0 : 1;
  }
  const LinearSystem sys = load_system(cfg.system);
  SearchOptions opts;
  opts.max_iters = cfg.iters;
  opts.density = density_options(cfg);
  WitnessSearch search;
  const bool restricted = sys.equations() == 2 && minors_generic(sys) && !contains_additive_tuple(sys) &&
                          sys.variables() % 2 == 0;
  if (restricted) {
    search = search_witness_restricted(sys, cfg.seed, opts);
  } else {
    search = search_witness_full(sys, cfg.n, cfg.seed, opts);
  }
  if (!search.certificate) {
    ordered_json r;
    r["seed"] = cfg.seed;
    r["status"] = "search exhausted";
    r["summary"] = summary_json(search.summary);
    r["note"] = search.note;
    emit(cfg, r);
    return kExitExhausted;
  }
  const WitnessCertificate& cert = *search.certificate;
  if (!cfg.out.empty()) write_file(cfg.out, witness_to_json(cert));
  ordered_json r = witness_report(cert);
  r["summary"] = summary_json(search.summary);
  if (!cfg.out.empty()) r["certificate"] = cfg.out;
  emit(cfg, r);
  return 0;
}

int cmd_certify(const RunConfig& cfg) {
  const LinearSystem sys = load_system(cfg.system);
  if (cfg.automatic == !cfg.sub.empty()) throw UsageError("give exactly one of --sub and --auto");
  const LinearSystem sub = cfg.automatic ? find_generic_subsystem(sys) : LinearSystem::load(cfg.sub);
  CertifyOptions opts;
  opts.seed = cfg.seed;
  opts.witness.max_iters = cfg.iters;
  opts.witness.density = density_options(cfg);
  opts.separation.density = density_options(cfg);
  opts.direct_budget = cfg.budget;
  const UncommonnessCertificate cert = certify_uncommon(sys, sub, opts);
  if (!cfg.out.empty()) write_file(cfg.out, certificate_to_json(cert));
  ordered_json r;
  r["seed"] = cert.seed;
  r["k"] = cert.k;
  r["classes"] = cert.classes.size();
  r["dominant_columns"] = cert.classes[cert.dominant].columns;
  r["n0"] = cert.n0;
  r["witness_method"] = to_string(cert.witness.method);
  r["witness_n"] = cert.witness.n;
  r["A"] = cert.A;
  r["B"] = cert.B;
  r["defect_estimate"] = cert.defect_estimate;
  if (cert.direct_checked) {
    r["direct_defect"] = cert.direct_defect;
  } else {
    r["direct_check"] = cert.direct_note;
  }
  r["inequality"] = cert.inequality();
  if (!cfg.out.empty()) r["certificate"] = cfg.out;
  emit(cfg, r);
  return 0;
}

int cmd_verify_certificate(const RunConfig& cfg) {
  if (cfg.certificate.empty()) throw UsageError("a certificate file is required");
  const UncommonnessCertificate cert = certificate_from_json(read_file(cfg.certificate));
  const CertificateVerification v = verify_certificate(cert, density_options(cfg));
  ordered_json r;
  r["seed"] = cert.seed;
  r["verified"] = v.ok;
  r["failures"] = v.failures;
  r["inequality"] = cert.inequality();
  emit(cfg, r);
  return v.ok ? 0 : 1;
}

int cmd_clt(const RunConfig& cfg) {
  const LinearSystem sys = load_system(cfg.system);
  const CltReport rep = clt_diagnostic(sys, cfg.n, cfg.samples, cfg.seed, cfg.workers);
  ordered_json r;
  r["seed"] = rep.seed;
  r["samples"] = rep.samples;
  r["independent_pairs"] = rep.independent_pairs;
  r["exact_variance"] = rep.exact_variance;
  r["diagonal_variance"] = rep.diagonal_variance;
  r["mean_p"] = rep.mean_p;
  r["variance_p"] = rep.variance_p;
  r["mean_standardized"] = rep.mean_standardized;
  r["ks_distance"] = rep.ks_distance;
  r["epsilons"] = rep.epsilons;
  r["lindeberg"] = rep.lindeberg;
  r["fourth_moment_sum"] = rep.fourth_moment_sum;
  r["cross_moment_sum"] = rep.cross_moment_sum;
  r["decomposition_error"] = rep.decomposition_error;
  emit(cfg, r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solution densities, witnesses and uncommonness certificates for linear systems over F_p^n"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--seed", cfg.seed, "Seed for every random choice");
    sc->add_option("--budget", cfg.budget, "Maximum number of product terms per evaluation");
    sc->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    sc->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* analyze = app.add_subcommand("analyze", "Structural report of a system");
  analyze->add_option("--system", cfg.system, "System file")->required();
  common(analyze);

  auto* density = app.add_subcommand("density", "Solution density of a function");
  density->add_option("--system", cfg.system, "System file")->required();
  density->add_option("--function", cfg.function, "Function file")->required();
  density->add_option("--method", cfg.method, "Evaluation route")->check(CLI::IsMember({"direct", "fourier", "both", "auto"}));
  common(density);

  auto* defect = app.add_subcommand("defect", "T(1/2 + f) + T(1/2 - f) - 2^(1-t) for a zero-mean f");
  defect->add_option("--system", cfg.system, "System file")->required();
  defect->add_option("--function", cfg.function, "Function file")->required();
  common(defect);

  auto* witness = app.add_subcommand("witness", "Search for a function with zero mean and negative density");
  witness->add_option("--system", cfg.system, "System file");
  witness->add_option("--n", cfg.n, "Dimension for the full-phase construction")->check(CLI::Range(1, 12));
  witness->add_option("--iters", cfg.iters, "Iteration budget");
  witness->add_option("--out", cfg.out, "Write the certificate here");
  witness->add_option("--verify", cfg.verify, "Replay a witness certificate instead of searching");
  common(witness);

  auto* certify = app.add_subcommand("certify", "Build an uncommonness certificate");
  certify->add_option("--system", cfg.system, "System file")->required();
  certify->add_option("--sub", cfg.sub, "Generic 2 x k subsystem file");
  certify->add_flag("--auto", cfg.automatic, "Find the generic subsystem automatically");
  certify->add_option("--iters", cfg.iters, "Witness iteration budget");
  certify->add_option("--out", cfg.out, "Write the certificate here");
  common(certify);

  auto* verify = app.add_subcommand("verify-certificate", "Replay an uncommonness certificate");
  verify->add_option("certificate", cfg.certificate, "Certificate file")->required();
  common(verify);

  auto* clt = app.add_subcommand("clt", "Central limit diagnostic of the independent-pair sum");
  clt->add_option("--system", cfg.system, "System file")->required();
  clt->add_option("--n", cfg.n, "Dimension")->check(CLI::Range(1, 12));
  clt->add_option("--samples", cfg.samples, "Number of sampled spectra");
  common(clt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(cfg);
    if (*density) return cmd_density(cfg);
    if (*defect) return cmd_defect(cfg);
    if (*witness) {
      if (cfg.verify.empty() && cfg.system.empty()) throw UsageError("--system or --verify is required");
      return cmd_witness(cfg);
    }
    if (*certify) return cmd_certify(cfg);
    if (*verify) return cmd_verify_certificate(cfg);
    if (*clt) return cmd_clt(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const SearchExhausted& e) {
    std::cerr << "search exhausted: " << e.what() << '\n';
    return kExitExhausted;
  }
  return kExitUsage;
}
