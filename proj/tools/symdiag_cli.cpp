// Command-line front end: diagonalize / classify / verify / generate.
//
// Exit codes: 0 success, 2 non-convergence, 3 consistency or verification
// failure, 4 parse error. Machine artifacts go to --out-dir; human-readable
// summaries go to stderr. Every artifact embeds the run manifest, so reruns
// with the same manifest are byte-identical.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "symdiag/classify.hpp"
#include "symdiag/counterexample.hpp"
#include "symdiag/generators.hpp"
#include "symdiag/io.hpp"
#include "symdiag/jacobi.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  double tol = 1e-12;
  int max_sweeps = 200;
  std::uint64_t seed = 0;
  int restarts = 1;
  std::string pair_rule = "cyclic";
  bool restrict_quarter_pi = false;
  int threads = 1;
  std::string out_dir = ".";
};

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--tol", opt.tol, "Stopping tolerance on max |d| per sweep")
      ->envname("SYMDIAG_TOL");
  cmd->add_option("--max-sweeps", opt.max_sweeps, "Sweep limit")->envname("SYMDIAG_MAX_SWEEPS");
  cmd->add_option("--seed", opt.seed, "Random seed")->envname("SYMDIAG_SEED");
  cmd->add_option("--restarts", opt.restarts, "Random restarts for multi-start searches")
      ->envname("SYMDIAG_RESTARTS");
  cmd->add_option("--pair-rule", opt.pair_rule, "Pair selection rule")
      ->check(CLI::IsMember({"cyclic", "greedy"}))
      ->envname("SYMDIAG_PAIR_RULE");
  cmd->add_flag("--restrict-quarter-pi", opt.restrict_quarter_pi,
                "Restrict rotation angles to [-pi/4, pi/4]")
      ->envname("SYMDIAG_RESTRICT_QUARTER_PI");
  cmd->add_option("--threads", opt.threads, "Thread cap (searches run serially per seed)")
      ->check(CLI::PositiveNumber)
      ->envname("SYMDIAG_THREADS");
  cmd->add_option("--out-dir", opt.out_dir, "Output directory")->envname("SYMDIAG_OUT_DIR");
}

nlohmann::json manifest(const std::string& command, const std::vector<std::string>& inputs,
                        const Options& opt, const std::vector<std::string>& outputs) {
  return {{"command", command},
          {"inputs", inputs},
          {"config",
           {{"tol", opt.tol},
            {"max_sweeps", opt.max_sweeps},
            {"seed", opt.seed},
            {"restarts", opt.restarts},
            {"pair_rule", opt.pair_rule},
            {"restrict_quarter_pi", opt.restrict_quarter_pi},
            {"threads", opt.threads}}},
          {"version", kVersion},
          {"outputs", outputs}};
}

std::string comment_block(const nlohmann::json& man) {
  return "# manifest: " + man.dump() + "\n";
}

symdiag::SymTensor3 load_tensor(const std::string& path) {
  const std::string text = symdiag::read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return symdiag::tensor_from_json(nlohmann::json::parse(text));
  return symdiag::read_tensor_text(text);
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int cmd_diagonalize(const std::string& input, const Options& opt) {
  const symdiag::SymTensor3 A = load_tensor(input);
  symdiag::JacobiConfig cfg;
  cfg.max_sweeps = opt.max_sweeps;
  cfg.stop_tol = opt.tol;
  cfg.pair_rule =
      opt.pair_rule == "greedy" ? symdiag::PairRule::GreedyMaxD : symdiag::PairRule::Cyclic;
  cfg.restrict_quarter_pi = opt.restrict_quarter_pi;
  const symdiag::JacobiTrace trace = symdiag::jacobi_com(A, cfg);

  std::filesystem::create_directories(opt.out_dir);
  const std::vector<std::string> outputs = {join(opt.out_dir, "trace.csv"),
                                            join(opt.out_dir, "trace.json"),
                                            join(opt.out_dir, "W.tensor"),
                                            join(opt.out_dir, "Q.txt")};
  const nlohmann::json man = manifest("diagonalize", {input}, opt, outputs);

  symdiag::write_file(outputs[0], comment_block(man) + symdiag::trace_to_csv(trace));
  nlohmann::json tj = symdiag::trace_to_json(trace);
  tj["manifest"] = man;
  symdiag::write_file(outputs[1], tj.dump(2) + "\n");
  symdiag::write_file(outputs[2], comment_block(man) + symdiag::write_tensor_text(trace.W));
  symdiag::write_file(outputs[3], comment_block(man) + symdiag::write_matrix_text(trace.Q));

  const symdiag::ConvergenceReport diag = symdiag::convergence_diagnostics(trace);
  std::cerr << "f: " << symdiag::format_double(A.diagNormSq()) << " -> "
            << symdiag::format_double(trace.f_final) << " (||A||^2 = "
            << symdiag::format_double(A.normSq()) << ")\n"
            << "sweeps: " << trace.sweeps << ", rotations: " << trace.rotations
            << ", converged: " << (trace.converged ? "yes" : "no") << "\n"
            << "residuals: max|d| = " << symdiag::format_double(trace.final_max_abs_d)
            << ", min omega = " << symdiag::format_double(diag.min_final_omega) << "\n";
  if (diag.saddle_suspected)
    std::cerr << "warning: pair (" << diag.saddle_pair->first + 1 << ","
              << diag.saddle_pair->second + 1
              << ") has d and omega both near zero (saddle signature)\n";
  return trace.converged ? 0 : 2;
}

const char* lmd_name(symdiag::LmdCertificate c) {
  switch (c) {
    case symdiag::LmdCertificate::DefiniteYes:
      return "definite-yes";
    case symdiag::LmdCertificate::DefiniteNo:
      return "definite-no";
    default:
      return "inconclusive";
  }
}

int cmd_classify(const std::string& input, const Options& opt) {
  const symdiag::SymTensor3 A = load_tensor(input);
  symdiag::ToleranceProfile tp;
  tp.rel_tol = opt.tol > 0 ? opt.tol : tp.rel_tol;
  const symdiag::ClassReport rep = symdiag::class_report(A, tp);

  std::filesystem::create_directories(opt.out_dir);
  const std::string out = join(opt.out_dir, "classify.json");
  const nlohmann::json man = manifest("classify", {input}, opt, {out});

  nlohmann::json j;
  j["manifest"] = man;
  j["tolerances"] = {{"abs_tol", tp.abs_tol},
                     {"rel_tol", tp.rel_tol},
                     {"eig_tol_factor", tp.eig_tol_factor}};
  j["pd"] = {{"verdict", rep.pd}, {"tol", tp.rel_tol}};
  j["sd"] = {{"verdict", rep.sd.sd}, {"residual", rep.sd.residual}, {"tol", tp.rel_tol}};
  j["jd"] = {{"verdict", rep.jd.jd},
             {"min_omega", rep.jd.min_omega},
             {"routes_agree", rep.jd.routes_agree},
             {"tol", tp.rel_tol}};
  j["lmd"] = {{"certificate", lmd_name(rep.lmd.certificate)},
              {"eig_min", rep.lmd.eig_min},
              {"eig_max", rep.lmd.eig_max},
              {"eig_tol", rep.lmd.eig_tol}};
  auto ratios = nlohmann::json::array();
  for (const auto& r : rep.ratios) {
    nlohmann::json rj = {{"i", r.i + 1}, {"j", r.j + 1}};
    if (r.kind == symdiag::StationaryRatio::Kind::Finite)
      rj["gamma"] = r.gamma;
    else
      rj["kind"] = r.kind == symdiag::StationaryRatio::Kind::Infinite ? "infinite"
                                                                      : "zero-subtensor";
    ratios.push_back(rj);
  }
  j["ratios"] = ratios;
  j["lattice_consistent"] = rep.lattice_consistent;
  if (!rep.lattice_consistent) j["inconsistency"] = rep.inconsistency;
  symdiag::write_file(out, j.dump(2) + "\n");

  std::cerr << "pd: " << (rep.pd ? "yes" : "no") << ", sd: " << (rep.sd.sd ? "yes" : "no")
            << ", jd: " << (rep.jd.jd ? "yes" : "no")
            << ", lmd: " << lmd_name(rep.lmd.certificate) << "\n";
  return rep.lattice_consistent ? 0 : 3;
}

int cmd_verify(const Options& opt) {
  const int rho_starts = std::max(10000, 10000 * opt.restarts);
  const symdiag::CounterexampleReport rep =
      symdiag::verify_counterexample(1000, rho_starts, opt.seed + 777);

  bool dim2_pass = true;
  double dim2_max_sigma = -1.0;
  for (double g : {-1.0, -0.5, 0.0, 0.2, 1.0 / 3.0}) {
    const symdiag::Dim2Report d2 =
        symdiag::verify_dim2_gmd_equals_md(1.0, 0.7, g, 50, 10000, opt.seed + 99);
    dim2_pass = dim2_pass && d2.pass;
    dim2_max_sigma = std::max(dim2_max_sigma, d2.max_sigma);
  }

  std::filesystem::create_directories(opt.out_dir);
  const std::string out = join(opt.out_dir, "verify.json");
  const nlohmann::json man = manifest("verify", {}, opt, {out});
  nlohmann::json j;
  j["manifest"] = man;
  j["F_star"] = rep.F_star;
  j["max_identity_err"] = rep.max_identity_err;
  j["f_sup_found"] = rep.f_sup_found;
  j["rho_sup_found"] = rep.rho_sup_found;
  j["bound"] = rep.bound;
  j["cubic_roots"] = rep.cubic_roots;
  j["phi_values"] = rep.phi_values;
  j["dim2_max_sigma"] = dim2_max_sigma;
  j["pass"] = rep.pass && dim2_pass;
  symdiag::write_file(out, j.dump(2) + "\n");

  std::cerr << "F* = " << symdiag::format_double(rep.F_star)
            << ", sup f found = " << symdiag::format_double(rep.f_sup_found)
            << " (< 3), sup rho found = " << symdiag::format_double(rep.rho_sup_found)
            << " (< 1/12), dim-2 max sigma = " << symdiag::format_double(dim2_max_sigma)
            << "\n"
            << "pass: " << ((rep.pass && dim2_pass) ? "yes" : "no") << "\n";
  return (rep.pass && dim2_pass) ? 0 : 3;
}

int cmd_generate(const std::string& kind, const std::string& name, int n, double g,
                 double gamma, const Options& opt) {
  symdiag::SymTensor3 A(1);
  if (kind == "odeco") {
    A = symdiag::random_odeco(n, opt.seed);
  } else if (kind == "pd") {
    A = symdiag::random_pd(n, opt.seed);
  } else if (kind == "random") {
    A = symdiag::random_symmetric(n, opt.seed);
  } else {  // example
    if (name == "symmetrizer-123") {
      A = symdiag::symmetrizer_123();
    } else if (name == "pd4-threequarters") {
      A = symdiag::pd4_threequarters();
    } else if (name == "lmd3") {
      A = symdiag::lmd3_example(g, gamma);
    } else {
      std::cerr << "unknown example name: " << name << "\n";
      return 4;
    }
  }
  std::filesystem::create_directories(opt.out_dir);
  const std::string out = join(opt.out_dir, "generated.tensor");
  const nlohmann::json man = manifest("generate", {kind, name}, opt, {out});
  symdiag::write_file(out, comment_block(man) + symdiag::write_tensor_text(A));
  std::cerr << "wrote " << out << " (n = " << A.dim() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate orthogonal diagonalization of symmetric order-3 tensors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Options opt;
  std::string input, kind, name;
  int gen_n = 3;
  double gen_g = 0.0, gen_gamma = 0.0;

  CLI::App* diag = app.add_subcommand("diagonalize", "Run cyclic Jacobi on a tensor file");
  diag->add_option("input", input, "Tensor file (text or .json)")->required();
  add_common_flags(diag, opt);

  CLI::App* cls = app.add_subcommand("classify", "Classify a tensor file");
  cls->add_option("input", input, "Tensor file (text or .json)")->required();
  add_common_flags(cls, opt);

  CLI::App* ver = app.add_subcommand("verify", "Verify the dimension-3 gap and dimension-2 equality");
  add_common_flags(ver, opt);

  CLI::App* gen = app.add_subcommand("generate", "Generate a tensor file");
  gen->add_option("kind", kind, "odeco | pd | random | example")
      ->required()
      ->check(CLI::IsMember({"odeco", "pd", "random", "example"}));
  gen->add_option("--name", name, "Example name: symmetrizer-123 | pd4-threequarters | lmd3");
  gen->add_option("--n", gen_n, "Dimension for random kinds");
  gen->add_option("--g", gen_g, "Distinct-index entry for lmd3");
  gen->add_option("--gamma", gen_gamma, "Pattern ratio for lmd3");
  add_common_flags(gen, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (diag->parsed()) return cmd_diagonalize(input, opt);
    if (cls->parsed()) return cmd_classify(input, opt);
    if (ver->parsed()) return cmd_verify(opt);
    return cmd_generate(kind, name, gen_n, gen_g, gen_gamma, opt);
  } catch (const symdiag::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
