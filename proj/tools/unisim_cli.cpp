// Command-line front end: check, family, perturb, gen, oracle.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unisim/matrix_file.hpp"
#include "unisim/oracle.hpp"
#include "unisim/similarity.hpp"
#include "unisim/stability.hpp"

namespace {

using nlohmann::json;
using namespace unisim;

constexpr int kExitSimilar = 0;
constexpr int kExitNotSimilar = 1;
constexpr int kExitError = 2;

json int_vector_json(const IntVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void add_tolerance_flags(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--tol-match", cfg.tol_match, "Relative family match tolerance");
  cmd->add_option("--tol-cluster", cfg.tol_cluster, "Relative eigenvalue cluster tolerance");
  cmd->add_option("--tol-rank", cfg.tol_rank, "Relative rank threshold for the nonderogatory test");
  cmd->add_option("--max-n", cfg.max_n_family, "Largest n for which families are built");
  cmd->add_flag("--force", cfg.force, "Build families beyond --max-n");
}

int exit_code_for(const Verdict& v) {
  if (v.similar) return kExitSimilar;
  if (v.reason == Reason::NotNonderogatory) return kExitError;
  return kExitNotSimilar;
}

int run_check(const std::string& path_a, const std::string& path_b, const Config& cfg) {
  const ComplexMatrix a = read_matrix_file(path_a);
  const ComplexMatrix b = read_matrix_file(path_b);
  const Verdict v = check_unitary_similarity(a, b, cfg);

  json report{{"verdict", v.similar ? "similar" : "not_similar"},
              {"reason", std::string(to_string(v.reason))},
              {"nonderogatory_margin", finite_or_null(v.nonderogatory_margin)}};
  if (v.magnitude_gap) report["magnitude_gap"] = *v.magnitude_gap;
  if (v.m1) report["m1"] = int_vector_json(*v.m1);
  if (v.m2) report["m2"] = int_vector_json(*v.m2);
  if (v.residual) report["residual"] = *v.residual;
  if (v.certificate) report["certificate"] = matrix_to_json(*v.certificate);
  std::cout << report.dump(2) << "\n";

  if (v.reason == Reason::NotNonderogatory)
    std::cerr << "unisim: input is derogatory (margin " << v.nonderogatory_margin << ")\n";
  return exit_code_for(v);
}

int run_family(const std::string& path, bool only_m0, const Config& cfg) {
  const ComplexMatrix a = read_matrix_file(path);
  const int n = static_cast<int>(a.rows());
  if (n > cfg.max_n_family && !cfg.force) {
    std::cerr << "unisim: n = " << n << " exceeds --max-n " << cfg.max_n_family
              << "; pass --force\n";
    return kExitError;
  }
  const SchurForm s = canonical_triangular_form(a, cfg);
  const double margin = nonderogatory_margin(s, cfg.tol_cluster * frobenius_scale(a));
  if (!(margin > cfg.tol_rank)) {
    std::cerr << "unisim: input is derogatory (margin " << margin << ")\n";
    return kExitError;
  }

  const CanonicalOptions opts = cfg.canonical_options();
  json members = json::array();
  if (only_m0) {
    const CanonicalMember k =
        canonical_member(s.T, IntVector::Zero(static_cast<Eigen::Index>(PairIndex::count(n))), opts);
    members.push_back({{"m", int_vector_json(k.m)}, {"matrix", matrix_to_json(k.K)}});
  } else {
    for (const auto& k : family(s.T, opts).members)
      members.push_back({{"m", int_vector_json(k.m)}, {"matrix", matrix_to_json(k.K)}});
  }
  const json report{{"n", n},
                    {"size", index_set_size(n)},
                    {"schur_form", matrix_to_json(s.T)},
                    {"members", std::move(members)}};
  std::cout << report.dump(2) << "\n";
  return kExitSimilar;
}

std::pair<int, int> parse_entry(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw error("--entry expects i,j");
  const int i = std::stoi(text.substr(0, comma));
  const int j = std::stoi(text.substr(comma + 1));
  return {i - 1, j - 1};
}

int run_perturb(const std::string& path, const std::string& builtin, const std::string& entry,
                const std::vector<double>& eps, const std::vector<double>& args, bool baseline,
                const Config& cfg) {
  ComplexMatrix input;
  if (!builtin.empty()) {
    if (builtin != "a4") throw error("unknown builtin \"" + builtin + "\"");
    input = builtin_a4(0.0);
  } else if (!path.empty()) {
    input = read_matrix_file(path);
  } else {
    throw error("perturb needs a matrix file or --builtin a4");
  }

  PerturbationSpec spec;
  spec.entry = parse_entry(entry);
  spec.magnitudes = eps;
  spec.arguments = args;
  spec.baseline = baseline;
  const StabilityReport report = run_perturbation(input, spec, cfg);

  json rows = json::array();
  for (const auto& row : report.rows) {
    json r{{"epsilon", {row.epsilon.real(), row.epsilon.imag()}},
           {"abs_epsilon", std::abs(row.epsilon)},
           {"arg_epsilon", std::arg(row.epsilon)},
           {"family_distance", row.family_distance},
           {"ratio", row.ratio}};
    if (row.baseline_distance) r["baseline_distance"] = *row.baseline_distance;
    rows.push_back(std::move(r));
  }
  const json doc{{"entry", {report.entry.first + 1, report.entry.second + 1}},
                 {"rows", std::move(rows)}};
  std::cout << doc.dump(2) << "\n";
  return kExitSimilar;
}

std::vector<Complex> parse_spectrum(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(parse_complex(token));
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p.replace_extension();
  p += ".unitary.json";
  return p;
}

int run_gen(int n, const std::string& spectrum_text, std::uint64_t seed, const std::string& out) {
  const std::vector<Complex> spectrum = parse_spectrum(spectrum_text);
  if (static_cast<int>(spectrum.size()) != n)
    throw error("--spectrum must list exactly n eigenvalues");
  const GeneratedMatrix g = gen_nonderogatory_factors(spectrum, seed);
  write_matrix_file(out, g.A);
  write_matrix_file(sidecar_path(out), g.Q);
  return kExitSimilar;
}

int run_oracle(const std::string& path_a, const std::string& path_b, int max_len) {
  const ComplexMatrix a = read_matrix_file(path_a);
  const ComplexMatrix b = read_matrix_file(path_b);
  const TraceReport r = specht_pearcy_test(a, b, max_len);
  const bool refuted = r.verdict == TraceVerdict::Refuted;
  json doc{{"verdict", refuted ? "refuted" : "consistent"},
           {"max_word_len", max_len},
           {"words_checked", r.words_checked}};
  if (r.word) {
    doc["word"] = *r.word;
    doc["difference"] = r.difference;
  }
  std::cout << doc.dump(2) << "\n";
  return refuted ? kExitNotSimilar : kExitSimilar;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unitary similarity of nonderogatory matrices via canonical families"};
  app.require_subcommand(1);

  Config cfg;

  std::string path_a, path_b;
  auto* check = app.add_subcommand("check", "Decide whether two matrices are unitarily similar");
  check->add_option("a", path_a, "Matrix file A")->required();
  check->add_option("b", path_b, "Matrix file B")->required();
  add_tolerance_flags(check, cfg);

  std::string family_path;
  bool only_m0 = false;
  bool all_members = false;
  auto* fam = app.add_subcommand("family", "Print the canonical family of a matrix");
  fam->add_option("path", family_path, "Matrix file")->required();
  auto* m0_flag = fam->add_flag("--m0", only_m0, "Print only the m = 0 member");
  fam->add_flag("--all", all_members, "Print every member (default)")->excludes(m0_flag);
  add_tolerance_flags(fam, cfg);

  std::string perturb_path, builtin, entry = "3,4";
  std::vector<double> eps, args{0.0};
  bool baseline = false;
  auto* perturb = app.add_subcommand("perturb", "Family stability under a perturbed entry");
  perturb->add_option("path", perturb_path, "Matrix file (triangular or general)");
  perturb->add_option("--builtin", builtin, "Built-in instance: a4");
  perturb->add_option("--entry", entry, "1-based upper-triangular entry i,j")->capture_default_str();
  perturb->add_option("--eps", eps, "Perturbation magnitudes")->delimiter(',')->required();
  perturb->add_option("--arg", args, "Perturbation arguments in radians")->delimiter(',');
  perturb->add_flag("--baseline", baseline, "Also report the positive-superdiagonal baseline");
  add_tolerance_flags(perturb, cfg);

  int gen_n = 0;
  std::string spectrum, out;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a random nonderogatory matrix");
  gen->add_option("--n", gen_n, "Dimension")->required();
  gen->add_option("--spectrum", spectrum, "Comma-separated eigenvalues, e.g. 1,2,1+2i")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out, "Output matrix file")->required();

  std::string oracle_a, oracle_b;
  int max_len = 8;
  auto* oracle = app.add_subcommand("oracle", "Bounded trace-word comparison");
  oracle->add_option("a", oracle_a, "Matrix file A")->required();
  oracle->add_option("b", oracle_b, "Matrix file B")->required();
  oracle->add_option("--max-word-len", max_len, "Longest word length L")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*check) return run_check(path_a, path_b, cfg);
    if (*fam) return run_family(family_path, only_m0, cfg);
    if (*perturb) return run_perturb(perturb_path, builtin, entry, eps, args, baseline, cfg);
    if (*gen) return run_gen(gen_n, spectrum, seed, out);
    if (*oracle) return run_oracle(oracle_a, oracle_b, max_len);
  } catch (const std::exception& e) {
    std::cerr << "unisim: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
