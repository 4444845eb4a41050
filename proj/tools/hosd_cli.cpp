// hosd command-line front end.
//
//   hosd decompose <tensor.json> [--normalize] [--out verdict.json]
//   hosd check <tensor.json> <decomposition.json>
//   hosd generate ghz <dim> <parties> | w <parties>
//                 | haar --shape 2,2,2 --seed S
//                 | planted --shape 3,3,3 --terms 3 --pattern 2,1 --seed S [--truth t.json]
//                 [--out tensor.json]
//   hosd params <parties> <dim>
//   hosd survey --shape 2,2,2 --trials 100 --seed S
//
// Exit codes: 0 decomposable / success, 1 input or usage error,
// 2 rigorous refutation (or check residual too large), 3 search failure.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hosd/hosd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitRefuted = 2;
constexpr int kExitUnresolved = 3;

struct ToleranceFlags {
  hosd::Tolerances tol;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol-rank", tol.rank_rel, "relative rank threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-ortho", tol.ortho_abs, "orthogonality tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-cluster", tol.cluster_rel, "relative degeneracy gap")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-residual", tol.residual_abs, "reconstruction tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--retries", tol.max_retries, "random draws per degenerate block")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", tol.seed, "seed for all randomness");
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    hosd::io::write_file(out_path, text);
  }
}

std::string shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

int exit_code_for(const hosd::Verdict& v) {
  if (v.decomposable()) return kExitOk;
  return v.certificate->rigorous() ? kExitRefuted : kExitUnresolved;
}

int run_decompose(const std::string& input, bool normalize, const hosd::Tolerances& tol,
                  const std::string& out) {
  const auto tensor = hosd::io::tensor_from_json(hosd::io::parse(hosd::io::read_file(input)));
  const hosd::PureState psi(tensor, normalize ? hosd::NormMode::AutoNormalize : hosd::NormMode::Strict);
  const auto verdict = hosd::higher_schmidt(psi, tol);
  emit(hosd::io::dump(hosd::io::verdict_to_json(verdict)), out);
  if (!verdict.decomposable()) {
    std::cerr << "not decomposable: " << hosd::to_string(verdict.certificate->kind) << "\n";
  }
  return exit_code_for(verdict);
}

int run_check(const std::string& tensor_path, const std::string& decomposition_path,
              const hosd::Tolerances& tol, const std::string& out) {
  const auto tensor = hosd::io::tensor_from_json(hosd::io::parse(hosd::io::read_file(tensor_path)));
  const auto d = hosd::io::decomposition_from_json(hosd::io::parse(hosd::io::read_file(decomposition_path)));
  if (d.shape != tensor.shape()) {
    std::cerr << "shape mismatch between tensor and decomposition\n";
    return kExitInput;
  }
  const double residual = hosd::distance(hosd::reconstruct_higher(d), tensor);
  hosd::io::Json ortho = hosd::io::Json::object();
  for (std::size_t p = 0; p < d.vectors.size(); ++p) {
    double worst = 0.0;
    for (std::size_t mu = 0; mu < d.terms(); ++mu) {
      for (std::size_t nu = 0; nu < d.terms(); ++nu) {
        const hosd::Complex g = d.vectors[p][mu].dot(d.vectors[p][nu]);
        worst = std::max(worst, std::abs(g - (mu == nu ? 1.0 : 0.0)));
      }
    }
    ortho[std::to_string(p)] = worst;
  }
  const bool ok = residual <= tol.residual_abs;
  hosd::io::Json report{{"residual", residual}, {"orthonormality", std::move(ortho)}, {"ok", ok}};
  emit(hosd::io::dump(report), out);
  return ok ? kExitOk : kExitRefuted;
}

struct GenerateArgs {
  std::string kind;
  std::vector<std::size_t> positional;
  std::vector<std::size_t> shape;
  std::size_t terms = 0;
  std::vector<std::size_t> pattern;
  std::uint64_t seed = 0;
  std::string out;
  std::string truth;
};

int run_generate(const GenerateArgs& g) {
  auto need = [&](std::size_t count) {
    if (g.positional.size() != count) {
      throw hosd::Error(hosd::ErrorCode::DomainError,
                        g.kind + " takes " + std::to_string(count) + " positional arguments");
    }
  };
  if (g.kind == "ghz") {
    need(2);
    emit(hosd::io::dump(hosd::io::tensor_to_json(hosd::ghz(g.positional[0], g.positional[1]).tensor())), g.out);
  } else if (g.kind == "w") {
    need(1);
    emit(hosd::io::dump(hosd::io::tensor_to_json(hosd::w_state(g.positional[0]).tensor())), g.out);
  } else if (g.kind == "haar") {
    if (g.shape.empty()) throw hosd::Error(hosd::ErrorCode::DomainError, "haar needs --shape");
    emit(hosd::io::dump(hosd::io::tensor_to_json(hosd::random_haar(g.shape, g.seed).tensor())), g.out);
  } else if (g.kind == "planted") {
    if (g.shape.empty()) throw hosd::Error(hosd::ErrorCode::DomainError, "planted needs --shape");
    const std::size_t terms = g.terms > 0 ? g.terms : 1;
    const auto planted = hosd::random_decomposable(g.shape, terms, g.pattern, g.seed);
    emit(hosd::io::dump(hosd::io::tensor_to_json(planted.state.tensor())), g.out);
    if (!g.truth.empty()) {
      hosd::io::write_file(g.truth, hosd::io::dump(hosd::io::decomposition_to_json(planted.truth, 0.0)));
    }
  } else {
    throw hosd::Error(hosd::ErrorCode::DomainError, "unknown kind '" + g.kind + "'");
  }
  return kExitOk;
}

int run_params(int parties, int dim) {
  const auto c = hosd::param_count(parties, dim);
  std::cout << "nParties,dim,stateParams,unitaryParams,deficit\n"
            << c.n_parties << ',' << c.dim << ',' << c.state_params << ',' << c.unitary_params << ','
            << c.deficit() << "\n";
  return kExitOk;
}

int run_survey(const std::vector<std::size_t>& shape, std::size_t trials, const hosd::Tolerances& tol,
               const std::string& out) {
  if (shape.empty()) throw hosd::Error(hosd::ErrorCode::DomainError, "survey needs --shape");
  std::string csv = "trial,verdict,certificate_kind,residual\n";
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto psi = hosd::random_haar(shape, tol.seed + t);
    const auto v = hosd::higher_schmidt(psi, tol);
    csv += std::to_string(t) + ',';
    if (v.decomposable()) {
      ++hits;
      csv += "decomposable,," + shortest(*v.residual);
    } else {
      csv += std::string("not_decomposable,") + hosd::to_string(v.certificate->kind) + ',';
      if (v.residual) csv += shortest(*v.residual);
    }
    csv += '\n';
  }
  char summary[64];
  std::snprintf(summary, sizeof(summary), "# decomposable_fraction=%.2f\n",
                static_cast<double>(hits) / static_cast<double>(trials));
  csv += summary;
  emit(csv, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order Schmidt decomposition: decide, construct, refute"};
  app.require_subcommand(1);

  std::string out;
  bool normalize = false;
  std::string input, decomposition;
  ToleranceFlags flags;

  auto* decompose = app.add_subcommand("decompose", "decide and construct a decomposition");
  decompose->add_option("input", input, "tensor JSON")->required();
  decompose->add_flag("--normalize", normalize, "rescale instead of rejecting non-unit norms");
  decompose->add_option("--out", out, "write the verdict here instead of stdout");
  flags.attach(decompose);

  auto* check = app.add_subcommand("check", "residual and orthonormality of a decomposition");
  check->add_option("tensor", input, "tensor JSON")->required();
  check->add_option("decomposition", decomposition, "decomposition JSON")->required();
  check->add_option("--out", out, "write the report here instead of stdout");
  flags.attach(check);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a test state");
  generate->add_option("kind", gen.kind, "ghz | w | haar | planted")
      ->required()
      ->check(CLI::IsMember({"ghz", "w", "haar", "planted"}));
  generate->add_option("args", gen.positional, "ghz: <dim> <parties>; w: <parties>");
  generate->add_option("--shape", gen.shape, "party dimensions, e.g. 3,3,3")->delimiter(',');
  generate->add_option("--terms", gen.terms, "planted: number of terms");
  generate->add_option("--pattern", gen.pattern, "planted: degenerate block sizes, e.g. 2,1")->delimiter(',');
  generate->add_option("--seed", gen.seed, "seed");
  generate->add_option("--out", gen.out, "tensor output path (default stdout)");
  generate->add_option("--truth", gen.truth, "planted: ground-truth decomposition path");

  int parties = 0, dim = 0;
  auto* params = app.add_subcommand("params", "free-parameter count");
  params->add_option("parties", parties)->required();
  params->add_option("dim", dim)->required();

  std::vector<std::size_t> survey_shape;
  std::size_t trials = 0;
  auto* survey = app.add_subcommand("survey", "decide many Haar-random states");
  survey->add_option("--shape", survey_shape, "party dimensions")->delimiter(',')->required();
  survey->add_option("--trials", trials)->required()->check(CLI::PositiveNumber);
  survey->add_option("--out", out, "write the CSV here instead of stdout");
  flags.attach(survey);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    flags.tol.validate();
    if (*decompose) return run_decompose(input, normalize, flags.tol, out);
    if (*check) return run_check(input, decomposition, flags.tol, out);
    if (*generate) return run_generate(gen);
    if (*params) return run_params(parties, dim);
    if (*survey) return run_survey(survey_shape, trials, flags.tol, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
