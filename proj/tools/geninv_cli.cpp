#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "geninv/io.hpp"

namespace {

std::vector<double> parse_steps(const std::string& text) {
  std::vector<double> steps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      steps.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw geninv::input_error("--steps: cannot parse '" + item + "'");
    }
  }
  return steps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized inverses: construction and verification"};
  app.require_subcommand(1);

  geninv::io::RunConfig cfg;
  std::string steps;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;

  app.add_option("--tol-rank", cfg.tol.rank_rel_tol, "relative rank cutoff");
  app.add_option("--tol-res", cfg.tol.residual_tol, "residual acceptance tolerance");
  app.add_option("--seed", seed, "random seed (default: $GENINV_SEED or 0)");
  app.add_option("--steps", steps, "finite-difference steps, comma separated");
  app.add_option("--out", cfg.out_path, "write the JSON report here instead of stdout");

  const std::map<std::string, std::string> help = {
      {"pinv", "A: Moore-Penrose inverse"},
      {"bcinv", "A B C: inverse with range R(B), null space N(C)"},
      {"outer", "A T S: outer inverse with range R(T), null space R(S)"},
      {"along", "A D: inverse along D"},
      {"bottduffin", "A P Q: inverse for idempotents P, Q"},
      {"gap", "M N: gap between column spaces"},
      {"perturb", "A B C E: closed-form inverse of A + E"},
      {"derivcheck", "affine curves (M0 M1 per operand): derivative vs finite differences"},
      {"seqcheck", "limit operands: convergence diagnostics on a generated family"},
  };
  for (const std::string& name : geninv::io::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, help.count(name) ? help.at(name) : "");
    sub->add_option("inputs", inputs, "matrix files")->required();
    if (name == "derivcheck") {
      sub->add_option("--kind", cfg.kind, "bc, mp or oip");
      sub->add_option("--t0", cfg.t0, "curve parameter");
    } else if (name == "seqcheck") {
      sub->add_option("--kind", cfg.kind, "bc, mp or oip");
      sub->add_option("--family", cfg.family, "additive, rotating or rankdrop");
      sub->add_option("--count", cfg.count, "sequence length");
    } else if (name == "gap") {
      sub->add_option("--trials", cfg.trials, "sampling oracle trials");
    } else if (name == "perturb") {
      sub->add_flag("--allow-outside", cfg.allow_outside,
                    "evaluate the closed form outside the openness ball");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string name = app.get_subcommands().front()->get_name();
  geninv::io::RunResult result;
  try {
    if (seed) {
      cfg.seed = *seed;
    } else if (const char* env = std::getenv("GENINV_SEED")) {
      try {
        cfg.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw geninv::input_error(std::string("GENINV_SEED: cannot parse '") + env + "'");
      }
    }
    if (!steps.empty()) cfg.tol.fd_step_sweep = parse_steps(steps);
    result = geninv::io::run_subcommand(name, inputs, cfg);
  } catch (const geninv::Error& e) {
    result.report = {{"schema", geninv::io::kSchemaVersion},
                     {"command", name},
                     {"error", e.what()},
                     {"clause", "input"},
                     {"margin", nullptr}};
    result.exit_code = 1;
  }

  const std::string text = result.report.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << cfg.out_path << "\n";
      return 1;
    }
    out << text;
  }
  return result.exit_code;
}
