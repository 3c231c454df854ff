#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thermoqfi/errors.hpp"
#include "thermoqfi/verify.hpp"

namespace {

struct Flags {
  std::string model_path;
  std::string estimate;
  std::optional<double> xi0;
  double tmin = 20.0;
  double tmax = 200.0;
  int tpoints = 16;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string out;
  int threads = 1;
  std::string degeneracy = "canonical";
  std::vector<int> order;
  bool no_feedforward = false;
  std::string quantity = "qfi";
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--model", f.model_path, "Model document (JSON file)")->check(CLI::ExistingFile);
  cmd->add_option("--estimate", f.estimate, "Estimated parameter")->check(CLI::IsMember({"T", "J", "B", "custom"}));
  cmd->add_option("--xi0", f.xi0, "Evaluation point of the estimated parameter");
  cmd->add_option("--tmin", f.tmin, "Lowest temperature of the grid")->check(CLI::PositiveNumber);
  cmd->add_option("--tmax", f.tmax, "Highest temperature of the grid")->check(CLI::PositiveNumber);
  cmd->add_option("--tpoints", f.tpoints, "Number of geometric grid points")->check(CLI::Range(1, 4096));
  cmd->add_option("--seed", f.seed, "Seed for randomized optimizer restarts");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
  cmd->add_option("--threads", f.threads, "Grid points evaluated concurrently")->check(CLI::Range(1, 256));
  cmd->add_option("--degeneracy", f.degeneracy, "Basis choice inside degenerate subspaces")
      ->check(CLI::IsMember({"minimize", "canonical"}));
}

std::uint64_t resolve_seed(const Flags& f) {
  if (f.seed) return *f.seed;
  if (const char* env = std::getenv("THERMOQFI_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw thermoqfi::ArgumentError(std::string("THERMOQFI_SEED is not an unsigned integer: ") + env);
    }
  }
  return 42;
}

thermoqfi::Model resolve_model(const Flags& f) {
  using namespace thermoqfi;
  const std::optional<std::string> estimate = f.estimate.empty() ? std::nullopt : std::optional(f.estimate);
  if (f.model_path.empty()) return with_overrides(default_model(estimate.value_or("T")), std::nullopt, f.xi0);
  return with_overrides(load_model(f.model_path), estimate, f.xi0);
}

thermoqfi::VerifyOptions resolve_options(const Flags& f) {
  thermoqfi::VerifyOptions o;
  o.grid = f.tpoints == 1 ? std::vector<double>{f.tmin} : thermoqfi::geometric_grid(f.tmin, f.tmax, f.tpoints);
  o.seed = resolve_seed(f);
  o.policy = thermoqfi::parse_degeneracy_policy(f.degeneracy);
  o.threads = f.threads;
  o.order = f.order;
  o.feed_forward = !f.no_feedforward;
  return o;
}

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(f.out);
  if (!file) throw thermoqfi::ArgumentError("cannot write " + f.out);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace thermoqfi;
  CLI::App app{"High-temperature quantum Fisher information and discord verification"};
  app.require_subcommand(1);
  Flags flags;

  using Command = VerificationReport (*)(const Model&, const VerifyOptions&);
  const std::vector<std::pair<std::string, Command>> commands = {
      {"lemma1", cmd_lemma1},     {"lemma2", cmd_lemma2},         {"theorem1", cmd_theorem1},
      {"corollary3", cmd_corollary3}, {"corollary4", cmd_corollary4}, {"multipartite", cmd_multipartite},
  };
  std::vector<std::pair<CLI::App*, Command>> registered;
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " checks");
    add_common(sub, flags);
    if (name == "multipartite") {
      sub->add_option("--order", flags.order, "Measurement order (0-based subsystem indices)");
      sub->add_flag("--no-feedforward", flags.no_feedforward, "One basis per step instead of per outcome branch");
    }
    registered.emplace_back(sub, fn);
  }
  CLI::App* sweep = app.add_subcommand("sweep", "Tabulate a quantity over the temperature grid");
  add_common(sweep, flags);
  sweep->add_option("--quantity", flags.quantity, "Quantity to tabulate")
      ->check(CLI::IsMember({"qfi", "locc_qfi", "discord", "diag_discord", "dlm", "delta_f"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const Model model = resolve_model(flags);
    const VerifyOptions options = resolve_options(flags);
    if (sweep->parsed()) {
      const SweepTable table = cmd_sweep(model, flags.quantity, options);
      emit(flags, flags.format == "json" ? table.json() : table.csv());
      return 0;
    }
    for (const auto& [sub, fn] : registered) {
      if (!sub->parsed()) continue;
      const VerificationReport report = fn(model, options);
      emit(flags, flags.format == "json" ? report.json() : report.csv());
      std::size_t failed = 0;
      for (const CheckRow& r : report.rows) failed += r.pass ? 0 : 1;
      std::cerr << report.command << ": " << report.rows.size() << " checks, " << failed << " failed, "
                << report.runtime_ms << " ms\n";
      return report.passed() ? 0 : 1;
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
