#pragma once

// Verification commands over temperature grids and their reports.

#include <cstdint>
#include <string>
#include <vector>

#include "thermoqfi/discord.hpp"
#include "thermoqfi/locc.hpp"
#include "thermoqfi/model.hpp"
#include "thermoqfi/series.hpp"

namespace thermoqfi {

struct VerifyOptions {
  std::vector<double> grid = geometric_grid(20.0, 200.0, 16);
  std::uint64_t seed = 42;
  DegeneracyPolicy policy = DegeneracyPolicy::canonical;
  int threads = 1;
  std::vector<int> order;  // multipartite measurement order, empty = 0..N-1
  bool feed_forward = true;
};

struct CheckRow {
  std::string check_id;
  double t = 0.0;
  double xi = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string claim;
};

/// Reported but not part of the pass/fail verdict.
struct Diagnostic {
  std::string id;
  double value = 0.0;
  double reference = 0.0;
  std::string note;
};

struct VerificationReport {
  std::string command;
  std::string model;
  std::vector<CheckRow> rows;
  std::vector<Diagnostic> diagnostics;
  long long runtime_ms = 0;

  bool passed() const;
  std::string csv() const;
  std::string json() const;
};

/// d_T(T F) against the parameter curvature of the entropy.
VerificationReport cmd_lemma1(const Model& m, const VerifyOptions& o);
/// Energy-eigenbasis measurement saturates the QFI for linear families.
VerificationReport cmd_lemma2(const Model& m, const VerifyOptions& o);
/// Leading coefficients of d_T(T dF) and -d_xi^2 of the local-metrology discord.
VerificationReport cmd_theorem1(const Model& m, const VerifyOptions& o);
/// theorem1 plus equality of the local-metrology and diagonal discords.
VerificationReport cmd_corollary3(const Model& m, const VerifyOptions& o);
/// Vanishing T^-2 terms for a field-coupled family and the T^-4 coefficients.
VerificationReport cmd_corollary4(const Model& m, const VerifyOptions& o);
/// Greedy chain precision loss against the chain discord curvature (N <= 4).
VerificationReport cmd_multipartite(const Model& m, const VerifyOptions& o);

struct SweepRow {
  double t = 0.0;
  double xi = 0.0;
  double value = 0.0;
  std::string method;
  std::string diagnostics;
};

struct SweepTable {
  std::string quantity;
  std::vector<SweepRow> rows;
  std::string csv() const;
  std::string json() const;
};

/// quantity: qfi | locc_qfi | discord | diag_discord | dlm | delta_f
SweepTable cmd_sweep(const Model& m, const std::string& quantity, const VerifyOptions& o);

/// F_AB - F_{A->B} at temperature t for the model's evaluation point.
double model_delta_f(const Model& m, double t);
/// -d^2/dxi^2 of a discord variant at temperature t (xi = T for thermometry).
double model_discord_curvature(const Model& m, double t, DiscordVariant variant, const DiscordOptions& options);
/// Kubo-Mori analogue of the precision loss, in the basis the QFI protocol uses.
double model_delta_f_kubo_mori(const Model& m, double t);

}  // namespace thermoqfi
