// Parameter profiles, noise budgets, Gaussian width schedule, and sizes.
#pragma once

#include <string>
#include <vector>

#include "lpe/zq.hpp"

namespace lpe {

enum class SigmaMode { Practical, Paper };

struct Profile {
  std::string name = "custom";
  std::size_t n = 0;
  u64 q = 0;
  unsigned k = 0;
  std::size_t m = 0;  // 2 n k
  std::size_t d = 0;    // tags per ciphertext
  std::size_t ell = 0;  // bits per tag
  std::size_t eta_max = 0;
  u64 chi0 = 0;
  SigmaMode sigma_mode = SigmaMode::Practical;
  double sigma_1 = 0;
  double c_tg = 6.0;
  double c_ebr = 4.0;
  double power_tol = 1e-9;
  double epsilon = 0.5;  // informational only
  std::string runtime_class = "fast";

  std::size_t wires() const { return d * ell; }
  Modulus modulus() const { return Modulus(q); }
  // sigma_eta for eta >= 1; level 0 uses sigma_1.
  double sigma(std::size_t eta) const;
  std::vector<double> sigma_schedule() const;
  void validate() const;  // throws InvalidArgument
};

// sqrt(m log2 m): ratio between consecutive widths.
double sigma_ratio(std::size_t m);

// Worst-case noise growth ((p^d - 1)/(p - 1) m)^tau 20 sqrt(m);
// +infinity on overflow.
double beta_analytic(double p, double d_wires, std::size_t m, std::size_t tau);

// Per-instance bound for the equality circuits: t* = 0 against all-zero tags
// makes every Mul left operand 1, the largest value the bound allows.
double worst_circuit_bound(const Profile& p);

// Width of the first level. Practical: c_tg sqrt(n k) * 3 sqrt(log2 2m);
// analytic mode: beta_F sqrt(log2 2m) sqrt(log2 m).
double sigma1_for(const Profile& p);

// Builds a complete profile (k, m, sigma_1 derived).
Profile make_profile(std::string name, std::size_t n, u64 q, std::size_t d, std::size_t ell, std::size_t eta_max,
                     u64 chi0, std::string runtime_class = "fast", SigmaMode mode = SigmaMode::Practical);

bool theorem2_check(const Profile& p, std::size_t eta, double beta);

struct BudgetReport {
  bool ok = false;
  double bound = 0;      // chi0 + (eta+1) m sigma_eta (chi0 sqrt m + sum Delta_j sqrt m)
  double quarter_q = 0;  // q / 4
  double rt_sup = 0;     // (eta+1) m sigma_eta
  double noise_norm = 0; // chi0 sqrt m + sum Delta_j sqrt m
  double sigma_eta = 0;
  double margin() const { return quarter_q / bound; }
  std::string text() const;
};

BudgetReport practical_check(const Profile& p, std::size_t eta, const std::vector<double>& deltas);

struct SizeReport {
  double pk_bits = 0, sk0_bits = 0, pkey_bits = 0, ct_bits = 0;
  // Asymptotic forms with unit constants, for comparison only.
  double pk_asym = 0, sk0_asym = 0, pkey_asym = 0, ct_asym = 0;
  std::string text() const;
};

// Logical bit sizes: entries of Z_q count k bits; key entries count
// ceil(log2(2 sigma_eta sqrt((eta+1) m))) bits.
SizeReport size_formulas(const Profile& p, std::size_t eta);
unsigned pkey_entry_bits(const Profile& p, std::size_t eta);

double runtime_budget(const std::string& runtime_class);

struct SearchFailure : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

// Smallest q = next_prime(2^j) whose profile passes practical_check with a 2x
// margin at every level; throws SearchFailure naming the binding constraint.
Profile profile_search(std::size_t n, std::size_t d, std::size_t ell, std::size_t eta_max, u64 chi0,
                       const std::string& runtime_class, const std::string& name = "custom");

std::string profile_to_text(const Profile& p);
Profile profile_from_text(const std::string& text);
Profile load_profile(const std::string& path);

}  // namespace lpe
