// Subcommands of the lpe tool. Each returns a process exit code.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lpe::cli {

enum Exit : int { kOk = 0, kRevoked = 2, kFormat = 3, kParam = 4 };

struct Inline {
  std::size_t n = 0, d = 0, ell = 0, eta = 0;
  std::uint64_t chi0 = 2;
  std::string runtime_class = "fast";
  std::string name = "inline";
  bool given() const { return n != 0; }
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string profile;
  std::string out;
  Inline params;
};

int cmd_keygen(const Globals& g);
int cmd_encrypt(const Globals& g, const std::string& pk, const std::string& tags, const std::string& in);
int cmd_puncture(const Globals& g, const std::string& pk, const std::string& key, std::uint64_t tag);
int cmd_decrypt(const Globals& g, const std::string& pk, const std::string& key, const std::string& in);
int cmd_params_check(const Globals& g);
int cmd_bench_noise(const Globals& g, std::size_t trials);

}  // namespace lpe::cli
