#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace lpe::cli;
  CLI::App app{"lpe: lattice puncturable encryption"};
  app.require_subcommand(1);

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for all randomness");
  app.add_option("--profile", g.profile, "Profile name or path");
  app.add_option("-o,--out", g.out, "Output path (directory for keygen)");
  auto* n_opt = app.add_option("--n", g.params.n, "Inline: LWE dimension");
  app.add_option("--d", g.params.d, "Inline: tags per ciphertext");
  app.add_option("--ell", g.params.ell, "Inline: bits per tag");
  app.add_option("--eta", g.params.eta, "Inline: maximum puncture count");
  app.add_option("--chi0", g.params.chi0, "Inline: error bound");
  app.add_option("--class", g.params.runtime_class, "Inline: runtime class")
      ->check(CLI::IsMember({"fast", "medium", "slow"}));
  app.add_option("--name", g.params.name, "Inline: profile name");

  std::string pk, key, tags, in;
  std::uint64_t tag = 0;
  std::size_t trials = 100;

  auto* keygen = app.add_subcommand("keygen", "Generate pk.dfk and sk0.dfk");

  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file under a tag list");
  encrypt->add_option("--pk", pk, "Public key container")->required();
  encrypt->add_option("--tags", tags, "Comma-separated decimal tags")->required();
  encrypt->add_option("input", in, "Plaintext file")->required();

  auto* puncture = app.add_subcommand("puncture", "Puncture a key at one tag");
  puncture->add_option("--pk", pk, "Public key container")->required();
  puncture->add_option("--key", key, "Puncture key container")->required();
  puncture->add_option("--tag", tag, "Tag to revoke")->required();

  auto* decrypt = app.add_subcommand("decrypt", "Decrypt a ciphertext container");
  decrypt->add_option("--pk", pk, "Public key container")->required();
  decrypt->add_option("--key", key, "Puncture key container")->required();
  decrypt->add_option("input", in, "Ciphertext container")->required();

  auto* check = app.add_subcommand("params-check", "Report noise budgets and sizes; --out writes the profile");

  auto* bench = app.add_subcommand("bench-noise", "Measure decryption noise against the budget");
  bench->add_option("--trials", trials, "Trials per level");

  for (auto* sub : {keygen, encrypt, puncture, decrypt, check, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kFormat;
  }
  if (seed_opt->count() > 0) g.seed = seed;
  if (n_opt->count() == 0 && (g.params.d || g.params.ell || g.params.eta)) {
    std::cerr << "error: inline parameters need --n\n";
    return kParam;
  }

  if (*keygen) return cmd_keygen(g);
  if (*encrypt) return cmd_encrypt(g, pk, tags, in);
  if (*puncture) return cmd_puncture(g, pk, key, tag);
  if (*decrypt) return cmd_decrypt(g, pk, key, in);
  if (*check) return cmd_params_check(g);
  if (*bench) return cmd_bench_noise(g, trials);
  return kFormat;
}
