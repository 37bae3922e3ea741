#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lpe/container.hpp"
#include "lpe/pe.hpp"

#ifndef LPE_PROFILE_DIR
#define LPE_PROFILE_DIR "profiles"
#endif

namespace fs = std::filesystem;

namespace lpe::cli {

namespace {

// Failures that map to a specific exit code.
struct Fail {
  int code;
  std::string msg;
};

RngStream make_rng(const Globals& g) {
  return g.seed ? RngStream::from_u64(*g.seed) : RngStream::from_entropy();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Fail{kFormat, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, const std::string& data) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Fail{kFormat, "cannot write '" + path.string() + "'"};
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f.flush()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Fail{kFormat, "cannot write '" + path.string() + "'"};
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Fail{kFormat, "cannot move output into '" + path.string() + "'"};
  }
}

Profile resolve_profile(const Globals& g) {
  if (g.params.given()) {
    if (!g.profile.empty()) throw Fail{kParam, "give either --profile or inline parameters, not both"};
    try {
      return profile_search(g.params.n, g.params.d, g.params.ell, g.params.eta, g.params.chi0, g.params.runtime_class,
                            g.params.name);
    } catch (const InvalidArgument& e) {
      throw Fail{kParam, std::string("infeasible parameters: ") + e.what()};
    }
  }
  if (g.profile.empty()) throw Fail{kParam, "no profile given (use --profile or inline parameters)"};
  std::vector<fs::path> candidates = {g.profile, fs::path("profiles") / (g.profile + ".profile"),
                                      fs::path(LPE_PROFILE_DIR) / (g.profile + ".profile")};
  for (const auto& c : candidates) {
    std::error_code ec;
    if (fs::is_regular_file(c, ec)) {
      try {
        return load_profile(c.string());
      } catch (const InvalidArgument& e) {
        throw Fail{kFormat, "profile '" + g.profile + "': " + e.what()};
      }
    }
  }
  throw Fail{kFormat, "profile '" + g.profile + "' not found"};
}

fs::path out_path(const Globals& g, const std::string& fallback) {
  return g.out.empty() ? fs::path(fallback) : fs::path(g.out);
}

PublicKey load_pk(const std::string& path) { return deserialize_public_key(read_file(path)); }

std::vector<u64> parse_tags(const std::string& s) {
  std::vector<u64> tags;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    u64 v = 0;
    try {
      if (item.empty() || item[0] == '-' || item[0] == '+') throw std::invalid_argument(item);
      v = std::stoull(item, &pos, 10);
    } catch (const std::exception&) {
      throw Fail{kFormat, "bad tag '" + item + "'"};
    }
    if (pos != item.size()) throw Fail{kFormat, "bad tag '" + item + "'"};
    tags.push_back(v);
  }
  return tags;
}

std::size_t block_bytes(const Profile& p) { return p.m / 8; }

Bits bytes_to_bits(const std::string& data, std::size_t off, std::size_t len, std::size_t m) {
  Bits mu(m, 0);
  for (std::size_t i = 0; i < len; ++i)
    for (int b = 0; b < 8; ++b) mu[8 * i + b] = (static_cast<unsigned char>(data[off + i]) >> b) & 1;
  return mu;
}

void print_sizes(const Profile& p, std::size_t eta, std::ostream& os) {
  os << "# logical sizes (bits), level " << eta << "\n" << size_formulas(p, eta).text();
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const Fail& f) {
    std::cerr << "error: " << f.msg << "\n";
    return f.code;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormat;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParam;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormat;
  }
}

}  // namespace

int cmd_keygen(const Globals& g) {
  return guarded([&] {
    const Profile p = resolve_profile(g);
    RngStream rng = make_rng(g);
    auto [pk, sk] = pe_key(p, rng);
    const fs::path dir = out_path(g, ".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string pk_bytes = serialize_public_key(pk);
    write_atomic(dir / "pk.dfk", pk_bytes);
    write_atomic(dir / "sk0.dfk", serialize_puncture_key(pk, sk));
    std::cout << "profile = " << p.name << "\nq = " << p.q << "\nm = " << p.m << "\n";
    print_sizes(p, 0, std::cout);
    return static_cast<int>(kOk);
  });
}

int cmd_encrypt(const Globals& g, const std::string& pk_path, const std::string& tag_list, const std::string& in) {
  return guarded([&] {
    const PublicKey pk = load_pk(pk_path);
    const Profile& p = pk.profile;
    const std::vector<u64> tags = parse_tags(tag_list);
    if (tags.size() != p.d)
      throw Fail{kFormat, "expected " + std::to_string(p.d) + " tags, got " + std::to_string(tags.size())};
    for (u64 t : tags)
      if (t >> p.ell) throw Fail{kFormat, "tag " + std::to_string(t) + " outside [0, 2^" + std::to_string(p.ell) + ")"};
    const std::string data = read_file(in);
    const std::size_t bs = block_bytes(p);
    RngStream rng = make_rng(g);
    const RngStream base = rng.fork();
    CiphertextFile f;
    f.tags = tags;
    const std::size_t blocks = (data.size() + bs - 1) / bs;
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t off = b * bs, len = std::min(bs, data.size() - off);
      RngStream br = base.substream(b);
      f.blocks.push_back(pe_enc(pk, bytes_to_bits(data, off, len, p.m), tags, br).ct);
      f.final_len = static_cast<std::uint32_t>(len);
    }
    write_atomic(out_path(g, in + ".dfk"), serialize_ciphertexts(pk, f));
    std::cout << "blocks = " << blocks << "\nct_bits_per_block = " << size_formulas(p, 0).ct_bits << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_puncture(const Globals& g, const std::string& pk_path, const std::string& key, std::uint64_t tag) {
  return guarded([&] {
    const PublicKey pk = load_pk(pk_path);
    const Profile& p = pk.profile;
    const std::string old_bytes = read_file(key);
    const PunctureKey sk = deserialize_puncture_key(pk, old_bytes);
    if (sk.level() >= p.eta_max)
      throw Fail{kParam, "key already punctured " + std::to_string(sk.level()) + " times (eta_max)"};
    if (tag >> p.ell) throw Fail{kParam, "tag outside [0, 2^" + std::to_string(p.ell) + ")"};
    RngStream rng = make_rng(g);
    const PunctureKey next = pe_pun(pk, sk, tag, rng);
    const std::string bytes = serialize_puncture_key(pk, next);
    write_atomic(out_path(g, key + ".pun"), bytes);
    const SizeReport before = size_formulas(p, sk.level()), after = size_formulas(p, next.level());
    std::cout << "level = " << next.level() << "\n";
    std::cout << "pkey_bits_before = " << static_cast<std::uint64_t>(before.pkey_bits)
              << "\npkey_bits_after = " << static_cast<std::uint64_t>(after.pkey_bits) << "\n";
    std::cout << "file_bytes_before = " << old_bytes.size() << "\nfile_bytes_after = " << bytes.size() << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_decrypt(const Globals& g, const std::string& pk_path, const std::string& key, const std::string& in) {
  return guarded([&] {
    const PublicKey pk = load_pk(pk_path);
    const PunctureKey sk = deserialize_puncture_key(pk, read_file(key));
    const CiphertextFile f = deserialize_ciphertexts(pk, read_file(in));
    if (!pe_accepts(pk, sk, f.tags)) {
      std::cerr << "revoked: a ciphertext tag has been punctured\n";
      return static_cast<int>(kRevoked);
    }
    RngStream rng = make_rng(g);
    const Decryptor dec(pk, sk.dk, rng);
    const std::size_t bs = block_bytes(pk.profile);
    std::string out;
    for (std::size_t b = 0; b < f.blocks.size(); ++b) {
      const auto mu = dec.decrypt(f.blocks[b]);
      if (!mu) return static_cast<int>(kRevoked);
      const std::size_t len = b + 1 == f.blocks.size() ? f.final_len : bs;
      for (std::size_t i = 0; i < len; ++i) {
        unsigned char c = 0;
        for (int bit = 0; bit < 8; ++bit) c |= static_cast<unsigned char>((*mu)[8 * i + bit] << bit);
        out.push_back(static_cast<char>(c));
      }
    }
    std::string target = in;
    if (target.size() > 4 && target.ends_with(".dfk")) target.resize(target.size() - 4);
    else target += ".out";
    write_atomic(out_path(g, target), out);
    return static_cast<int>(kOk);
  });
}

int cmd_params_check(const Globals& g) {
  return guarded([&] {
    const Profile p = resolve_profile(g);
    std::cout << profile_to_text(p);
    if (!g.out.empty()) write_atomic(g.out, profile_to_text(p));
    const double delta = worst_circuit_bound(p);
    const std::size_t tau = p.ell > 1 ? p.ell - 1 : 1;
    const double beta_a = beta_analytic(2, static_cast<double>(p.wires()), p.m, tau);
    std::cout << "circuit_noise_bound = " << delta << "\nbeta_analytic = " << beta_a << "\n";
    bool all = true;
    for (std::size_t eta = 0; eta <= p.eta_max; ++eta) {
      const BudgetReport r = practical_check(p, eta, std::vector<double>(eta, delta));
      all = all && r.ok;
      std::cout << "# level " << eta << "\n" << r.text();
      std::cout << "theorem2_empirical_beta = " << (theorem2_check(p, eta, delta / (p.m * p.chi0)) ? "true" : "false")
                << "\n";
      std::cout << "theorem2_analytic_beta = " << (theorem2_check(p, eta, beta_a) ? "true" : "false") << "\n";
      print_sizes(p, eta, std::cout);
    }
    return static_cast<int>(all ? kOk : kParam);
  });
}

int cmd_bench_noise(const Globals& g, std::size_t trials) {
  return guarded([&] {
    if (trials == 0) throw Fail{kParam, "trials must be at least 1"};
    const Profile p = resolve_profile(g);
    const Modulus mod = p.modulus();
    RngStream rng = make_rng(g);
    auto [pk, sk0] = pe_key(p, rng);
    const u64 tagspace = u64(1) << p.ell;
    std::vector<PunctureKey> keys{sk0};
    for (std::size_t e = 1; e <= p.eta_max; ++e) keys.push_back(pe_pun(pk, keys.back(), e - 1, rng));
    const double delta = worst_circuit_bound(p);
    const i64 half = static_cast<i64>((p.q + 1) / 2);
    std::ostringstream os;
    os << "profile = " << p.name << "\ntrials = " << trials << "\nquarter_q = " << p.q / 4 << "\n";
    bool all_ok = true;
    for (std::size_t e = 0; e <= p.eta_max; ++e) {
      const Decryptor dec(pk, keys[e].dk, rng);
      i64 max_dec = 0;
      double max_eval = 0, max_bound = 0;
      std::size_t failures = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        std::vector<u64> tags(p.d);
        for (auto& x : tags) x = p.eta_max + rng.uniform_below(tagspace - p.eta_max);
        Bits mu(p.m);
        for (auto& b : mu) b = rng.next_u64() & 1;
        EncTrace tr;
        const PeCiphertext ct = pe_enc(pk, mu, tags, rng, &tr);
        for (const auto& f : keys[e].dk.circuits) {
          PkTrace pt;
          eval_pk(mod, f, pk.b, &pt);
          const ZqVector cf = eval_ct(mod, f, ct.ct.attrs, pt, ct.ct.c);
          const IntVector err = encoding_error(pk, pt.b_f, eval_value(mod, f, ct.ct.attrs), cf, tr.s);
          for (i64 v : err) max_eval = std::max(max_eval, std::fabs(static_cast<double>(v)));
          max_bound = std::max(max_bound, noise_bound(mod, f, ct.ct.attrs, static_cast<double>(p.m * p.chi0), p.m));
        }
        std::vector<i64> mubar;
        const auto got = dec.decrypt(ct.ct, &mubar);
        if (!got || *got != mu) ++failures;
        for (std::size_t i = 0; i < p.m; ++i) {
          const i64 v = mod.centered(mod.sub(mod.reduce(mubar[i]), mu[i] ? static_cast<u64>(half) : 0));
          max_dec = std::max(max_dec, v < 0 ? -v : v);
        }
      }
      const BudgetReport r = practical_check(p, e, std::vector<double>(e, delta));
      const bool ok = failures == 0 && static_cast<double>(max_dec) < r.bound &&
                      static_cast<u128>(max_dec) * 4 < p.q && max_eval <= max_bound;
      all_ok = all_ok && ok;
      os << "level_" << e << "_max_observed = " << max_dec << "\n";
      os << "level_" << e << "_practical_bound = " << r.bound << "\n";
      os << "level_" << e << "_max_eval_residual = " << max_eval << "\n";
      os << "level_" << e << "_eval_noise_bound = " << max_bound << "\n";
      os << "level_" << e << "_failures = " << failures << "\n";
      os << "level_" << e << "_ok = " << (ok ? "true" : "false") << "\n";
    }
    os << "all_ok = " << (all_ok ? "true" : "false") << "\n";
    std::cout << os.str();
    return static_cast<int>(all_ok ? kOk : kParam);
  });
}

}  // namespace lpe::cli
