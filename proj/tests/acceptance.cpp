// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "lpe/container.hpp"
#include "lpe/pe.hpp"
#include "support.hpp"

using namespace lpe;
using namespace lpe::test;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Profile shipped(const std::string& name) { return load_profile(std::string(LPE_PROFILE_DIR) + "/" + name + ".profile"); }

Bits random_bits(std::size_t m, RngStream& rng) {
  Bits mu(m);
  for (auto& b : mu) b = rng.next_u64() & 1;
  return mu;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- 1
Outcome criterion1() {
  const Profile p = shipped("toy");
  RngStream rng = RngStream::from_u64(1001);
  auto [pk, sk] = pe_key(p, rng);
  const u64 space = u64(1) << p.ell;
  std::vector<PunctureKey> keys{sk};
  while (keys.size() <= p.eta_max) keys.push_back(pe_pun(pk, keys.back(), rng.uniform_below(space), rng));

  std::ostringstream detail;
  bool all = true;
  for (const auto& key : keys) {
    const std::set<u64> punctured(key.tags.begin(), key.tags.end());
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<u64> tags(p.d);
      for (auto& t : tags) do t = rng.uniform_below(space); while (punctured.count(t));
      const Bits mu = random_bits(p.m, rng);
      const auto got = pe_dec(pk, key, pe_enc(pk, mu, tags, rng), rng);
      ok += got && *got == mu;
    }
    all = all && ok == 100;
    detail << "eta=" << key.level() << ": " << ok << "/100; ";
  }
  return {all, detail.str() + "profile toy, m=" + std::to_string(p.m)};
}

// ---------------------------------------------------------------- 2
Outcome criterion2() {
  std::size_t mismatches = 0, checked = 0, wrong_plain = 0;
  RngStream rng = RngStream::from_u64(1002);
  for (std::size_t ell = 1; ell <= 3; ++ell)
    for (std::size_t d = 1; d <= 2; ++d) {
      const Profile p = profile_search(2, d, ell, 2, 2, "fast", "sweep");
      auto [pk, sk0] = pe_key(p, rng);
      const u64 space = u64(1) << ell;

      std::vector<PunctureKey> keys{sk0};
      for (u64 a = 0; a < space; ++a) {
        keys.push_back(pe_pun(pk, sk0, a, rng));
        const PunctureKey k1 = keys.back();
        for (u64 b = 0; b < space; ++b) keys.push_back(pe_pun(pk, k1, b, rng));
      }

      std::vector<std::vector<u64>> tuples;
      std::size_t total = 1;
      for (std::size_t i = 0; i < d; ++i) total *= space;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<u64> t(d);
        std::size_t c = code;
        for (auto& x : t) {
          x = c % space;
          c /= space;
        }
        tuples.push_back(t);
      }
      std::vector<Bits> plains;
      std::vector<PeCiphertext> cts;
      for (const auto& t : tuples) {
        plains.push_back(random_bits(p.m, rng));
        cts.push_back(pe_enc(pk, plains.back(), t, rng));
      }

      for (const auto& key : keys) {
        const Decryptor dec(pk, key.dk, rng);
        for (std::size_t i = 0; i < cts.size(); ++i) {
          bool overlap = false;
          for (u64 a : key.tags)
            for (u64 b : tuples[i]) overlap = overlap || a == b;
          const auto got = dec.decrypt(cts[i].ct);
          ++checked;
          if (got.has_value() == overlap) ++mismatches;
          if (got && *got != plains[i]) ++wrong_plain;
        }
      }
    }
  return {mismatches == 0 && wrong_plain == 0,
          std::to_string(checked) + " (key, ciphertext) pairs over ell<=3, d<=2, eta<=2; " +
              std::to_string(mismatches) + " reject mismatches, " + std::to_string(wrong_plain) +
              " wrong plaintexts"};
}

// ---------------------------------------------------------------- 3
Outcome criterion3() {
  RngStream rng = RngStream::from_u64(1003);
  std::ostringstream detail;
  bool all = true;
  for (u64 q : {u64(13), u64(521)}) {
    const Modulus mod(q);
    const std::size_t n = 4, m = 2 * n * mod.k();
    const ZqMatrix a = random_zq(mod, n, m, rng);
    auto run = [&](const Circuit& f) {
      std::vector<IntMatrix> s;
      ZqVector x(f.num_inputs());
      for (std::size_t i = 0; i < f.num_inputs(); ++i) {
        s.push_back(random_pm1(m, m, rng));
        x[i] = f.binary_mul_left() ? rng.uniform_below(2) : rng.uniform_below(q);
      }
      return simulation_identity(mod, f, a, s, x);
    };
    int rand_ok = 0, tstar_ok = 0, tstar_n = 0, fermat_ok = 0, fermat_n = 0;
    for (int i = 0; i < 50; ++i) rand_ok += run(random_circuit(3, 4, 14, rng));
    const std::size_t max_ell = bit_length(q) - 1;
    for (std::size_t ell = 1; ell <= std::min<std::size_t>(max_ell, 4); ++ell)
      for (std::size_t d = 1; d <= 2; ++d) {
        ++tstar_n;
        tstar_ok += run(build_f_tstar(rng.uniform_below(u64(1) << ell), d, ell));
      }
    if (q <= 64)
      for (u64 t = 0; t < q; t += 3) {
        ++fermat_n;
        fermat_ok += run(build_eq_fermat(t, q, 2));
      }
    all = all && rand_ok == 50 && tstar_ok == tstar_n && fermat_ok == fermat_n;
    detail << "q=" << q << ": random " << rand_ok << "/50, f_tstar " << tstar_ok << "/" << tstar_n;
    if (fermat_n) detail << ", eq_fermat " << fermat_ok << "/" << fermat_n;
    detail << "; ";
  }
  return {all, detail.str() + "n=4"};
}

// ---------------------------------------------------------------- 4
Outcome criterion4() {
  std::ostringstream detail;
  bool all = true;
  for (const char* name : {"toy", "tiny"}) {
    const Profile p = shipped(name);
    const Modulus mod = p.modulus();
    RngStream rng = RngStream::from_u64(1004);
    auto [pk, msk] = kgen(p, rng);
    const u64 space = u64(1) << p.ell;
    int ok = 0;
    double worst = 0, worst_ratio = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<u64> tags(p.d);
      for (auto& t : tags) t = rng.uniform_below(space);
      const Circuit f = build_f_tstar(rng.uniform_below(space), p.d, p.ell);
      EncTrace tr;
      const PeCiphertext ct = pe_enc(pk, random_bits(p.m, rng), tags, rng, &tr);
      PkTrace pt;
      eval_pk(mod, f, pk.b, &pt);
      const ZqVector cf = eval_ct(mod, f, ct.ct.attrs, pt, ct.ct.c);
      const IntVector e = encoding_error(pk, pt.b_f, eval_value(mod, f, ct.ct.attrs), cf, tr.s);
      double r = 0;
      for (i64 v : e) r = std::max(r, std::fabs(double(v)));
      const double bound = noise_bound(mod, f, ct.ct.attrs, double(p.m * p.chi0), p.m);
      ok += r <= bound;
      worst = std::max(worst, r);
      worst_ratio = std::max(worst_ratio, r / bound);
    }
    const bool under_quarter = worst < double(p.q) / 4;
    all = all && ok == 100 && under_quarter;
    detail << name << ": " << ok << "/100 within noise_bound (max residual/bound " << fmt(worst_ratio)
           << "), max residual 2^" << fmt(std::log2(worst)) << " vs q/4 2^" << fmt(std::log2(double(p.q) / 4)) << "; ";
  }
  return {all, detail.str()};
}

// ---------------------------------------------------------------- 5
Outcome criterion5() {
  RngStream rng = RngStream::from_u64(1005);
  std::ostringstream detail;
  bool all = true;

  // (i)
  int ok_i = 0, n_i = 0;
  double worst_i = 0;
  for (auto [n, q] : {std::pair<std::size_t, u64>{2, shipped("toy").q}, {8, 521}}) {
    const Modulus mod(q);
    const double bound = 6 * std::sqrt(double(n) * std::log2(double(q)));
    for (int t = 0; t < 100; ++t) {
      const auto tg = trap_gen(mod, n, 2 * n * mod.k(), rng);
      ++n_i;
      ok_i += is_zero(mul(mod, tg.a, tg.t.matrix())) && tg.t.gs_norm() <= bound;
      worst_i = std::max(worst_i, tg.t.gs_norm() / bound);
    }
  }
  all = all && ok_i == n_i;
  detail << "(i) " << ok_i << "/" << n_i << " max gs/bound " << fmt(worst_i) << "; ";

  const Profile p = shipped("toy");
  const Modulus mod = p.modulus();
  const auto tg = trap_gen(mod, p.n, p.m, rng);

  // (ii)
  LatticeBasis cur = tg.t;
  double drift = 0;
  for (int depth = 0; depth < 3; ++depth) {
    cur = ext_basis_left(cur.parent(), random_zq(mod, p.n, p.m, rng), cur);
    drift = std::max(drift, std::fabs(cur.gs_norm() - tg.t.gs_norm()) / tg.t.gs_norm());
    all = all && is_zero(mul(mod, cur.parent(), cur.matrix()));
  }
  all = all && drift <= 1e-9;
  detail << "(ii) relative drift " << fmt(drift) << "; ";

  // (iii)
  const double sigma = p.sigma(1);
  int ok_iii = 0;
  for (int t = 0; t < 100; ++t) {
    const ZqMatrix u = random_zq(mod, p.n, 8, rng);
    const IntMatrix r = sample_pre(tg.a, tg.t, u, sigma, rng);
    bool good = mul(mod, tg.a, r) == u;
    for (std::size_t j = 0; j < r.cols(); ++j) good = good && col_norm(r, j) <= sigma * std::sqrt(double(p.m));
    ok_iii += good;
  }
  all = all && ok_iii == 100;
  detail << "(iii) " << ok_iii << "/100; ";

  // (iv)
  const QaryLattice ref = tg.t.hnf();
  int ok_iv = 0;
  for (int t = 0; t < 50; ++t) {
    const LatticeBasis rb = rand_basis(tg.a, tg.t, sigma, rng);
    bool good = rb.hnf() == ref && rb.gs_norm() <= sigma * std::sqrt(double(p.m));
    for (std::size_t j = 0; j < p.m; ++j) good = good && col_norm(rb.matrix(), j) <= sigma * std::sqrt(double(p.m));
    ok_iv += good;
  }
  all = all && ok_iv == 50;
  detail << "(iv) " << ok_iv << "/50; ";

  // (v)
  bool ok_v = true;
  for (u64 q : {u64(13), u64(521), next_prime(u64(1) << 20)}) {
    const Modulus m(q);
    ok_v = ok_v && gadget_basis(m, 2).gs_norm() <= std::sqrt(5.0) + 1e-9;
  }
  all = all && ok_v;
  detail << "(v) " << (ok_v ? "ok" : "violated");
  return {all, detail.str()};
}

// ---------------------------------------------------------------- 6
Outcome criterion6() {
  RngStream rng = RngStream::from_u64(1006);
  const GaussParam gp(4.0);
  double sum = 0, sq = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = double(sample_z(0.0, gp, rng));
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n, sd = std::sqrt(sq / n - mean * mean);
  const double target = gp.sigma / std::sqrt(2 * std::numbers::pi);
  const bool moments = std::fabs(mean) <= 0.05 * gp.sigma && std::fabs(sd / target - 1) <= 0.05;

  const Profile p = shipped("toy");
  const auto tg = trap_gen(p.modulus(), p.n, p.m, rng);
  const double sigma = p.sigma(1);
  int violations = 0;
  std::vector<double> c(p.m);
  for (int i = 0; i < 10000; ++i) {
    for (auto& x : c) x = rng.uniform01() * 1000 - 500;
    const IntVector v = sample_gpv(tg.t, GaussParam(sigma), c, rng);
    double s = 0;
    for (std::size_t j = 0; j < p.m; ++j) s += (double(v[j]) - c[j]) * (double(v[j]) - c[j]);
    violations += std::sqrt(s) > sigma * std::sqrt(double(p.m));
  }
  return {moments && violations == 0, "mean/sigma " + fmt(mean / gp.sigma) + ", std/target " + fmt(sd / target) +
                                          ", sample_gpv tail violations " + std::to_string(violations) + "/10000"};
}

// ---------------------------------------------------------------- 7
Outcome criterion7() {
  const Profile p = shipped("toy");
  RngStream rng = RngStream::from_u64(1007);
  auto [pk, sk] = pe_key(p, rng);
  const PeCiphertext ct = pe_enc(pk, random_bits(p.m, rng), {1, 2}, rng);
  const double ct_measured = double((ct.ct.c.size() + 2) * ct.ct.c_in.size() * p.k);
  const double pk_measured = double((pk.b.size() + 2) * pk.a.rows() * pk.a.cols() * p.k);
  const SizeReport s0 = size_formulas(p, 0);
  bool exact = ct_measured == s0.ct_bits && pk_measured == s0.pk_bits;

  // Keys: side (eta+1) m, entries bounded by the width schedule.
  std::vector<double> sizes;
  PunctureKey key = sk;
  bool increasing = true;
  for (std::size_t eta = 0; eta <= p.eta_max; ++eta) {
    if (eta > 0) key = pe_pun(pk, key, eta, rng);
    const IntMatrix& t = key.dk.t.matrix();
    const double measured = double(t.rows() * t.cols()) * pkey_entry_bits(p, eta);
    const double bits_needed = std::ceil(std::log2(2.0 * double(t.max_abs()) + 1));
    exact = exact && measured == size_formulas(p, eta).pkey_bits && bits_needed <= pkey_entry_bits(p, eta);
    if (!sizes.empty()) increasing = increasing && measured > sizes.back();
    sizes.push_back(measured);
  }
  // Least-squares slope of log size against log eta over eta = 1..eta_max.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = double(p.eta_max);
  for (std::size_t eta = 1; eta <= p.eta_max; ++eta) {
    const double x = std::log(double(eta)), y = std::log(sizes[eta]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = p.eta_max >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0;
  const bool in_band = slope >= 1.8 && slope <= 2.2;
  std::ostringstream detail;
  detail << "ct/pk measured == formula: " << (ct_measured == s0.ct_bits && pk_measured == s0.pk_bits ? "yes" : "no")
         << "; pkey bits";
  for (double s : sizes) detail << " " << std::uint64_t(s);
  detail << "; increasing: " << (increasing ? "yes" : "no") << "; fitted exponent over eta=1.." << p.eta_max << ": "
         << fmt(slope) << " (band [1.8, 2.2])";
  return {exact && increasing && in_band, detail.str()};
}

// ---------------------------------------------------------------- 8
Outcome criterion8() {
  const Modulus mod(shipped("toy").q);
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t ell = 1; ell <= 4; ++ell)
    for (std::size_t d = 1; d <= 3; ++d) {
      const u64 space = u64(1) << ell;
      std::size_t total = 1;
      for (std::size_t i = 0; i < d; ++i) total *= space;
      for (u64 ts = 0; ts < space; ++ts) {
        const Circuit f = build_f_tstar(ts, d, ell);
        for (std::size_t code = 0; code < total; ++code) {
          std::vector<u64> tags(d);
          std::size_t c = code;
          u64 expect = 0;
          for (auto& t : tags) {
            t = c % space;
            c /= space;
            expect += t == ts;
          }
          ++checked;
          mismatches += eval_value(mod, f, tag_attributes(tags, ell)) != expect % mod.q();
        }
      }
    }
  return {mismatches == 0, std::to_string(checked) + " evaluations, " + std::to_string(mismatches) + " mismatches"};
}

// ---------------------------------------------------------------- 9
int run(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

Outcome criterion9() {
  const fs::path dir = fs::temp_directory_path() / ("lpe_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = LPE_CLI_PATH, prof = std::string(LPE_PROFILE_DIR) + "/toy.profile";
  auto at = [&](const char* f) { return (dir / f).string(); };
  std::vector<std::string> failures;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) failures.push_back(what);
  };

  RngStream rng = RngStream::from_u64(1009);
  std::string plain(10240, '\0');
  for (auto& ch : plain) ch = static_cast<char>(rng.next_u64() & 0xff);
  spit(dir / "plain.bin", plain);

  // Seeded runs, twice each.
  for (const char* k : {"a", "b"}) {
    const std::string kd = at(k);
    expect(run(cli + " --profile " + prof + " --seed 7 keygen -o " + kd) == 0, "keygen");
    expect(run(cli + " --seed 8 encrypt --pk " + kd + "/pk.dfk --tags 17,200 " + at("plain.bin") + " -o " + kd +
               "/ct.dfk") == 0,
           "encrypt");
    expect(run(cli + " --seed 9 puncture --pk " + kd + "/pk.dfk --key " + kd + "/sk0.dfk --tag 5 -o " + kd +
               "/sk1.dfk") == 0,
           "puncture");
    expect(run(cli + " --seed 10 decrypt --pk " + kd + "/pk.dfk --key " + kd + "/sk1.dfk " + kd + "/ct.dfk -o " + kd +
               "/out.bin") == 0,
           "decrypt");
  }
  for (const char* f : {"pk.dfk", "sk0.dfk", "ct.dfk", "sk1.dfk", "out.bin"})
    expect(slurp(dir / "a" / f) == slurp(dir / "b" / f), std::string("byte-identical ") + f);
  expect(slurp(dir / "a" / "out.bin") == plain, "10 KiB round trip");

  // Byte-exact re-serialization of every container kind.
  const std::string pkb = slurp(dir / "a" / "pk.dfk");
  const PublicKey pk = deserialize_public_key(pkb);
  expect(serialize_public_key(pk) == pkb, "pk round trip");
  for (const char* f : {"sk0.dfk", "sk1.dfk"}) {
    const std::string kb = slurp(dir / "a" / f);
    expect(serialize_puncture_key(pk, deserialize_puncture_key(pk, kb)) == kb, std::string("key round trip ") + f);
  }
  const std::string ctb = slurp(dir / "a" / "ct.dfk");
  expect(serialize_ciphertexts(pk, deserialize_ciphertexts(pk, ctb)) == ctb, "ciphertext round trip");
  const std::string pb = serialize_profile(pk.profile);
  expect(serialize_profile(deserialize_profile(pb)) == pb, "profile round trip");

  // Exhaustive single-byte corruption of the profile container.
  std::size_t flips = 0, caught = 0;
  for (std::size_t i = 0; i < pb.size(); ++i)
    for (int delta = 1; delta < 256; ++delta) {
      std::string bad = pb;
      bad[i] = static_cast<char>(static_cast<unsigned char>(bad[i]) ^ delta);
      ++flips;
      try {
        deserialize_profile(bad);
      } catch (const FormatError&) {
        ++caught;
      }
    }
  expect(flips == caught, "profile corruption detection");

  // Sampled corruption of the larger files through the tool.
  std::size_t cli_flips = 0, cli_caught = 0;
  for (const char* f : {"pk.dfk", "sk1.dfk", "ct.dfk"}) {
    const std::string orig = slurp(dir / "a" / f);
    for (int t = 0; t < 4; ++t) {
      std::string bad = orig;
      const std::size_t pos = rng.uniform_below(bad.size());
      bad[pos] = static_cast<char>(static_cast<unsigned char>(bad[pos]) ^ (1 + rng.uniform_below(255)));
      const fs::path bd = dir / "bad";
      fs::remove_all(bd);
      fs::create_directories(bd);
      for (const char* g : {"pk.dfk", "sk1.dfk", "ct.dfk"}) fs::copy_file(dir / "a" / g, bd / g);
      spit(bd / f, bad);
      ++cli_flips;
      const int rc = run(cli + " decrypt --pk " + (bd / "pk.dfk").string() + " --key " + (bd / "sk1.dfk").string() +
                         " " + (bd / "ct.dfk").string() + " -o " + (bd / "out.bin").string());
      cli_caught += rc == 3 && !fs::exists(bd / "out.bin");
    }
  }
  expect(cli_flips == cli_caught, "tool-level corruption detection");

  fs::remove_all(dir);
  std::string detail = "seeded keygen/encrypt/puncture/decrypt byte-identical, 10 KiB round trip, 5 container kinds "
                       "re-serialized; corruption caught " +
                       std::to_string(caught) + "/" + std::to_string(flips) + " in-process, " +
                       std::to_string(cli_caught) + "/" + std::to_string(cli_flips) + " via the tool";
  for (const auto& f : failures) detail += "; FAILED: " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"end-to-end PE correctness", criterion1},   {"puncture rejection oracle", criterion2},
      {"simulation identity", criterion3},         {"encoding preservation", criterion4},
      {"trapdoor contracts", criterion5},          {"sampler statistics", criterion6},
      {"size accounting", criterion7},             {"equality-family oracle", criterion8},
      {"determinism and container format", criterion9}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << id << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " - "
              << o.detail << " (" << fmt(secs) << " s)" << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
