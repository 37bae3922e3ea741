#include <doctest.h>

#include <cmath>

#include "lpe/dfkhe.hpp"
#include "support.hpp"

using namespace lpe;
using namespace lpe::test;

namespace {

Profile small_profile() { return make_profile("small", 4, 521, 2, 4, 2, 2); }

Profile tiny() { return load_profile(std::string(LPE_PROFILE_DIR) + "/tiny.profile"); }

Circuit identity_circuit(std::size_t wires, std::size_t w) {
  Circuit c(wires);
  c.set_output(c.input(w));
  return c;
}

double max_col_norm(const IntMatrix& t) {
  double worst = 0;
  for (std::size_t j = 0; j < t.cols(); ++j) worst = std::max(worst, col_norm(t, j));
  return worst;
}

Bits random_bits(std::size_t m, RngStream& rng) {
  Bits mu(m);
  for (auto& b : mu) b = rng.next_u64() & 1;
  return mu;
}

}  // namespace

TEST_CASE("kgen shapes") {
  const Profile p = small_profile();
  CHECK(p.m == 80);
  RngStream r1 = RngStream::from_u64(81), r2 = RngStream::from_u64(82);
  auto [pk, msk] = kgen(p, r1);
  CHECK(pk.a.rows() == 4);
  CHECK(pk.a.cols() == 80);
  CHECK(pk.u.rows() == 4);
  CHECK(pk.u.cols() == 80);
  REQUIRE(pk.b.size() == 8);
  for (const auto& b : pk.b) CHECK((b.rows() == 4 && b.cols() == 80));
  CHECK(is_zero(mul(pk.modulus(), pk.a, msk.t_a.matrix())));
  auto [pk2, msk2] = kgen(p, r2);
  CHECK_FALSE(pk2.b == pk.b);
}

TEST_CASE("khom and kdel produce bases of the extended lattice") {
  const Profile p = small_profile();
  const Modulus mod = p.modulus();
  RngStream rng = RngStream::from_u64(83);
  auto [pk, msk] = kgen(p, rng);
  const Circuit f = build_f_tstar(3, p.d, p.ell);

  const DelegatedKey k1 = khom(pk, msk, 0, f, rng);
  CHECK(k1.level() == 1);
  CHECK(k1.t.parent() == parent_matrix(pk, 0, {eval_pk(mod, f, pk.b)}));
  CHECK(is_zero(mul(mod, k1.t.parent(), k1.t.matrix())));
  CHECK(k1.t.hnf() == kernel_lattice(mod, k1.t.parent()));
  CHECK(k1.t.gs_norm() <= p.sigma(1) * std::sqrt(2.0 * p.m));
  CHECK(max_col_norm(k1.t.matrix()) <= p.sigma(1) * std::sqrt(2.0 * p.m));

  // The same circuit twice is allowed.
  const DelegatedKey k2 = kdel(pk, k1, 0, f, rng);
  CHECK(k2.level() == 2);
  CHECK(is_zero(mul(mod, k2.t.parent(), k2.t.matrix())));
  CHECK(k2.t.generates_kernel());
  CHECK(max_col_norm(k2.t.matrix()) <= p.sigma(2) * std::sqrt(3.0 * p.m));
  const double slack = 1.5;
  CHECK(k2.t.gs_norm() / k1.t.gs_norm() <= sigma_ratio(p.m) * std::sqrt(2.0) * slack);

  CHECK_THROWS_AS(kdel(pk, k2, 0, f, rng), InvalidArgument);     // beyond eta_max
  CHECK_THROWS_AS(kdel(pk, k1, 1, f, rng), InvalidArgument);     // y differs
  CHECK_THROWS_AS(kdel(pk, root_key(msk), 0, f, rng), InvalidArgument);
  CHECK_THROWS_AS(khom(pk, msk, 0, identity_circuit(3, 0), rng), InvalidArgument);

  const DelegatedKey again = assemble_key(pk, 0, k2.circuits, k2.t.matrix());
  CHECK(again.t.parent() == k2.t.parent());
  CHECK(again.b_f == k2.b_f);
}

TEST_CASE("encryption noise shapes") {
  const Profile p = small_profile();
  RngStream rng = RngStream::from_u64(84);
  auto [pk, msk] = kgen(p, rng);
  const Bits mu = random_bits(p.m, rng);
  ZqVector attrs(p.wires());
  for (auto& a : attrs) a = rng.uniform_below(p.q);
  EncTrace tr;
  const Ciphertext ct = enc(pk, mu, attrs, rng, &tr);

  const Modulus mod = pk.modulus();
  const ZqVector clean_in = mul_t(mod, pk.a, tr.s);
  for (std::size_t j = 0; j < p.m; ++j) CHECK(std::abs(mod.centered(mod.sub(ct.c_in[j], clean_in[j]))) <= i64(p.chi0));
  for (std::size_t w = 0; w < p.wires(); ++w) {
    const IntVector e = encoding_error(pk, pk.b[w], attrs[w], ct.c[w], tr.s);
    for (i64 v : e) CHECK(std::abs(v) <= i64(p.m * p.chi0));
  }

  RngStream other = RngStream::from_u64(85);
  CHECK_FALSE(enc(pk, mu, attrs, other).c_in == ct.c_in);
  CHECK_THROWS_AS(enc(pk, Bits(p.m - 1), attrs, rng), InvalidArgument);
  CHECK_THROWS_AS(enc(pk, mu, ZqVector(3), rng), InvalidArgument);
}

TEST_CASE("ext_eval") {
  const Profile p = small_profile();
  RngStream rng = RngStream::from_u64(86);
  auto [pk, msk] = kgen(p, rng);
  ZqVector attrs(p.wires(), 1);
  EncTrace tr;
  const Ciphertext ct = enc(pk, random_bits(p.m, rng), attrs, rng, &tr);
  CHECK(ext_eval(pk, {}, ct).empty());
  const auto one = ext_eval(pk, {identity_circuit(p.wires(), 1)}, ct);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == ct.c[1]);

  const Modulus mod = pk.modulus();
  const Circuit f = build_f_tstar(15, p.d, p.ell);
  const ZqVector cf = ext_eval(pk, {f}, ct)[0];
  const IntVector e = encoding_error(pk, eval_pk(mod, f, pk.b), eval_value(mod, f, attrs), cf, tr.s);
  const double bound = noise_bound(mod, f, attrs, double(p.m * p.chi0), p.m);
  for (i64 v : e) CHECK(double(std::abs(v)) <= bound);
}

TEST_CASE("decryption round trip on the tiny profile") {
  const Profile p = tiny();
  RngStream rng = RngStream::from_u64(87);
  auto [pk, msk] = kgen(p, rng);
  const Circuit f = build_f_tstar(2, p.d, p.ell);
  const DelegatedKey k1 = khom(pk, msk, 0, f, rng);
  const Decryptor d0(pk, root_key(msk), rng), d1(pk, k1, rng);

  auto attrs_of = [&](u64 a, u64 b) {
    ZqVector x;
    for (u64 t : {a, b})
      for (std::size_t j = 0; j < p.ell; ++j) x.push_back((t >> j) & 1);
    return x;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const Bits mu = random_bits(p.m, rng);
    const Ciphertext ct = enc(pk, mu, attrs_of(5, 7), rng);
    CHECK(d0.decrypt(ct) == mu);
    CHECK(d1.decrypt(ct) == mu);
  }
  const Bits zeros(p.m, 0);
  CHECK(dec(pk, k1, enc(pk, zeros, attrs_of(1, 3), rng), rng) == zeros);

  const Ciphertext hit = enc(pk, zeros, attrs_of(2, 3), rng);
  CHECK_FALSE(d1.accepts(hit.attrs));
  CHECK_FALSE(d1.decrypt(hit).has_value());
  CHECK_FALSE(dec(pk, k1, hit, rng).has_value());

  std::vector<i64> mubar;
  const Ciphertext ok = enc(pk, zeros, attrs_of(0, 0), rng);
  CHECK(d1.decrypt_unchecked(ok, &mubar) == zeros);
  for (i64 v : mubar) CHECK(4 * static_cast<u128>(std::abs(v)) < p.q);
}
