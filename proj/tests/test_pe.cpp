#include <doctest.h>

#include "lpe/pe.hpp"

using namespace lpe;

namespace {

Profile shipped(const std::string& name) { return load_profile(std::string(LPE_PROFILE_DIR) + "/" + name + ".profile"); }

Bits random_bits(std::size_t m, RngStream& rng) {
  Bits mu(m);
  for (auto& b : mu) b = rng.next_u64() & 1;
  return mu;
}

}  // namespace

TEST_CASE("tag encoding and arity") {
  const Profile p = shipped("toy");
  RngStream rng = RngStream::from_u64(91);
  auto [pk, sk] = pe_key(p, rng);
  CHECK(pk.b.size() == p.d * p.ell);
  CHECK(sk.level() == 0);

  const ZqVector x = tag_attributes({3, 7}, p.ell);
  REQUIRE(x.size() == 16);
  const u64 expect[16] = {1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < 16; ++i) CHECK(x[i] == expect[i]);

  const Bits mu = random_bits(p.m, rng);
  const PeCiphertext ct = pe_enc(pk, mu, {3, 7}, rng);
  CHECK(ct.ct.attrs == x);
  CHECK_THROWS_AS(pe_enc(pk, mu, {3}, rng), InvalidArgument);
  CHECK_THROWS_AS(pe_enc(pk, mu, {3, 7, 1}, rng), InvalidArgument);
  CHECK_THROWS_AS(pe_enc(pk, mu, {3, 256}, rng), InvalidArgument);

  // Logical size: D + 2 vectors of m entries, k bits each.
  const std::size_t entries = ct.ct.c_in.size() + ct.ct.c_out.size() + ct.ct.c.size() * p.m;
  CHECK(double(entries * p.k) == size_formulas(p, 0).ct_bits);
  CHECK(double(entries * p.k) == double((p.wires() + 2) * p.m * p.k));

  RngStream drng = RngStream::from_u64(92);
  CHECK(pe_dec(pk, sk, ct, drng) == mu);
}

TEST_CASE("puncturing on the toy profile") {
  const Profile p = shipped("toy");
  RngStream rng = RngStream::from_u64(93);
  auto [pk, sk0] = pe_key(p, rng);
  const PunctureKey sk1 = pe_pun(pk, sk0, 5, rng);
  CHECK(sk1.tags == std::vector<u64>{5});

  const Decryptor d(pk, sk1.dk, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const Bits mu = random_bits(p.m, rng);
    const PeCiphertext ok = pe_enc(pk, mu, {4, 9}, rng);
    CHECK(d.decrypt(ok.ct) == mu);
  }
  CHECK(pe_accepts(pk, sk1, {4, 9}));
  CHECK_FALSE(pe_accepts(pk, sk1, {5, 9}));
  const PeCiphertext bad = pe_enc(pk, random_bits(p.m, rng), {5, 9}, rng);
  CHECK_FALSE(pe_dec(pk, sk1, bad, rng).has_value());
  CHECK_THROWS_AS(pe_pun(pk, sk0, 256, rng), InvalidArgument);
}

TEST_CASE("puncturing the same tag twice on the tiny profile") {
  const Profile p = shipped("tiny");
  RngStream rng = RngStream::from_u64(94);
  auto [pk, sk0] = pe_key(p, rng);
  const PunctureKey sk1 = pe_pun(pk, sk0, 6, rng);
  const PunctureKey sk2 = pe_pun(pk, sk1, 6, rng);
  CHECK(sk2.tags == std::vector<u64>{6, 6});
  REQUIRE(sk2.dk.circuits.size() == 2);
  CHECK(sk2.dk.circuits[0].dump() == sk2.dk.circuits[1].dump());
  CHECK_THROWS_AS(pe_pun(pk, sk2, 1, rng), InvalidArgument);

  const Bits mu = random_bits(p.m, rng);
  CHECK(pe_dec(pk, sk2, pe_enc(pk, mu, {1, 7}, rng), rng) == mu);
  CHECK_FALSE(pe_dec(pk, sk2, pe_enc(pk, mu, {6, 7}, rng), rng).has_value());

  const PunctureKey rebuilt = pe_assemble(pk, sk2.tags, sk2.dk.t.matrix());
  CHECK(rebuilt.dk.t.parent() == sk2.dk.t.parent());

  // Attributes that disagree with the listed tags are refused.
  PeCiphertext forged = pe_enc(pk, mu, {1, 7}, rng);
  forged.tags = {2, 7};
  CHECK_THROWS_AS(pe_dec(pk, sk2, forged, rng), InvalidArgument);
}
