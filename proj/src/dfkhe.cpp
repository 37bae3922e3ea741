#include "lpe/dfkhe.hpp"

#include "lpe/kernels.hpp"

namespace lpe {

namespace {

ZqMatrix uniform_matrix(const Modulus& mod, std::size_t r, std::size_t c, RngStream& rng) {
  ZqMatrix x(r, c);
  for (auto& v : x.data()) v = rng.uniform_below(mod.q());
  return x;
}

IntVector chi_vector(std::size_t len, u64 chi0, RngStream& rng) {
  IntVector e(len);
  for (auto& v : e) v = rng.uniform_range(-static_cast<i64>(chi0), static_cast<i64>(chi0));
  return e;
}

ZqMatrix shifted(const PublicKey& pk, u64 y, const ZqMatrix& bf) {
  const Modulus mod = pk.modulus();
  return add(mod, scale(mod, gadget_matrix(mod, pk.profile.n, pk.profile.m), y % mod.q()), bf);
}

DelegatedKey extend(const PublicKey& pk, const LatticeBasis& t, DelegatedKey base, u64 y, const Circuit& f,
                    RngStream& rng) {
  const Profile& p = pk.profile;
  if (f.num_inputs() != p.wires()) throw InvalidArgument("circuit arity does not match the attribute count");
  if (base.level() >= p.eta_max) throw InvalidArgument("key level would exceed eta_max");
  const Modulus mod = pk.modulus();
  ZqMatrix bf = eval_pk(mod, f, pk.b);
  const ZqMatrix right = shifted(pk, y, bf);
  const LatticeBasis ext = ext_basis_left(t.parent(), right, t);
  base.circuits.push_back(f);
  base.b_f.push_back(std::move(bf));
  base.y = y % mod.q();
  base.t = rand_basis(ext.parent(), ext, p.sigma(base.level()), rng);
  return base;
}

}  // namespace

std::pair<PublicKey, MasterKey> kgen(const Profile& p, RngStream& rng) {
  p.validate();
  const Modulus mod = p.modulus();
  TrapGenResult tg = trap_gen(mod, p.n, p.m, rng);
  PublicKey pk;
  pk.profile = p;
  pk.a = tg.a;
  for (std::size_t i = 0; i < p.wires(); ++i) pk.b.push_back(uniform_matrix(mod, p.n, p.m, rng));
  pk.u = uniform_matrix(mod, p.n, p.m, rng);
  return {std::move(pk), MasterKey{std::move(tg.t)}};
}

DelegatedKey root_key(const MasterKey& msk) { return DelegatedKey{0, {}, {}, msk.t_a}; }

ZqMatrix parent_matrix(const PublicKey& pk, u64 y, const std::vector<ZqMatrix>& b_f) {
  ZqMatrix m = pk.a;
  for (const auto& bf : b_f) m = hconcat(m, shifted(pk, y, bf));
  return m;
}

DelegatedKey khom(const PublicKey& pk, const MasterKey& msk, u64 y, const Circuit& f, RngStream& rng) {
  return extend(pk, msk.t_a, root_key(msk), y, f, rng);
}

DelegatedKey kdel(const PublicKey& pk, const DelegatedKey& dk, u64 y, const Circuit& f, RngStream& rng) {
  if (dk.level() == 0) throw InvalidArgument("kdel: start from a level-1 key (use khom)");
  if (dk.y != y % pk.profile.q) throw InvalidArgument("kdel: y differs from the key's y");
  return extend(pk, dk.t, dk, y, f, rng);
}

DelegatedKey assemble_key(const PublicKey& pk, u64 y, std::vector<Circuit> circuits, IntMatrix basis) {
  const Modulus mod = pk.modulus();
  if (circuits.size() > pk.profile.eta_max) throw InvalidArgument("key level exceeds eta_max");
  std::vector<ZqMatrix> b_f;
  for (const auto& f : circuits) {
    if (f.num_inputs() != pk.profile.wires()) throw InvalidArgument("circuit arity does not match the attribute count");
    b_f.push_back(eval_pk(mod, f, pk.b));
  }
  ZqMatrix parent = parent_matrix(pk, y, b_f);
  LatticeBasis t(mod, std::move(parent), std::move(basis));
  return DelegatedKey{y % mod.q(), std::move(circuits), std::move(b_f), std::move(t)};
}

Ciphertext enc(const PublicKey& pk, const Bits& mu, const ZqVector& attrs, RngStream& rng, EncTrace* trace) {
  const Profile& p = pk.profile;
  const Modulus mod = pk.modulus();
  if (mu.size() != p.m) throw InvalidArgument("enc: plaintext must have m bits");
  if (attrs.size() != p.wires()) throw InvalidArgument("enc: attribute count mismatch");
  for (auto b : mu)
    if (b > 1) throw InvalidArgument("enc: plaintext entries must be bits");

  ZqVector s(p.n);
  for (auto& v : s) v = rng.uniform_below(mod.q());
  const IntVector e_in = chi_vector(p.m, p.chi0, rng);
  const IntVector e_out = chi_vector(p.m, p.chi0, rng);
  ZqVector e_in_q(p.m);
  for (std::size_t i = 0; i < p.m; ++i) e_in_q[i] = mod.reduce(e_in[i]);

  Ciphertext ct;
  ct.attrs = attrs;
  ct.c_in = mul_t(mod, pk.a, s);
  for (std::size_t i = 0; i < p.m; ++i) ct.c_in[i] = mod.add(ct.c_in[i], e_in_q[i]);

  std::vector<IntMatrix> smats;
  for (std::size_t w = 0; w < p.wires(); ++w) {
    IntMatrix sm(p.m, p.m);
    for (auto& v : sm.data()) v = (rng.next_u64() & 1) ? 1 : -1;
    ZqVector c = mul_t(mod, shifted(pk, attrs[w], pk.b[w]), s);
    const ZqVector noise = mul_t(mod, sm, e_in_q);
    for (std::size_t i = 0; i < p.m; ++i) c[i] = mod.add(c[i], noise[i]);
    ct.c.push_back(std::move(c));
    if (trace) smats.push_back(std::move(sm));
  }

  const u64 half = (mod.q() + 1) / 2;
  ct.c_out = mul_t(mod, pk.u, s);
  for (std::size_t i = 0; i < p.m; ++i)
    ct.c_out[i] = mod.add(mod.add(ct.c_out[i], mod.reduce(e_out[i])), mu[i] ? half : 0);

  if (trace) *trace = EncTrace{std::move(s), e_in, e_out, std::move(smats)};
  return ct;
}

std::vector<ZqVector> ext_eval(const PublicKey& pk, const std::vector<Circuit>& fs, const Ciphertext& ct) {
  const Modulus mod = pk.modulus();
  std::vector<ZqVector> out;
  for (const auto& f : fs) out.push_back(eval_ct(mod, f, ct.attrs, pk.b, ct.c));
  return out;
}

Decryptor::Decryptor(const PublicKey& pk, const DelegatedKey& dk, RngStream& rng) : pk_(pk), dk_(dk) {
  const Modulus mod = pk.modulus();
  const ZqMatrix parent = parent_matrix(pk, dk.y, dk.b_f);
  if (!(parent == dk.t.parent())) throw InvalidArgument("key does not belong to this public key");
  for (std::size_t j = 0; j < dk.circuits.size(); ++j) {
    PkTrace tr;
    eval_pk(mod, dk.circuits[j], pk.b, &tr);
    if (!(tr.b_f == dk.b_f[j])) throw InternalFailure("stored B_f differs from its recomputation");
    traces_.push_back(std::move(tr));
  }
  r_ = sample_pre(parent, dk.t, pk.u, pk.profile.sigma(dk.level()), rng);
}

bool Decryptor::accepts(const ZqVector& attrs) const {
  const Modulus mod = pk_.modulus();
  for (const auto& f : dk_.circuits)
    if (eval_value(mod, f, attrs) != dk_.y) return false;
  return true;
}

std::optional<Bits> Decryptor::decrypt(const Ciphertext& ct, std::vector<i64>* mubar) const {
  if (!accepts(ct.attrs)) return std::nullopt;
  return decrypt_unchecked(ct, mubar);
}

Bits Decryptor::decrypt_unchecked(const Ciphertext& ct, std::vector<i64>* mubar) const {
  const Modulus mod = pk_.modulus();
  const std::size_t m = pk_.profile.m;
  if (ct.c_in.size() != m || ct.c_out.size() != m || ct.c.size() != pk_.profile.wires() ||
      ct.attrs.size() != pk_.profile.wires())
    throw InvalidArgument("ciphertext shape does not match the profile");
  ZqVector stacked = ct.c_in;
  for (std::size_t j = 0; j < dk_.circuits.size(); ++j) {
    const ZqVector cf = eval_ct(mod, dk_.circuits[j], ct.attrs, traces_[j], ct.c);
    stacked.insert(stacked.end(), cf.begin(), cf.end());
  }
  const ZqVector rc = mul_t(mod, r_, stacked);
  Bits mu(m);
  if (mubar) mubar->assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const i64 v = mod.centered(mod.sub(ct.c_out[i], rc[i]));
    if (mubar) (*mubar)[i] = v;
    const u128 a = static_cast<u128>(v < 0 ? -v : v);
    mu[i] = 4 * a < mod.q() ? 0 : 1;
  }
  return mu;
}

IntVector encoding_error(const PublicKey& pk, const ZqMatrix& b, u64 x, const ZqVector& c, const ZqVector& s) {
  const Modulus mod = pk.modulus();
  const ZqVector clean = mul_t(mod, shifted(pk, x, b), s);
  if (clean.size() != c.size()) throw InvalidArgument("encoding_error: length mismatch");
  IntVector e(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) e[i] = mod.centered(mod.sub(c[i], clean[i]));
  return e;
}

std::optional<Bits> dec(const PublicKey& pk, const DelegatedKey& dk, const Ciphertext& ct, RngStream& rng) {
  const Modulus mod = pk.modulus();
  for (const auto& f : dk.circuits)
    if (eval_value(mod, f, ct.attrs) != dk.y) return std::nullopt;
  return Decryptor(pk, dk, rng).decrypt_unchecked(ct);
}

}  // namespace lpe
