#include "lpe/pe.hpp"

namespace lpe {

namespace {

void check_tags(const Profile& p, const std::vector<u64>& tags) {
  if (tags.size() != p.d)
    throw InvalidArgument("expected exactly " + std::to_string(p.d) + " tags, got " + std::to_string(tags.size()));
  for (u64 t : tags)
    if (t >> p.ell) throw InvalidArgument("tag " + std::to_string(t) + " is outside [0, 2^" + std::to_string(p.ell) + ")");
}

}  // namespace

ZqVector tag_attributes(const std::vector<u64>& tags, std::size_t ell) {
  ZqVector x;
  x.reserve(tags.size() * ell);
  for (u64 t : tags)
    for (std::size_t j = 0; j < ell; ++j) x.push_back((t >> j) & 1);
  return x;
}

std::pair<PublicKey, PunctureKey> pe_key(const Profile& p, RngStream& rng) {
  auto [pk, msk] = kgen(p, rng);
  PunctureKey sk{{}, root_key(msk)};
  return {std::move(pk), std::move(sk)};
}

PeCiphertext pe_enc(const PublicKey& pk, const Bits& mu, const std::vector<u64>& tags, RngStream& rng,
                    EncTrace* trace) {
  check_tags(pk.profile, tags);
  return PeCiphertext{tags, enc(pk, mu, tag_attributes(tags, pk.profile.ell), rng, trace)};
}

PunctureKey pe_pun(const PublicKey& pk, const PunctureKey& sk, u64 t_star, RngStream& rng) {
  const Profile& p = pk.profile;
  if (sk.level() >= p.eta_max) throw InvalidArgument("key is already punctured eta_max times");
  if (t_star >> p.ell) throw InvalidArgument("tag outside the tag space");
  const Circuit f = build_f_tstar(t_star, p.d, p.ell);
  std::vector<u64> tags = sk.tags;
  tags.push_back(t_star);
  DelegatedKey dk = sk.level() == 0 ? khom(pk, MasterKey{sk.dk.t}, 0, f, rng) : kdel(pk, sk.dk, 0, f, rng);
  return PunctureKey{std::move(tags), std::move(dk)};
}

PunctureKey pe_assemble(const PublicKey& pk, std::vector<u64> tags, IntMatrix basis) {
  const Profile& p = pk.profile;
  std::vector<Circuit> fs;
  for (u64 t : tags) {
    if (t >> p.ell) throw InvalidArgument("punctured tag outside the tag space");
    fs.push_back(build_f_tstar(t, p.d, p.ell));
  }
  return PunctureKey{std::move(tags), assemble_key(pk, 0, std::move(fs), std::move(basis))};
}

bool pe_accepts(const PublicKey& pk, const PunctureKey& sk, const std::vector<u64>& tags) {
  check_tags(pk.profile, tags);
  const Modulus mod = pk.modulus();
  const ZqVector x = tag_attributes(tags, pk.profile.ell);
  for (const auto& f : sk.dk.circuits)
    if (eval_value(mod, f, x) != 0) return false;
  return true;
}

std::optional<Bits> pe_dec(const PublicKey& pk, const PunctureKey& sk, const PeCiphertext& ct, RngStream& rng) {
  if (!pe_accepts(pk, sk, ct.tags)) return std::nullopt;
  if (!(ct.ct.attrs == tag_attributes(ct.tags, pk.profile.ell)))
    throw InvalidArgument("ciphertext attributes do not match its tags");
  return dec(pk, sk.dk, ct.ct, rng);
}

}  // namespace lpe
