// Puncturable encryption from the delegatable scheme with equality-test
// circuits: tags are ell-bit values, keys are punctured one tag at a time.
#pragma once

#include <optional>
#include <vector>

#include "lpe/dfkhe.hpp"

namespace lpe {

struct PunctureKey {
  std::vector<u64> tags;  // punctured, in order
  DelegatedKey dk;        // y = 0, circuits f_{t*} for each tag
  std::size_t level() const { return tags.size(); }
};

struct PeCiphertext {
  std::vector<u64> tags;
  Ciphertext ct;
};

// Bits of each tag, tag i at positions i*ell .. i*ell+ell-1.
ZqVector tag_attributes(const std::vector<u64>& tags, std::size_t ell);

std::pair<PublicKey, PunctureKey> pe_key(const Profile& p, RngStream& rng);
PeCiphertext pe_enc(const PublicKey& pk, const Bits& mu, const std::vector<u64>& tags, RngStream& rng,
                    EncTrace* trace = nullptr);
PunctureKey pe_pun(const PublicKey& pk, const PunctureKey& sk, u64 t_star, RngStream& rng);
// Rebuilds a key from its punctured tags and stored basis.
PunctureKey pe_assemble(const PublicKey& pk, std::vector<u64> tags, IntMatrix basis);

// True iff no punctured tag occurs among the ciphertext tags.
bool pe_accepts(const PublicKey& pk, const PunctureKey& sk, const std::vector<u64>& tags);
std::optional<Bits> pe_dec(const PublicKey& pk, const PunctureKey& sk, const PeCiphertext& ct, RngStream& rng);

}  // namespace lpe
