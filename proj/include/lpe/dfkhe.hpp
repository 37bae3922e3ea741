// Delegatable key-homomorphic encryption over plain LWE.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lpe/circuit.hpp"
#include "lpe/params.hpp"
#include "lpe/rng.hpp"
#include "lpe/trapdoor.hpp"

namespace lpe {

using Bits = std::vector<std::uint8_t>;

struct PublicKey {
  Profile profile;
  ZqMatrix a;
  std::vector<ZqMatrix> b;  // one per attribute wire
  ZqMatrix u;
  Modulus modulus() const { return profile.modulus(); }
};

struct MasterKey {
  LatticeBasis t_a;
};

// Key for [A | yG + B_f1 | ... | yG + B_fk]; level 0 is the master trapdoor.
struct DelegatedKey {
  u64 y = 0;
  std::vector<Circuit> circuits;
  std::vector<ZqMatrix> b_f;
  LatticeBasis t;
  std::size_t level() const { return circuits.size(); }
};

struct Ciphertext {
  ZqVector attrs;
  ZqVector c_in;
  std::vector<ZqVector> c;
  ZqVector c_out;
};

// Secrets of one encryption, for instrumented tests.
struct EncTrace {
  ZqVector s;
  IntVector e_in, e_out;
  std::vector<IntMatrix> s_mats;
};

std::pair<PublicKey, MasterKey> kgen(const Profile& p, RngStream& rng);
DelegatedKey root_key(const MasterKey& msk);

// [A | yG + B_f1 | ... ] for the given evaluated matrices.
ZqMatrix parent_matrix(const PublicKey& pk, u64 y, const std::vector<ZqMatrix>& b_f);

DelegatedKey khom(const PublicKey& pk, const MasterKey& msk, u64 y, const Circuit& f, RngStream& rng);
DelegatedKey kdel(const PublicKey& pk, const DelegatedKey& dk, u64 y, const Circuit& f, RngStream& rng);

// Rebuilds a key from stored parts; the parent matrix is recomputed from
// (pk, y, circuits) and checked against the basis.
DelegatedKey assemble_key(const PublicKey& pk, u64 y, std::vector<Circuit> circuits, IntMatrix basis);

Ciphertext enc(const PublicKey& pk, const Bits& mu, const ZqVector& attrs, RngStream& rng, EncTrace* trace = nullptr);

std::vector<ZqVector> ext_eval(const PublicKey& pk, const std::vector<Circuit>& fs, const Ciphertext& ct);

// Decryption with the preimage R drawn once. dec() draws a fresh R per call;
// a Decryptor reuses it across ciphertexts.
class Decryptor {
 public:
  Decryptor(const PublicKey& pk, const DelegatedKey& dk, RngStream& rng);

  // True iff every circuit evaluates to y on the attributes.
  bool accepts(const ZqVector& attrs) const;
  std::optional<Bits> decrypt(const Ciphertext& ct, std::vector<i64>* mubar = nullptr) const;
  // Skips the circuit check; test hook for the mismatched-attribute branch.
  Bits decrypt_unchecked(const Ciphertext& ct, std::vector<i64>* mubar = nullptr) const;

  const IntMatrix& preimage() const { return r_; }

 private:
  PublicKey pk_;
  DelegatedKey dk_;
  std::vector<PkTrace> traces_;
  IntMatrix r_;
};

// Centered c - (x G + B)^T s: the noise carried by an encoding.
IntVector encoding_error(const PublicKey& pk, const ZqMatrix& b, u64 x, const ZqVector& c, const ZqVector& s);

std::optional<Bits> dec(const PublicKey& pk, const DelegatedKey& dk, const Ciphertext& ct, RngStream& rng);

}  // namespace lpe
