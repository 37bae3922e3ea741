// Binary container "DFK1": magic, version, kind, header, payload, CRC32.
// All integers little-endian.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpe/pe.hpp"

namespace lpe {

enum class ContainerKind : std::uint8_t { Profile = 1, PublicKey = 2, PunctureKey = 3, Ciphertext = 4 };

struct ContainerHeader {
  ContainerKind kind = ContainerKind::Profile;
  std::uint32_t n = 0;
  u64 q = 0;
  std::uint32_t d = 0, ell = 0, eta = 0, block_count = 0;
};

constexpr std::uint16_t kContainerVersion = 1;

std::string pack_container(const ContainerHeader& h, const std::string& payload);
// Throws FormatError on bad magic, version, kind, truncation or CRC.
ContainerHeader unpack_container(const std::string& bytes, std::string& payload);

std::string serialize_profile(const Profile& p);
Profile deserialize_profile(const std::string& bytes);

std::string serialize_public_key(const PublicKey& pk);
PublicKey deserialize_public_key(const std::string& bytes);

std::string serialize_puncture_key(const PublicKey& pk, const PunctureKey& sk);
PunctureKey deserialize_puncture_key(const PublicKey& pk, const std::string& bytes);

struct CiphertextFile {
  std::vector<u64> tags;
  std::uint32_t final_len = 0;  // bytes used in the last block
  std::vector<Ciphertext> blocks;
};

std::string serialize_ciphertexts(const PublicKey& pk, const CiphertextFile& f);
CiphertextFile deserialize_ciphertexts(const PublicKey& pk, const std::string& bytes);

}  // namespace lpe
