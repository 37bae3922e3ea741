#include "lpe/container.hpp"

#include <zlib.h>

#include <cstring>
#include <sstream>

namespace lpe {

namespace {

constexpr char kMagic[4] = {'D', 'F', 'K', '1'};

template <class T>
void put(std::string& s, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) s.push_back(static_cast<char>((static_cast<u64>(v) >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& s, std::size_t pos = 0) : s_(s), pos_(pos) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > s_.size()) throw FormatError("container truncated");
    u64 v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<u64>(static_cast<unsigned char>(s_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& s_;
  std::size_t pos_;
};

std::uint32_t crc(const std::string& s, std::size_t len) {
  return static_cast<std::uint32_t>(::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(len)));
}

std::uint32_t u32_of(std::size_t v, const char* what) {
  if (v > 0xffffffffu) throw InvalidArgument(std::string(what) + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

ContainerHeader header_for(const Profile& p, ContainerKind kind, std::size_t eta, std::size_t blocks) {
  ContainerHeader h;
  h.kind = kind;
  h.n = u32_of(p.n, "n");
  h.q = p.q;
  h.d = u32_of(p.d, "d");
  h.ell = u32_of(p.ell, "ell");
  h.eta = u32_of(eta, "eta");
  h.block_count = u32_of(blocks, "block count");
  return h;
}

void expect_kind(const ContainerHeader& h, ContainerKind k) {
  if (h.kind != k) throw FormatError("container holds kind " + std::to_string(static_cast<int>(h.kind)) +
                                     ", expected " + std::to_string(static_cast<int>(k)));
}

void expect_profile(const ContainerHeader& h, const Profile& p) {
  if (h.n != p.n || h.q != p.q || h.d != p.d || h.ell != p.ell)
    throw FormatError("container header does not match the public key parameters");
}

void expect_end(std::istringstream& is, const std::string& payload) {
  if (static_cast<std::size_t>(is.tellg()) != payload.size())
    throw FormatError("container payload has trailing bytes");
}

void put_string(std::ostream& os, const std::string& s) {
  std::string h;
  put<std::uint32_t>(h, u32_of(s.size(), "string"));
  os << h << s;
}

template <class T>
T read_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw FormatError("container payload truncated");
  u64 v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return static_cast<T>(v);
}

std::string get_string(std::istream& is, std::size_t cap) {
  const auto len = read_le<std::uint32_t>(is);
  if (len > cap) throw FormatError("container string too long");
  std::string s(len, '\0');
  if (!is.read(s.data(), len)) throw FormatError("container payload truncated");
  return s;
}

void put_u64s(std::ostream& os, const std::vector<u64>& v) {
  std::string h;
  put<std::uint32_t>(h, u32_of(v.size(), "list"));
  for (u64 x : v) put<u64>(h, x);
  os << h;
}

std::vector<u64> get_u64s(std::istream& is, std::size_t cap) {
  const auto len = read_le<std::uint32_t>(is);
  if (len > cap) throw FormatError("container list too long");
  std::vector<u64> v(len);
  for (auto& x : v) x = read_le<u64>(is);
  return v;
}

void expect_shape(const ZqMatrix& m, std::size_t r, std::size_t c) {
  if (m.rows() != r || m.cols() != c) throw FormatError("matrix shape does not match the header");
}

}  // namespace

std::string pack_container(const ContainerHeader& h, const std::string& payload) {
  std::string s(kMagic, 4);
  put<std::uint16_t>(s, kContainerVersion);
  put<std::uint8_t>(s, static_cast<std::uint8_t>(h.kind));
  put<std::uint32_t>(s, h.n);
  put<u64>(s, h.q);
  put<std::uint32_t>(s, h.d);
  put<std::uint32_t>(s, h.ell);
  put<std::uint32_t>(s, h.eta);
  put<std::uint32_t>(s, h.block_count);
  s += payload;
  put<std::uint32_t>(s, crc(s, s.size()));
  return s;
}

ContainerHeader unpack_container(const std::string& bytes, std::string& payload) {
  constexpr std::size_t kHead = 4 + 2 + 1 + 4 + 8 + 4 * 4;
  if (bytes.size() < kHead + 4) throw FormatError("container truncated (CRC check impossible)");
  const std::size_t body = bytes.size() - 4;
  Reader tail(bytes, body);
  if (tail.get<std::uint32_t>() != crc(bytes, body)) throw FormatError("container CRC mismatch");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("not a DFK1 container");
  Reader r(bytes, 4);
  if (r.get<std::uint16_t>() != kContainerVersion) throw FormatError("unsupported container version");
  ContainerHeader h;
  const auto kind = r.get<std::uint8_t>();
  if (kind < 1 || kind > 4) throw FormatError("unknown container kind");
  h.kind = static_cast<ContainerKind>(kind);
  h.n = r.get<std::uint32_t>();
  h.q = r.get<u64>();
  h.d = r.get<std::uint32_t>();
  h.ell = r.get<std::uint32_t>();
  h.eta = r.get<std::uint32_t>();
  h.block_count = r.get<std::uint32_t>();
  payload = bytes.substr(r.pos(), body - r.pos());
  return h;
}

std::string serialize_profile(const Profile& p) {
  std::ostringstream os;
  put_string(os, profile_to_text(p));
  return pack_container(header_for(p, ContainerKind::Profile, p.eta_max, 0), os.str());
}

Profile deserialize_profile(const std::string& bytes) {
  std::string payload;
  const ContainerHeader h = unpack_container(bytes, payload);
  expect_kind(h, ContainerKind::Profile);
  std::istringstream is(payload);
  Profile p;
  try {
    p = profile_from_text(get_string(is, 1 << 20));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("embedded profile: ") + e.what());
  }
  expect_end(is, payload);
  expect_profile(h, p);
  return p;
}

std::string serialize_public_key(const PublicKey& pk) {
  std::ostringstream os;
  put_string(os, profile_to_text(pk.profile));
  write_matrix(os, pk.a);
  write_matrix(os, pk.u);
  for (const auto& b : pk.b) write_matrix(os, b);
  return pack_container(header_for(pk.profile, ContainerKind::PublicKey, pk.profile.eta_max, 0), os.str());
}

PublicKey deserialize_public_key(const std::string& bytes) {
  std::string payload;
  const ContainerHeader h = unpack_container(bytes, payload);
  expect_kind(h, ContainerKind::PublicKey);
  std::istringstream is(payload);
  PublicKey pk;
  try {
    pk.profile = profile_from_text(get_string(is, 1 << 20));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("embedded profile: ") + e.what());
  }
  expect_profile(h, pk.profile);
  const Modulus mod = pk.modulus();
  const std::size_t n = pk.profile.n, m = pk.profile.m;
  pk.a = read_zq_matrix(is, mod);
  expect_shape(pk.a, n, m);
  pk.u = read_zq_matrix(is, mod);
  expect_shape(pk.u, n, m);
  for (std::size_t i = 0; i < pk.profile.wires(); ++i) {
    pk.b.push_back(read_zq_matrix(is, mod));
    expect_shape(pk.b.back(), n, m);
  }
  expect_end(is, payload);
  return pk;
}

std::string serialize_puncture_key(const PublicKey& pk, const PunctureKey& sk) {
  std::ostringstream os;
  put_u64s(os, sk.tags);
  for (const auto& b : sk.dk.b_f) write_matrix(os, b);
  write_matrix(os, sk.dk.t.matrix());
  return pack_container(header_for(pk.profile, ContainerKind::PunctureKey, sk.level(), 0), os.str());
}

PunctureKey deserialize_puncture_key(const PublicKey& pk, const std::string& bytes) {
  std::string payload;
  const ContainerHeader h = unpack_container(bytes, payload);
  expect_kind(h, ContainerKind::PunctureKey);
  expect_profile(h, pk.profile);
  std::istringstream is(payload);
  const Modulus mod = pk.modulus();
  std::vector<u64> tags = get_u64s(is, pk.profile.eta_max);
  if (tags.size() != h.eta) throw FormatError("puncture count does not match the header level");
  std::vector<ZqMatrix> b_eq;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    b_eq.push_back(read_zq_matrix(is, mod));
    expect_shape(b_eq.back(), pk.profile.n, pk.profile.m);
  }
  IntMatrix t = read_int_matrix(is);
  expect_end(is, payload);
  const std::size_t N = (tags.size() + 1) * pk.profile.m;
  if (t.rows() != N || t.cols() != N) throw FormatError("key basis has the wrong shape");
  auto assemble = [&] {
    try {
      return pe_assemble(pk, std::move(tags), std::move(t));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("puncture key does not match the public key: ") + e.what());
    }
  };
  PunctureKey sk = assemble();
  if (sk.dk.b_f != b_eq) throw FormatError("stored B_eq differs from its recomputation");
  return sk;
}

std::string serialize_ciphertexts(const PublicKey& pk, const CiphertextFile& f) {
  const Profile& p = pk.profile;
  std::ostringstream os;
  std::string h;
  put<std::uint32_t>(h, f.final_len);
  os << h;
  put_u64s(os, f.tags);
  for (const auto& ct : f.blocks) {
    ZqMatrix m(p.wires() + 2, p.m);
    auto put_row = [&](std::size_t r, const ZqVector& v) {
      if (v.size() != p.m) throw InvalidArgument("ciphertext vector length mismatch");
      std::copy(v.begin(), v.end(), m.row(r));
    };
    put_row(0, ct.c_in);
    for (std::size_t i = 0; i < p.wires(); ++i) put_row(1 + i, ct.c.at(i));
    put_row(p.wires() + 1, ct.c_out);
    write_matrix(os, m);
  }
  return pack_container(header_for(p, ContainerKind::Ciphertext, 0, f.blocks.size()), os.str());
}

CiphertextFile deserialize_ciphertexts(const PublicKey& pk, const std::string& bytes) {
  const Profile& p = pk.profile;
  std::string payload;
  const ContainerHeader h = unpack_container(bytes, payload);
  expect_kind(h, ContainerKind::Ciphertext);
  expect_profile(h, p);
  std::istringstream is(payload);
  CiphertextFile f;
  f.final_len = read_le<std::uint32_t>(is);
  if (f.final_len > p.m / 8) throw FormatError("final block length exceeds the block size");
  f.tags = get_u64s(is, p.d);
  if (f.tags.size() != p.d) throw FormatError("ciphertext carries the wrong number of tags");
  for (u64 t : f.tags)
    if (t >> p.ell) throw FormatError("ciphertext tag outside the tag space");
  const ZqVector attrs = tag_attributes(f.tags, p.ell);
  const Modulus mod = pk.modulus();
  for (std::uint32_t b = 0; b < h.block_count; ++b) {
    const ZqMatrix m = read_zq_matrix(is, mod);
    expect_shape(m, p.wires() + 2, p.m);
    Ciphertext ct;
    ct.attrs = attrs;
    auto row = [&](std::size_t r) { return ZqVector(m.row(r), m.row(r) + p.m); };
    ct.c_in = row(0);
    for (std::size_t i = 0; i < p.wires(); ++i) ct.c.push_back(row(1 + i));
    ct.c_out = row(p.wires() + 1);
    f.blocks.push_back(std::move(ct));
  }
  expect_end(is, payload);
  return f;
}

}  // namespace lpe
