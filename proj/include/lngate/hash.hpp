#ifndef LNGATE_HASH_HPP_INCLUDED
#define LNGATE_HASH_HPP_INCLUDED

#include <span>

#include "lngate/common.hpp"

namespace lngate {

Hash32 sha256(std::span<const std::uint8_t> data);
Hash32 sha256(const Bytes& data);

/// SHA-256 over the concatenation of several byte slices.
Hash32 sha256_cat(std::initializer_list<std::span<const std::uint8_t>> parts);

Hash32 hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data);

/// AES-256-CTR keystream application; encryption and decryption are the same
/// operation. `nonce` is the initial 16-byte counter block.
Bytes aes256_ctr(std::span<const std::uint8_t, 32> key, std::span<const std::uint8_t, 16> nonce,
                 std::span<const std::uint8_t> data);

}  // namespace lngate

#endif
