#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tabmark/table.hpp"

namespace tabmark {

// SHA-1 of an arbitrary byte string (FIPS 180-1).
std::array<uint8_t, 20> sha1_digest(std::span<const uint8_t> data);

struct SecretKey {
    std::string secret;

    void validate() const {
        if (secret.empty()) throw ValidationError("secret key must be nonempty");
    }
};

// Keyed bucket hash: SHA-1 over the canonical encoding below, reduced mod m.
struct KeyedHasher {
    SecretKey key;
    uint64_t modulus = 1;

    void validate() const {
        key.validate();
        if (modulus < 1) throw ValidationError("hash modulus must be >= 1");
    }
};

// Canonical, platform-independent hash input:
//   UTF-8(secret) || 0x00 || cell_0 || 0x1F || cell_1 || 0x1F || ... || cell_{n-1}
// The encoding is normative; any implementation producing these bytes and
// SHA-1 interoperates on the same watermarked data. Injective for tokens
// that contain no 0x1F byte.
std::vector<uint8_t> canonical_hash_bytes(const std::string& secret, const Row& row);

// Big-endian value of the full 20-byte digest, mod the hasher's modulus.
uint64_t keyed_hash(const KeyedHasher& hasher, const Row& row);

// Keyed pseudorandom real in [0, 1): big-endian value of the first 8 digest
// bytes divided by 2^64.
double gen_uniform(const SecretKey& key, const Row& row);

// Inverse-CDF mapping of gen_uniform through y_marginal's cumulative sums:
// returns the y category whose half-open bracket [lo, hi) contains the draw.
// The last positive-mass bracket is closed at 1.0 to absorb rounding, and
// zero-mass categories are never selected.
Row adv_hash(const SecretKey& key, const Row& row, const ProbVector& y_marginal,
             const Codec& y_codec);

// Index variant of adv_hash (position in y_codec).
size_t adv_hash_index(const SecretKey& key, const Row& row, std::span<const double> y_marginal);

// Hashes a fixed row under n_secrets distinct generated secrets and returns
// the bucket counts. Secrets are derived deterministically from the seed.
std::vector<uint64_t> uniformity_experiment(const Row& x, uint64_t m, size_t n_secrets,
                                            uint64_t seed);

} // namespace tabmark
