#include "tabmark/hashing.hpp"

#include <cstring>

#include "tabmark/rng.hpp"

namespace tabmark {

namespace {

inline uint32_t rotl32(uint32_t x, int n) {
    return (x << n) | (x >> (32 - n));
}

} // namespace

std::array<uint8_t, 20> sha1_digest(std::span<const uint8_t> data) {
    uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    const uint64_t bit_len = static_cast<uint64_t>(data.size()) * 8;

    // message || 0x80 || zero pad || 64-bit big-endian length
    std::vector<uint8_t> padded(data.begin(), data.end());
    padded.push_back(0x80);
    while (padded.size() % 64 != 56) padded.push_back(0x00);
    for (int i = 7; i >= 0; --i) {
        padded.push_back(static_cast<uint8_t>((bit_len >> (8 * i)) & 0xff));
    }

    uint32_t w[80];
    for (size_t block = 0; block < padded.size(); block += 64) {
        const uint8_t* p = padded.data() + block;
        for (int t = 0; t < 16; ++t) {
            w[t] = (static_cast<uint32_t>(p[4 * t]) << 24) |
                   (static_cast<uint32_t>(p[4 * t + 1]) << 16) |
                   (static_cast<uint32_t>(p[4 * t + 2]) << 8) |
                   static_cast<uint32_t>(p[4 * t + 3]);
        }
        for (int t = 16; t < 80; ++t) {
            w[t] = rotl32(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int t = 0; t < 80; ++t) {
            uint32_t f, k;
            if (t < 20) {
                f = (b & c) | ((~b) & d);
                k = 0x5A827999u;
            } else if (t < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (t < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const uint32_t tmp = rotl32(a, 5) + f + e + k + w[t];
            e = d;
            d = c;
            c = rotl32(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::array<uint8_t, 20> digest;
    for (int i = 0; i < 5; ++i) {
        digest[4 * i] = static_cast<uint8_t>(h[i] >> 24);
        digest[4 * i + 1] = static_cast<uint8_t>(h[i] >> 16);
        digest[4 * i + 2] = static_cast<uint8_t>(h[i] >> 8);
        digest[4 * i + 3] = static_cast<uint8_t>(h[i]);
    }
    return digest;
}

std::vector<uint8_t> canonical_hash_bytes(const std::string& secret, const Row& row) {
    std::vector<uint8_t> bytes;
    size_t total = secret.size() + 1;
    for (const std::string& cell : row) total += cell.size() + 1;
    bytes.reserve(total);
    bytes.insert(bytes.end(), secret.begin(), secret.end());
    bytes.push_back(0x00);
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) bytes.push_back(0x1f);
        bytes.insert(bytes.end(), row[i].begin(), row[i].end());
    }
    return bytes;
}

uint64_t keyed_hash(const KeyedHasher& hasher, const Row& row) {
    hasher.validate();
    const auto digest = sha1_digest(canonical_hash_bytes(hasher.key.secret, row));
    // Big-endian 160-bit value mod m, folded byte by byte.
    const unsigned __int128 m = hasher.modulus;
    unsigned __int128 r = 0;
    for (uint8_t b : digest) {
        r = (r * 256 + b) % m;
    }
    return static_cast<uint64_t>(r);
}

double gen_uniform(const SecretKey& key, const Row& row) {
    key.validate();
    const auto digest = sha1_digest(canonical_hash_bytes(key.secret, row));
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | digest[i];
    return static_cast<double>(v) * 0x1.0p-64;
}

size_t adv_hash_index(const SecretKey& key, const Row& row, std::span<const double> y_marginal) {
    if (y_marginal.empty()) throw ValidationError("adv_hash: empty marginal");
    const double u = gen_uniform(key, row);
    double acc = 0.0;
    size_t last_positive = 0;
    bool any = false;
    for (size_t k = 0; k < y_marginal.size(); ++k) {
        if (y_marginal[k] <= 0.0) continue;
        acc += y_marginal[k];
        last_positive = k;
        any = true;
        if (u < acc) return k;
    }
    if (!any) throw ValidationError("adv_hash: marginal has no positive mass");
    return last_positive; // u landed at/above the top cumulative sum
}

Row adv_hash(const SecretKey& key, const Row& row, const ProbVector& y_marginal,
             const Codec& y_codec) {
    if (y_marginal.values.size() != y_codec.size()) {
        throw ValidationError("adv_hash: marginal length does not match codec size");
    }
    return y_codec.row_at(static_cast<int64_t>(adv_hash_index(key, row, y_marginal.values)));
}

std::vector<uint64_t> uniformity_experiment(const Row& x, uint64_t m, size_t n_secrets,
                                            uint64_t seed) {
    if (m < 1) throw ValidationError("uniformity experiment: m must be >= 1");
    if (n_secrets < 1) throw ValidationError("uniformity experiment: n_secrets must be >= 1");
    std::vector<uint64_t> counts(m, 0);
    SplitMix rng(seed);
    static const char* hex = "0123456789abcdef";
    for (size_t i = 0; i < n_secrets; ++i) {
        // Distinct by the embedded index regardless of the random suffix.
        std::string secret = "s" + std::to_string(i) + "-";
        uint64_t r = rng.next_u64();
        for (int j = 0; j < 16; ++j) {
            secret += hex[r & 0xf];
            r >>= 4;
        }
        KeyedHasher h{SecretKey{secret}, m};
        counts[keyed_hash(h, x)] += 1;
    }
    return counts;
}

} // namespace tabmark
