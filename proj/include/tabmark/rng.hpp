#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tabmark {

// Deterministic 64-bit stream generator (splitmix64). All randomness in the
// library flows through this so runs are reproducible from a single seed,
// independent of the platform's std:: distributions.
class SplitMix {
public:
    explicit SplitMix(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();

    // Uniform in [0, 1) with 53 random bits.
    double next_unit();

    // Uniform integer in [0, n), rejection-sampled so it is unbiased.
    uint64_t next_below(uint64_t n);

    // Index draw from a nonnegative weight vector (need not be normalized).
    size_t pick(std::span<const double> weights);

private:
    uint64_t state_;
};

// Stateless mixing of two 64-bit values; used to derive substream seeds
// (per row, per block) from a master seed.
uint64_t mix64(uint64_t a, uint64_t b);

// One uniform [0,1) draw addressed by (seed, counter). Counter-based so the
// i-th draw never depends on how many draws earlier rows consumed.
double counter_unit(uint64_t seed, uint64_t counter);

// Standard normal via the polar method.
double normal_draw(SplitMix& rng);

// Gamma(alpha, 1) via Marsaglia-Tsang, with the alpha < 1 boost.
double gamma_draw(SplitMix& rng, double alpha);

// Dirichlet(alpha, ..., alpha) of dimension k: normalized gamma draws.
std::vector<double> dirichlet_draw(SplitMix& rng, double alpha, size_t k);

} // namespace tabmark
