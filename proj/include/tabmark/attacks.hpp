#pragma once

#include <cstdint>
#include <vector>

#include "tabmark/detect.hpp"

namespace tabmark {

// One round of the replacement attack on a distribution vector:
// (1 - beta) * d_vec + beta * uniform over the same domain. beta is the
// fraction of the distribution replaced per round.
std::vector<double> replacement_step(std::span<const double> d_vec, double beta);

// Closed form of m rounds: (1-beta)^m * d0 + (1 - (1-beta)^m) * uniform.
std::vector<double> replacement_rounds(std::span<const double> d0, double beta, size_t rounds);

struct AttackCurvePoint {
    size_t round = 0;   // number of attack rounds applied
    double p_value = 0; // detector p-value at this round
    double d_tv = 0;    // tv(Vec(D), inverse(attacked vector))
};

// Iterates the replacement recurrence analytically on Vec(D-hat) (no
// resampling noise), re-running the detection statistic each round. Emits
// `rounds` points for 0..rounds-1 attack rounds; round 0 is plain detection
// on t_hat. Prior distances are independent of the attacked vector and are
// sampled once.
std::vector<AttackCurvePoint> attack_curve(const CategoricalTable& t_hat,
                                           const CategoricalTable& t_ori,
                                           const WatermarkParams& params, const PriorSpec& prior,
                                           size_t n_prior, double beta, size_t rounds,
                                           uint64_t seed);

// CSV emission (round,p_value,d_tv) for external plotting.
std::string attack_curve_csv(const std::vector<AttackCurvePoint>& points);

// Row permutation (distribution-preserving).
CategoricalTable shuffle_attack(const CategoricalTable& t, uint64_t seed);

// Uniform row subsample of round(fraction * n) rows, original order kept.
CategoricalTable subsample_attack(const CategoricalTable& t, double fraction, uint64_t seed);

// Sampled table-level replacement attack for end-to-end tests: each row is
// independently replaced, with probability beta per round, by a uniform draw
// from the table's distinct rows.
CategoricalTable replacement_attack_table(const CategoricalTable& t, double beta, size_t rounds,
                                          uint64_t seed);

} // namespace tabmark
