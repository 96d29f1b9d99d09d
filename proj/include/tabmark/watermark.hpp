#pragma once

#include <cstdint>
#include <vector>

#include "tabmark/hashing.hpp"
#include "tabmark/table.hpp"

namespace tabmark {

struct WatermarkParams {
    double p_w = 0.05;
    SecretKey secret;
    ColumnSplit split;
    uint64_t rng_seed = 0;

    // Admits p_w = 0 and p_w = 1 (used by tests as forced-off/forced-on
    // boundaries). Production range is the open interval (0, 1).
    bool allow_boundary = false;

    void validate() const;
};

struct InsertStats {
    size_t rows = 0;
    size_t replaced = 0; // rows whose Bernoulli draw selected replacement
};

// Replaces each row's y part with the keyed-hash image of its x part with
// probability p_w. x cells and row order are untouched. Requires every
// distinct y row of `t` to appear in `t_ori`'s y rows (support condition).
// Bernoulli draws are counter-based on (rng_seed, row index), independent
// of the data.
CategoricalTable insert(const CategoricalTable& t, const CategoricalTable& t_ori,
                        const WatermarkParams& params, InsertStats* stats = nullptr);

// Same scheme, but the replacement value is drawn through the inverse CDF of
// t_ori's empirical y marginal (adv_hash), which preserves that marginal.
CategoricalTable insert_marginal_preserving(const CategoricalTable& t,
                                            const CategoricalTable& t_ori,
                                            const WatermarkParams& params,
                                            InsertStats* stats = nullptr);

// The joint-domain codec family used at detection time. The joint domain is
// the (x|y) projection of t_ori, extended first with each base row's hash
// image (x, M_Y^-1(Hash(x))) in index order, then with t_prime's novel rows
// in lexicographic order. x/y codecs come from t_ori's projections; the y
// codec size is the hash modulus #(Y).
struct JointCodecs {
    Codec d_codec;
    Codec x_codec;
    Codec y_codec;
    size_t x_arity = 0;

    // Per d index: decomposition into (x index, y index), -1 where the part
    // lies outside t_ori's support (novel rows from t_prime).
    std::vector<int64_t> d_to_x;
    std::vector<int64_t> d_to_y;

    // Per x index: the keyed-hash image bucket, and the d index of the row
    // (x, M_Y^-1(image)). Present for every x in the base support.
    std::vector<uint64_t> x_image;
    std::vector<int64_t> x_image_cell;

    // Per x index: (y index, d index) pairs present in the domain, ascending
    // in y index.
    std::vector<std::vector<std::pair<int64_t, int64_t>>> x_cells;

    uint64_t hash_modulus() const { return y_codec.size(); }
    size_t domain_size() const { return d_codec.size(); }
};

JointCodecs construct_joint_codecs(const CategoricalTable& t_ori,
                                   const CategoricalTable& t_prime,
                                   const WatermarkParams& params);

// Analytic insertion map on distributions: mass (1-p_w) * Pr(x,y) stays put
// and mass p_w * Pr(x,y) moves to (x, M_Y^-1(Hash(x))). Errors if mass sits
// on a row that does not decompose within the codec family.
ProbVector forward_distribution(const ProbVector& vec_d, double p_w, const JointCodecs& codecs);

// Analytic map of the marginal-preserving variant: the moved mass lands on
// (x, adv_hash(x)) instead of the plain hash image.
ProbVector forward_distribution_marginal_preserving(const ProbVector& vec_d, double p_w,
                                                    const JointCodecs& codecs,
                                                    const SecretKey& key,
                                                    const std::vector<double>& y_marginal);

// Exact inverse of the insertion map given the secret and p_w:
//   hash-match cell:  Pr(Y|x) = (Pr(Y'|x) - p_w) / (1 - p_w)
//   elsewhere:        Pr(Y|x) =  Pr(Y'|x) / (1 - p_w)
// rebuilt into a joint with the input's x marginal. Negative conditionals
// are propagated as signed mass (no clamping). Mass on rows outside
// t_ori's x/y supports is dropped (zero inverse mass).
SignedVector insertion_inverse(const ProbVector& vec_dprime, double p_w,
                               const JointCodecs& codecs);
SignedVector insertion_inverse(const std::vector<double>& values, double p_w,
                               const JointCodecs& codecs);

// X and Y marginals of a joint vector over the d codec (indices follow the
// x/y codecs; mass on undecomposable rows is dropped).
std::vector<double> x_marginal(const std::vector<double>& joint, const JointCodecs& codecs);
std::vector<double> y_marginal(const std::vector<double>& joint, const JointCodecs& codecs);

} // namespace tabmark
