#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tabmark/watermark.hpp"

namespace tabmark {

// Prior over probability vectors used to calibrate the null hypothesis.
struct PriorSpec {
    enum class Kind {
        dirichlet,               // symmetric Dirichlet(alpha, ..., alpha)
        uniform_int_normalized,  // iid integers in [lo, hi], divided by their L1 norm
        softmax_of_uniform_int,  // iid integers in [lo, hi], softmaxed
    };

    Kind kind = Kind::dirichlet;
    double alpha = 0.1;
    int64_t lo = 1;
    int64_t hi = 16;

    void validate() const;

    static PriorSpec dirichlet(double alpha);
    static PriorSpec uniform_int(int64_t lo, int64_t hi);
    static PriorSpec softmax_int(int64_t lo, int64_t hi);

    std::string describe() const;
};

// n vectors on the k-simplex, seeded-deterministic.
std::vector<std::vector<double>> sample_prior(const PriorSpec& spec, size_t k, size_t n,
                                              uint64_t seed);

// Total variation distance: half the L1 norm of the difference. Defined for
// signed vectors as well (the insertion inverse can carry negative mass).
double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const ProbVector& p, const ProbVector& q);
double tv_distance(const ProbVector& p, const SignedVector& q);
double tv_distance(const SignedVector& p, const SignedVector& q);

struct DetectionReport {
    double d = 0.0;                 // tv(Vec(D), inverse(Vec(D')))
    std::vector<double> d_samples;  // tv(Vec(D), inverse(prior sample)), per sample
    double p_value = 1.0;           // fraction of d_samples <= d
    bool reject_h0 = false;
    size_t domain_size = 0;         // #(D)
    double p_w = 0.0;
    size_t n_prior = 0;
    double significance = 0.0;

    // {d, p_value, reject_h0, domain_size, n_prior, significance, p_w,
    //  d_samples_summary:{min,q1,median,q3,max}}
    std::string to_json() const;
};

// Full detection pipeline: joint codecs from (t_ori, t_prime), empirical
// vectors, insertion inverse, and the prior-calibrated hypothesis test.
// Rejecting H0 concludes t_prime is an illicit copy under this secret.
DetectionReport detect(const CategoricalTable& t_prime, const CategoricalTable& t_ori,
                       const WatermarkParams& params, const PriorSpec& prior, size_t n_prior,
                       double significance, uint64_t seed);

} // namespace tabmark
