#include "tabmark/detect.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tabmark/rng.hpp"

namespace tabmark {

void PriorSpec::validate() const {
    switch (kind) {
        case Kind::dirichlet:
            if (!(alpha > 0.0)) throw ValidationError("prior: alpha must be positive");
            break;
        case Kind::uniform_int_normalized:
        case Kind::softmax_of_uniform_int:
            if (lo > hi) throw ValidationError("prior: lo must be <= hi");
            if (kind == Kind::uniform_int_normalized && lo < 0) {
                throw ValidationError("prior: normalized integer prior needs lo >= 0");
            }
            break;
    }
}

PriorSpec PriorSpec::dirichlet(double alpha) {
    PriorSpec s;
    s.kind = Kind::dirichlet;
    s.alpha = alpha;
    return s;
}

PriorSpec PriorSpec::uniform_int(int64_t lo, int64_t hi) {
    PriorSpec s;
    s.kind = Kind::uniform_int_normalized;
    s.lo = lo;
    s.hi = hi;
    return s;
}

PriorSpec PriorSpec::softmax_int(int64_t lo, int64_t hi) {
    PriorSpec s;
    s.kind = Kind::softmax_of_uniform_int;
    s.lo = lo;
    s.hi = hi;
    return s;
}

std::string PriorSpec::describe() const {
    switch (kind) {
        case Kind::dirichlet:
            return "dirichlet(" + std::to_string(alpha) + ")";
        case Kind::uniform_int_normalized:
            return "uniform_int_normalized(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
        case Kind::softmax_of_uniform_int:
            return "softmax_of_uniform_int(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
    }
    return "?";
}

std::vector<std::vector<double>> sample_prior(const PriorSpec& spec, size_t k, size_t n,
                                              uint64_t seed) {
    spec.validate();
    if (k < 2) throw ValidationError("sample_prior: dimension must be >= 2");
    if (n < 1) throw ValidationError("sample_prior: need at least one sample");

    std::vector<std::vector<double>> out;
    out.reserve(n);
    SplitMix rng(mix64(seed, 0x9d107ULL));
    const uint64_t span = static_cast<uint64_t>(spec.hi - spec.lo) + 1;
    for (size_t s = 0; s < n; ++s) {
        switch (spec.kind) {
            case PriorSpec::Kind::dirichlet:
                out.push_back(dirichlet_draw(rng, spec.alpha, k));
                break;
            case PriorSpec::Kind::uniform_int_normalized: {
                std::vector<double> v(k);
                double sum = 0.0;
                do {
                    sum = 0.0;
                    for (size_t i = 0; i < k; ++i) {
                        v[i] = static_cast<double>(spec.lo + static_cast<int64_t>(rng.next_below(span)));
                        sum += v[i];
                    }
                } while (sum <= 0.0);
                for (double& x : v) x /= sum;
                out.push_back(std::move(v));
                break;
            }
            case PriorSpec::Kind::softmax_of_uniform_int: {
                std::vector<double> v(k);
                double mx = -1e300;
                for (size_t i = 0; i < k; ++i) {
                    v[i] = static_cast<double>(spec.lo + static_cast<int64_t>(rng.next_below(span)));
                    mx = std::max(mx, v[i]);
                }
                double sum = 0.0;
                for (double& x : v) {
                    x = std::exp(x - mx);
                    sum += x;
                }
                for (double& x : v) x /= sum;
                out.push_back(std::move(v));
                break;
            }
        }
    }
    return out;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw ValidationError("tv_distance: domain mismatch (" + std::to_string(p.size()) +
                              " vs " + std::to_string(q.size()) + ")");
    }
    double sum = 0.0;
    for (size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

namespace {

void check_same_domain(const Codec* a, const Codec* b) {
    if (a && b && a != b && !(*a == *b)) {
        throw ValidationError("tv_distance: vectors belong to different codecs");
    }
}

} // namespace

double tv_distance(const ProbVector& p, const ProbVector& q) {
    check_same_domain(p.codec, q.codec);
    return tv_distance(std::span<const double>(p.values), std::span<const double>(q.values));
}

double tv_distance(const ProbVector& p, const SignedVector& q) {
    check_same_domain(p.codec, q.codec);
    return tv_distance(std::span<const double>(p.values), std::span<const double>(q.values));
}

double tv_distance(const SignedVector& p, const SignedVector& q) {
    check_same_domain(p.codec, q.codec);
    return tv_distance(std::span<const double>(p.values), std::span<const double>(q.values));
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

std::string DetectionReport::to_json() const {
    nlohmann::json j;
    j["d"] = d;
    j["p_value"] = p_value;
    j["reject_h0"] = reject_h0;
    j["domain_size"] = domain_size;
    j["n_prior"] = n_prior;
    j["significance"] = significance;
    j["p_w"] = p_w;
    std::vector<double> sorted = d_samples;
    std::sort(sorted.begin(), sorted.end());
    j["d_samples_summary"] = {
        {"min", sorted.empty() ? 0.0 : sorted.front()},
        {"q1", quantile_sorted(sorted, 0.25)},
        {"median", quantile_sorted(sorted, 0.5)},
        {"q3", quantile_sorted(sorted, 0.75)},
        {"max", sorted.empty() ? 0.0 : sorted.back()},
    };
    return j.dump(2);
}

DetectionReport detect(const CategoricalTable& t_prime, const CategoricalTable& t_ori,
                       const WatermarkParams& params, const PriorSpec& prior, size_t n_prior,
                       double significance, uint64_t seed) {
    params.validate();
    prior.validate();
    if (!(significance > 0.0 && significance < 1.0)) {
        throw ValidationError("detect: significance must lie in (0, 1)");
    }
    if (n_prior < 1) throw ValidationError("detect: n_prior must be >= 1");

    const JointCodecs codecs = construct_joint_codecs(t_ori, t_prime, params);

    std::vector<size_t> xy_cols = params.split.x_cols;
    xy_cols.insert(xy_cols.end(), params.split.y_cols.begin(), params.split.y_cols.end());
    const ProbVector vec_d = empirical_prob_vector(project(t_ori, xy_cols), codecs.d_codec);
    const ProbVector vec_dp = empirical_prob_vector(project(t_prime, xy_cols), codecs.d_codec);

    DetectionReport report;
    report.domain_size = codecs.domain_size();
    report.p_w = params.p_w;
    report.n_prior = n_prior;
    report.significance = significance;

    const SignedVector d_inv = insertion_inverse(vec_dp, params.p_w, codecs);
    report.d = tv_distance(vec_d, d_inv);

    const auto samples = sample_prior(prior, codecs.domain_size(), n_prior, seed);
    report.d_samples.reserve(n_prior);
    size_t below = 0;
    for (const auto& s : samples) {
        const double d_sam =
            tv_distance(vec_d.values, insertion_inverse(s, params.p_w, codecs).values);
        report.d_samples.push_back(d_sam);
        if (d_sam <= report.d) ++below; // ties count toward the p-value
    }
    report.p_value = static_cast<double>(below) / static_cast<double>(n_prior);
    report.reject_h0 = report.p_value < significance;
    return report;
}

} // namespace tabmark
