#include "tabmark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabmark/rng.hpp"

namespace tabmark {

std::vector<double> replacement_step(std::span<const double> d_vec, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw ValidationError("replacement_step: beta outside [0, 1]");
    }
    if (d_vec.empty()) throw ValidationError("replacement_step: empty vector");
    const double eps = 1.0 / static_cast<double>(d_vec.size());
    std::vector<double> out(d_vec.size());
    for (size_t i = 0; i < d_vec.size(); ++i) {
        out[i] = (1.0 - beta) * d_vec[i] + beta * eps;
    }
    return out;
}

std::vector<double> replacement_rounds(std::span<const double> d0, double beta, size_t rounds) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw ValidationError("replacement_rounds: beta outside [0, 1]");
    }
    if (d0.empty()) throw ValidationError("replacement_rounds: empty vector");
    const double keep = std::pow(1.0 - beta, static_cast<double>(rounds));
    const double eps = 1.0 / static_cast<double>(d0.size());
    std::vector<double> out(d0.size());
    for (size_t i = 0; i < d0.size(); ++i) {
        out[i] = keep * d0[i] + (1.0 - keep) * eps;
    }
    return out;
}

std::vector<AttackCurvePoint> attack_curve(const CategoricalTable& t_hat,
                                           const CategoricalTable& t_ori,
                                           const WatermarkParams& params, const PriorSpec& prior,
                                           size_t n_prior, double beta, size_t rounds,
                                           uint64_t seed) {
    if (rounds < 1) throw ValidationError("attack_curve: rounds must be >= 1");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("attack_curve: beta outside [0, 1]");
    params.validate();

    const JointCodecs codecs = construct_joint_codecs(t_ori, t_hat, params);
    std::vector<size_t> xy_cols = params.split.x_cols;
    xy_cols.insert(xy_cols.end(), params.split.y_cols.begin(), params.split.y_cols.end());
    const ProbVector vec_d = empirical_prob_vector(project(t_ori, xy_cols), codecs.d_codec);
    const ProbVector vec_hat = empirical_prob_vector(project(t_hat, xy_cols), codecs.d_codec);

    // The prior-sample distances do not depend on the attacked vector.
    std::vector<double> d_samples;
    d_samples.reserve(n_prior);
    for (const auto& s : sample_prior(prior, codecs.domain_size(), n_prior, seed)) {
        d_samples.push_back(
            tv_distance(vec_d.values, insertion_inverse(s, params.p_w, codecs).values));
    }
    std::sort(d_samples.begin(), d_samples.end());

    std::vector<AttackCurvePoint> curve;
    curve.reserve(rounds);
    std::vector<double> current = vec_hat.values;
    for (size_t m = 0; m < rounds; ++m) {
        AttackCurvePoint pt;
        pt.round = m;
        pt.d_tv = tv_distance(vec_d.values, insertion_inverse(current, params.p_w, codecs).values);
        const auto upper = std::upper_bound(d_samples.begin(), d_samples.end(), pt.d_tv);
        pt.p_value = static_cast<double>(upper - d_samples.begin()) /
                     static_cast<double>(d_samples.size());
        curve.push_back(pt);
        if (m + 1 < rounds) current = replacement_step(current, beta);
    }
    return curve;
}

std::string attack_curve_csv(const std::vector<AttackCurvePoint>& points) {
    std::string out = "round,p_value,d_tv\r\n";
    char buf[96];
    for (const auto& pt : points) {
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\r\n", pt.round, pt.p_value, pt.d_tv);
        out += buf;
    }
    return out;
}

CategoricalTable shuffle_attack(const CategoricalTable& t, uint64_t seed) {
    if (t.rows.empty()) throw ValidationError("shuffle_attack: empty table");
    CategoricalTable out = t;
    SplitMix rng(mix64(seed, 0x731c5eULL));
    for (size_t i = out.rows.size() - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(rng.next_below(i + 1));
        std::swap(out.rows[i], out.rows[j]);
    }
    return out;
}

CategoricalTable subsample_attack(const CategoricalTable& t, double fraction, uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ValidationError("subsample_attack: fraction outside (0, 1]");
    }
    const size_t n = t.rows.size();
    const size_t keep = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
    if (keep == 0) throw ValidationError("subsample_attack: subsample would be empty");

    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix rng(mix64(seed, 0x5ab5a3ULL));
    for (size_t i = 0; i < keep; ++i) {
        const size_t j = i + static_cast<size_t>(rng.next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());

    CategoricalTable out;
    out.column_names = t.column_names;
    out.rows.reserve(keep);
    for (size_t i : idx) out.rows.push_back(t.rows[i]);
    return out;
}

CategoricalTable replacement_attack_table(const CategoricalTable& t, double beta, size_t rounds,
                                          uint64_t seed) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw ValidationError("replacement_attack_table: beta outside [0, 1]");
    }
    if (t.rows.empty()) throw ValidationError("replacement_attack_table: empty table");
    const Codec support = Codec::construct(t.rows);
    CategoricalTable out = t;
    SplitMix rng(mix64(seed, 0xa77ac4ULL));
    for (size_t round = 0; round < rounds; ++round) {
        for (Row& r : out.rows) {
            if (rng.next_unit() < beta) {
                r = support.row_at(static_cast<int64_t>(rng.next_below(support.size())));
            }
        }
    }
    return out;
}

} // namespace tabmark
