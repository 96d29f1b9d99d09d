#include "tabmark/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tabmark/rng.hpp"

namespace tabmark {

void WatermarkParams::validate() const {
    secret.validate();
    const bool open = p_w > 0.0 && p_w < 1.0;
    const bool boundary = p_w == 0.0 || p_w == 1.0;
    if (!(open || (allow_boundary && boundary))) {
        throw ValidationError("p_w must lie in (0, 1)");
    }
}

namespace {

// Support condition: every distinct y row of t must appear among t_ori's
// distinct y rows, else the codec built from t_ori cannot describe t.
void check_y_support(const CategoricalTable& t_y, const Codec& y_codec) {
    std::set<Row> offending;
    for (const Row& r : t_y.rows) {
        if (!y_codec.find(r)) offending.insert(r);
    }
    if (offending.empty()) return;
    std::string msg = "y support violation: rows absent from the reference table:";
    size_t listed = 0;
    for (const Row& r : offending) {
        msg += " (";
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) msg += ",";
            msg += r[i];
        }
        msg += ")";
        if (++listed == 20 && offending.size() > 20) {
            msg += " ... [" + std::to_string(offending.size()) + " distinct rows]";
            break;
        }
    }
    throw ValidationError(msg);
}

using ReplacementFn = Row (*)(const Row& x_row, const KeyedHasher& hasher, const SecretKey& key,
                              const std::vector<double>& y_marg, const Codec& y_codec);

CategoricalTable insert_impl(const CategoricalTable& t, const CategoricalTable& t_ori,
                             const WatermarkParams& params, InsertStats* stats,
                             bool marginal_preserving) {
    params.validate();
    t.validate();
    t_ori.validate();
    params.split.validate(t.arity());
    params.split.validate(t_ori.arity());

    const CategoricalTable t_ori_y = project(t_ori, params.split.y_cols);
    const Codec y_codec = Codec::construct(t_ori_y);
    check_y_support(project(t, params.split.y_cols), y_codec);

    const KeyedHasher hasher{params.secret, y_codec.size()};
    std::vector<double> y_marg;
    if (marginal_preserving) {
        y_marg = empirical_prob_vector(t_ori_y, y_codec).values;
    }

    CategoricalTable out = t;
    InsertStats st;
    st.rows = t.row_count();
    for (size_t i = 0; i < out.rows.size(); ++i) {
        if (counter_unit(params.rng_seed, i) >= params.p_w) continue;
        st.replaced += 1;
        const Row x_row = project_row(out.rows[i], params.split.x_cols);
        const Row& y_new =
            marginal_preserving
                ? adv_hash(params.secret, x_row, ProbVector{y_marg, &y_codec}, y_codec)
                : y_codec.row_at(static_cast<int64_t>(keyed_hash(hasher, x_row)));
        for (size_t j = 0; j < params.split.y_cols.size(); ++j) {
            out.rows[i][params.split.y_cols[j]] = y_new[j];
        }
    }
    if (stats) *stats = st;
    return out;
}

} // namespace

CategoricalTable insert(const CategoricalTable& t, const CategoricalTable& t_ori,
                        const WatermarkParams& params, InsertStats* stats) {
    return insert_impl(t, t_ori, params, stats, false);
}

CategoricalTable insert_marginal_preserving(const CategoricalTable& t,
                                            const CategoricalTable& t_ori,
                                            const WatermarkParams& params, InsertStats* stats) {
    return insert_impl(t, t_ori, params, stats, true);
}

JointCodecs construct_joint_codecs(const CategoricalTable& t_ori,
                                   const CategoricalTable& t_prime,
                                   const WatermarkParams& params) {
    t_ori.validate();
    t_prime.validate();
    params.split.validate(t_ori.arity());
    params.split.validate(t_prime.arity());
    params.secret.validate();

    JointCodecs jc;
    jc.x_arity = params.split.x_cols.size();

    // Joint rows are the (x|y) projection in split order; columns outside
    // the split do not participate in the scheme.
    std::vector<size_t> xy_cols = params.split.x_cols;
    xy_cols.insert(xy_cols.end(), params.split.y_cols.begin(), params.split.y_cols.end());

    const CategoricalTable ori_joint = project(t_ori, xy_cols);
    jc.d_codec = Codec::construct(ori_joint);
    jc.x_codec = Codec::construct(project(t_ori, params.split.x_cols));
    jc.y_codec = Codec::construct(project(t_ori, params.split.y_cols));

    const KeyedHasher hasher{params.secret, jc.y_codec.size()};

    // Hash image per base x, in x-codec order.
    jc.x_image.resize(jc.x_codec.size());
    for (size_t xi = 0; xi < jc.x_codec.size(); ++xi) {
        jc.x_image[xi] = keyed_hash(hasher, jc.x_codec.row_at(static_cast<int64_t>(xi)));
    }

    // Extend with each base row's image pair (x, M_Y^-1(Hash(x))), walking
    // the base domain in index order.
    const size_t base_size = jc.d_codec.size();
    for (size_t di = 0; di < base_size; ++di) {
        Row d = jc.d_codec.row_at(static_cast<int64_t>(di));
        const Row x_row(d.begin(), d.begin() + static_cast<ptrdiff_t>(jc.x_arity));
        const int64_t xi = *jc.x_codec.find(x_row);
        const Row& img = jc.y_codec.row_at(static_cast<int64_t>(jc.x_image[xi]));
        Row image_pair = x_row;
        image_pair.insert(image_pair.end(), img.begin(), img.end());
        jc.d_codec.append_if_absent(image_pair);
    }

    // Fold in rows of t_prime the domain has not seen, in lexicographic
    // order, so Vec(D') is always well-defined.
    {
        const CategoricalTable prime_joint = project(t_prime, xy_cols);
        std::vector<Row> novel;
        for (const Row& r : prime_joint.rows) {
            if (!jc.d_codec.find(r)) novel.push_back(r);
        }
        std::sort(novel.begin(), novel.end());
        novel.erase(std::unique(novel.begin(), novel.end()), novel.end());
        for (const Row& r : novel) jc.d_codec.append_if_absent(r);
    }

    // Decomposition tables and per-x cell lists.
    const size_t k = jc.d_codec.size();
    jc.d_to_x.assign(k, -1);
    jc.d_to_y.assign(k, -1);
    jc.x_cells.assign(jc.x_codec.size(), {});
    for (size_t di = 0; di < k; ++di) {
        const Row& d = jc.d_codec.row_at(static_cast<int64_t>(di));
        const Row x_row(d.begin(), d.begin() + static_cast<ptrdiff_t>(jc.x_arity));
        const Row y_row(d.begin() + static_cast<ptrdiff_t>(jc.x_arity), d.end());
        if (auto xi = jc.x_codec.find(x_row)) jc.d_to_x[di] = *xi;
        if (auto yi = jc.y_codec.find(y_row)) jc.d_to_y[di] = *yi;
        if (jc.d_to_x[di] >= 0 && jc.d_to_y[di] >= 0) {
            jc.x_cells[static_cast<size_t>(jc.d_to_x[di])].emplace_back(
                jc.d_to_y[di], static_cast<int64_t>(di));
        }
    }
    for (auto& cells : jc.x_cells) std::sort(cells.begin(), cells.end());

    jc.x_image_cell.assign(jc.x_codec.size(), -1);
    for (size_t xi = 0; xi < jc.x_codec.size(); ++xi) {
        const auto& cells = jc.x_cells[xi];
        const int64_t img = static_cast<int64_t>(jc.x_image[xi]);
        auto it = std::lower_bound(cells.begin(), cells.end(),
                                   std::pair<int64_t, int64_t>{img, INT64_MIN});
        if (it != cells.end() && it->first == img) jc.x_image_cell[xi] = it->second;
    }
    return jc;
}

namespace {

void check_vector(const std::vector<double>& values, const JointCodecs& codecs,
                  const char* what) {
    if (values.size() != codecs.domain_size()) {
        throw ValidationError(std::string(what) + ": vector length " +
                              std::to_string(values.size()) + " does not match domain size " +
                              std::to_string(codecs.domain_size()));
    }
}

} // namespace

ProbVector forward_distribution(const ProbVector& vec_d, double p_w, const JointCodecs& codecs) {
    check_vector(vec_d.values, codecs, "forward_distribution");
    if (p_w < 0.0 || p_w > 1.0) throw ValidationError("forward_distribution: p_w outside [0, 1]");
    ProbVector out;
    out.values.assign(vec_d.values.size(), 0.0);
    out.codec = &codecs.d_codec;
    for (size_t di = 0; di < vec_d.values.size(); ++di) {
        const double mass = vec_d.values[di];
        if (mass == 0.0) continue;
        const int64_t xi = codecs.d_to_x[di];
        if (xi < 0 || codecs.x_image_cell[static_cast<size_t>(xi)] < 0) {
            throw ValidationError("forward_distribution: mass on a row without a hash-image "
                                  "cell in the domain");
        }
        out.values[di] += (1.0 - p_w) * mass;
        out.values[static_cast<size_t>(codecs.x_image_cell[static_cast<size_t>(xi)])] +=
            p_w * mass;
    }
    return out;
}

ProbVector forward_distribution_marginal_preserving(const ProbVector& vec_d, double p_w,
                                                    const JointCodecs& codecs,
                                                    const SecretKey& key,
                                                    const std::vector<double>& y_marginal) {
    check_vector(vec_d.values, codecs, "forward_distribution");
    if (p_w < 0.0 || p_w > 1.0) throw ValidationError("forward_distribution: p_w outside [0, 1]");
    if (y_marginal.size() != codecs.y_codec.size()) {
        throw ValidationError("forward_distribution: y marginal length mismatch");
    }
    // adv_hash image per x, computed once.
    std::vector<int64_t> image_cell(codecs.x_codec.size(), -1);
    for (size_t xi = 0; xi < codecs.x_codec.size(); ++xi) {
        const int64_t yi = static_cast<int64_t>(
            adv_hash_index(key, codecs.x_codec.row_at(static_cast<int64_t>(xi)), y_marginal));
        const auto& cells = codecs.x_cells[xi];
        auto it = std::lower_bound(cells.begin(), cells.end(),
                                   std::pair<int64_t, int64_t>{yi, INT64_MIN});
        if (it != cells.end() && it->first == yi) image_cell[xi] = it->second;
    }
    ProbVector out;
    out.values.assign(vec_d.values.size(), 0.0);
    out.codec = &codecs.d_codec;
    for (size_t di = 0; di < vec_d.values.size(); ++di) {
        const double mass = vec_d.values[di];
        if (mass == 0.0) continue;
        const int64_t xi = codecs.d_to_x[di];
        if (xi < 0 || image_cell[static_cast<size_t>(xi)] < 0) {
            throw ValidationError("forward_distribution: mass on a row without an adv-hash "
                                  "image cell in the domain");
        }
        out.values[di] += (1.0 - p_w) * mass;
        out.values[static_cast<size_t>(image_cell[static_cast<size_t>(xi)])] += p_w * mass;
    }
    return out;
}

SignedVector insertion_inverse(const std::vector<double>& values, double p_w,
                               const JointCodecs& codecs) {
    check_vector(values, codecs, "insertion_inverse");
    if (!(p_w > 0.0 && p_w < 1.0)) throw ValidationError("insertion_inverse: p_w outside (0, 1)");

    SignedVector out;
    out.values.assign(values.size(), 0.0);
    out.codec = &codecs.d_codec;

    const double keep = 1.0 - p_w;
    for (size_t xi = 0; xi < codecs.x_cells.size(); ++xi) {
        const auto& cells = codecs.x_cells[xi];
        double mx = 0.0;
        for (const auto& [yi, di] : cells) mx += values[static_cast<size_t>(di)];
        if (mx <= 0.0) continue; // Pr(X' = x) = 0: the block contributes nothing
        // Joint form of the two conditional-inversion formulas: dividing by
        // mx and re-multiplying cancels, so work directly on joint mass.
        for (const auto& [yi, di] : cells) {
            out.values[static_cast<size_t>(di)] = values[static_cast<size_t>(di)] / keep;
        }
        const int64_t match = codecs.x_image_cell[xi];
        // The image pair of every base x is in the domain by construction.
        out.values[static_cast<size_t>(match)] -= p_w * mx / keep;
    }
    return out;
}

SignedVector insertion_inverse(const ProbVector& vec_dprime, double p_w,
                               const JointCodecs& codecs) {
    return insertion_inverse(vec_dprime.values, p_w, codecs);
}

std::vector<double> x_marginal(const std::vector<double>& joint, const JointCodecs& codecs) {
    check_vector(joint, codecs, "x_marginal");
    std::vector<double> out(codecs.x_codec.size(), 0.0);
    for (size_t di = 0; di < joint.size(); ++di) {
        if (codecs.d_to_x[di] >= 0) out[static_cast<size_t>(codecs.d_to_x[di])] += joint[di];
    }
    return out;
}

std::vector<double> y_marginal(const std::vector<double>& joint, const JointCodecs& codecs) {
    check_vector(joint, codecs, "y_marginal");
    std::vector<double> out(codecs.y_codec.size(), 0.0);
    for (size_t di = 0; di < joint.size(); ++di) {
        if (codecs.d_to_y[di] >= 0) out[static_cast<size_t>(codecs.d_to_y[di])] += joint[di];
    }
    return out;
}

} // namespace tabmark
