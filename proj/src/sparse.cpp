#include "tabmark/sparse.hpp"

#include <limits>

namespace tabmark {

void SparseParams::validate(size_t arity) const {
    secret1.validate();
    secret2.validate();
    secret3.validate();
    split.validate(arity, /*need_z=*/true);
    if (split.x_cols.empty()) throw ValidationError("sparse: tX column set must be nonempty");
    if (x_dim < 1 || x_dim > split.x_cols.size()) {
        throw ValidationError("sparse: x_dim must lie in [1, |tX|]");
    }
    if (y_dim < 1 || y_dim > split.y_cols.size()) {
        throw ValidationError("sparse: y_dim must lie in [1, |tY|]");
    }
}

uint64_t binomial(size_t n, size_t k) {
    if (k > n) throw ValidationError("binomial: k > n");
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (size_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<uint64_t>::max()) {
            throw ValidationError("binomial: value overflows 64 bits");
        }
    }
    return static_cast<uint64_t>(acc);
}

std::vector<std::vector<size_t>> enumerate_combinations(size_t n, size_t k) {
    if (k == 0 || k > n) throw ValidationError("enumerate_combinations: need 0 < k <= n");
    const uint64_t total = binomial(n, k);
    if (total > (1ULL << 24)) {
        throw ValidationError("enumerate_combinations: C(n,k) too large to materialize");
    }
    std::vector<std::vector<size_t>> out;
    out.reserve(static_cast<size_t>(total));
    std::vector<size_t> cur(k);
    for (size_t i = 0; i < k; ++i) cur[i] = i;
    for (;;) {
        out.push_back(cur);
        // advance to the lexicographic successor
        size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

Extraction xy_extract(const CategoricalTable& t, const SparseParams& params) {
    t.validate();
    params.validate(t.arity());

    const size_t m = params.split.x_cols.size();
    const size_t n = params.split.y_cols.size();
    const auto x_combos = enumerate_combinations(m, params.x_dim);
    const auto y_combos = enumerate_combinations(n, params.y_dim);
    const KeyedHasher hx{params.secret1, static_cast<uint64_t>(x_combos.size())};
    const KeyedHasher hy{params.secret2, static_cast<uint64_t>(y_combos.size())};

    Extraction ex;
    ex.table.column_names.reserve(params.x_dim + params.split.z_cols.size() + params.y_dim);
    for (size_t i = 0; i < params.x_dim; ++i) {
        ex.table.column_names.push_back("x" + std::to_string(i));
    }
    for (size_t c : params.split.z_cols) ex.table.column_names.push_back(t.column_names[c]);
    for (size_t i = 0; i < params.y_dim; ++i) {
        ex.table.column_names.push_back("y" + std::to_string(i));
    }

    // Inner split for the regular scheme on the extracted table: the z cells
    // ride along in X so their information anchors the watermark.
    const size_t x_part = params.x_dim + params.split.z_cols.size();
    for (size_t i = 0; i < x_part; ++i) ex.inner_split.x_cols.push_back(i);
    for (size_t i = 0; i < params.y_dim; ++i) ex.inner_split.y_cols.push_back(x_part + i);

    ex.table.rows.reserve(t.row_count());
    ex.record.idx.reserve(t.row_count());
    ex.record.idy.reserve(t.row_count());
    for (const Row& r : t.rows) {
        const Row z = project_row(r, params.split.z_cols);
        const uint64_t idx = keyed_hash(hx, z);
        const uint64_t idy = keyed_hash(hy, z);
        ex.record.idx.push_back(idx);
        ex.record.idy.push_back(idy);

        Row simple;
        simple.reserve(ex.table.column_names.size());
        for (size_t pos : x_combos[static_cast<size_t>(idx)]) {
            simple.push_back(r[params.split.x_cols[pos]]);
        }
        simple.insert(simple.end(), z.begin(), z.end());
        for (size_t pos : y_combos[static_cast<size_t>(idy)]) {
            simple.push_back(r[params.split.y_cols[pos]]);
        }
        ex.table.rows.push_back(std::move(simple));
    }
    return ex;
}

CategoricalTable sparse_insert(const CategoricalTable& t, const CategoricalTable& t_ori,
                               double p_w, const SparseParams& params, uint64_t seed,
                               InsertStats* stats) {
    Extraction ex = xy_extract(t, params);
    const Extraction ex_ori = xy_extract(t_ori, params);

    WatermarkParams inner;
    inner.p_w = p_w;
    inner.secret = params.secret3;
    inner.split = ex.inner_split;
    inner.rng_seed = seed;
    const CategoricalTable wm = insert(ex.table, ex_ori.table, inner, stats);

    // Write each perturbed y sub-tuple back into the tY columns its idy
    // selected. idy depends only on z, which insertion never touches, so
    // detect-time extraction reproduces this choice.
    const auto y_combos = enumerate_combinations(params.split.y_cols.size(), params.y_dim);
    const size_t y_offset = params.x_dim + params.split.z_cols.size();
    CategoricalTable out = t;
    for (size_t i = 0; i < out.rows.size(); ++i) {
        const auto& combo = y_combos[static_cast<size_t>(ex.record.idy[i])];
        for (size_t j = 0; j < params.y_dim; ++j) {
            out.rows[i][params.split.y_cols[combo[j]]] = wm.rows[i][y_offset + j];
        }
    }
    return out;
}

DetectionReport sparse_detect(const CategoricalTable& t_prime, const CategoricalTable& t_ori,
                              double p_w, const SparseParams& params, const PriorSpec& prior,
                              size_t n_prior, double significance, uint64_t seed) {
    const Extraction ex_prime = xy_extract(t_prime, params);
    const Extraction ex_ori = xy_extract(t_ori, params);

    WatermarkParams inner;
    inner.p_w = p_w;
    inner.secret = params.secret3;
    inner.split = ex_prime.inner_split;
    return detect(ex_prime.table, ex_ori.table, inner, prior, n_prior, significance, seed);
}

} // namespace tabmark
