#pragma once

#include <cstdint>
#include <vector>

#include "tabmark/detect.hpp"

namespace tabmark {

// Parameters of the sparse-column method. The split's x_cols/y_cols/z_cols
// name the tX / tY / Z column groups; per row, keyed hashes of the z cells
// select x_dim of the tX columns and y_dim of the tY columns.
struct SparseParams {
    SecretKey secret1; // selects the tX column combination
    SecretKey secret2; // selects the tY column combination
    SecretKey secret3; // drives the inner watermark
    size_t x_dim = 1;
    size_t y_dim = 1;
    ColumnSplit split;

    void validate(size_t arity) const;
};

// C(n, k) with overflow detection.
uint64_t binomial(size_t n, size_t k);

// All k-combinations of {0..n-1} as ascending index tuples, in lexicographic
// order, numbered 0..C(n,k)-1.
std::vector<std::vector<size_t>> enumerate_combinations(size_t n, size_t k);

// Per-row combination choices; recomputable from the table, never persisted.
struct ExtractionRecord {
    std::vector<uint64_t> idx; // < C(M, x_dim)
    std::vector<uint64_t> idy; // < C(N, y_dim)
};

struct Extraction {
    CategoricalTable table;  // per row: selected x cells | z cells | selected y cells
    ExtractionRecord record;
    ColumnSplit inner_split; // X = selected x + z cells, Y = selected y cells
};

// XYExtractor: per row (tx, z, ty), idx = Hash^{s1}_{C(M,x_dim)}(z) and
// idy = Hash^{s2}_{C(N,y_dim)}(z) pick the column subsets. Row-wise, so it
// commutes with row permutation.
Extraction xy_extract(const CategoricalTable& t, const SparseParams& params);

// Runs the regular insertion on the extracted table with secret3, then
// writes each perturbed y sub-tuple back into the tY columns selected by
// idy. All other cells are byte-identical to the input.
CategoricalTable sparse_insert(const CategoricalTable& t, const CategoricalTable& t_ori,
                               double p_w, const SparseParams& params, uint64_t seed,
                               InsertStats* stats = nullptr);

// Extracts both tables with (s1, s2) and runs the regular detector with
// secret3 over the extracted pair.
DetectionReport sparse_detect(const CategoricalTable& t_prime, const CategoricalTable& t_ori,
                              double p_w, const SparseParams& params, const PriorSpec& prior,
                              size_t n_prior, double significance, uint64_t seed);

} // namespace tabmark
