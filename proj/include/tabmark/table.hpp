#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tabmark/errors.hpp"

namespace tabmark {

// A row is a fixed-arity tuple of category tokens. Tokens are opaque UTF-8
// text compared by exact byte equality; numeric data must be rendered to a
// canonical decimal form before it enters the library.
using Row = std::vector<std::string>;

struct CategoricalTable {
    std::vector<std::string> column_names;
    std::vector<Row> rows;

    size_t arity() const { return column_names.size(); }
    size_t row_count() const { return rows.size(); }

    // Every row must match the header arity.
    void validate() const;

    // Index of a named column, or error.
    size_t column_index(const std::string& name) const;

    bool operator==(const CategoricalTable&) const = default;
};

// Column partition used by the watermarking scheme. z_cols is only used by
// the sparse-column method.
struct ColumnSplit {
    std::vector<size_t> x_cols;
    std::vector<size_t> y_cols;
    std::vector<size_t> z_cols;

    // Disjointness, range, and nonempty y (plus nonempty z when required).
    void validate(size_t arity, bool need_z = false) const;
};

// Deterministic bijection between distinct rows and 0..size-1. Construction
// enumerates distinct rows in ascending lexicographic byte order, so any row
// permutation of the same table yields the identical codec.
class Codec {
public:
    Codec() = default;

    static Codec construct(const std::vector<Row>& rows);
    static Codec construct(const CategoricalTable& table);

    size_t size() const { return rows_.size(); }
    std::optional<int64_t> find(const Row& row) const;
    const Row& row_at(int64_t index) const;
    const std::vector<Row>& rows() const { return rows_; }

    // Appends the row with the next index if absent; returns its index
    // either way. Only meant for deterministic extension loops; a published
    // codec is treated as immutable.
    int64_t append_if_absent(const Row& row);

    bool operator==(const Codec& other) const { return rows_ == other.rows_; }

    // JSON sidecar: ordered list of row tuples, for audit.
    std::string to_json() const;
    static Codec from_json(const std::string& text);

private:
    struct RowHash {
        size_t operator()(const Row& r) const;
    };
    std::vector<Row> rows_;
    std::unordered_map<Row, int64_t, RowHash> index_;
};

// Pure update per the scheme's update(x) operation: returns a codec equal to
// the input, extended with `row` at index size() when absent.
Codec codec_update(const Codec& codec, const Row& row);

// Distribution over a codec's domain. `values` sums to 1 (within 1e-9) and
// has exactly codec->size() entries. `codec` may be null for synthetic
// vectors whose domain is tracked by the caller.
struct ProbVector {
    std::vector<double> values;
    const Codec* codec = nullptr;
};

// Same shape but entries may be negative (insertion-inverse output).
struct SignedVector {
    std::vector<double> values;
    const Codec* codec = nullptr;
};

// values[i] = count(rows with codec index i) / row_count. Errors when a row
// is outside the codec domain.
ProbVector empirical_prob_vector(const CategoricalTable& table, const Codec& codec);

// Column projection; order follows `cols`.
Row project_row(const Row& row, std::span<const size_t> cols);
CategoricalTable project(const CategoricalTable& table, std::span<const size_t> cols);

struct SplitTables {
    CategoricalTable x;
    CategoricalTable y;
    CategoricalTable z; // empty unless the split carries z_cols
};

SplitTables split_columns(const CategoricalTable& table, const ColumnSplit& split);

// Rebuilds the (x|y[|z]) projection from split parts, in split order.
// Inverse of split_columns up to column ordering; used by tests and the
// sparse method.
CategoricalTable merge_columns(const SplitTables& parts);

// RFC 4180 CSV. load errors on ragged rows (with the line number) and on
// empty files; save quotes cells only when needed.
CategoricalTable load_csv(const std::string& path, bool has_header = true);
void save_csv(const CategoricalTable& table, const std::string& path);

// Parse/emit against in-memory text (the file functions wrap these).
CategoricalTable parse_csv(const std::string& text, bool has_header = true);
std::string emit_csv(const CategoricalTable& table);

} // namespace tabmark
