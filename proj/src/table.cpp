#include "tabmark/table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tabmark {

void CategoricalTable::validate() const {
    const size_t n = arity();
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != n) {
            throw ValidationError("row " + std::to_string(i) + " has arity " +
                                  std::to_string(rows[i].size()) + ", expected " +
                                  std::to_string(n));
        }
    }
}

size_t CategoricalTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < column_names.size(); ++i) {
        if (column_names[i] == name) return i;
    }
    throw ValidationError("no column named '" + name + "'");
}

void ColumnSplit::validate(size_t arity, bool need_z) const {
    if (y_cols.empty()) throw ValidationError("column split: y_cols must be nonempty");
    if (need_z && z_cols.empty()) throw ValidationError("column split: z_cols must be nonempty");
    std::vector<bool> seen(arity, false);
    auto check = [&](const std::vector<size_t>& cols, const char* part) {
        for (size_t c : cols) {
            if (c >= arity) {
                throw ValidationError(std::string("column split: ") + part + " index " +
                                      std::to_string(c) + " out of range for arity " +
                                      std::to_string(arity));
            }
            if (seen[c]) {
                throw ValidationError(std::string("column split: index ") + std::to_string(c) +
                                      " appears in more than one part");
            }
            seen[c] = true;
        }
    };
    check(x_cols, "x_cols");
    check(y_cols, "y_cols");
    check(z_cols, "z_cols");
}

size_t Codec::RowHash::operator()(const Row& r) const {
    // FNV-1a over cells with a separator byte between them.
    uint64_t h = 1469598103934665603ULL;
    for (const std::string& cell : r) {
        for (unsigned char c : cell) {
            h = (h ^ c) * 1099511628211ULL;
        }
        h = (h ^ 0x1f) * 1099511628211ULL;
    }
    return static_cast<size_t>(h);
}

Codec Codec::construct(const std::vector<Row>& rows) {
    std::vector<Row> uniq = rows;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    Codec c;
    c.rows_ = std::move(uniq);
    c.index_.reserve(c.rows_.size());
    for (size_t i = 0; i < c.rows_.size(); ++i) {
        c.index_.emplace(c.rows_[i], static_cast<int64_t>(i));
    }
    return c;
}

Codec Codec::construct(const CategoricalTable& table) {
    if (table.rows.empty()) throw ValidationError("codec construction requires a nonempty table");
    return construct(table.rows);
}

std::optional<int64_t> Codec::find(const Row& row) const {
    auto it = index_.find(row);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const Row& Codec::row_at(int64_t index) const {
    if (index < 0 || static_cast<size_t>(index) >= rows_.size()) {
        throw ValidationError("codec index " + std::to_string(index) + " out of range");
    }
    return rows_[static_cast<size_t>(index)];
}

int64_t Codec::append_if_absent(const Row& row) {
    auto it = index_.find(row);
    if (it != index_.end()) return it->second;
    const int64_t idx = static_cast<int64_t>(rows_.size());
    rows_.push_back(row);
    index_.emplace(row, idx);
    return idx;
}

std::string Codec::to_json() const {
    nlohmann::json j;
    j["rows"] = rows_;
    return j.dump();
}

Codec Codec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("codec json: ") + e.what());
    }
    if (!j.contains("rows") || !j["rows"].is_array()) {
        throw ParseError("codec json: missing 'rows' array");
    }
    Codec c;
    for (const auto& jr : j["rows"]) {
        Row r = jr.get<Row>();
        if (c.index_.count(r)) throw ParseError("codec json: duplicate row");
        c.index_.emplace(r, static_cast<int64_t>(c.rows_.size()));
        c.rows_.push_back(std::move(r));
    }
    return c;
}

Codec codec_update(const Codec& codec, const Row& row) {
    Codec out = codec;
    out.append_if_absent(row);
    return out;
}

ProbVector empirical_prob_vector(const CategoricalTable& table, const Codec& codec) {
    if (table.rows.empty()) throw ValidationError("empirical distribution of an empty table");
    ProbVector v;
    v.values.assign(codec.size(), 0.0);
    v.codec = &codec;
    for (const Row& r : table.rows) {
        auto idx = codec.find(r);
        if (!idx) {
            std::string repr;
            for (size_t i = 0; i < r.size(); ++i) {
                if (i) repr += ",";
                repr += r[i];
            }
            throw ValidationError("row (" + repr + ") is outside the codec domain");
        }
        v.values[static_cast<size_t>(*idx)] += 1.0;
    }
    const double n = static_cast<double>(table.rows.size());
    for (double& x : v.values) x /= n;
    return v;
}

Row project_row(const Row& row, std::span<const size_t> cols) {
    Row out;
    out.reserve(cols.size());
    for (size_t c : cols) out.push_back(row[c]);
    return out;
}

CategoricalTable project(const CategoricalTable& table, std::span<const size_t> cols) {
    CategoricalTable out;
    out.column_names.reserve(cols.size());
    for (size_t c : cols) {
        if (c >= table.arity()) {
            throw ValidationError("projection index " + std::to_string(c) +
                                  " out of range for arity " + std::to_string(table.arity()));
        }
        out.column_names.push_back(table.column_names[c]);
    }
    out.rows.reserve(table.rows.size());
    for (const Row& r : table.rows) out.rows.push_back(project_row(r, cols));
    return out;
}

SplitTables split_columns(const CategoricalTable& table, const ColumnSplit& split) {
    split.validate(table.arity());
    SplitTables parts;
    parts.x = project(table, split.x_cols);
    parts.y = project(table, split.y_cols);
    if (!split.z_cols.empty()) parts.z = project(table, split.z_cols);
    return parts;
}

CategoricalTable merge_columns(const SplitTables& parts) {
    CategoricalTable out;
    auto append_part = [&](const CategoricalTable& p) {
        if (p.column_names.empty()) return;
        if (!out.column_names.empty() && p.row_count() != out.row_count()) {
            throw ValidationError("merge_columns: parts have differing row counts");
        }
        if (out.rows.empty()) out.rows.resize(p.row_count());
        out.column_names.insert(out.column_names.end(), p.column_names.begin(),
                                p.column_names.end());
        for (size_t i = 0; i < p.rows.size(); ++i) {
            out.rows[i].insert(out.rows[i].end(), p.rows[i].begin(), p.rows[i].end());
        }
    };
    append_part(parts.x);
    append_part(parts.y);
    append_part(parts.z);
    return out;
}

// --- CSV ---

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

void emit_cell(std::string& out, const std::string& cell) {
    if (!needs_quoting(cell)) {
        out += cell;
        return;
    }
    out += '"';
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

std::string emit_csv(const CategoricalTable& table) {
    table.validate();
    std::string out;
    auto emit_row = [&](const Row& r) {
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            emit_cell(out, r[i]);
        }
        out += "\r\n";
    };
    emit_row(table.column_names);
    for (const Row& r : table.rows) emit_row(r);
    return out;
}

CategoricalTable parse_csv(const std::string& text, bool has_header) {
    if (text.empty()) throw ParseError("csv: empty input");

    std::vector<Row> records;
    std::vector<size_t> record_lines;
    Row current;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false; // current record has content
    size_t line = 1;
    size_t record_start_line = 1;

    auto end_cell = [&]() {
        current.push_back(cell);
        cell.clear();
    };
    auto end_record = [&]() {
        end_cell();
        // A fully empty line is not a record.
        if (!(current.size() == 1 && current[0].empty())) {
            records.push_back(current);
            record_lines.push_back(record_start_line);
        }
        current.clear();
        cell_started = false;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!cell.empty()) {
                    throw ParseError("csv line " + std::to_string(line) +
                                     ": quote inside unquoted cell");
                }
                in_quotes = true;
                cell_started = true;
                break;
            case ',':
                end_cell();
                cell_started = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                [[fallthrough]];
            case '\n':
                end_record();
                ++line;
                record_start_line = line;
                break;
            default:
                cell += c;
                cell_started = true;
                break;
        }
    }
    if (in_quotes) throw ParseError("csv: unterminated quoted cell");
    if (cell_started || !cell.empty() || !current.empty()) end_record();

    if (records.empty()) throw ParseError("csv: no records");

    CategoricalTable table;
    size_t first_data = 0;
    if (has_header) {
        table.column_names = records[0];
        first_data = 1;
    } else {
        table.column_names.resize(records[0].size());
        for (size_t i = 0; i < records[0].size(); ++i) {
            table.column_names[i] = "c" + std::to_string(i);
        }
    }
    const size_t arity = table.column_names.size();
    for (size_t r = first_data; r < records.size(); ++r) {
        if (records[r].size() != arity) {
            throw ParseError("csv line " + std::to_string(record_lines[r]) + ": row has " +
                             std::to_string(records[r].size()) + " cells, expected " +
                             std::to_string(arity));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CategoricalTable load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_csv(ss.str(), has_header);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_csv(const CategoricalTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << emit_csv(table);
    if (!out) throw Error("write failed for '" + path + "'");
}

} // namespace tabmark
