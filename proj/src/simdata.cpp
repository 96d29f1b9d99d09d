#include "tabmark/simdata.hpp"

#include <algorithm>
#include <array>

#include "tabmark/rng.hpp"

namespace tabmark {

namespace {

// Marginals shared by simulations 1 and 2. The six-point vector is
// normalized (the raw weights total 1.001).
constexpr std::array<double, 6> kX12Weights = {0.526, 0.263, 0.053, 0.053, 0.053, 0.053};
constexpr std::array<double, 4> kY12Probs = {0.077, 0.077, 0.077, 0.769};
constexpr std::array<double, 5> kX5Probs = {0.375, 0.25, 0.125, 0.125, 0.125};
constexpr std::array<double, 3> kNoise1Probs = {0.92, 0.04, 0.04};
constexpr std::array<double, 2> kEpsProbs = {0.8, 0.2};

int64_t draw_cat(SplitMix& rng, std::span<const double> probs) {
    return static_cast<int64_t>(rng.pick(probs));
}

std::string tok(int64_t v) { return std::to_string(v); }

Row sim1_row(SplitMix& rng, bool three_x) {
    Row r;
    r.reserve(three_x ? 5 : 4);
    const size_t nx = three_x ? 3 : 2;
    for (size_t i = 0; i < nx; ++i) r.push_back(tok(draw_cat(rng, kX12Weights)));
    for (size_t i = 0; i < 2; ++i) r.push_back(tok(draw_cat(rng, kY12Probs)));
    return r;
}

Row sim3_row(SplitMix& rng) {
    // One epsilon realization per row, copied wherever the construction
    // references it; mixture selectors are independent.
    const int64_t x1 = static_cast<int64_t>(rng.next_below(4));
    const int64_t eps = draw_cat(rng, kEpsProbs);
    const int64_t x2 = rng.next_unit() < 0.9 ? x1 : eps;
    const int64_t x3 = std::min<int64_t>(3, x1 + eps);
    const int64_t x4 = static_cast<int64_t>(rng.next_below(3));
    const int64_t y1 = rng.next_unit() < 0.9 ? x4 + eps : eps;
    const int64_t y2 = rng.next_unit() < 0.9 ? y1 : eps;
    return {tok(x1), tok(x2), tok(x3), tok(x4), tok(y1), tok(y2)};
}

Row sim5_row(SplitMix& rng) {
    const int64_t x1 = draw_cat(rng, kX5Probs);
    const int64_t x2 = draw_cat(rng, kX5Probs);
    const int64_t x3 = rng.next_unit() < 0.9 ? std::min<int64_t>(6, x1 + x2) : 0;
    const double u4 = rng.next_unit();
    const int64_t x4 = u4 < 0.8 ? x1 : (u4 < 0.9 ? x2 : x3);
    const int64_t x5 = rng.next_unit() < 0.9 ? std::max<int64_t>(0, x4 - x1) : 5;
    const int64_t n1 = draw_cat(rng, kNoise1Probs);
    const int64_t n2 = draw_cat(rng, kEpsProbs);
    const int64_t y1 = std::min<int64_t>(7, x1 + x2 + n1);
    const int64_t y2 = std::min<int64_t>(7, x3 + x4 + n1);
    const int64_t y3 = std::max<int64_t>(0, y2 - x5 - n1);
    const int64_t y4 = std::max<int64_t>(0, y2 - x4 + n2);
    return {tok(x1), tok(x2), tok(x3), tok(x4), tok(x5),
            tok(y1), tok(y2), tok(y3), tok(y4)};
}

} // namespace

CategoricalTable generate(const SimSpec& spec) {
    if (spec.n_rows < 1) throw ValidationError("simdata: n_rows must be >= 1");
    CategoricalTable t;
    switch (spec.sim_id) {
        case 1: t.column_names = {"X1", "X2", "Y1", "Y2"}; break;
        case 2: t.column_names = {"X1", "X2", "X3", "Y1", "Y2"}; break;
        case 3: t.column_names = {"X1", "X2", "X3", "X4", "Y1", "Y2"}; break;
        case 5:
            t.column_names = {"X1", "X2", "X3", "X4", "X5", "Y1", "Y2", "Y3", "Y4"};
            break;
        default:
            throw ValidationError("simdata: unknown simulation id " +
                                  std::to_string(spec.sim_id));
    }
    const uint64_t stream = mix64(spec.seed, static_cast<uint64_t>(spec.sim_id));
    t.rows.reserve(spec.n_rows);
    for (size_t i = 0; i < spec.n_rows; ++i) {
        SplitMix rng(mix64(stream, i));
        switch (spec.sim_id) {
            case 1: t.rows.push_back(sim1_row(rng, false)); break;
            case 2: t.rows.push_back(sim1_row(rng, true)); break;
            case 3: t.rows.push_back(sim3_row(rng)); break;
            case 5: t.rows.push_back(sim5_row(rng)); break;
        }
    }
    return t;
}

ColumnSplit default_split(int sim_id) {
    ColumnSplit s;
    switch (sim_id) {
        case 1: s.x_cols = {0, 1}; s.y_cols = {2, 3}; break;
        case 2: s.x_cols = {0, 1, 2}; s.y_cols = {3, 4}; break;
        case 3: s.x_cols = {0, 1, 2, 3}; s.y_cols = {4, 5}; break;
        case 5: s.x_cols = {0, 1, 2, 3, 4}; s.y_cols = {5, 6, 7, 8}; break;
        default:
            throw ValidationError("simdata: unknown simulation id " + std::to_string(sim_id));
    }
    return s;
}

} // namespace tabmark
