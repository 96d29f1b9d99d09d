#include "tabmark/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tabmark {

uint64_t SplitMix::next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t SplitMix::next_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

size_t SplitMix::pick(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = next_unit() * total;
    double acc = 0.0;
    size_t last_positive = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (u < acc) return i;
    }
    return last_positive;
}

uint64_t mix64(uint64_t a, uint64_t b) {
    SplitMix m(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
    return m.next_u64();
}

double counter_unit(uint64_t seed, uint64_t counter) {
    SplitMix m(mix64(seed, counter));
    return m.next_unit();
}

double normal_draw(SplitMix& rng) {
    for (;;) {
        const double u = 2.0 * rng.next_unit() - 1.0;
        const double v = 2.0 * rng.next_unit() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double gamma_draw(SplitMix& rng, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gamma_draw: alpha must be positive");
    if (alpha < 1.0) {
        // Gamma(a) = Gamma(a+1) * U^(1/a). Underflow to 0 for tiny U is
        // acceptable: such draws carry negligible normalized mass.
        const double u = rng.next_unit();
        return gamma_draw(rng, alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal_draw(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::vector<double> dirichlet_draw(SplitMix& rng, double alpha, size_t k) {
    std::vector<double> v(k);
    for (;;) {
        double sum = 0.0;
        for (size_t i = 0; i < k; ++i) {
            v[i] = gamma_draw(rng, alpha);
            sum += v[i];
        }
        if (sum > 0.0) {
            for (double& x : v) x /= sum;
            return v;
        }
    }
}

} // namespace tabmark
