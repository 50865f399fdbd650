#include "toys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace pdm::testing {

Toy random_toy(std::mt19937_64 &rng, const ToySpec &spec) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<double> w(spec.dim);
    double w_norm = 0.0;
    for (auto &v : w) {
        v = normal(rng);
        w_norm += v * v;
    }
    w_norm = std::sqrt(w_norm);
    for (auto &v : w) v /= w_norm;
    const double bias = 0.3 * unit(rng);

    Toy toy;
    while (toy.patterns.size() < spec.m) {
        std::vector<double> x(spec.dim, 0.0);
        for (auto &v : x) {
            if (coin(rng) < spec.density) v = unit(rng);
        }
        double score = bias;
        for (std::size_t i = 0; i < spec.dim; ++i) score += w[i] * x[i];
        if (std::abs(score) < spec.gap) continue;

        SparsePattern p;
        p.label = score > 0.0 ? 1 : -1;
        if (coin(rng) < spec.label_noise) p.label = -p.label;
        for (std::size_t i = 0; i < spec.dim; ++i) {
            if (x[i] != 0.0) p.features.push_back({static_cast<std::uint32_t>(i), x[i]});
        }
        toy.patterns.push_back(std::move(p));
    }
    toy.ds = build_working(toy.patterns, spec.delta, 1.0);
    return toy;
}

Toy acceptance_toy(std::uint64_t index) {
    std::mt19937_64 rng(0x5eed0000 + index);
    constexpr double deltas[] = {0.0, 0.1, 1.0};
    ToySpec spec;
    spec.m = std::uniform_int_distribution<std::size_t>(2, 200)(rng);
    spec.dim = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    spec.delta = deltas[index % 3];
    spec.density = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
    spec.gap = 0.05;
    spec.label_noise = spec.delta > 0.0 ? 0.05 : 0.0;
    return random_toy(rng, spec);
}

std::vector<std::vector<double>> materialize(const WorkingDataset &ds) {
    const std::size_t n = ds.explicit_dim() + ds.size();
    std::vector<std::vector<double>> out(ds.size(), std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const auto idx = ds.indices(k);
        const auto val = ds.values(k);
        for (std::size_t i = 0; i < idx.size(); ++i) out[k][idx[i]] = val[i];
        out[k][ds.explicit_dim() + k] = ds.label(k) * ds.delta();
    }
    return out;
}

double dense_dot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> materialize(const WeightState &state, const WorkingDataset &ds) {
    std::vector<double> out(ds.explicit_dim() + ds.size(), 0.0);
    const auto w = state.weights();
    std::copy(w.begin(), w.end(), out.begin());
    for (std::size_t k = 0; k < ds.size(); ++k) {
        out[ds.explicit_dim() + k] = static_cast<double>(state.count(k)) * ds.label(k) * ds.delta();
    }
    return out;
}

std::optional<std::uint64_t> replay(WeightState &state, const WorkingDataset &ds, std::size_t k,
                                    const MarginCondition &condition, std::uint64_t cap) {
    std::uint64_t n = 0;
    while (dot(state, ds, k) <= condition.threshold(state)) {
        if (n == cap) return std::nullopt;
        single_update(state, ds, k);
        ++n;
    }
    return n;
}

WeightState random_reachable(std::mt19937_64 &rng, const WorkingDataset &ds, const MarginCondition &condition,
                             std::size_t steps) {
    WeightState state(ds);
    std::uniform_int_distribution<std::size_t> pick(0, ds.size() - 1);
    for (std::size_t s = 0; s < steps; ++s) {
        // A handful of tries to find a pattern the condition selects; stop early at convergence.
        bool updated = false;
        for (int attempt = 0; attempt < 4 * static_cast<int>(ds.size()) && !updated; ++attempt) {
            const std::size_t k = pick(rng);
            if (dot(state, ds, k) <= condition.threshold(state)) {
                single_update(state, ds, k);
                updated = true;
            }
        }
        if (!updated) break;
    }
    return state;
}

double hull_distance_2d(const std::vector<std::array<double, 2>> &points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &p : points) best = std::min(best, std::hypot(p[0], p[1]));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double ex = points[j][0] - points[i][0];
            const double ey = points[j][1] - points[i][1];
            const double len_sq = ex * ex + ey * ey;
            if (len_sq == 0.0) continue;
            const double s = std::clamp(-(points[i][0] * ex + points[i][1] * ey) / len_sq, 0.0, 1.0);
            best = std::min(best, std::hypot(points[i][0] + s * ex, points[i][1] + s * ey));
        }
    }
    // The origin inside a triangle of the set means distance zero.
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            for (std::size_t k = j + 1; k < points.size(); ++k) {
                const auto cross = [](const std::array<double, 2> &a, const std::array<double, 2> &b) {
                    return a[0] * b[1] - a[1] * b[0];
                };
                const double c1 = cross(points[i], points[j]);
                const double c2 = cross(points[j], points[k]);
                const double c3 = cross(points[k], points[i]);
                if ((c1 >= 0 && c2 >= 0 && c3 >= 0) || (c1 <= 0 && c2 <= 0 && c3 <= 0)) return 0.0;
            }
        }
    }
    return best;
}

}  // namespace pdm::testing
