#pragma once

#include "pdm/data.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pdm {

/// Largest multiple-update count accepted before the run is aborted as numerically degenerate.
inline constexpr std::uint64_t max_multiple_update = std::uint64_t{1} << 32;

/// The perceptron weight vector a_t in the extended space.
///
/// The explicit block is stored densely. The virtual (slack) block is represented by the per-pattern
/// update counts c_k: its k-th coordinate is c_k * l_k * delta, so it only ever contributes
/// c_k * delta^2 to a_t . y_k and delta^2 * sum c_k^2 to ||a_t||^2.
class WeightState {
  public:
    WeightState() = default;
    /// The zero vector a_0 sized for `ds`.
    explicit WeightState(const WorkingDataset &ds) : weights_(ds.explicit_dim(), 0.0), counts_(ds.size(), 0) {}

    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    [[nodiscard]] std::uint64_t count(std::size_t k) const noexcept { return counts_[k]; }
    /// Total number of perceptron updates t (multiple updates count with their multiplicity).
    [[nodiscard]] std::uint64_t updates() const noexcept { return t_; }
    /// Cached ||a_t||^2, maintained incrementally.
    [[nodiscard]] double norm_sq() const noexcept { return norm_sq_; }
    [[nodiscard]] double norm() const noexcept { return std::sqrt(norm_sq_); }

    /// ||a_t||^2 recomputed from scratch as ||w||^2 + delta^2 * sum_k c_k^2.
    [[nodiscard]] double recompute_norm_sq(const WorkingDataset &ds) const noexcept;
    /// Replaces the cached norm with the recomputed one; returns the absolute drift removed.
    double refresh_norm(const WorkingDataset &ds) noexcept;

    /// a_t += lambda * y_k, given `dot` = a_t . y_k evaluated before the update.
    void add(const WorkingDataset &ds, std::size_t k, std::uint64_t lambda, double dot);

  private:
    std::vector<double> weights_;
    std::vector<std::uint64_t> counts_;
    double norm_sq_{0.0};
    std::uint64_t t_{0};
};

/// The scalar quantities a misclassification test and a multiple update depend on.
struct UpdateGeometry {
    std::uint64_t t;  ///< updates so far
    double norm_sq;   ///< ||a_t||^2
    double dot;       ///< a_t . y_k
    double self_sq;   ///< ||y_k||^2
};

/// Misclassification condition of a margin perceptron: the pattern triggers an update when
/// a_t . y_k <= threshold(a_t).
class MarginCondition {
  public:
    enum class Kind { dynamic_margin, fixed_margin };

    /// a . y_k <= (1 - epsilon) ||a||^2 / t, with threshold 0 at t = 0. Requires 0 < epsilon <= 1.
    [[nodiscard]] static MarginCondition dynamic(double epsilon);
    /// a . y_k <= beta ||a||. Requires beta > 0.
    [[nodiscard]] static MarginCondition fixed(double beta);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    /// epsilon for the dynamic condition, beta for the fixed one.
    [[nodiscard]] double parameter() const noexcept { return param_; }

    [[nodiscard]] double threshold(std::uint64_t t, double norm_sq) const noexcept;
    [[nodiscard]] double threshold(const WeightState &state) const noexcept {
        return threshold(state.updates(), state.norm_sq());
    }
    /// Whether the condition still holds after mu further updates with the same pattern,
    /// evaluated in closed form from the pre-update geometry.
    [[nodiscard]] bool holds_after(const UpdateGeometry &g, double mu) const noexcept;
    /// Number of identical updates after which the pattern stops satisfying the condition.
    [[nodiscard]] std::uint64_t multiple_count(const UpdateGeometry &g) const;

  private:
    MarginCondition(Kind kind, double param) : kind_{kind}, param_{param} {}

    Kind kind_;
    double param_;
};

/// a_t . y_k = w . ybar_k + c_k delta^2
[[nodiscard]] inline double dot(const WeightState &state, const WorkingDataset &ds, std::size_t k) noexcept {
    return ds.explicit_dot(state.weights(), k) + static_cast<double>(state.count(k)) * ds.delta_sq();
}

[[nodiscard]] bool dynamic_condition(const WeightState &state, const WorkingDataset &ds, std::size_t k, double epsilon);
[[nodiscard]] bool fixed_condition(const WeightState &state, const WorkingDataset &ds, std::size_t k, double beta);

/// a_{t+1} = a_t + y_k
void single_update(WeightState &state, const WorkingDataset &ds, std::size_t k);
/// a_{t+lambda} = a_t + lambda y_k, equivalent to lambda single updates.
void apply_multiple(WeightState &state, const WorkingDataset &ds, std::size_t k, std::uint64_t lambda);

/// [mu+] + 1 with mu+ the smallest non-negative root of
/// (t + mu)(a.y + mu ||y||^2) = (1 - eps)(||a||^2 + 2 mu a.y + mu^2 ||y||^2). Returns 1 at t = 0.
[[nodiscard]] std::uint64_t multiple_update_count_dynamic(const WeightState &state, const WorkingDataset &ds,
                                                          std::size_t k, double epsilon);
/// Same for the fixed condition, from the squared boundary equation
/// (a.y + mu ||y||^2)^2 = beta^2 ||a + mu y||^2 restricted to a_{t+mu} . y >= 0.
/// Returns 1 when ||y_k|| <= beta (no finite crossing exists).
[[nodiscard]] std::uint64_t multiple_update_count_fixed(const WeightState &state, const WorkingDataset &ds,
                                                        std::size_t k, double beta);

struct MarginReport {
    double gamma_prime_d;  ///< min_k a . y_k / ||a||
    std::size_t argmin;    ///< lowest index attaining the minimum
};

/// Directional margin achieved by the current weight vector. Throws invalid_parameter for a = 0.
[[nodiscard]] MarginReport evaluate_margin(const WeightState &state, const WorkingDataset &ds);

/// Both sides of the consecutive-ratio identity
///   N_t/t^2 - N_{t+1}/(t+1)^2 = [(N_t/t - d_t) + (N_{t+1}/(t+1) - d_{t+1})] / (t(t+1))
/// with N = ||a||^2 and d = a . y_k.
struct Eq6Terms {
    double lhs;
    double rhs;
    [[nodiscard]] double residual() const noexcept { return lhs - rhs; }
};

[[nodiscard]] Eq6Terms eq6_terms(std::uint64_t t, double norm_sq_before, double dot_before, double norm_sq_after,
                                 double dot_after);

/// LHS - RHS of the identity for `after` = `before` + y_k. Both states need t > 0.
[[nodiscard]] double eq6_residual(const WeightState &before, const WeightState &after, const WorkingDataset &ds,
                                  std::size_t k);

}  // namespace pdm
