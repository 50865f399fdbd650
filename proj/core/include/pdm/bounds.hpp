#pragma once

#include <cstdint>

namespace pdm {

/// Inputs shared by the update-count bounds.
struct BoundInputs {
    double epsilon;  ///< target accuracy, 0 < epsilon <= 1
    double radius;   ///< R, the largest pattern norm
    double gamma_d;  ///< maximum directional margin, 0 < gamma_d <= R

    void validate() const;
};

/// Upper bound t0 = (1 + 1/e) delta (C + ln((1 + e) delta)) on every t >= e^-C with
/// t < delta (1 + C + ln t). Requires delta >= e^-C.
[[nodiscard]] double lemma1_t0(double delta, double c);

/// Update-count bound of the fixed-margin perceptron run with beta = (1 - epsilon) gamma_d.
[[nodiscard]] double theorem1_bound(double epsilon, double radius, double gamma_d);
[[nodiscard]] inline double theorem1_bound(const BoundInputs &in) {
    return theorem1_bound(in.epsilon, in.radius, in.gamma_d);
}

/// Update-count bound of the dynamic-margin perceptron. `loose` is the first-approximation t0,
/// `tightened` the value obtained by substituting t0 back into the implicit inequality
/// (tightened <= loose). At epsilon = 1/2 both coincide. Values that overflow a double are +inf.
struct Theorem2Bound {
    double loose;
    double tightened;
};

[[nodiscard]] Theorem2Bound theorem2_bound(double epsilon, double radius, double gamma_d);
[[nodiscard]] inline Theorem2Bound theorem2_bound(const BoundInputs &in) {
    return theorem2_bound(in.epsilon, in.radius, in.gamma_d);
}

/// The general warm-started bound for epsilon < 1/2, given that after n_warm updates
/// ||a|| = alpha_n * R * n_warm:
///   t0 = N (alpha_N R / gamma)^(1/eps) (1 + alpha_N^-2 N^-1 / (1 - 2 eps))^(1/(2 eps)).
[[nodiscard]] double warm_start_t0(double epsilon, double n_warm, double alpha_n, double radius, double gamma_d);

/// 1 - gamma'_d t_c / ||a_{t_c}||: an upper bound on (gamma_d - gamma'_d) / gamma_d.
[[nodiscard]] double after_run_estimate(double gamma_prime_d, std::uint64_t t_c, double norm_a);

/// Bound on the cumulative update count at the end of the next successive-run stage
/// (accuracy epsilon_n / eta), given t_cn updates at the end of the stage with accuracy epsilon_n.
[[nodiscard]] double succ_ratio_bound(double epsilon_n, double eta, double t_cn, double radius, double gamma_d);

}  // namespace pdm
