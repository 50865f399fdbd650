#include "pdm/bounds.hpp"

#include "pdm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pdm {

namespace {

constexpr double e = std::numbers::e;
constexpr double half_tolerance = 1e-12;

bool is_half(double epsilon) { return std::abs(epsilon - 0.5) <= half_tolerance; }

// exp() that saturates to +inf instead of raising range errors on absurd exponents.
double exp_or_inf(double x) {
    if (x > std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::infinity();
    return std::exp(x);
}

}  // namespace

void BoundInputs::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw invalid_parameter("epsilon must lie in (0, 1]");
    if (!(gamma_d > 0.0) || !std::isfinite(gamma_d)) throw invalid_parameter("gamma_d must be positive and finite");
    if (!std::isfinite(radius) || radius < gamma_d * (1.0 - 1e-12)) {
        throw invalid_parameter("radius must be finite and at least gamma_d");
    }
}

double lemma1_t0(double delta, double c) {
    if (!std::isfinite(delta) || !std::isfinite(c) || !(delta >= std::exp(-c))) {
        throw invalid_parameter("lemma1_t0 requires delta >= exp(-C)");
    }
    return (1.0 + 1.0 / e) * delta * (c + std::log((1.0 + e) * delta));
}

double theorem1_bound(double epsilon, double radius, double gamma_d) {
    BoundInputs{epsilon, radius, gamma_d}.validate();
    const double g = gamma_d / radius;
    const double shrink = 1.0 - g * (1.0 - epsilon);
    return (1.0 + 1.0 / e) / (2.0 * epsilon) / (g * g) *
           (4.0 * g * shrink + std::log((1.0 + e) / epsilon / g * shrink));
}

double warm_start_t0(double epsilon, double n_warm, double alpha_n, double radius, double gamma_d) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw invalid_parameter("warm_start_t0 requires 0 < epsilon < 1/2");
    if (!(n_warm >= 1.0) || !(alpha_n > 0.0) || !(gamma_d > 0.0) || !(radius > 0.0)) {
        throw invalid_parameter("warm_start_t0 requires N >= 1, alpha_N > 0, R > 0, gamma_d > 0");
    }
    const double log_t0 = std::log(n_warm) + std::log(alpha_n * radius / gamma_d) / epsilon +
                          std::log1p(1.0 / (alpha_n * alpha_n * n_warm * (1.0 - 2.0 * epsilon))) / (2.0 * epsilon);
    return exp_or_inf(log_t0);
}

Theorem2Bound theorem2_bound(double epsilon, double radius, double gamma_d) {
    BoundInputs{epsilon, radius, gamma_d}.validate();
    const double ratio_sq = (radius / gamma_d) * (radius / gamma_d);

    if (is_half(epsilon)) {
        const double t = (1.0 + 1.0 / e) * ratio_sq * std::log((1.0 + e) * ratio_sq);
        return {t, t};
    }

    if (epsilon < 0.5) {
        // [1/eps] with a nudge so that e.g. 1/0.1 does not floor to 9.
        const double n_warm = std::floor(1.0 / epsilon * (1.0 + 1e-12));
        const double loose = warm_start_t0(epsilon, n_warm, 1.0, radius, gamma_d);
        if (std::isinf(loose)) return {loose, loose};
        const double x = ratio_sq / (1.0 - 2.0 * epsilon) / loose;
        const double tightened = exp_or_inf(std::log(loose) + std::log1p(-x) / (2.0 * epsilon));
        return {loose, tightened};
    }

    const double loose = epsilon * (3.0 - 2.0 * epsilon) / (2.0 * epsilon - 1.0) * ratio_sq;
    const double tightened = loose * (1.0 - 2.0 * (1.0 - epsilon) * std::pow(loose, 1.0 - 2.0 * epsilon));
    return {loose, tightened};
}

double after_run_estimate(double gamma_prime_d, std::uint64_t t_c, double norm_a) {
    if (t_c == 0 || !(norm_a > 0.0)) throw invalid_parameter("after_run_estimate requires t_c > 0 and ||a|| > 0");
    const double ceiling = norm_a / static_cast<double>(t_c);
    if (!(gamma_prime_d > 0.0) || gamma_prime_d > ceiling * (1.0 + 1e-12)) {
        throw invalid_parameter("after_run_estimate requires 0 < gamma'_d <= ||a||/t_c");
    }
    return std::max(0.0, 1.0 - gamma_prime_d / ceiling);
}

double succ_ratio_bound(double epsilon_n, double eta, double t_cn, double radius, double gamma_d) {
    if (!(epsilon_n > 0.0 && epsilon_n <= 0.5)) throw invalid_parameter("succ_ratio_bound requires 0 < epsilon_n <= 1/2");
    if (!(eta > 1.0)) throw invalid_parameter("succ_ratio_bound requires eta > 1");
    if (!(t_cn >= 1.0)) throw invalid_parameter("succ_ratio_bound requires t_cn >= 1");
    if (!(gamma_d > 0.0) || radius < gamma_d) throw invalid_parameter("succ_ratio_bound requires R >= gamma_d > 0");
    const double ratio_sq = (radius / gamma_d) * (radius / gamma_d);
    const double inner = (1.0 - epsilon_n) * (1.0 - epsilon_n) / (1.0 - 2.0 * epsilon_n / eta) * ratio_sq / t_cn;
    const double log_bound = std::log(t_cn) - eta / epsilon_n * std::log1p(-epsilon_n) +
                             eta / (2.0 * epsilon_n) * std::log1p(inner);
    return exp_or_inf(log_bound);
}

}  // namespace pdm
