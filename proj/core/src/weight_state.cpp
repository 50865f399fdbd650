#include "pdm/weight_state.hpp"

#include "pdm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pdm {

double WeightState::recompute_norm_sq(const WorkingDataset &ds) const noexcept {
    double w_sq = 0.0;
    for (const double w : weights_) w_sq += w * w;
    double c_sq = 0.0;
    for (const std::uint64_t c : counts_) {
        const double cd = static_cast<double>(c);
        c_sq += cd * cd;
    }
    return w_sq + ds.delta_sq() * c_sq;
}

double WeightState::refresh_norm(const WorkingDataset &ds) noexcept {
    const double fresh = recompute_norm_sq(ds);
    const double drift = std::abs(fresh - norm_sq_);
    norm_sq_ = fresh;
    return drift;
}

void WeightState::add(const WorkingDataset &ds, std::size_t k, std::uint64_t lambda, double dot) {
    if (lambda == 0) return;
    if (t_ > std::numeric_limits<std::uint64_t>::max() - lambda) throw numeric_error("update counter overflow");
    const double l = static_cast<double>(lambda);
    norm_sq_ += 2.0 * l * dot + l * l * ds.norm_sq(k);
    ds.add_explicit(weights_, k, l);
    counts_[k] += lambda;
    t_ += lambda;
}

MarginCondition MarginCondition::dynamic(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw invalid_parameter("epsilon must lie in (0, 1]");
    return {Kind::dynamic_margin, epsilon};
}

MarginCondition MarginCondition::fixed(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw invalid_parameter("beta must be positive and finite");
    return {Kind::fixed_margin, beta};
}

double MarginCondition::threshold(std::uint64_t t, double norm_sq) const noexcept {
    if (kind_ == Kind::dynamic_margin) {
        return t == 0 ? 0.0 : (1.0 - param_) * norm_sq / static_cast<double>(t);
    }
    return param_ * std::sqrt(norm_sq);
}

bool MarginCondition::holds_after(const UpdateGeometry &g, double mu) const noexcept {
    const double d = g.dot + mu * g.self_sq;
    const double n = g.norm_sq + 2.0 * mu * g.dot + mu * mu * g.self_sq;
    if (kind_ == Kind::dynamic_margin) {
        const double t = static_cast<double>(g.t) + mu;
        return t == 0.0 ? d <= 0.0 : d <= (1.0 - param_) * n / t;
    }
    return d <= param_ * std::sqrt(n);
}

std::uint64_t MarginCondition::multiple_count(const UpdateGeometry &g) const {
    double mu = 0.0;
    if (kind_ == Kind::dynamic_margin) {
        if (g.t == 0) return 1;
        const double eps = param_;
        const double t = static_cast<double>(g.t);
        const double qa = eps * g.self_sq;
        const double qb = t * g.self_sq + (2.0 * eps - 1.0) * g.dot;
        const double qc = t * g.dot - (1.0 - eps) * g.norm_sq;
        if (qc < 0.0) {
            // qa > 0 and qc < 0: exactly one positive root.
            const double sq = std::sqrt(qb * qb - 4.0 * qa * qc);
            mu = qb >= 0.0 ? (-2.0 * qc) / (qb + sq) : (-qb + sq) / (2.0 * qa);
        }
    } else {
        const double beta = param_;
        const double s = g.self_sq;
        if (s <= beta * beta) return 1;
        const double gram = std::max(0.0, s * g.norm_sq - g.dot * g.dot);
        mu = (-g.dot + beta * std::sqrt(gram / (s - beta * beta))) / s;
        if (!(mu > 0.0)) mu = 0.0;
    }
    if (!std::isfinite(mu) || mu >= static_cast<double>(max_multiple_update)) {
        throw numeric_error("multiple update count out of range (mu = " + std::to_string(mu) + ")");
    }

    auto lambda = static_cast<std::uint64_t>(std::floor(mu)) + 1;
    // Near an integer root the rounded closed form can be off by one; settle it with the direct test.
    for (int i = 0; i < 16 && lambda > 1 && !holds_after(g, static_cast<double>(lambda - 1)); ++i) --lambda;
    for (int i = 0; i < 16 && holds_after(g, static_cast<double>(lambda)); ++i) ++lambda;
    if (holds_after(g, static_cast<double>(lambda)) ||
        (lambda > 1 && !holds_after(g, static_cast<double>(lambda - 1)))) {
        throw numeric_error("multiple update count disagrees with the margin condition");
    }
    return lambda;
}

bool dynamic_condition(const WeightState &state, const WorkingDataset &ds, std::size_t k, double epsilon) {
    const auto cond = MarginCondition::dynamic(epsilon);
    return dot(state, ds, k) <= cond.threshold(state);
}

bool fixed_condition(const WeightState &state, const WorkingDataset &ds, std::size_t k, double beta) {
    const auto cond = MarginCondition::fixed(beta);
    return dot(state, ds, k) <= cond.threshold(state);
}

void single_update(WeightState &state, const WorkingDataset &ds, std::size_t k) {
    state.add(ds, k, 1, dot(state, ds, k));
}

void apply_multiple(WeightState &state, const WorkingDataset &ds, std::size_t k, std::uint64_t lambda) {
    if (lambda == 0) throw invalid_parameter("apply_multiple requires lambda >= 1");
    state.add(ds, k, lambda, dot(state, ds, k));
}

std::uint64_t multiple_update_count_dynamic(const WeightState &state, const WorkingDataset &ds, std::size_t k,
                                            double epsilon) {
    const UpdateGeometry g{state.updates(), state.norm_sq(), dot(state, ds, k), ds.norm_sq(k)};
    return MarginCondition::dynamic(epsilon).multiple_count(g);
}

std::uint64_t multiple_update_count_fixed(const WeightState &state, const WorkingDataset &ds, std::size_t k,
                                          double beta) {
    const UpdateGeometry g{state.updates(), state.norm_sq(), dot(state, ds, k), ds.norm_sq(k)};
    return MarginCondition::fixed(beta).multiple_count(g);
}

MarginReport evaluate_margin(const WeightState &state, const WorkingDataset &ds) {
    if (state.updates() == 0 || !(state.norm_sq() > 0.0)) {
        throw invalid_parameter("margin of the zero weight vector is undefined");
    }
    MarginReport best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const double d = dot(state, ds, k);
        if (d < best.gamma_prime_d) best = {d, k};
    }
    best.gamma_prime_d /= state.norm();
    return best;
}

Eq6Terms eq6_terms(std::uint64_t t, double norm_sq_before, double dot_before, double norm_sq_after,
                   double dot_after) {
    if (t == 0) throw invalid_parameter("the consecutive-ratio identity needs t > 0");
    const double t0 = static_cast<double>(t);
    const double t1 = t0 + 1.0;
    const double lhs = norm_sq_before / (t0 * t0) - norm_sq_after / (t1 * t1);
    const double rhs = ((norm_sq_before / t0 - dot_before) + (norm_sq_after / t1 - dot_after)) / (t0 * t1);
    return {lhs, rhs};
}

double eq6_residual(const WeightState &before, const WeightState &after, const WorkingDataset &ds, std::size_t k) {
    if (after.updates() != before.updates() + 1) {
        throw invalid_parameter("eq6_residual expects states one single update apart");
    }
    return eq6_terms(before.updates(), before.norm_sq(), dot(before, ds, k), after.norm_sq(), dot(after, ds, k))
        .residual();
}

}  // namespace pdm
