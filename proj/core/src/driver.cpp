#include "pdm/driver.hpp"

#include "pdm/bounds.hpp"
#include "pdm/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

namespace pdm {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

// Expands every (possibly multiple) update into its single steps and checks the identity on each.
// Intermediate steps use the closed-form geometry; the last one uses the state actually reached.
class Eq6Checker {
  public:
    explicit Eq6Checker(const WorkingDataset &ds) : ds_{ds} {}

    void operator()(const UpdateEvent &ev, const WeightState &after) {
        const auto &g = ev.before;
        const double s = g.self_sq;
        for (std::uint64_t j = 0; j < ev.lambda; ++j) {
            const std::uint64_t t = g.t + j;
            if (t == 0) continue;
            const double jd = static_cast<double>(j);
            const double n0 = g.norm_sq + 2.0 * jd * g.dot + jd * jd * s;
            const double d0 = g.dot + jd * s;
            double n1 = 0.0, d1 = 0.0;
            if (j + 1 == ev.lambda) {
                n1 = after.norm_sq();
                d1 = dot(after, ds_, ev.pattern);
            } else {
                n1 = n0 + 2.0 * d0 + s;
                d1 = d0 + s;
            }
            const auto terms = eq6_terms(t, n0, d0, n1, d1);
            const double r = std::abs(terms.residual());
            summary_.checked += 1;
            summary_.max_abs_residual = std::max(summary_.max_abs_residual, r);
            summary_.max_scaled_residual =
                std::max(summary_.max_scaled_residual, r / std::max(1.0, std::abs(terms.lhs)));
        }
    }

    [[nodiscard]] const Eq6Summary &summary() const noexcept { return summary_; }

  private:
    const WorkingDataset &ds_;
    Eq6Summary summary_{};
};

struct RunScope {
    ScheduleOptions options;
    std::shared_ptr<Eq6Checker> eq6;
};

RunScope make_scope(const WorkingDataset &ds, const RunConfig &config) {
    RunScope scope;
    scope.options.active_set = config.active_set;
    scope.options.presentation = config.presentation;
    scope.options.multiple_updates = config.multiple_updates;
    scope.options.max_epochs = config.max_epochs;
    if (config.instrument_eq6) scope.eq6 = std::make_shared<Eq6Checker>(ds);
    if (scope.eq6 || config.observer) {
        scope.options.observer = [eq6 = scope.eq6, user = config.observer](const UpdateEvent &ev,
                                                                           const WeightState &after) {
            if (eq6) (*eq6)(ev, after);
            if (user) user(ev, after);
        };
    }
    return scope;
}

void finish_report(TrainReport &report, const WeightState &state, const WorkingDataset &ds) {
    report.t_c = state.updates();
    report.norm_a = state.norm();
    if (state.updates() == 0 || !(state.norm_sq() > 0.0)) return;
    const auto margin = evaluate_margin(state, ds);
    report.gamma_prime_d = margin.gamma_prime_d;
    report.argmin = margin.argmin;
    const double ceiling = state.norm() / static_cast<double>(state.updates());
    if (margin.gamma_prime_d > 0.0 && margin.gamma_prime_d <= ceiling * (1.0 + 1e-12)) {
        report.after_run_estimate = after_run_estimate(margin.gamma_prime_d, state.updates(), state.norm());
    }
}

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw invalid_parameter("epsilon must lie in (0, 1]");
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
    case Algorithm::pdm: return "pdm";
    case Algorithm::pdm_succ: return "pdm-succ";
    case Algorithm::pfm: return "pfm";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    if (name == "pdm") return Algorithm::pdm;
    if (name == "pdm-succ" || name == "pdm_succ") return Algorithm::pdm_succ;
    if (name == "pfm") return Algorithm::pfm;
    return std::nullopt;
}

void RunConfig::validate() const {
    active_set.validate();
    if (max_epochs == 0) throw invalid_parameter("max_epochs must be positive");
    if (algorithm == Algorithm::pfm) {
        if (!beta) throw invalid_parameter("pfm requires beta");
        if (epsilon) throw invalid_parameter("pfm takes beta, not epsilon");
        if (!(*beta > 0.0) || !std::isfinite(*beta)) throw invalid_parameter("beta must be positive and finite");
        return;
    }
    if (!epsilon) throw invalid_parameter(std::string(to_string(algorithm)) + " requires epsilon");
    if (beta) throw invalid_parameter(std::string(to_string(algorithm)) + " takes epsilon, not beta");
    check_epsilon(*epsilon);
    if (algorithm == Algorithm::pdm_succ && !(eta > 1.0 && std::isfinite(eta))) {
        throw invalid_parameter("eta must be finite and greater than 1");
    }
}

std::vector<double> succ_stage_epsilons(double target, double eta) {
    check_epsilon(target);
    if (!(eta > 1.0) || !std::isfinite(eta)) throw invalid_parameter("eta must be finite and greater than 1");
    if (target >= 0.5) return {target};
    std::vector<double> stages{0.5};
    while (stages.back() != target) {
        double next = stages.back() / eta;
        if (next <= target * (1.0 + 1e-12)) next = target;
        stages.push_back(next);
    }
    return stages;
}

TrainResult train_pdm(const WorkingDataset &ds, double epsilon, const RunConfig &config) {
    check_epsilon(epsilon);
    const auto start = clock_type::now();
    auto scope = make_scope(ds, config);
    scope.options.multiple_updates_from_epoch = 1;
    scope.options.first_epoch_c1 = config.active_set.c2;

    TrainResult result{WeightState(ds), {}};
    const auto run = run_until_convergence(result.state, ds, MarginCondition::dynamic(epsilon), scope.options);

    auto &report = result.report;
    report.algorithm = Algorithm::pdm;
    report.epsilon = epsilon;
    report.converged = run.converged;
    report.epochs = run.epochs;
    report.presentations = run.presentations;
    report.max_relative_norm_drift = run.max_relative_norm_drift;
    report.abort_reason = run.abort_reason;
    finish_report(report, result.state, ds);
    if (scope.eq6) report.eq6 = scope.eq6->summary();
    report.wall_seconds = seconds_since(start);
    return result;
}

TrainResult train_pdm_succ(const WorkingDataset &ds, double epsilon_target, double eta, const RunConfig &config) {
    const auto stages = succ_stage_epsilons(epsilon_target, eta);
    const auto start = clock_type::now();
    auto scope = make_scope(ds, config);

    TrainResult result{WeightState(ds), {}};
    auto &report = result.report;
    report.algorithm = Algorithm::pdm_succ;
    report.epsilon = epsilon_target;
    report.converged = true;
    for (const double eps : stages) {
        scope.options.epoch_offset = report.epochs;
        const auto run = run_until_convergence(result.state, ds, MarginCondition::dynamic(eps), scope.options);
        report.epochs += run.epochs;
        report.presentations += run.presentations;
        report.max_relative_norm_drift = std::max(report.max_relative_norm_drift, run.max_relative_norm_drift);
        report.stages.push_back({eps, result.state.updates(), run.epochs, run.converged, result.state.norm()});
        if (!run.converged) {
            report.converged = false;
            report.abort_reason = run.abort_reason;
            break;
        }
    }
    finish_report(report, result.state, ds);
    if (scope.eq6) report.eq6 = scope.eq6->summary();
    report.wall_seconds = seconds_since(start);
    return result;
}

TrainResult train_pfm(const WorkingDataset &ds, double beta, const RunConfig &config) {
    const auto condition = MarginCondition::fixed(beta);
    const auto start = clock_type::now();
    auto scope = make_scope(ds, config);

    TrainResult result{WeightState(ds), {}};
    const auto run = run_until_convergence(result.state, ds, condition, scope.options);

    auto &report = result.report;
    report.algorithm = Algorithm::pfm;
    report.beta = beta;
    report.converged = run.converged;
    report.epochs = run.epochs;
    report.presentations = run.presentations;
    report.max_relative_norm_drift = run.max_relative_norm_drift;
    report.abort_reason = run.abort_reason;
    finish_report(report, result.state, ds);
    if (scope.eq6) report.eq6 = scope.eq6->summary();
    report.wall_seconds = seconds_since(start);
    return result;
}

TrainResult train(const WorkingDataset &ds, const RunConfig &config) {
    config.validate();
    switch (config.algorithm) {
    case Algorithm::pdm: return train_pdm(ds, *config.epsilon, config);
    case Algorithm::pdm_succ: return train_pdm_succ(ds, *config.epsilon, config.eta, config);
    case Algorithm::pfm: return train_pfm(ds, *config.beta, config);
    }
    throw invalid_parameter("unknown algorithm");
}

double ExperimentResult::update_ratio() const {
    if (!fixed_run || fixed_run->report.t_c == 0) return std::nan("");
    return static_cast<double>(dynamic_run.report.t_c) / static_cast<double>(fixed_run->report.t_c);
}

double ExperimentResult::margin_gain() const {
    if (!fixed_run) return std::nan("");
    return fixed_run->report.gamma_prime_d - dynamic_run.report.gamma_prime_d;
}

ExperimentResult experiment_pdm_vs_pfm(const WorkingDataset &ds, double epsilon, Variant variant,
                                       const RunConfig &config) {
    ExperimentResult out{variant == Variant::succ ? train_pdm_succ(ds, epsilon, config.eta, config)
                                                  : train_pdm(ds, epsilon, config),
                         std::nullopt};
    const auto &dyn = out.dynamic_run.report;
    if (!dyn.converged || !(dyn.gamma_prime_d > 0.0)) return out;
    out.fixed_run = train_pfm(ds, dyn.gamma_prime_d, config);
    return out;
}

}  // namespace pdm
