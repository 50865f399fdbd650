#pragma once

#include "pdm/data.hpp"
#include "pdm/schedule.hpp"
#include "pdm/weight_state.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdm {

enum class Algorithm { pdm, pdm_succ, pfm };

[[nodiscard]] std::string_view to_string(Algorithm algorithm) noexcept;
/// Accepts "pdm", "pdm-succ" (or "pdm_succ") and "pfm".
[[nodiscard]] std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

struct RunConfig {
    Algorithm algorithm{Algorithm::pdm};
    std::optional<double> epsilon{};  ///< pdm, pdm_succ
    std::optional<double> beta{};     ///< pfm
    double eta{8.0};                  ///< successive-run step
    ActiveSetConfig active_set{};
    Presentation presentation{Presentation::active_sets};
    bool multiple_updates{true};
    /// Check the consecutive-ratio identity on every single update (slower).
    bool instrument_eq6{false};
    std::uint64_t max_epochs{1'000'000};
    /// Optional extra hook called after every update.
    UpdateObserver observer{};

    /// Throws invalid_parameter when the algorithm's required parameter is missing or out of range,
    /// or when the parameter of the other family is supplied.
    void validate() const;
};

struct StageReport {
    double epsilon;
    std::uint64_t t_c;     ///< cumulative updates at the end of the stage
    std::uint64_t epochs;  ///< full-dataset epochs spent in the stage
    bool converged;
    double norm_a;         ///< ||a|| at the end of the stage
};

struct Eq6Summary {
    std::uint64_t checked{0};
    double max_abs_residual{0.0};
    double max_scaled_residual{0.0};  ///< max |residual| / max(1, |lhs|)
};

struct TrainReport {
    Algorithm algorithm{Algorithm::pdm};
    std::optional<double> epsilon{};
    std::optional<double> beta{};
    bool converged{false};
    std::uint64_t t_c{0};
    std::uint64_t epochs{0};
    std::uint64_t presentations{0};
    double gamma_prime_d{0.0};  ///< achieved directional margin (0 when a = 0)
    std::size_t argmin{0};
    double norm_a{0.0};
    /// 1 - gamma'_d t_c / ||a||, present when the achieved margin is positive.
    std::optional<double> after_run_estimate{};
    std::vector<StageReport> stages{};
    double max_relative_norm_drift{0.0};
    std::optional<Eq6Summary> eq6{};
    /// Why the run stopped before convergence when a numeric guard ended it; empty otherwise.
    std::string abort_reason{};
    double wall_seconds{0.0};  ///< monotonic clock; not part of any correctness contract
};

struct TrainResult {
    WeightState state;
    TrainReport report;
};

/// The accuracy sequence 1/2, max(eps/eta, target), ... ending exactly at `target`.
/// A target >= 1/2 gives the single stage {target}.
[[nodiscard]] std::vector<double> succ_stage_epsilons(double target, double eta);

/// Perceptron with dynamic margin. Multiple updates start after the first full epoch, and the
/// level-1 set of the first full epoch uses c1 = c2.
[[nodiscard]] TrainResult train_pdm(const WorkingDataset &ds, double epsilon, const RunConfig &config);
/// Successive dynamic-margin runs with accuracies 1/2, 1/(2 eta), ... down to `epsilon_target`,
/// carrying the weight state over between stages.
[[nodiscard]] TrainResult train_pdm_succ(const WorkingDataset &ds, double epsilon_target, double eta,
                                         const RunConfig &config);
/// Perceptron with fixed margin condition a . y <= beta ||a||. Converges only for beta < gamma_d.
[[nodiscard]] TrainResult train_pfm(const WorkingDataset &ds, double beta, const RunConfig &config);
/// Dispatches on config.algorithm after validating it.
[[nodiscard]] TrainResult train(const WorkingDataset &ds, const RunConfig &config);

enum class Variant { plain, succ };

struct ExperimentResult {
    TrainResult dynamic_run;
    /// Absent when the dynamic run did not converge.
    std::optional<TrainResult> fixed_run;
    [[nodiscard]] double update_ratio() const;  ///< dynamic t_c / fixed t_c
    [[nodiscard]] double margin_gain() const;   ///< fixed gamma'_d - dynamic gamma'_d
};

/// Runs PDM (or PDM-succ) at `epsilon`, then PFM with beta set to the margin PDM achieved.
[[nodiscard]] ExperimentResult experiment_pdm_vs_pfm(const WorkingDataset &ds, double epsilon, Variant variant,
                                                     const RunConfig &config);

}  // namespace pdm
