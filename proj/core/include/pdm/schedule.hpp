#pragma once

#include "pdm/data.hpp"
#include "pdm/weight_state.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pdm {

/// Parameters of the three-level nested active sets.
struct ActiveSetConfig {
    double c1{2.2};            ///< level-1 membership: a . y <= c1 * threshold
    double c2{1.1};            ///< level-2 membership: a . y <= c2 * threshold
    std::uint32_t n_ep1{9};    ///< rounds over the level-1 set per full-dataset epoch
    std::uint32_t n_ep2{12};   ///< rounds over the level-2 set per level-1 round
    std::uint32_t n_ep3{12};   ///< mini-epochs over the level-3 set per level-2 round
    std::uint64_t seed{0};     ///< permutation seed

    /// Throws invalid_parameter unless c1 >= c2 >= 1 and every round count is positive.
    void validate() const;
};

/// How patterns are presented to the learner.
enum class Presentation {
    active_sets,  ///< permuted full-dataset epochs interleaved with nested active-set rounds
    permuted,     ///< permuted full-dataset epochs only
    cyclic,       ///< full-dataset epochs in index order
};

/// Emitted after every (single or multiple) update.
struct UpdateEvent {
    std::size_t pattern;
    std::uint64_t lambda;     ///< number of identical updates applied at once
    UpdateGeometry before;    ///< state of the learner just before the update
    double threshold;         ///< condition threshold at that moment
};

using UpdateObserver = std::function<void(const UpdateEvent &, const WeightState &after)>;

struct ScheduleOptions {
    ActiveSetConfig active_set{};
    Presentation presentation{Presentation::active_sets};
    bool multiple_updates{true};
    /// Multiple updates stay disabled during full-dataset epochs with a smaller (run-local) index.
    std::uint64_t multiple_updates_from_epoch{0};
    /// Replaces c1 while the level-1 set is collected during the first full-dataset epoch.
    std::optional<double> first_epoch_c1{};
    /// Give up (non-convergence) after this many full-dataset epochs.
    std::uint64_t max_epochs{1'000'000};
    /// Added to the run-local epoch index when keying permutations, so consecutive runs on the
    /// same state draw fresh permutations.
    std::uint64_t epoch_offset{0};
    UpdateObserver observer{};
};

struct ScheduleResult {
    bool converged{false};
    std::uint64_t epochs{0};             ///< full-dataset epochs performed
    std::uint64_t presentations{0};      ///< patterns tested, including active-set rounds
    double max_relative_norm_drift{0.0}; ///< largest |cached - recomputed| / recomputed seen at epoch starts
    /// Set when a numeric guard (e.g. an oversized multiple update) stopped the run early.
    std::string abort_reason{};
};

/// Deterministic Fisher-Yates shuffle of 0..m-1.
///
/// The generator is std::mt19937_64 (fully specified by the standard) seeded with
/// splitmix64(seed ^ splitmix64(epoch_index)); indices are drawn by unbiased rejection sampling,
/// so the output is identical on every conforming platform.
[[nodiscard]] std::vector<std::uint32_t> permute(std::size_t m, std::uint64_t seed, std::uint64_t epoch_index);

/// Presents patterns until one complete full-dataset epoch performs no update.
///
/// Every update is applied only when `condition` holds for the pattern at that moment; the
/// active-set multipliers only decide which patterns are revisited between full epochs.
ScheduleResult run_until_convergence(WeightState &state, const WorkingDataset &ds, const MarginCondition &condition,
                                     const ScheduleOptions &options);

}  // namespace pdm
