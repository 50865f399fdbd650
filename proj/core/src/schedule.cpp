#include "pdm/schedule.hpp"

#include "pdm/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace pdm {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in [0, n) without modulo bias.
std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t n) {
    const std::uint64_t reject_below = (0 - n) % n;
    while (true) {
        const std::uint64_t r = rng();
        if (r >= reject_below) return r % n;
    }
}

class Presenter {
  public:
    Presenter(WeightState &state, const WorkingDataset &ds, const MarginCondition &condition,
              const UpdateObserver &observer)
        : state_{state}, ds_{ds}, condition_{condition}, observer_{observer} {}

    void allow_multiple(bool on) noexcept { multiple_ = on; }

    // Tests pattern k, updating when the condition holds. Returns the pre-update dot product
    // and threshold through the out-parameters for set membership.
    bool present(std::size_t k, double &dot_out, double &threshold_out) {
        ++presentations_;
        const double d = dot(state_, ds_, k);
        const double thr = condition_.threshold(state_);
        dot_out = d;
        threshold_out = thr;
        if (d > thr) return false;

        const UpdateGeometry g{state_.updates(), state_.norm_sq(), d, ds_.norm_sq(k)};
        const std::uint64_t lambda = multiple_ ? condition_.multiple_count(g) : 1;
        state_.add(ds_, k, lambda, d);
        if (observer_) observer_(UpdateEvent{k, lambda, g, thr}, state_);
        return true;
    }

    [[nodiscard]] std::uint64_t presentations() const noexcept { return presentations_; }

  private:
    WeightState &state_;
    const WorkingDataset &ds_;
    const MarginCondition &condition_;
    const UpdateObserver &observer_;
    bool multiple_{false};
    std::uint64_t presentations_{0};
};

}  // namespace

void ActiveSetConfig::validate() const {
    if (!(c2 >= 1.0) || !(c1 >= c2) || !std::isfinite(c1)) {
        throw invalid_parameter("active sets need c1 >= c2 >= 1");
    }
    if (n_ep1 == 0 || n_ep2 == 0 || n_ep3 == 0) throw invalid_parameter("active-set round counts must be positive");
}

std::vector<std::uint32_t> permute(std::size_t m, std::uint64_t seed, std::uint64_t epoch_index) {
    if (m == 0) throw invalid_parameter("cannot permute an empty index set");
    if (m > std::numeric_limits<std::uint32_t>::max()) throw invalid_parameter("too many patterns to permute");
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::uint32_t{0});
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(epoch_index)));
    for (std::size_t i = m - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(bounded(rng, i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

ScheduleResult run_until_convergence(WeightState &state, const WorkingDataset &ds, const MarginCondition &condition,
                                     const ScheduleOptions &options) {
    options.active_set.validate();
    if (options.first_epoch_c1 && !(*options.first_epoch_c1 >= options.active_set.c2)) {
        throw invalid_parameter("first-epoch c1 must be >= c2");
    }
    if (state.weights().size() != ds.explicit_dim() || state.counts().size() != ds.size()) {
        throw invalid_parameter("weight state does not match the dataset");
    }

    const auto &cfg = options.active_set;
    const std::size_t m = ds.size();
    Presenter presenter(state, ds, condition, options.observer);
    ScheduleResult result;

    std::vector<std::uint32_t> order(m);
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    std::vector<std::uint32_t> level1, level2, level3;
    level1.reserve(m);

    double d = 0.0, thr = 0.0;
    try {
        while (result.epochs < options.max_epochs) {
            const std::uint64_t epoch = result.epochs;

            // Bounds the drift accumulated by incremental norm updates.
            const double drift = state.refresh_norm(ds);
            if (state.norm_sq() > 0.0) {
                result.max_relative_norm_drift = std::max(result.max_relative_norm_drift, drift / state.norm_sq());
            }

            if (options.presentation != Presentation::cyclic) {
                order = permute(m, cfg.seed, options.epoch_offset + epoch);
            }
            presenter.allow_multiple(options.multiple_updates && epoch >= options.multiple_updates_from_epoch);

            const double c1 = (epoch == 0 && options.first_epoch_c1) ? *options.first_epoch_c1 : cfg.c1;
            const bool collect = options.presentation == Presentation::active_sets;
            std::uint64_t full_updates = 0;
            level1.clear();
            for (const auto k : order) {
                if (presenter.present(k, d, thr)) ++full_updates;
                if (collect && d <= c1 * thr) level1.push_back(k);
            }
            ++result.epochs;
            if (full_updates == 0) {
                result.converged = true;
                break;
            }
            if (!collect) continue;

            presenter.allow_multiple(options.multiple_updates && epoch + 1 >= options.multiple_updates_from_epoch);
            for (std::uint32_t r1 = 0; r1 < cfg.n_ep1; ++r1) {
                std::uint64_t updates1 = 0;
                level2.clear();
                for (const auto k : level1) {
                    if (presenter.present(k, d, thr)) ++updates1;
                    if (d <= cfg.c2 * thr) level2.push_back(k);
                }
                if (updates1 == 0) break;

                for (std::uint32_t r2 = 0; r2 < cfg.n_ep2; ++r2) {
                    std::uint64_t updates2 = 0;
                    level3.clear();
                    for (const auto k : level2) {
                        if (presenter.present(k, d, thr)) ++updates2;
                        if (d <= thr) level3.push_back(k);
                    }
                    if (updates2 == 0) break;

                    for (std::uint32_t r3 = 0; r3 < cfg.n_ep3; ++r3) {
                        std::uint64_t updates3 = 0;
                        for (const auto k : level3) {
                            if (presenter.present(k, d, thr)) ++updates3;
                        }
                        if (updates3 == 0) break;
                    }
                }
            }
        }
    } catch (const numeric_error &e) {
        // The state is untouched by the rejected update, so the run ends unconverged but consistent.
        result.converged = false;
        result.abort_reason = e.what();
    }
    result.presentations = presenter.presentations();
    return result;
}

}  // namespace pdm
