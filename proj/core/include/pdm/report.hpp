#pragma once

#include "pdm/bounds.hpp"
#include "pdm/data.hpp"
#include "pdm/driver.hpp"
#include "pdm/oracle.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace pdm {

struct DatasetSummary {
    std::size_t m{0};
    std::size_t d{0};
    double radius{0.0};
    double delta{0.0};
    double rho{1.0};
    double scale{1.0};
    std::size_t nonzeros{0};
};

[[nodiscard]] DatasetSummary summarize(const WorkingDataset &ds) noexcept;

/// Optional sections of a training report.
struct ReportExtras {
    std::optional<std::uint64_t> seed{};
    std::optional<OracleResult> oracle{};
    std::optional<SandwichVerdict> verdict{};
    /// Accuracy the bounds were evaluated at (for fixed-margin runs, 1 - beta / gamma_d).
    std::optional<double> bound_epsilon{};
    std::optional<double> theorem1{};
    std::optional<Theorem2Bound> theorem2{};
};

/// Fills the oracle, verdict and bound sections for `report` on `ds`.
[[nodiscard]] ReportExtras oracle_extras(const TrainReport &report, const OracleResult &oracle, double radius);

/// A single flat JSON object. Non-finite numbers are written as null.
[[nodiscard]] std::string train_report_json(const DatasetSummary &data, const TrainReport &report,
                                            const ReportExtras &extras = {});

/// Flat JSON comparison of the two runs of an experiment.
[[nodiscard]] std::string experiment_summary_json(const DatasetSummary &data, const ExperimentResult &result);

}  // namespace pdm
