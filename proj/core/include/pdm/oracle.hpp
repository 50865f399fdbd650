#pragma once

#include "pdm/data.hpp"
#include "pdm/driver.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pdm {

/// Maximum directional margin computed as the distance from the origin to the convex hull of
/// the working patterns.
struct OracleResult {
    double gamma_d{0.0};              ///< ||p||, an upper bound on the true value
    double lower{0.0};                ///< min_k p . y_k / ||p||, a lower bound
    std::vector<double> certificate;  ///< convex weights of p = sum_k certificate[k] y_k
    std::uint64_t iterations{0};
    double gap{0.0};                  ///< gamma_d - lower
    bool converged{false};
};

/// Largest dataset the command-line oracle accepts.
inline constexpr std::size_t oracle_max_patterns = 100'000;

/// Nearest-point iteration with pairwise exchange steps and exact line search. Stops when
/// gap <= tol; otherwise returns the best bracket after max_iter steps with converged = false.
/// Requires tol > 0. A hull containing the origin yields gamma_d = 0.
[[nodiscard]] OracleResult gilbert_gamma_d(const WorkingDataset &ds, double tol = 1e-10,
                                           std::uint64_t max_iter = 10'000'000);

struct SandwichVerdict {
    bool pass{false};
    bool lower_ok{false};     ///< (1 - eps)(gamma_d - tol) <= gamma'_d
    bool upper_ok{false};     ///< gamma'_d <= gamma_d + tol
    bool estimate_ok{false};  ///< after-run estimate >= relative gap (vacuous when absent)
    std::string detail;       ///< "pass" or the failed checks, comma separated
};

[[nodiscard]] SandwichVerdict verify_sandwich(const TrainReport &report, const OracleResult &oracle, double epsilon,
                                              double tol = 1e-8);

}  // namespace pdm
