#include "pdm/oracle.hpp"

#include "pdm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdm {

namespace {

// Gram rows are cached below this size; larger sets compute y_j . y_k on demand.
constexpr std::size_t gram_limit = 2000;
constexpr std::uint64_t refresh_every = 1000;

class Kernel {
  public:
    explicit Kernel(const WorkingDataset &ds) : ds_{ds}, dense_(ds.explicit_dim(), 0.0) {
        if (ds.size() <= gram_limit) {
            const std::size_t m = ds.size();
            gram_.resize(m * m);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = i; j < m; ++j) gram_[i * m + j] = gram_[j * m + i] = ds.pattern_dot(i, j);
            }
        }
    }

    // out[k] = y_j . y_k for every k
    void column(std::size_t j, std::vector<double> &out) {
        const std::size_t m = ds_.size();
        if (!gram_.empty()) {
            std::copy_n(gram_.begin() + static_cast<std::ptrdiff_t>(j * m), m, out.begin());
            return;
        }
        ds_.add_explicit(dense_, j, 1.0);
        for (std::size_t k = 0; k < m; ++k) out[k] = ds_.explicit_dot(dense_, k);
        out[j] += ds_.delta_sq();
        ds_.add_explicit(dense_, j, -1.0);
        for (const auto idx : ds_.indices(j)) dense_[idx] = 0.0;
    }

  private:
    const WorkingDataset &ds_;
    std::vector<double> gram_;
    std::vector<double> dense_;
};

// g_k = p . y_k and ||p||^2 from the convex weights, computed from scratch.
double recompute(const WorkingDataset &ds, const std::vector<double> &lambda, std::vector<double> &g) {
    std::vector<double> w(ds.explicit_dim(), 0.0);
    for (std::size_t k = 0; k < ds.size(); ++k) {
        if (lambda[k] != 0.0) ds.add_explicit(w, k, lambda[k]);
    }
    double pp = 0.0;
    for (const double v : w) pp += v * v;
    double lsq = 0.0;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        g[k] = ds.explicit_dot(w, k) + lambda[k] * ds.delta_sq();
        lsq += lambda[k] * lambda[k];
    }
    return pp + ds.delta_sq() * lsq;
}

}  // namespace

OracleResult gilbert_gamma_d(const WorkingDataset &ds, double tol, std::uint64_t max_iter) {
    if (!(tol > 0.0)) throw invalid_parameter("oracle tolerance must be positive");
    const std::size_t m = ds.size();
    if (m == 0) throw invalid_parameter("oracle needs at least one pattern");

    Kernel kernel(ds);
    OracleResult res;
    auto &lambda = res.certificate;
    lambda.assign(m, 0.0);
    std::size_t start = 0;
    for (std::size_t k = 1; k < m; ++k) {
        if (ds.norm_sq(k) < ds.norm_sq(start)) start = k;
    }
    lambda[start] = 1.0;

    std::vector<double> g(m), col_i(m), col_j(m);
    double pp = recompute(ds, lambda, g);
    std::uint64_t since_refresh = 0;

    while (true) {
        if (!(pp > 0.0)) {
            res.gamma_d = res.lower = res.gap = 0.0;
            res.converged = true;
            return res;
        }
        std::size_t j = 0, i = m;
        for (std::size_t k = 0; k < m; ++k) {
            if (g[k] < g[j]) j = k;
            if (lambda[k] > 0.0 && (i == m || g[k] > g[i])) i = k;
        }
        const double norm = std::sqrt(pp);
        res.gamma_d = norm;
        res.lower = g[j] / norm;
        res.gap = res.gamma_d - res.lower;
        if (res.gap <= tol) {
            if (since_refresh == 0) {
                res.converged = true;
                return res;
            }
            // Confirm with exact values before stopping.
            pp = recompute(ds, lambda, g);
            since_refresh = 0;
            continue;
        }
        if (res.iterations >= max_iter) return res;

        kernel.column(i, col_i);
        kernel.column(j, col_j);
        const double dist_sq = col_i[i] + col_j[j] - 2.0 * col_i[j];
        if (!(dist_sq > 0.0) || i == j) {
            // No exchange direction left at this precision; settle on exact values.
            if (since_refresh == 0) return res;
            pp = recompute(ds, lambda, g);
            since_refresh = 0;
            continue;
        }
        const double theta = std::min((g[i] - g[j]) / dist_sq, lambda[i]);
        lambda[i] -= theta;
        lambda[j] += theta;
        if (lambda[i] < 0.0) lambda[i] = 0.0;
        pp += 2.0 * theta * (g[j] - g[i]) + theta * theta * dist_sq;
        for (std::size_t k = 0; k < m; ++k) g[k] += theta * (col_j[k] - col_i[k]);
        ++res.iterations;
        if (++since_refresh >= refresh_every) {
            pp = recompute(ds, lambda, g);
            since_refresh = 0;
        }
    }
}

SandwichVerdict verify_sandwich(const TrainReport &report, const OracleResult &oracle, double epsilon, double tol) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw invalid_parameter("epsilon must lie in [0, 1]");
    SandwichVerdict v;
    const double g = report.gamma_prime_d;
    const double gd = oracle.gamma_d;
    v.lower_ok = (1.0 - epsilon) * (gd - tol) <= g;
    v.upper_ok = g <= gd + tol;
    v.estimate_ok = true;
    if (report.after_run_estimate && gd > 0.0) {
        v.estimate_ok = (gd - tol - g) / gd <= *report.after_run_estimate;
    }
    v.pass = v.lower_ok && v.upper_ok && v.estimate_ok;
    if (v.pass) {
        v.detail = "pass";
    } else {
        if (!v.lower_ok) v.detail += "lower bound violated";
        if (!v.upper_ok) v.detail += std::string(v.detail.empty() ? "" : ", ") + "upper bound violated";
        if (!v.estimate_ok) v.detail += std::string(v.detail.empty() ? "" : ", ") + "after-run estimate violated";
    }
    return v;
}

}  // namespace pdm
