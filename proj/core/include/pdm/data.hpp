#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace pdm {

/// One nonzero coordinate of a sparse vector (0-based index).
struct Feature {
    std::uint32_t index;
    double value;

    friend bool operator==(const Feature &, const Feature &) = default;
};

/// A labelled training instance: strictly increasing indices, finite values, label in {+1, -1}.
struct SparsePattern {
    std::vector<Feature> features;
    int label{1};

    friend bool operator==(const SparsePattern &, const SparsePattern &) = default;
};

/// An instance whose label may be absent (prediction input). The label is kept as written.
struct Instance {
    std::vector<Feature> features;
    std::optional<double> raw_label;
};

struct ParseOptions {
    /// When set, a raw label equal to this value maps to +1 and everything else to -1
    /// (one-vs-rest). Otherwise labels > 0 map to +1.
    std::optional<double> positive_label;
};

/// Parses `label idx:val idx:val ...` lines with 1-based ascending indices. Blank lines and
/// lines starting with `#` are skipped. A line whose first token contains ':' has no label.
/// Throws parse_error carrying the offending line number.
[[nodiscard]] std::vector<Instance> parse_instances(std::istream &in);

/// Like parse_instances but every data line must carry a label; labels are mapped to +/-1.
[[nodiscard]] std::vector<SparsePattern> parse_dataset(std::istream &in, const ParseOptions &options = {});

/// Reads a dataset from a file; "-" reads standard input. Throws io_error if the file cannot be opened.
[[nodiscard]] std::vector<SparsePattern> load_dataset(const std::filesystem::path &path, const ParseOptions &options = {});
[[nodiscard]] std::vector<Instance> load_instances(const std::filesystem::path &path);

[[nodiscard]] int map_label(double raw, const ParseOptions &options) noexcept;

/// The reflected, augmented and (implicitly) extended training set.
///
/// Pattern k is y_k = [l_k * scale * x_k, l_k * rho, l_k * delta * e_k]. Only the first two blocks
/// (the explicit part, length explicit_dim() = d + 1) are stored, in CSR form; the private slack
/// coordinate of each pattern is never materialized and contributes exactly delta^2 to y_k . y_k
/// and nothing to y_k . y_j for j != k. Immutable after construction.
class WorkingDataset {
  public:
    WorkingDataset() = default;

    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_dim_; }
    [[nodiscard]] std::size_t explicit_dim() const noexcept { return feature_dim_ + 1; }
    /// Index of the augmentation coordinate inside the explicit part.
    [[nodiscard]] std::size_t bias_index() const noexcept { return feature_dim_; }
    [[nodiscard]] std::size_t nonzeros() const noexcept { return indices_.size(); }

    [[nodiscard]] double delta() const noexcept { return delta_; }
    [[nodiscard]] double delta_sq() const noexcept { return delta_ * delta_; }
    [[nodiscard]] double rho() const noexcept { return rho_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    /// R = max_k ||y_k|| over the full (explicit + virtual) space.
    [[nodiscard]] double radius() const noexcept { return radius_; }

    [[nodiscard]] int label(std::size_t k) const noexcept { return labels_[k]; }
    [[nodiscard]] std::span<const std::uint32_t> indices(std::size_t k) const noexcept {
        return {indices_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }
    [[nodiscard]] std::span<const double> values(std::size_t k) const noexcept {
        return {values_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
    }

    /// ||ybar_k||^2, the explicit part only.
    [[nodiscard]] double explicit_norm_sq(std::size_t k) const noexcept { return explicit_sq_[k]; }
    /// ||y_k||^2 = ||ybar_k||^2 + delta^2.
    [[nodiscard]] double norm_sq(std::size_t k) const noexcept { return explicit_sq_[k] + delta_ * delta_; }

    /// dense . ybar_k; `dense` must have explicit_dim() entries.
    [[nodiscard]] double explicit_dot(std::span<const double> dense, std::size_t k) const noexcept {
        const auto idx = indices(k);
        const auto val = values(k);
        double s = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            s += dense[idx[i]] * val[i];
        }
        return s;
    }

    /// dense += scale * ybar_k
    void add_explicit(std::span<double> dense, std::size_t k, double scale) const noexcept {
        const auto idx = indices(k);
        const auto val = values(k);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            dense[idx[i]] += scale * val[i];
        }
    }

    /// y_k . y_j in the full extended space.
    [[nodiscard]] double pattern_dot(std::size_t k, std::size_t j) const noexcept;

  private:
    friend WorkingDataset build_working(std::span<const SparsePattern>, double, double, double);

    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
    std::vector<double> explicit_sq_;
    std::vector<int> labels_;
    std::size_t feature_dim_{0};
    double delta_{0.0};
    double rho_{1.0};
    double scale_{1.0};
    double radius_{0.0};
};

/// Reflects, rescales and augments `patterns`. Requires rho > 0, delta >= 0, scale > 0 and at least one pattern.
[[nodiscard]] WorkingDataset build_working(std::span<const SparsePattern> patterns, double delta, double rho,
                                           double scale = 1.0);

/// Delta / sqrt(m): the directional margin the slack extension guarantees on its own.
[[nodiscard]] double margin_floor(double delta, std::size_t m);

}  // namespace pdm
