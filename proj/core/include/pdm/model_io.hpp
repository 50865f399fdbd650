#pragma once

#include "pdm/data.hpp"
#include "pdm/driver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pdm {

inline constexpr int model_format_version = 1;

/// A trained linear classifier. Only the explicit block of the weight vector is kept; the slack
/// components exist during training only.
struct Model {
    Algorithm algorithm{Algorithm::pdm};
    std::optional<double> epsilon{};
    std::optional<double> beta{};
    std::uint64_t seed{0};
    std::optional<double> positive_label{};
    double rho{1.0};
    double delta{0.0};
    double scale{1.0};
    double gamma_prime_d{0.0};
    std::uint64_t t_c{0};
    /// Dense explicit weights; the last entry multiplies the augmentation coordinate.
    std::vector<double> weights{};

    [[nodiscard]] std::size_t explicit_dim() const noexcept { return weights.size(); }
    /// w . [scale * x, rho]; features beyond the trained dimension are ignored.
    [[nodiscard]] double score(std::span<const Feature> features) const noexcept;
    /// +1 when the score is positive, -1 otherwise.
    [[nodiscard]] int predict(std::span<const Feature> features) const noexcept { return score(features) > 0.0 ? 1 : -1; }

    friend bool operator==(const Model &, const Model &) = default;
};

[[nodiscard]] Model make_model(const TrainResult &result, const WorkingDataset &ds, std::uint64_t seed,
                               std::optional<double> positive_label = std::nullopt);

/// Versioned plain text. Numbers use the shortest representation that reads back exactly, so
/// write(read(write(m))) reproduces the same bytes.
void write_model(std::ostream &out, const Model &model);
/// Throws parse_error on malformed or unsupported input.
[[nodiscard]] Model read_model(std::istream &in);

/// Throws io_error when the file cannot be written or opened.
void save_model(const std::filesystem::path &path, const Model &model);
[[nodiscard]] Model load_model(const std::filesystem::path &path);

/// Shortest round-trip decimal form of a double.
[[nodiscard]] std::string format_double(double value);

}  // namespace pdm
