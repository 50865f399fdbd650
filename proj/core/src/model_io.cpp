#include "pdm/model_io.hpp"

#include "pdm/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <cmath>

namespace pdm {

namespace {

constexpr const char *magic = "pdm-model";

class LineReader {
  public:
    explicit LineReader(std::istream &in) : in_{in} {}

    // Next line split at the first space into key and value.
    std::pair<std::string, std::string> field(const std::string &expected) {
        std::string line;
        if (!std::getline(in_, line)) throw parse_error(line_ + 1, "unexpected end of model, expected '" + expected + "'");
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto sp = line.find(' ');
        std::string key = line.substr(0, sp);
        std::string value = sp == std::string::npos ? std::string{} : line.substr(sp + 1);
        if (!expected.empty() && key != expected) throw parse_error(line_, "expected '" + expected + "', got '" + key + "'");
        return {std::move(key), std::move(value)};
    }

    std::string value(const std::string &key) { return field(key).second; }

    double real(const std::string &key) { return to_real(value(key)); }

    std::optional<double> optional_real(const std::string &key) {
        const auto v = value(key);
        if (v == "none") return std::nullopt;
        return to_real(v);
    }

    std::uint64_t integer(const std::string &key) { return to_integer(value(key)); }

    double to_real(const std::string &s) const {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw parse_error(line_, "bad number '" + s + "'");
        }
        return v;
    }

    std::uint64_t to_integer(const std::string &s) const {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw parse_error(line_, "bad integer '" + s + "'");
        }
        return v;
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::istream &in_;
    std::size_t line_{0};
};

std::string optional_text(const std::optional<double> &v) { return v ? format_double(*v) : "none"; }

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw numeric_error("cannot format number");
    return {buf, ptr};
}

double Model::score(std::span<const Feature> features) const noexcept {
    if (weights.empty()) return 0.0;
    const std::size_t d = weights.size() - 1;
    double s = weights[d] * rho;
    for (const auto &f : features) {
        if (f.index < d) s += weights[f.index] * scale * f.value;
    }
    return s;
}

Model make_model(const TrainResult &result, const WorkingDataset &ds, std::uint64_t seed,
                 std::optional<double> positive_label) {
    Model m;
    m.algorithm = result.report.algorithm;
    m.epsilon = result.report.epsilon;
    m.beta = result.report.beta;
    m.seed = seed;
    m.positive_label = positive_label;
    m.rho = ds.rho();
    m.delta = ds.delta();
    m.scale = ds.scale();
    m.gamma_prime_d = result.report.gamma_prime_d;
    m.t_c = result.report.t_c;
    const auto w = result.state.weights();
    m.weights.assign(w.begin(), w.end());
    return m;
}

void write_model(std::ostream &out, const Model &model) {
    out << magic << ' ' << model_format_version << '\n';
    out << "algorithm " << to_string(model.algorithm) << '\n';
    out << "epsilon " << optional_text(model.epsilon) << '\n';
    out << "beta " << optional_text(model.beta) << '\n';
    out << "seed " << model.seed << '\n';
    out << "positive_label " << optional_text(model.positive_label) << '\n';
    out << "explicit_dim " << model.explicit_dim() << '\n';
    out << "rho " << format_double(model.rho) << '\n';
    out << "delta " << format_double(model.delta) << '\n';
    out << "scale " << format_double(model.scale) << '\n';
    out << "gamma_prime_d " << format_double(model.gamma_prime_d) << '\n';
    out << "t_c " << model.t_c << '\n';
    std::size_t nnz = 0;
    for (const double w : model.weights) nnz += w != 0.0;
    out << "weights " << nnz << '\n';
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        if (model.weights[i] != 0.0) out << i << ' ' << format_double(model.weights[i]) << '\n';
    }
    out << "end\n";
}

Model read_model(std::istream &in) {
    LineReader r(in);
    Model m;
    const auto version = r.to_integer(r.value(magic));
    if (version != model_format_version) throw parse_error(r.line(), "unsupported model version " + std::to_string(version));
    const auto algo = r.value("algorithm");
    const auto parsed = parse_algorithm(algo);
    if (!parsed) throw parse_error(r.line(), "unknown algorithm '" + algo + "'");
    m.algorithm = *parsed;
    m.epsilon = r.optional_real("epsilon");
    m.beta = r.optional_real("beta");
    m.seed = r.integer("seed");
    m.positive_label = r.optional_real("positive_label");
    const auto dim = r.integer("explicit_dim");
    if (dim == 0 || dim > (std::uint64_t{1} << 32)) throw parse_error(r.line(), "bad explicit_dim");
    m.rho = r.real("rho");
    m.delta = r.real("delta");
    m.scale = r.real("scale");
    m.gamma_prime_d = r.real("gamma_prime_d");
    m.t_c = r.integer("t_c");
    const auto nnz = r.integer("weights");
    if (nnz > dim) throw parse_error(r.line(), "more weights than dimensions");
    m.weights.assign(dim, 0.0);
    std::uint64_t previous = 0;
    for (std::uint64_t n = 0; n < nnz; ++n) {
        auto [key, value] = r.field("");
        const auto idx = r.to_integer(key);
        if (idx >= dim) throw parse_error(r.line(), "weight index out of range");
        if (n > 0 && idx <= previous) throw parse_error(r.line(), "weight indices must ascend");
        previous = idx;
        m.weights[idx] = r.to_real(value);
    }
    r.field("end");
    return m;
}

void save_model(const std::filesystem::path &path, const Model &model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write model to " + path.string());
    write_model(out, model);
    out.flush();
    if (!out) throw io_error("error writing model to " + path.string());
}

Model load_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open model " + path.string());
    return read_model(in);
}

}  // namespace pdm
