#include "pdm/data.hpp"

#include "pdm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <string_view>

namespace pdm {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// from_chars rejects a leading '+', which labels like "+1" use.
bool parse_real(std::string_view tok, double &out) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    if (tok.empty()) return false;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

bool parse_index(std::string_view tok, std::uint64_t &out) {
    if (tok.empty()) return false;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

Instance parse_line(std::string_view line, std::size_t line_no) {
    Instance inst;
    std::uint64_t prev = 0;
    bool first = true;
    while (true) {
        while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
        if (line.empty()) break;
        std::size_t end = 0;
        while (end < line.size() && !is_space(line[end])) ++end;
        const std::string_view tok = line.substr(0, end);
        line.remove_prefix(end);

        const auto colon = tok.find(':');
        if (colon == std::string_view::npos) {
            if (!first) throw parse_error(line_no, "malformed token '" + std::string(tok) + "'");
            double label = 0.0;
            if (!parse_real(tok, label)) throw parse_error(line_no, "malformed label '" + std::string(tok) + "'");
            if (!std::isfinite(label)) throw parse_error(line_no, "non-finite label");
            inst.raw_label = label;
            first = false;
            continue;
        }
        first = false;

        std::uint64_t index = 0;
        double value = 0.0;
        if (!parse_index(tok.substr(0, colon), index) || !parse_real(tok.substr(colon + 1), value)) {
            throw parse_error(line_no, "malformed token '" + std::string(tok) + "'");
        }
        if (index == 0) throw parse_error(line_no, "feature indices are 1-based");
        if (index > std::numeric_limits<std::uint32_t>::max()) throw parse_error(line_no, "feature index too large");
        if (index <= prev) throw parse_error(line_no, "non-ascending index " + std::to_string(index));
        if (!std::isfinite(value)) throw parse_error(line_no, "non-finite value at index " + std::to_string(index));
        prev = index;
        inst.features.push_back({static_cast<std::uint32_t>(index - 1), value});
    }
    return inst;
}

}  // namespace

int map_label(double raw, const ParseOptions &options) noexcept {
    if (options.positive_label) return raw == *options.positive_label ? 1 : -1;
    return raw > 0.0 ? 1 : -1;
}

std::vector<Instance> parse_instances(std::istream &in) {
    std::vector<Instance> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        out.push_back(parse_line(body, line_no));
    }
    if (in.bad()) throw io_error("read failure after line " + std::to_string(line_no));
    return out;
}

std::vector<SparsePattern> parse_dataset(std::istream &in, const ParseOptions &options) {
    std::vector<SparsePattern> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        Instance inst = parse_line(body, line_no);
        if (!inst.raw_label) throw parse_error(line_no, "missing label");
        out.push_back({std::move(inst.features), map_label(*inst.raw_label, options)});
    }
    if (in.bad()) throw io_error("read failure after line " + std::to_string(line_no));
    return out;
}

std::vector<SparsePattern> load_dataset(const std::filesystem::path &path, const ParseOptions &options) {
    if (path == "-") return parse_dataset(std::cin, options);
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    return parse_dataset(in, options);
}

std::vector<Instance> load_instances(const std::filesystem::path &path) {
    if (path == "-") return parse_instances(std::cin);
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    return parse_instances(in);
}

double WorkingDataset::pattern_dot(std::size_t k, std::size_t j) const noexcept {
    const auto ik = indices(k), ij = indices(j);
    const auto vk = values(k), vj = values(j);
    double s = 0.0;
    std::size_t a = 0, b = 0;
    while (a < ik.size() && b < ij.size()) {
        if (ik[a] == ij[b]) {
            s += vk[a++] * vj[b++];
        } else if (ik[a] < ij[b]) {
            ++a;
        } else {
            ++b;
        }
    }
    return k == j ? s + delta_sq() : s;
}

WorkingDataset build_working(std::span<const SparsePattern> patterns, double delta, double rho, double scale) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw invalid_parameter("rho must be positive and finite");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw invalid_parameter("delta must be non-negative and finite");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw invalid_parameter("scale must be positive and finite");
    if (patterns.empty()) throw invalid_parameter("dataset has no patterns");

    std::size_t dim = 0;
    std::size_t nnz = 0;
    for (const auto &p : patterns) {
        if (p.label != 1 && p.label != -1) throw invalid_parameter("pattern labels must be +1 or -1");
        if (!p.features.empty()) dim = std::max<std::size_t>(dim, p.features.back().index + 1);
        nnz += p.features.size() + 1;
    }
    if (dim > std::numeric_limits<std::uint32_t>::max()) throw invalid_parameter("feature dimension too large");

    WorkingDataset ds;
    ds.feature_dim_ = dim;
    ds.delta_ = delta;
    ds.rho_ = rho;
    ds.scale_ = scale;
    ds.offsets_.reserve(patterns.size() + 1);
    ds.indices_.reserve(nnz);
    ds.values_.reserve(nnz);
    ds.explicit_sq_.reserve(patterns.size());
    ds.labels_.reserve(patterns.size());

    double max_sq = 0.0;
    for (const auto &p : patterns) {
        const double l = p.label;
        double sq = 0.0;
        for (const auto &f : p.features) {
            const double v = l * scale * f.value;
            ds.indices_.push_back(f.index);
            ds.values_.push_back(v);
            sq += v * v;
        }
        ds.indices_.push_back(static_cast<std::uint32_t>(dim));
        ds.values_.push_back(l * rho);
        sq += rho * rho;
        ds.offsets_.push_back(ds.indices_.size());
        ds.explicit_sq_.push_back(sq);
        ds.labels_.push_back(p.label);
        max_sq = std::max(max_sq, sq);
    }
    ds.radius_ = std::sqrt(max_sq + delta * delta);
    return ds;
}

double margin_floor(double delta, std::size_t m) {
    if (!(delta > 0.0)) throw invalid_parameter("margin_floor requires delta > 0");
    if (m == 0) throw invalid_parameter("margin_floor requires m >= 1");
    return delta / std::sqrt(static_cast<double>(m));
}

}  // namespace pdm
