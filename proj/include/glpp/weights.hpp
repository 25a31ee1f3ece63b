#pragma once

// Weight fields for the lattice models. A field maps (role, m, n) to a real
// weight; sampled fields are pure functions of (master_seed, lane,
// coordinate, role) so grids are reproducible under any evaluation order,
// and injected fields serve explicit tables for deterministic tests.

#include <concepts>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "glpp/errors.hpp"
#include "glpp/random.hpp"

namespace glpp {

enum class WeightRole : std::uint32_t {
    origin = 0,     // vertex weight at (1,1)
    horizontal = 1, // edge from (m-1,n) to (m,n), m >= 2
    vertical = 2,   // edge from (m,n-1) to (m,n), n >= 2
    vertex = 3,     // bulk vertex log-weight (polymer)
};

inline const char* to_string(WeightRole r) {
    switch (r) {
        case WeightRole::origin: return "origin";
        case WeightRole::horizontal: return "h";
        case WeightRole::vertical: return "v";
        case WeightRole::vertex: return "logw";
    }
    return "?";
}

template <class F>
concept weight_field = requires(const F f, WeightRole r, std::uint32_t m, std::uint32_t n) {
    { f(r, m, n) } -> std::convertible_to<double>;
};

template <class F>
concept multi_edge_weight_field = requires(const F f, WeightRole r, std::uint32_t m, std::uint32_t n) {
    { f.reduced_max(r, m, n) } -> std::convertible_to<double>;
    { f.copies() } -> std::convertible_to<std::uint32_t>;
};

// Pure stream factory for one lattice sample: the stream at (role, m, n) is
// a function of (master_seed, lane, role, m, n) only. Coordinates are packed
// bijectively into the 64-bit lane word, so m, n < 2^31.
class WeightStreams {
public:
    WeightStreams(std::uint64_t master_seed, std::uint64_t lane)
        : key_(derive_seed(master_seed, lane)) {}

    Stream at(WeightRole role, std::uint32_t m, std::uint32_t n) const {
        return Stream(key_, pack(role, m, n));
    }

    static std::uint64_t pack(WeightRole role, std::uint32_t m, std::uint32_t n) {
        if (m >= (1u << 31) || n >= (1u << 31))
            throw std::invalid_argument("WeightStreams: lattice coordinate exceeds 2^31-1");
        return (static_cast<std::uint64_t>(role) << 62) |
               (static_cast<std::uint64_t>(m) << 31) | static_cast<std::uint64_t>(n);
    }

private:
    std::uint64_t key_;
};

// I.i.d. Gumbel weights: one at the origin vertex, one per interior edge.
class GumbelLppWeights {
public:
    GumbelLppWeights(std::uint64_t master_seed, std::uint64_t lane) : streams_(master_seed, lane) {}

    double operator()(WeightRole role, std::uint32_t m, std::uint32_t n) const {
        Stream s = streams_.at(role, m, n);
        return sample_gumbel(s);
    }

private:
    WeightStreams streams_;
};

// Vertex log-weights of the inverse-gamma polymer: log w = -log Gamma(shape).
// For shape 1 this is -log of an exponential draw, i.e. exactly a Gumbel.
class LogGammaWeights {
public:
    LogGammaWeights(std::uint64_t master_seed, std::uint64_t lane, double shape)
        : streams_(master_seed, lane), shape_(shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("LogGammaWeights: shape must be positive");
    }

    double operator()(WeightRole role, std::uint32_t m, std::uint32_t n) const {
        Stream s = streams_.at(role, m, n);
        return -std::log(sample_gamma(s, shape_));
    }

    double shape() const noexcept { return shape_; }

private:
    WeightStreams streams_;
    double shape_;
};

// Explicit weight table; any lookup outside the table is a shape_error.
class InjectedWeights {
public:
    InjectedWeights() = default;

    void set(WeightRole role, std::uint32_t m, std::uint32_t n, double value) {
        table_[WeightStreams::pack(role, m, n)] = value;
    }

    double operator()(WeightRole role, std::uint32_t m, std::uint32_t n) const {
        const auto it = table_.find(WeightStreams::pack(role, m, n));
        if (it == table_.end()) {
            std::ostringstream msg;
            msg << "InjectedWeights: missing " << to_string(role) << " weight at (" << m << "," << n << ")";
            throw shape_error(msg.str());
        }
        return it->second;
    }

    std::size_t size() const noexcept { return table_.size(); }

    // Line format: `<role> <m> <n> <value>` with role in {origin, h, v, logw};
    // blank lines and lines starting with '#' are skipped.
    static InjectedWeights parse(std::istream& in) {
        InjectedWeights w;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream row(line);
            std::string role_token;
            std::uint32_t m = 0, n = 0;
            double value = 0.0;
            if (!(row >> role_token >> m >> n >> value)) {
                std::ostringstream msg;
                msg << "weights file line " << line_no << ": expected `role m n value`";
                throw std::invalid_argument(msg.str());
            }
            WeightRole role;
            if (role_token == "origin") role = WeightRole::origin;
            else if (role_token == "h") role = WeightRole::horizontal;
            else if (role_token == "v") role = WeightRole::vertical;
            else if (role_token == "logw") role = WeightRole::vertex;
            else {
                std::ostringstream msg;
                msg << "weights file line " << line_no << ": unknown role `" << role_token << "`";
                throw std::invalid_argument(msg.str());
            }
            w.set(role, m, n, value);
        }
        return w;
    }

    static InjectedWeights load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open weights file: " + path.string());
        return parse(in);
    }

private:
    std::unordered_map<std::uint64_t, double> table_;
};

// Sampled multi-edge field: each (role, m, n) slot carries `copies` i.i.d.
// draws from `dist`, consumed from one per-slot stream. The per-slot maximum
// is a pure function of the slot, so it is the same value wherever it is
// requested ("sampled once").
class SampledMultiEdgeWeights {
public:
    SampledMultiEdgeWeights(std::uint64_t master_seed, std::uint64_t lane, std::uint32_t copies,
                            DistributionSpec dist)
        : streams_(master_seed, lane), copies_(copies), dist_(dist) {
        if (copies_ == 0) throw std::invalid_argument("SampledMultiEdgeWeights: copies must be >= 1");
        dist_.validate();
    }

    double reduced_max(WeightRole role, std::uint32_t m, std::uint32_t n) const {
        Stream s = streams_.at(role, m, n);
        double best = sample(s, dist_);
        for (std::uint32_t i = 1; i < copies_; ++i) best = std::max(best, sample(s, dist_));
        return best;
    }

    std::uint32_t copies() const noexcept { return copies_; }
    const DistributionSpec& dist() const noexcept { return dist_; }

private:
    WeightStreams streams_;
    std::uint32_t copies_;
    DistributionSpec dist_;
};

// Injected multi-edge table: every slot must carry exactly `copies` values.
class InjectedMultiEdgeWeights {
public:
    explicit InjectedMultiEdgeWeights(std::uint32_t copies) : copies_(copies) {
        if (copies_ == 0) throw std::invalid_argument("InjectedMultiEdgeWeights: copies must be >= 1");
    }

    void set(WeightRole role, std::uint32_t m, std::uint32_t n, std::vector<double> values) {
        if (values.size() != copies_)
            throw std::invalid_argument("InjectedMultiEdgeWeights: copy count mismatch");
        table_[WeightStreams::pack(role, m, n)] = std::move(values);
    }

    double reduced_max(WeightRole role, std::uint32_t m, std::uint32_t n) const {
        const auto it = table_.find(WeightStreams::pack(role, m, n));
        if (it == table_.end()) {
            std::ostringstream msg;
            msg << "InjectedMultiEdgeWeights: missing " << to_string(role) << " slot at (" << m << "," << n
                << ")";
            throw shape_error(msg.str());
        }
        double best = it->second.front();
        for (double v : it->second) best = std::max(best, v);
        return best;
    }

    std::uint32_t copies() const noexcept { return copies_; }

private:
    std::uint32_t copies_;
    std::unordered_map<std::uint64_t, std::vector<double>> table_;
};

} // namespace glpp
