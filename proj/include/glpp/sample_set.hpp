#pragma once

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace glpp {

// Where a sample set came from: enough to re-generate it exactly.
struct Provenance {
    std::string model;
    std::string params;
    std::uint64_t master_seed = 0;
    std::size_t count = 0;
};

// Immutable vector of i.i.d. scalar statistics. All values must be finite
// and there must be at least one. The sorted copy is computed once at
// construction; every test that needs order reuses it.
class SampleSet {
public:
    explicit SampleSet(std::vector<double> values, Provenance prov = {})
        : values_(std::move(values)), prov_(std::move(prov)) {
        if (values_.empty()) throw std::invalid_argument("SampleSet: empty sample vector");
        for (double v : values_)
            if (!std::isfinite(v)) throw std::invalid_argument("SampleSet: non-finite sample value");
        sorted_ = values_;
        std::sort(sorted_.begin(), sorted_.end());
        prov_.count = values_.size();
    }

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& sorted() const noexcept { return sorted_; }
    std::size_t size() const noexcept { return values_.size(); }
    const Provenance& provenance() const noexcept { return prov_; }

    double min() const noexcept { return sorted_.front(); }
    double max() const noexcept { return sorted_.back(); }

    // New set with f applied elementwise (f must keep values finite).
    template <class Fn>
    SampleSet transformed(Fn&& f, std::string model_suffix = {}) const {
        std::vector<double> out(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) out[i] = f(values_[i]);
        Provenance p = prov_;
        p.model += model_suffix;
        return SampleSet(std::move(out), std::move(p));
    }

private:
    std::vector<double> values_;
    std::vector<double> sorted_;
    Provenance prov_;
};

} // namespace glpp
