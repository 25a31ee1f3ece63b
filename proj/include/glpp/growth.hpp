#pragma once

// Markovian corner growth with N-stage counters. The origin vertex and every
// interior edge carry a counter in {0..N}; a counter may advance only while
// its tail vertex is complete, and a vertex is complete once both incoming
// edge counters reach N (boundary edges are pre-completed). The simulation is
// causal-recursive: an edge's completion time is its tail's completion time
// plus N directly sampled holding times, which is distributionally exact and
// avoids a global event queue.
//
// Two rate conventions are provided for the step i -> i+1 of a counter:
//   rate_n_minus_i:         Exp(N-i) holding times; the total stage delay is
//                           then distributed as the max of N i.i.d. Exp(1)
//                           and the growth region is the level set of the
//                           multi-edge LPP with exponential weights.
//   rate_inverse_n_minus_i: Exp(1/(N-i)) holding times.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "glpp/lattice.hpp"
#include "glpp/parallel.hpp"
#include "glpp/random.hpp"
#include "glpp/sample_set.hpp"
#include "glpp/weights.hpp"

namespace glpp {

enum class RateConvention { rate_n_minus_i, rate_inverse_n_minus_i };

inline const char* to_string(RateConvention c) {
    return c == RateConvention::rate_n_minus_i ? "rate_n_minus_i" : "rate_inverse_n_minus_i";
}

// Holding time of the i -> i+1 increment of a counter with N stages.
inline double increment_holding_time(Stream& s, std::uint32_t counter_value, std::uint32_t copies,
                                     RateConvention convention) {
    if (counter_value >= copies)
        throw std::out_of_range("increment_holding_time: counter already at its cap");
    const double remaining = static_cast<double>(copies - counter_value);
    const double rate = convention == RateConvention::rate_n_minus_i ? remaining : 1.0 / remaining;
    return sample_exponential(s) / rate;
}

// Total delay for a counter to run 0 -> N once its driving condition holds.
inline double stage_completion_delay(Stream& s, std::uint32_t copies, RateConvention convention) {
    double total = 0.0;
    for (std::uint32_t i = 0; i < copies; ++i) total += increment_holding_time(s, i, copies, convention);
    return total;
}

// First-passage times tau(m,n) = inf{t : vertex (m,n) complete}.
struct GrowthTimes {
    std::uint32_t m = 0, n = 0;
    std::uint32_t copies = 0;
    RateConvention convention = RateConvention::rate_n_minus_i;
    std::vector<double> tau;

    double value(std::uint32_t i, std::uint32_t j) const {
        return tau[static_cast<std::size_t>(i - 1) * n + (j - 1)];
    }
    double corner() const { return value(m, n); }
};

inline GrowthTimes simulate_growth(std::uint32_t m_max, std::uint32_t n_max, std::uint32_t copies,
                                   RateConvention convention, std::uint64_t master_seed,
                                   std::uint64_t lane = 0) {
    if (m_max == 0 || n_max == 0) throw std::invalid_argument("simulate_growth: dimensions must be >= 1");
    if (copies == 0) throw std::invalid_argument("simulate_growth: N must be >= 1");
    const WeightStreams streams(master_seed, lane);
    auto delay = [&](WeightRole role, std::uint32_t i, std::uint32_t j) {
        Stream s = streams.at(role, i, j);
        return stage_completion_delay(s, copies, convention);
    };
    GrowthTimes out;
    out.m = m_max;
    out.n = n_max;
    out.copies = copies;
    out.convention = convention;
    out.tau.resize(static_cast<std::size_t>(m_max) * n_max);
    auto at = [&](std::uint32_t i, std::uint32_t j) -> double& {
        return out.tau[static_cast<std::size_t>(i - 1) * n_max + (j - 1)];
    };
    at(1, 1) = delay(WeightRole::origin, 1, 1);
    for (std::uint32_t i = 2; i <= m_max; ++i) at(i, 1) = at(i - 1, 1) + delay(WeightRole::horizontal, i, 1);
    for (std::uint32_t j = 2; j <= n_max; ++j) at(1, j) = at(1, j - 1) + delay(WeightRole::vertical, 1, j);
    for (std::uint32_t i = 2; i <= m_max; ++i)
        for (std::uint32_t j = 2; j <= n_max; ++j)
            at(i, j) = std::max(at(i - 1, j) + delay(WeightRole::horizontal, i, j),
                                at(i, j - 1) + delay(WeightRole::vertical, i, j));
    return out;
}

// i.i.d. realizations of tau(m,n), one lane per sample, O(min(m,n)) memory.
inline SampleSet first_passage_samples(std::uint32_t m, std::uint32_t n, std::uint32_t copies,
                                       RateConvention convention, std::size_t count,
                                       std::uint64_t master_seed, unsigned threads = 1) {
    if (count == 0) throw std::invalid_argument("first_passage_samples: count must be >= 1");
    if (copies == 0) throw std::invalid_argument("first_passage_samples: N must be >= 1");
    auto values = parallel_samples(count, threads, [&](std::size_t lane) {
        const WeightStreams streams(master_seed, lane);
        auto delay = [&](WeightRole role, std::uint32_t i, std::uint32_t j) {
            Stream s = streams.at(role, i, j);
            return stage_completion_delay(s, copies, convention);
        };
        return detail::rolling_corner(
            m, n, [&] { return delay(WeightRole::origin, 1, 1); },
            [&](std::uint32_t i, double v) { return v + delay(WeightRole::horizontal, i, 1); },
            [&](std::uint32_t j, double v) { return v + delay(WeightRole::vertical, 1, j); },
            [&](std::uint32_t i, std::uint32_t j, double up, double left) {
                return std::max(up + delay(WeightRole::horizontal, i, j),
                                left + delay(WeightRole::vertical, i, j));
            });
    });
    Provenance prov;
    prov.master_seed = master_seed;
    {
        std::ostringstream tag;
        tag << "growth_tau(" << m << "," << n << ")";
        prov.model = tag.str();
        std::ostringstream params;
        params << "N=" << copies << " convention=" << to_string(convention);
        prov.params = params.str();
    }
    return SampleSet(std::move(values), std::move(prov));
}

} // namespace glpp
