#pragma once

// Passage-time and free-energy grids for the three lattice models, plus the
// brute-force path-enumeration oracles used to cross-check them.
//
// Recursions (1-based coordinates, up-right paths from (1,1)):
//   LPP:      T(i,j) = max(T(i-1,j) + U(i,j), T(i,j-1) + V(i,j))
//   polymer:  logZ(i,j) = logaddexp(logZ(i-1,j), logZ(i,j-1)) + logw(i,j)
// The -inf boundary of the LPP recursion is realized structurally: the first
// row/column telescope, no sentinel arithmetic. Ties in the max (possible
// only for injected tables) resolve toward the horizontal predecessor; the
// grid value is the same either way.

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "glpp/errors.hpp"
#include "glpp/parallel.hpp"
#include "glpp/random.hpp"
#include "glpp/sample_set.hpp"
#include "glpp/weights.hpp"

namespace glpp {

enum class GridSemantics { gumbel_lpp_passage_time, log_gamma_free_energy, multi_edge_passage_time };

struct MultiEdgeConfig {
    std::uint32_t copies = 1;
    DistributionSpec dist = DistributionSpec::exponential();
};

// Model metadata carried by a grid (what produced the values).
struct GridModelInfo {
    double gamma = 1.0;
    std::uint32_t multi_edge_copies = 1;
    DistributionSpec edge_dist = DistributionSpec::gumbel();
    bool normalized = false;
};

class PassageGrid {
public:
    PassageGrid(std::uint32_t m, std::uint32_t n, GridSemantics sem, GridModelInfo info = {})
        : m_(m), n_(n), sem_(sem), info_(info), values_(static_cast<std::size_t>(m) * n) {
        if (m == 0 || n == 0) throw std::invalid_argument("PassageGrid: dimensions must be >= 1");
    }

    std::uint32_t rows() const noexcept { return m_; }
    std::uint32_t cols() const noexcept { return n_; }
    GridSemantics semantics() const noexcept { return sem_; }
    const GridModelInfo& info() const noexcept { return info_; }
    GridModelInfo& info() noexcept { return info_; }

    double value(std::uint32_t i, std::uint32_t j) const { return values_[index(i, j)]; }
    double& at(std::uint32_t i, std::uint32_t j) { return values_[index(i, j)]; }
    double corner() const { return value(m_, n_); }

private:
    std::size_t index(std::uint32_t i, std::uint32_t j) const {
        return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
    }

    std::uint32_t m_, n_;
    GridSemantics sem_;
    GridModelInfo info_;
    std::vector<double> values_;
};

struct EvalOptions {
    unsigned threads = 1; // > 1 enables anti-diagonal (wavefront) evaluation
};

inline double logaddexp(double a, double b) {
    return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

namespace detail {

// Visit every bulk cell (i >= 2, j >= 2) with its up/left predecessors
// already final. The wavefront mode walks anti-diagonals with a barrier per
// diagonal; each cell's value depends only on the previous diagonal, so the
// result is bit-identical to the serial order.
template <class Cell>
void for_each_bulk(std::uint32_t m, std::uint32_t n, unsigned threads, Cell&& cell) {
    if (m < 2 || n < 2) return;
    const unsigned workers =
        std::min<std::uint64_t>(resolve_threads(threads), std::min(m - 1, n - 1));
    if (workers <= 1) {
        for (std::uint32_t i = 2; i <= m; ++i)
            for (std::uint32_t j = 2; j <= n; ++j) cell(i, j);
        return;
    }
    std::barrier sync(static_cast<std::ptrdiff_t>(workers));
    auto work = [&](unsigned w) {
        for (std::uint32_t d = 4; d <= m + n; ++d) {
            const std::uint32_t i_lo = d > n + 2 ? d - n : 2;
            const std::uint32_t i_hi = std::min(m, d - 2);
            if (i_lo <= i_hi) {
                const std::uint32_t len = i_hi - i_lo + 1;
                const std::uint32_t chunk = (len + workers - 1) / workers;
                const std::uint64_t a = i_lo + static_cast<std::uint64_t>(w) * chunk;
                const std::uint64_t b = std::min<std::uint64_t>(i_hi, a + chunk - 1);
                for (std::uint64_t i = a; i <= b; ++i)
                    cell(static_cast<std::uint32_t>(i), d - static_cast<std::uint32_t>(i));
            }
            sync.arrive_and_wait();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
}

inline void check_dims(std::uint32_t m, std::uint32_t n) {
    if (m == 0 || n == 0) throw std::invalid_argument("lattice dimensions must be >= 1");
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const noexcept { return sum; }
};

} // namespace detail

// --- Gumbel LPP ------------------------------------------------------------

template <weight_field F>
PassageGrid gumbel_lpp_grid(std::uint32_t m, std::uint32_t n, const F& w, const EvalOptions& opt = {}) {
    detail::check_dims(m, n);
    PassageGrid g(m, n, GridSemantics::gumbel_lpp_passage_time);
    g.at(1, 1) = w(WeightRole::origin, 1, 1);
    for (std::uint32_t i = 2; i <= m; ++i) g.at(i, 1) = g.value(i - 1, 1) + w(WeightRole::horizontal, i, 1);
    for (std::uint32_t j = 2; j <= n; ++j) g.at(1, j) = g.value(1, j - 1) + w(WeightRole::vertical, 1, j);
    detail::for_each_bulk(m, n, opt.threads, [&](std::uint32_t i, std::uint32_t j) {
        g.at(i, j) = std::max(g.value(i - 1, j) + w(WeightRole::horizontal, i, j),
                              g.value(i, j - 1) + w(WeightRole::vertical, i, j));
    });
    return g;
}

inline constexpr std::uint64_t max_oracle_paths = 1'000'000;

// binomial(m+n-2, m-1) saturated at 2^64-1.
inline std::uint64_t path_count(std::uint32_t m, std::uint32_t n) {
    const std::uint64_t k = std::min(m, n) - 1;
    const std::uint64_t total = static_cast<std::uint64_t>(m) + n - 2;
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (c > (std::numeric_limits<std::uint64_t>::max() - 1) / (total - k + i))
            return std::numeric_limits<std::uint64_t>::max();
        c = c * (total - k + i) / i;
    }
    return c;
}

struct PathOracleResult {
    double value = 0.0;          // max path weight (LPP) or log of the path sum (polymer)
    std::uint64_t paths_visited = 0;
};

namespace detail {

// Depth-first enumeration of up-right paths with an explicit stack; calls
// visit(path_weight_sum) once per complete path.
template <class Step, class Visit>
void enumerate_paths(std::uint32_t m, std::uint32_t n, double start, Step&& step, Visit&& visit) {
    struct Frame {
        std::uint32_t i, j;
        double acc;
        int next_move; // 0: try right (i+1), 1: try up (j+1), 2: done
    };
    std::vector<Frame> stack;
    stack.push_back({1, 1, start, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.i == m && f.j == n) {
            visit(f.acc);
            stack.pop_back();
            continue;
        }
        if (f.next_move == 0) {
            f.next_move = 1;
            if (f.i < m) {
                const double acc = f.acc + step(f.i + 1, f.j, true);
                stack.push_back({f.i + 1, f.j, acc, 0});
                continue;
            }
        }
        if (f.next_move == 1) {
            f.next_move = 2;
            if (f.j < n) {
                const double acc = f.acc + step(f.i, f.j + 1, false);
                stack.push_back({f.i, f.j + 1, acc, 0});
                continue;
            }
        }
        stack.pop_back();
    }
}

inline void check_oracle_guard(std::uint32_t m, std::uint32_t n) {
    check_dims(m, n);
    const std::uint64_t count = path_count(m, n);
    if (count > max_oracle_paths) {
        std::ostringstream msg;
        msg << "path oracle: " << count << " paths exceed the enumeration guard of " << max_oracle_paths;
        throw capacity_error(msg.str());
    }
}

} // namespace detail

// Maximum over all up-right paths of origin weight plus edge weights.
template <weight_field F>
PathOracleResult lpp_path_oracle(std::uint32_t m, std::uint32_t n, const F& w) {
    detail::check_oracle_guard(m, n);
    PathOracleResult r;
    r.value = -std::numeric_limits<double>::infinity();
    detail::enumerate_paths(
        m, n, w(WeightRole::origin, 1, 1),
        [&](std::uint32_t i, std::uint32_t j, bool moved_right) {
            return moved_right ? w(WeightRole::horizontal, i, j) : w(WeightRole::vertical, i, j);
        },
        [&](double total) {
            r.value = std::max(r.value, total);
            ++r.paths_visited;
        });
    return r;
}

// --- log-gamma polymer -------------------------------------------------------

// Free-energy grid, computed entirely in log space. The field supplies
// vertex log-weights; gamma is recorded for provenance and validated here.
template <weight_field F>
PassageGrid log_gamma_grid(std::uint32_t m, std::uint32_t n, double gamma, const F& w,
                           const EvalOptions& opt = {}) {
    detail::check_dims(m, n);
    if (!(gamma > 0.0)) throw std::invalid_argument("log_gamma_grid: gamma must be positive");
    GridModelInfo info;
    info.gamma = gamma;
    PassageGrid g(m, n, GridSemantics::log_gamma_free_energy, info);
    g.at(1, 1) = w(WeightRole::vertex, 1, 1);
    for (std::uint32_t i = 2; i <= m; ++i) g.at(i, 1) = g.value(i - 1, 1) + w(WeightRole::vertex, i, 1);
    for (std::uint32_t j = 2; j <= n; ++j) g.at(1, j) = g.value(1, j - 1) + w(WeightRole::vertex, 1, j);
    detail::for_each_bulk(m, n, opt.threads, [&](std::uint32_t i, std::uint32_t j) {
        g.at(i, j) = logaddexp(g.value(i - 1, j), g.value(i, j - 1)) + w(WeightRole::vertex, i, j);
    });
    return g;
}

// log of the sum over all up-right paths of the product of vertex weights
// (both endpoints included); the sum runs in direct space with compensated
// summation, which is why this oracle is restricted to small lattices.
template <weight_field F>
PathOracleResult polymer_path_oracle(std::uint32_t m, std::uint32_t n, const F& w) {
    detail::check_oracle_guard(m, n);
    detail::KahanSum total;
    PathOracleResult r;
    detail::enumerate_paths(
        m, n, w(WeightRole::vertex, 1, 1),
        [&](std::uint32_t i, std::uint32_t j, bool) { return w(WeightRole::vertex, i, j); },
        [&](double log_product) {
            total.add(std::exp(log_product));
            ++r.paths_visited;
        });
    r.value = std::log(total.value());
    return r;
}

// --- multi-edge LPP ----------------------------------------------------------

// Since max_i(a + U_i) = a + max_i U_i, each bundle of parallel edges enters
// the recursion only through its maximum; the field reduces each slot once.
template <multi_edge_weight_field F>
PassageGrid multi_edge_lpp_grid(std::uint32_t m, std::uint32_t n, const MultiEdgeConfig& cfg, const F& w,
                                const EvalOptions& opt = {}) {
    detail::check_dims(m, n);
    if (cfg.copies == 0) throw std::invalid_argument("multi_edge_lpp_grid: copies must be >= 1");
    if (cfg.copies != w.copies())
        throw std::invalid_argument("multi_edge_lpp_grid: config copies disagree with the weight field");
    GridModelInfo info;
    info.multi_edge_copies = cfg.copies;
    info.edge_dist = cfg.dist;
    PassageGrid g(m, n, GridSemantics::multi_edge_passage_time, info);
    g.at(1, 1) = w.reduced_max(WeightRole::origin, 1, 1);
    for (std::uint32_t i = 2; i <= m; ++i)
        g.at(i, 1) = g.value(i - 1, 1) + w.reduced_max(WeightRole::horizontal, i, 1);
    for (std::uint32_t j = 2; j <= n; ++j)
        g.at(1, j) = g.value(1, j - 1) + w.reduced_max(WeightRole::vertical, 1, j);
    detail::for_each_bulk(m, n, opt.threads, [&](std::uint32_t i, std::uint32_t j) {
        g.at(i, j) = std::max(g.value(i - 1, j) + w.reduced_max(WeightRole::horizontal, i, j),
                              g.value(i, j - 1) + w.reduced_max(WeightRole::vertical, i, j));
    });
    return g;
}

// Entry (i,j) -> (value - c_n * (i + j - 1)) / sigma_n. A path to (i,j)
// carries i + j - 1 weights, hence the centering multiplier.
inline PassageGrid normalize_multi_edge(const PassageGrid& grid, const MultiEdgeConfig& cfg, double c_n,
                                        double sigma_n) {
    if (grid.semantics() != GridSemantics::multi_edge_passage_time)
        throw std::invalid_argument("normalize_multi_edge: grid does not have multi-edge semantics");
    if (!(sigma_n > 0.0)) throw std::invalid_argument("normalize_multi_edge: sigma_n must be positive");
    GridModelInfo info = grid.info();
    info.multi_edge_copies = cfg.copies;
    info.normalized = true;
    PassageGrid out(grid.rows(), grid.cols(), grid.semantics(), info);
    for (std::uint32_t i = 1; i <= grid.rows(); ++i)
        for (std::uint32_t j = 1; j <= grid.cols(); ++j)
            out.at(i, j) = (grid.value(i, j) - c_n * (static_cast<double>(i) + j - 1.0)) / sigma_n;
    return out;
}

// --- corner-only evaluation (rolling buffer) ----------------------------------

namespace detail {

// Corner value of a lattice recursion using O(min(m,n)) memory. The functors
// see logical coordinates; when the buffer is rolled along the other axis
// the same recursion is evaluated in a different order with identical
// results (each cell's inputs are final either way).
template <class OriginFn, class DownFn, class RightFn, class BulkFn>
double rolling_corner(std::uint32_t m, std::uint32_t n, OriginFn&& origin, DownFn&& down,
                      RightFn&& right, BulkFn&& bulk) {
    check_dims(m, n);
    if (n <= m) {
        std::vector<double> row(static_cast<std::size_t>(n) + 1);
        row[1] = origin();
        for (std::uint32_t j = 2; j <= n; ++j) row[j] = right(j, row[j - 1]);
        for (std::uint32_t i = 2; i <= m; ++i) {
            row[1] = down(i, row[1]);
            for (std::uint32_t j = 2; j <= n; ++j) row[j] = bulk(i, j, row[j], row[j - 1]);
        }
        return row[n];
    }
    std::vector<double> col(static_cast<std::size_t>(m) + 1);
    col[1] = origin();
    for (std::uint32_t i = 2; i <= m; ++i) col[i] = down(i, col[i - 1]);
    for (std::uint32_t j = 2; j <= n; ++j) {
        col[1] = right(j, col[1]);
        for (std::uint32_t i = 2; i <= m; ++i) col[i] = bulk(i, j, col[i - 1], col[i]);
    }
    return col[m];
}

} // namespace detail

template <weight_field F>
double lpp_corner_value(std::uint32_t m, std::uint32_t n, const F& w) {
    return detail::rolling_corner(
        m, n, [&] { return w(WeightRole::origin, 1, 1); },
        [&](std::uint32_t i, double v) { return v + w(WeightRole::horizontal, i, 1); },
        [&](std::uint32_t j, double v) { return v + w(WeightRole::vertical, 1, j); },
        [&](std::uint32_t i, std::uint32_t j, double up, double left) {
            return std::max(up + w(WeightRole::horizontal, i, j), left + w(WeightRole::vertical, i, j));
        });
}

template <weight_field F>
double log_gamma_corner_value(std::uint32_t m, std::uint32_t n, const F& w) {
    return detail::rolling_corner(
        m, n, [&] { return w(WeightRole::vertex, 1, 1); },
        [&](std::uint32_t i, double v) { return v + w(WeightRole::vertex, i, 1); },
        [&](std::uint32_t j, double v) { return v + w(WeightRole::vertex, 1, j); },
        [&](std::uint32_t i, std::uint32_t j, double up, double left) {
            return logaddexp(up, left) + w(WeightRole::vertex, i, j);
        });
}

template <multi_edge_weight_field F>
double multi_edge_corner_value(std::uint32_t m, std::uint32_t n, const F& w) {
    return detail::rolling_corner(
        m, n, [&] { return w.reduced_max(WeightRole::origin, 1, 1); },
        [&](std::uint32_t i, double v) { return v + w.reduced_max(WeightRole::horizontal, i, 1); },
        [&](std::uint32_t j, double v) { return v + w.reduced_max(WeightRole::vertical, 1, j); },
        [&](std::uint32_t i, std::uint32_t j, double up, double left) {
            return std::max(up + w.reduced_max(WeightRole::horizontal, i, j),
                            left + w.reduced_max(WeightRole::vertical, i, j));
        });
}

// --- i.i.d. corner sampling -----------------------------------------------

enum class LatticeModel { gumbel_lpp, log_gamma, multi_edge };

inline const char* to_string(LatticeModel m) {
    switch (m) {
        case LatticeModel::gumbel_lpp: return "gumbel_lpp";
        case LatticeModel::log_gamma: return "log_gamma";
        case LatticeModel::multi_edge: return "multi_edge";
    }
    return "?";
}

struct SamplerConfig {
    std::uint64_t master_seed = 0;
    double gamma = 1.0;                  // log_gamma model only
    MultiEdgeConfig multi_edge{};        // multi_edge model only
    unsigned threads = 1;
};

// `count` i.i.d. realizations of the corner statistic, lane = sample index.
inline SampleSet sample_statistic(LatticeModel model, std::uint32_t m, std::uint32_t n,
                                  const SamplerConfig& cfg, std::size_t count) {
    detail::check_dims(m, n);
    if (count == 0) throw std::invalid_argument("sample_statistic: count must be >= 1");
    std::vector<double> values;
    switch (model) {
        case LatticeModel::gumbel_lpp:
            values = parallel_samples(count, cfg.threads, [&](std::size_t lane) {
                return lpp_corner_value(m, n, GumbelLppWeights(cfg.master_seed, lane));
            });
            break;
        case LatticeModel::log_gamma:
            if (!(cfg.gamma > 0.0)) throw std::invalid_argument("sample_statistic: gamma must be positive");
            values = parallel_samples(count, cfg.threads, [&](std::size_t lane) {
                return log_gamma_corner_value(m, n, LogGammaWeights(cfg.master_seed, lane, cfg.gamma));
            });
            break;
        case LatticeModel::multi_edge:
            values = parallel_samples(count, cfg.threads, [&](std::size_t lane) {
                return multi_edge_corner_value(
                    m, n,
                    SampledMultiEdgeWeights(cfg.master_seed, lane, cfg.multi_edge.copies,
                                            cfg.multi_edge.dist));
            });
            break;
    }
    Provenance prov;
    prov.master_seed = cfg.master_seed;
    {
        std::ostringstream tag;
        tag << to_string(model) << "(" << m << "," << n << ")";
        prov.model = tag.str();
        std::ostringstream params;
        if (model == LatticeModel::log_gamma) params << "gamma=" << cfg.gamma;
        if (model == LatticeModel::multi_edge)
            params << "copies=" << cfg.multi_edge.copies << " dist=" << to_string(cfg.multi_edge.dist.kind);
        prov.params = params.str();
    }
    return SampleSet(std::move(values), std::move(prov));
}

// --- single-cell update laws ---------------------------------------------

// Exponentiated one-step updates of the two recursions at fixed predecessor
// values z1, z2 > 0:
//   first set:  max(z1/E1, z2/E2)   (LPP cell update, e^T form)
//   second set: (z1+z2)/E3          (polymer cell update)
// Reciprocals of both are Exp(z1+z2) draws.
inline std::pair<SampleSet, SampleSet> one_step_laws(double z1, double z2, std::size_t count,
                                                     std::uint64_t master_seed, unsigned threads = 1) {
    if (!(z1 > 0.0) || !(z2 > 0.0)) throw std::invalid_argument("one_step_laws: z1, z2 must be positive");
    if (count == 0) throw std::invalid_argument("one_step_laws: count must be >= 1");
    std::vector<double> lpp(count), polymer(count);
    parallel_for_index(count, threads, [&](std::size_t lane) {
        Stream s = derive_stream(master_seed, lane);
        const double e1 = sample_exponential(s);
        const double e2 = sample_exponential(s);
        const double e3 = sample_exponential(s);
        lpp[lane] = std::max(z1 / e1, z2 / e2);
        polymer[lane] = (z1 + z2) / e3;
    });
    Provenance p1{"one_step_lpp", "", master_seed, count};
    Provenance p2{"one_step_polymer", "", master_seed, count};
    {
        std::ostringstream params;
        params << "z1=" << z1 << " z2=" << z2;
        p1.params = p2.params = params.str();
    }
    return {SampleSet(std::move(lpp), std::move(p1)), SampleSet(std::move(polymer), std::move(p2))};
}

} // namespace glpp
