#pragma once

// Independent ground-truth engines. Nothing here reuses the reliability-
// function shortcuts of the importance modules: binary measures are computed
// by full state enumeration, lifetime measures by seeded Monte Carlo. Also
// hosts the randomized system generators used by property tests and the
// empirical probe of the series/parallel information-ordering conjecture.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "relimp/importance_binary.hpp"
#include "relimp/lifetime.hpp"
#include "relimp/rng.hpp"
#include "relimp/structure.hpp"

namespace relimp::oracle {

constexpr int max_oracle_components = 12;

inline void validate_oracle_scale(const StructureFunction& sf) {
    if (sf.n() > max_oracle_components)
        throw std::invalid_argument("exact enumeration oracle supports up to " +
                                    std::to_string(max_oracle_components) + " components, got " +
                                    std::to_string(sf.n()));
}

inline double state_probability(std::span<const double> p, std::uint32_t state) {
    double prob = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        prob *= (state >> j) & 1u ? p[j] : 1.0 - p[j];
    return prob;
}

/// cov(X_i, phi(X)) summed over all 2^n states; no reliability-function
/// shortcuts.
inline double exact_binary_covariance(const StructureFunction& sf, std::span<const double> p,
                                      int component) {
    validate_oracle_scale(sf);
    validate_probabilities(sf, p);
    const std::uint32_t bit = component_bit(component);
    double e_joint = 0.0, e_i = 0.0, e_phi = 0.0;
    for (std::uint32_t s = 0; s < sf.state_count(); ++s) {
        const double prob = state_probability(p, s);
        const double xi = (s & bit) ? 1.0 : 0.0;
        const double phi = sf(s) ? 1.0 : 0.0;
        e_joint += prob * xi * phi;
        e_i += prob * xi;
        e_phi += prob * phi;
    }
    return e_joint - e_i * e_phi;
}

/// I(X_i | X) from the exact 2x2 joint law built by state enumeration.
inline double exact_binary_mutual_information(const StructureFunction& sf,
                                              std::span<const double> p, int component) {
    validate_oracle_scale(sf);
    validate_probabilities(sf, p);
    const std::uint32_t bit = component_bit(component);
    BinaryJoint joint{{{0.0, 0.0}, {0.0, 0.0}}};
    for (std::uint32_t s = 0; s < sf.state_count(); ++s) {
        const double prob = state_probability(p, s);
        joint[(s & bit) ? 1 : 0][sf(s) ? 1 : 0] += prob;
    }
    return binary_mutual_information(joint);
}

/// Closed-form series information importance (the coproduct identity),
/// evaluated directly from the component reliabilities.
inline double series_information_importance_closed_form(std::span<const double> p,
                                                        int component) {
    const std::size_t n = p.size();
    double prod_all = 1.0, prod_others = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        prod_all *= p[j];
        if (j != static_cast<std::size_t>(component - 1)) prod_others *= p[j];
    }
    const double pi = p[component - 1];
    const double coprod_others = 1.0 - prod_others;  // coproduct of pbar_j, j != i
    const double coprod_all = 1.0 - prod_all;
    double total = 0.0;
    if (pi * coprod_others > 0.0 && coprod_all > 0.0)
        total += pi * coprod_others * std::log2(coprod_others / coprod_all);
    if (prod_all > 0.0) total -= prod_all * std::log2(pi);
    if (1.0 - pi > 0.0 && coprod_all > 0.0) total -= (1.0 - pi) * std::log2(coprod_all);
    return total;
}

// ---------------------------------------------------------------------------
// Monte Carlo lifetime engine
// ---------------------------------------------------------------------------

struct McConfig {
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    unsigned streams = 64;      // substreams; also the batch count for standard errors
    unsigned grid_points = 64;  // diagonal-covariance grid size (0 disables)
    unsigned threads = 1;       // worker threads; results are schedule-invariant
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct McLifetimeResult {
    std::vector<McEstimate> lifetime_cov;  // cov(T_i, T) per component
    std::vector<McEstimate> sup_diag_cov;  // max over grid of cov(X_i(t), X(t))
    std::vector<double> sup_time;          // grid time attaining the maximum
    std::vector<double> grid;
};

namespace mc_detail {

struct StreamSums {
    // raw moment sums
    std::vector<double> sum_ti;    // per component
    std::vector<double> sum_ti_t;  // per component
    double sum_t = 0.0;
    std::size_t count = 0;
    // grid indicator counts
    std::vector<double> sys_alive;              // per grid point
    std::vector<std::vector<double>> comp_alive;   // [component][grid]
    std::vector<std::vector<double>> joint_alive;  // [component][grid]
};

inline void run_stream(const LifetimeModel& m, std::uint64_t stream_seed, std::size_t samples,
                       std::span<const double> grid, StreamSums& out) {
    const int n = m.n();
    out.sum_ti.assign(n, 0.0);
    out.sum_ti_t.assign(n, 0.0);
    out.sys_alive.assign(grid.size(), 0.0);
    out.comp_alive.assign(n, std::vector<double>(grid.size(), 0.0));
    out.joint_alive.assign(n, std::vector<double>(grid.size(), 0.0));
    out.count = samples;

    Rng rng(stream_seed);
    std::vector<double> lifetimes(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < samples; ++k) {
        for (int i = 1; i <= n; ++i)
            lifetimes[i - 1] = m.distribution(i).quantile(rng.uniform01());
        const double t_sys = m.system_lifetime(lifetimes);
        out.sum_t += t_sys;
        for (int i = 0; i < n; ++i) {
            out.sum_ti[i] += lifetimes[i];
            out.sum_ti_t[i] += lifetimes[i] * t_sys;
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const bool sys = t_sys > grid[g];
            if (sys) out.sys_alive[g] += 1.0;
            for (int i = 0; i < n; ++i) {
                if (lifetimes[i] > grid[g]) {
                    out.comp_alive[i][g] += 1.0;
                    if (sys) out.joint_alive[i][g] += 1.0;
                }
            }
        }
    }
}

inline double batch_standard_error(std::span<const double> batch_values) {
    const std::size_t k = batch_values.size();
    if (k < 2) return std::numeric_limits<double>::infinity();
    double mean = 0.0;
    for (double v : batch_values) mean += v;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double v : batch_values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (static_cast<double>(k) * static_cast<double>(k - 1)));
}

}  // namespace mc_detail

/// Plug-in estimates of cov(T_i, T) and of the diagonal covariance curve from
/// seeded inverse-CDF sampling. Output is a pure function of (seed, samples,
/// streams, grid): substreams are independently seeded and combined in stream
/// order, so thread scheduling cannot change a single bit.
inline McLifetimeResult mc_lifetime_covariance(const LifetimeModel& m, const McConfig& cfg) {
    if (cfg.samples == 0) throw std::invalid_argument("sample count must be positive");
    if (cfg.streams < 2) throw std::invalid_argument("at least two substreams are required");
    const int n = m.n();
    const unsigned streams = static_cast<unsigned>(
        std::max<std::size_t>(1, std::min<std::size_t>(cfg.streams, cfg.samples)));

    std::vector<double> grid;
    const double t_max = m.horizon(1e-9);
    if (cfg.grid_points > 0 && t_max > 0.0) {
        const double t_lo = t_max * 1e-6;
        for (unsigned g = 0; g < cfg.grid_points; ++g) {
            const double frac =
                cfg.grid_points == 1
                    ? 0.0
                    : static_cast<double>(g) / static_cast<double>(cfg.grid_points - 1);
            grid.push_back(t_lo * std::pow(t_max / t_lo, frac));
        }
    }

    std::vector<mc_detail::StreamSums> sums(streams);
    auto worker = [&](unsigned first, unsigned step) {
        for (unsigned s = first; s < streams; s += step) {
            const std::size_t base = cfg.samples / streams;
            const std::size_t extra = s < cfg.samples % streams ? 1 : 0;
            mc_detail::run_stream(m, Rng::mix(cfg.seed, s), base + extra, grid, sums[s]);
        }
    };
    const unsigned threads = std::max(1u, std::min(cfg.threads, streams));
    if (threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w, threads);
        for (auto& th : pool) th.join();
    }

    // Combine raw sums in stream order for the full-sample plug-in estimates;
    // per-stream estimates supply batch-means standard errors.
    McLifetimeResult out;
    out.grid = grid;
    const double total_n = static_cast<double>(cfg.samples);
    double sum_t = 0.0;
    for (const auto& s : sums) sum_t += s.sum_t;
    const double mean_t = sum_t / total_n;

    for (int i = 0; i < n; ++i) {
        double sum_ti = 0.0, sum_ti_t = 0.0;
        std::vector<double> batch(streams);
        for (unsigned s = 0; s < streams; ++s) {
            sum_ti += sums[s].sum_ti[i];
            sum_ti_t += sums[s].sum_ti_t[i];
            const double ns = static_cast<double>(sums[s].count);
            batch[s] = sums[s].sum_ti_t[i] / ns -
                       (sums[s].sum_ti[i] / ns) * (sums[s].sum_t / ns);
        }
        McEstimate est;
        est.value = sum_ti_t / total_n - (sum_ti / total_n) * mean_t;
        est.std_error = mc_detail::batch_standard_error(batch);
        out.lifetime_cov.push_back(est);
    }

    if (!grid.empty()) {
        for (int i = 0; i < n; ++i) {
            double best_val = -1.0;
            std::size_t best_g = 0;
            for (std::size_t g = 0; g < grid.size(); ++g) {
                double joint = 0.0, comp = 0.0, sys = 0.0;
                for (const auto& s : sums) {
                    joint += s.joint_alive[i][g];
                    comp += s.comp_alive[i][g];
                    sys += s.sys_alive[g];
                }
                const double cov =
                    joint / total_n - (comp / total_n) * (sys / total_n);
                if (cov > best_val) {
                    best_val = cov;
                    best_g = g;
                }
            }
            std::vector<double> batch(streams);
            for (unsigned s = 0; s < streams; ++s) {
                const double ns = static_cast<double>(sums[s].count);
                batch[s] = sums[s].joint_alive[i][best_g] / ns -
                           (sums[s].comp_alive[i][best_g] / ns) *
                               (sums[s].sys_alive[best_g] / ns);
            }
            out.sup_diag_cov.push_back({best_val, mc_detail::batch_standard_error(batch)});
            out.sup_time.push_back(grid[best_g]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random system generators
// ---------------------------------------------------------------------------

/// Random read-once expression over the given components: every leaf appears
/// exactly once, so the structure is coherent by construction.
inline ExprPtr random_read_once_expr(Rng& rng, std::vector<int> comps) {
    if (comps.empty()) throw std::invalid_argument("component list is empty");
    for (std::size_t k = comps.size(); k > 1; --k)
        std::swap(comps[k - 1], comps[rng.below(k)]);
    struct Builder {
        Rng& rng;
        ExprPtr build(std::span<int> part) {
            if (part.size() == 1) return Expr::component(part[0]);
            const int groups =
                std::min<int>(static_cast<int>(part.size()), rng.uniform_int(2, 4));
            // Split into nonempty contiguous chunks of the shuffled ids.
            std::vector<int> cuts{0, static_cast<int>(part.size())};
            while (static_cast<int>(cuts.size()) < groups + 1) {
                const int c = rng.uniform_int(1, static_cast<int>(part.size()) - 1);
                if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
            }
            std::sort(cuts.begin(), cuts.end());
            std::vector<ExprPtr> args;
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                args.push_back(build(part.subspan(cuts[k], cuts[k + 1] - cuts[k])));
            switch (rng.below(3)) {
                case 0: return Expr::series(std::move(args));
                case 1: return Expr::parallel(std::move(args));
                default: {
                    const int m = static_cast<int>(args.size());
                    return Expr::k_out_of_n(rng.uniform_int(1, m), std::move(args));
                }
            }
        }
    } builder{rng};
    return builder.build(comps);
}

/// Random coherent structure on components 1..n from a random minimal
/// path-set family (richer than read-once trees); falls back to retries until
/// every component is covered by some minimal path set.
inline StructureFunction random_coherent_structure(Rng& rng, int n) {
    if (n < 1 || n > max_oracle_components)
        throw std::invalid_argument("generator supports 1.." +
                                    std::to_string(max_oracle_components) + " components");
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    for (int attempt = 0; attempt < 256; ++attempt) {
        const int sets = rng.uniform_int(1, 2 * n);
        std::vector<std::uint32_t> paths;
        for (int k = 0; k < sets; ++k) {
            std::uint32_t mask = 0;
            for (int b = 0; b < n; ++b)
                if (rng.uniform01() < 0.45) mask |= std::uint32_t{1} << b;
            if (mask == 0) mask = std::uint32_t{1} << rng.below(static_cast<std::uint64_t>(n));
            paths.push_back(mask);
        }
        // Keep only minimal sets.
        std::vector<std::uint32_t> minimal;
        for (std::uint32_t a : paths) {
            bool keep = true;
            for (std::uint32_t b : paths)
                if (b != a && (a & b) == b && a != b) keep = false;
            if (keep && std::find(minimal.begin(), minimal.end(), a) == minimal.end())
                minimal.push_back(a);
        }
        std::uint32_t covered = 0;
        for (std::uint32_t mask : minimal) covered |= mask;
        if (covered != full) continue;
        const std::uint32_t states = full + 1;
        std::vector<bool> table(states, false);
        for (std::uint32_t s = 0; s < states; ++s)
            for (std::uint32_t mask : minimal)
                if ((s & mask) == mask) {
                    table[s] = true;
                    break;
                }
        StructureFunction sf(n, std::move(table));
        return rng.uniform01() < 0.5 ? sf : dual(sf);
    }
    throw std::runtime_error("random structure generation failed to cover all components");
}

/// Randomized instance of the module-ordering hypothesis: component `i` in
/// series (or parallel) with a coherent module containing component `j`.
struct ModuleInstance {
    StructureFunction sf;
    ExprPtr expr;
    int i = 0;
    int j = 0;
    std::vector<int> module;
    bool parallel_case = false;
};

inline ModuleInstance random_module_instance(Rng& rng, int n, bool parallel_case) {
    if (n < 3) throw std::invalid_argument("module instances need at least 3 components");
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 1);
    for (std::size_t k = ids.size(); k > 1; --k) std::swap(ids[k - 1], ids[rng.below(k)]);

    const int i = ids[0];
    // module_size = n-1 leaves no enclosing structure: the whole system is the
    // series/parallel pair itself.
    const int module_size = rng.uniform_int(1, n - 1);
    std::vector<int> module(ids.begin() + 1, ids.begin() + 1 + module_size);
    std::vector<int> rest(ids.begin() + 1 + module_size, ids.end());
    const int j = module[rng.below(module.size())];

    ExprPtr chi = random_read_once_expr(rng, module);
    ExprPtr core = parallel_case ? Expr::parallel({Expr::component(i), chi})
                                 : Expr::series({Expr::component(i), chi});
    ExprPtr expr;
    if (rest.empty()) {
        expr = core;
    } else {
        // Build the enclosing structure psi over the remaining components plus a
        // placeholder leaf, then splice the series/parallel core into the slot.
        constexpr int placeholder = 1 << 20;
        rest.push_back(placeholder);
        expr = substitute(random_read_once_expr(rng, rest), placeholder, core);
    }
    ModuleInstance inst{StructureFunction::from_expr(expr), expr, i, j, std::move(module),
                        parallel_case};
    return inst;
}

// ---------------------------------------------------------------------------
// Conjecture probe
// ---------------------------------------------------------------------------

struct ConjectureViolation {
    std::string expression;
    std::vector<double> p;
    int i = 0;
    int j = 0;
    double value_i = 0.0;
    double value_j = 0.0;
    std::uint64_t trial = 0;
    bool parallel_case = false;
};

struct ConjectureReport {
    std::size_t trials = 0;
    std::vector<ConjectureViolation> violations;
};

// Tolerance below which an ordering inversion is attributed to floating-point
// ties rather than reported as a counterexample.
constexpr double conjecture_tolerance = 1e-10;

/// Probes whether the series/parallel covariance-ordering conclusions also
/// hold for information importance on randomized module instances whose
/// p-hypotheses hold by construction. Returns every violating instance.
inline ConjectureReport conjecture_probe(std::size_t trials, int n_max, std::uint64_t seed) {
    if (n_max < 3 || n_max > max_oracle_components)
        throw std::invalid_argument("n_max must be in 3.." +
                                    std::to_string(max_oracle_components));
    ConjectureReport report;
    report.trials = trials;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng(Rng::mix(seed, trial));
        const int n = rng.uniform_int(3, n_max);
        const bool parallel_case = rng.below(2) == 1;
        ModuleInstance inst = random_module_instance(rng, n, parallel_case);

        std::vector<double> p(static_cast<std::size_t>(n));
        for (double& v : p) v = rng.uniform(0.02, 0.98);
        // Enforce the hypothesis: p_i <= p_j in the series case, >= in parallel.
        const bool swap_needed = parallel_case ? p[inst.i - 1] < p[inst.j - 1]
                                               : p[inst.i - 1] > p[inst.j - 1];
        if (swap_needed) std::swap(p[inst.i - 1], p[inst.j - 1]);

        const ImportanceReport info = information_importance(inst.sf, p);
        if (info.values[inst.i - 1] < info.values[inst.j - 1] - conjecture_tolerance) {
            report.violations.push_back({to_string(*inst.expr), p, inst.i, inst.j,
                                         info.values[inst.i - 1], info.values[inst.j - 1],
                                         trial, parallel_case});
        }
    }
    return report;
}

}  // namespace relimp::oracle
