#pragma once

// Component lifetime distributions (exponential, Weibull, empirical step CDF)
// and the lifetime system model: a coherent structure plus one distribution
// per component, with the signed domination and path sets cached.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relimp/structure.hpp"

namespace relimp {

namespace dist {

struct Exponential {
    double rate;
};

struct Weibull {
    double shape;
    double scale;
};

struct Empirical {
    std::vector<double> samples;  // sorted ascending
};

}  // namespace dist

class LifetimeDistribution {
public:
    static LifetimeDistribution exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be positive");
        return LifetimeDistribution(dist::Exponential{rate});
    }

    static LifetimeDistribution weibull(double shape, double scale) {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw std::invalid_argument("weibull shape and scale must be positive");
        return LifetimeDistribution(dist::Weibull{shape, scale});
    }

    static LifetimeDistribution empirical(std::vector<double> samples) {
        if (samples.empty()) throw std::invalid_argument("empirical sample set is empty");
        for (double x : samples)
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument("empirical samples must be finite and nonnegative");
        std::sort(samples.begin(), samples.end());
        return LifetimeDistribution(dist::Empirical{std::move(samples)});
    }

    double cdf(double t) const {
        return std::visit(
            [t](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, dist::Exponential>) {
                    return t <= 0.0 ? 0.0 : -std::expm1(-d.rate * t);
                } else if constexpr (std::is_same_v<T, dist::Weibull>) {
                    return t <= 0.0 ? 0.0 : -std::expm1(-std::pow(t / d.scale, d.shape));
                } else {
                    auto it = std::upper_bound(d.samples.begin(), d.samples.end(), t);
                    return static_cast<double>(it - d.samples.begin()) /
                           static_cast<double>(d.samples.size());
                }
            },
            impl_);
    }

    double survival(double t) const { return 1.0 - cdf(t); }

    /// Generalized inverse: smallest t with F(t) >= u, for u in [0,1).
    double quantile(double u) const {
        if (!(u >= 0.0 && u < 1.0))
            throw std::invalid_argument("quantile argument must be in [0,1)");
        return std::visit(
            [u](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, dist::Exponential>) {
                    return -std::log1p(-u) / d.rate;
                } else if constexpr (std::is_same_v<T, dist::Weibull>) {
                    return u == 0.0 ? 0.0 : d.scale * std::pow(-std::log1p(-u), 1.0 / d.shape);
                } else {
                    const auto n = d.samples.size();
                    std::size_t k = static_cast<std::size_t>(
                        std::ceil(u * static_cast<double>(n)));
                    if (k > 0) --k;
                    return d.samples[std::min(k, n - 1)];
                }
            },
            impl_);
    }

    double mean() const {
        return std::visit(
            [](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, dist::Exponential>) {
                    return 1.0 / d.rate;
                } else if constexpr (std::is_same_v<T, dist::Weibull>) {
                    return d.scale * std::tgamma(1.0 + 1.0 / d.shape);
                } else {
                    double s = 0.0;
                    for (double x : d.samples) s += x;
                    return s / static_cast<double>(d.samples.size());
                }
            },
            impl_);
    }

    double variance() const {
        return std::visit(
            [this](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, dist::Exponential>) {
                    return 1.0 / (d.rate * d.rate);
                } else if constexpr (std::is_same_v<T, dist::Weibull>) {
                    const double g1 = std::tgamma(1.0 + 1.0 / d.shape);
                    const double g2 = std::tgamma(1.0 + 2.0 / d.shape);
                    return d.scale * d.scale * (g2 - g1 * g1);
                } else {
                    const double m = mean();
                    double s = 0.0;
                    for (double x : d.samples) s += (x - m) * (x - m);
                    return s / static_cast<double>(d.samples.size());
                }
            },
            impl_);
    }

    bool is_exponential() const { return std::holds_alternative<dist::Exponential>(impl_); }

    double exponential_rate() const {
        if (!is_exponential())
            throw std::invalid_argument("distribution is not exponential");
        return std::get<dist::Exponential>(impl_).rate;
    }

    /// Jump points of a step CDF (sorted, unique); empty for smooth families.
    std::vector<double> jump_points() const {
        if (const auto* e = std::get_if<dist::Empirical>(&impl_)) {
            std::vector<double> jumps(e->samples);
            jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
            return jumps;
        }
        return {};
    }

    std::string describe() const {
        return std::visit(
            [](const auto& d) -> std::string {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, dist::Exponential>) {
                    return "exponential(rate=" + std::to_string(d.rate) + ")";
                } else if constexpr (std::is_same_v<T, dist::Weibull>) {
                    return "weibull(shape=" + std::to_string(d.shape) +
                           ",scale=" + std::to_string(d.scale) + ")";
                } else {
                    return "empirical(" + std::to_string(d.samples.size()) + " samples)";
                }
            },
            impl_);
    }

private:
    template <class D>
    explicit LifetimeDistribution(D d) : impl_(std::move(d)) {}

    std::variant<dist::Exponential, dist::Weibull, dist::Empirical> impl_;
};

// ---------------------------------------------------------------------------
// LifetimeModel
// ---------------------------------------------------------------------------

class LifetimeModel {
public:
    LifetimeModel(StructureFunction sf, std::vector<LifetimeDistribution> dists)
        : sf_(std::move(sf)), dists_(std::move(dists)) {
        if (static_cast<int>(dists_.size()) != sf_.n())
            throw std::invalid_argument("lifetime model has " + std::to_string(dists_.size()) +
                                        " distributions for " + std::to_string(sf_.n()) +
                                        " components");
        auto mono = check_monotone(sf_);
        if (!mono.monotone)
            throw std::invalid_argument("lifetime model requires a coherent structure: "
                                        "not monotone in component " +
                                        std::to_string(mono.component));
        if (auto irr = irrelevant_components(sf_); !irr.empty())
            throw std::invalid_argument("lifetime model requires a coherent structure: "
                                        "component " + std::to_string(irr.front()) +
                                        " is irrelevant");
        domination_ = signed_domination(sf_);
        sets_ = minimal_path_cut_sets(sf_);
    }

    int n() const { return sf_.n(); }
    const StructureFunction& structure() const { return sf_; }
    const std::vector<LifetimeDistribution>& distributions() const { return dists_; }
    const LifetimeDistribution& distribution(int component) const {
        return dists_.at(static_cast<std::size_t>(component) - 1);
    }
    const SignedDomination& domination() const { return domination_; }
    const PathCutSets& path_cut_sets() const { return sets_; }

    bool all_exponential() const {
        for (const auto& d : dists_)
            if (!d.is_exponential()) return false;
        return true;
    }

    /// System lifetime from component lifetimes: max over path sets of the
    /// minimum member lifetime.
    double system_lifetime(std::span<const double> component_lifetimes) const {
        double best = 0.0;
        for (std::uint32_t path : sets_.paths) {
            double path_life = std::numeric_limits<double>::infinity();
            for (std::uint32_t m = path; m != 0; m &= m - 1) {
                const int idx = std::countr_zero(m);
                path_life = std::min(path_life, component_lifetimes[idx]);
            }
            best = std::max(best, path_life);
        }
        return best;
    }

    /// Survival function of the system lifetime: h_phi applied to the
    /// component survival probabilities at time t.
    double system_survival(double t) const;

    /// Time beyond which every component survival is below `tail_mass`.
    double horizon(double tail_mass = 1e-9) const {
        double t_max = 0.0;
        for (const auto& d : dists_) t_max = std::max(t_max, d.quantile(1.0 - tail_mass));
        return t_max;
    }

private:
    StructureFunction sf_;
    std::vector<LifetimeDistribution> dists_;
    SignedDomination domination_;
    PathCutSets sets_;
};

}  // namespace relimp

#include "relimp/reliability.hpp"

namespace relimp {

inline double LifetimeModel::system_survival(double t) const {
    std::vector<double> p(static_cast<std::size_t>(n()));
    for (int i = 1; i <= n(); ++i) p[i - 1] = dists_[i - 1].survival(t);
    return reliability(sf_, p);
}

}  // namespace relimp
