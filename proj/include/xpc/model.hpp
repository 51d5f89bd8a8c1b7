#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "xpc/errors.hpp"
#include "xpc/numeric.hpp"

namespace xpc {

// ============================================================
//  Penalty parameter a and its regime
// ============================================================

enum class Regime { Degenerate, Linear, Exponential };

inline Regime classify(double a) {
    if (!(a > 0.0)) throw InvalidParameter("penalty exponent a must be > 0");
    if (a <= 0.5) return Regime::Degenerate;
    if (a == 1.0) return Regime::Linear;
    return Regime::Exponential;
}

// Renyi order paired with exponent a: alpha(a) = 1 / (1 + log2 a).
inline double renyi_order(double a) {
    Regime r = classify(a);
    if (r == Regime::Degenerate)
        throw DegenerateRegime("a <= 0.5 has no corresponding Renyi order");
    if (r == Regime::Linear) return 1.0;
    return 1.0 / (1.0 + std::log2(a));
}

struct PenaltyParam {
    double a;
    Regime regime;

    explicit PenaltyParam(double a_) : a(a_), regime(classify(a_)) {}
};

// ============================================================
//  Source models
// ============================================================

struct GeometricSource {
    double theta;

    explicit GeometricSource(double theta_) : theta(theta_) {
        if (!(theta > 0.0 && theta < 1.0))
            throw InvalidParameter("geometric theta must lie in (0,1)");
    }
};

struct PoissonSource {
    double lambda;

    explicit PoissonSource(double lambda_) : lambda(lambda_) {
        if (!(lambda > 0.0)) throw InvalidParameter("poisson lambda must be > 0");
    }
};

// Positive weights in caller order; they need not sum to 1 and are never
// reordered here (consumers own any sorting, see exp_huffman).
struct FiniteWeights {
    std::vector<double> w;

    explicit FiniteWeights(std::vector<double> w_) : w(std::move(w_)) {
        if (w.empty()) throw InvalidParameter("weight list must be nonempty");
        for (double x : w)
            if (!(x > 0.0)) throw InvalidParameter("weights must be strictly positive");
    }
};

// User-supplied pmf with a certified tail accessor:
//   tail_exp_sum(j, a) must enclose sum_{k>j} p(k) a^{k-j}.
// ratio_upper(j), when given, must bound sup_{k>=j} p(k+1)/p(k); it is the
// finite certificate that dispatches infinitely many condition checks.
struct CustomSource {
    std::function<double(std::uint64_t)> pmf;
    std::function<Interval(std::uint64_t, double)> tail_exp_sum;
    std::function<double(std::uint64_t)> ratio_upper;  // may be empty
};

using SourceModel = std::variant<GeometricSource, PoissonSource, FiniteWeights, CustomSource>;

// ============================================================
//  pmf evaluation (log-space internally for the parametric families)
// ============================================================

namespace detail {

inline double poisson_log_pmf(double lambda, std::uint64_t i) {
    // log p(i) = i ln(lambda) - lambda - lgamma(i+1)
    return static_cast<double>(i) * std::log(lambda) - lambda -
           std::lgamma(static_cast<double>(i) + 1.0);
}

}  // namespace detail

inline bool is_finite_source(const SourceModel& s) {
    return std::holds_alternative<FiniteWeights>(s);
}

inline std::optional<std::size_t> alphabet_size(const SourceModel& s) {
    if (auto* f = std::get_if<FiniteWeights>(&s)) return f->w.size();
    return std::nullopt;
}

inline double pmf(const SourceModel& s, std::uint64_t i) {
    struct V {
        std::uint64_t i;
        double operator()(const GeometricSource& g) const {
            return (1.0 - g.theta) * std::pow(g.theta, static_cast<double>(i));
        }
        double operator()(const PoissonSource& p) const {
            return std::exp(detail::poisson_log_pmf(p.lambda, i));
        }
        double operator()(const FiniteWeights& f) const {
            if (i >= f.w.size())
                throw OutOfAlphabet("pmf index " + std::to_string(i) +
                                    " out of range for finite source");
            return f.w[i];
        }
        double operator()(const CustomSource& c) const { return c.pmf(i); }
    };
    return std::visit(V{i}, s);
}

inline double log2_pmf(const SourceModel& s, std::uint64_t i) {
    struct V {
        std::uint64_t i;
        double operator()(const GeometricSource& g) const {
            return std::log2(1.0 - g.theta) + static_cast<double>(i) * std::log2(g.theta);
        }
        double operator()(const PoissonSource& p) const {
            return detail::poisson_log_pmf(p.lambda, i) / std::numbers::ln2;
        }
        double operator()(const FiniteWeights& f) const {
            if (i >= f.w.size()) throw OutOfAlphabet("log2_pmf index out of range");
            return std::log2(f.w[i]);
        }
        double operator()(const CustomSource& c) const { return std::log2(c.pmf(i)); }
    };
    return std::visit(V{i}, s);
}

// Upper bound on sup_{k>=j} p(k+1)/p(k), when the family admits one.
inline std::optional<double> pmf_ratio_upper(const SourceModel& s, std::uint64_t j) {
    if (auto* g = std::get_if<GeometricSource>(&s)) return g->theta;
    if (auto* p = std::get_if<PoissonSource>(&s))
        return p->lambda / (static_cast<double>(j) + 1.0);
    if (auto* c = std::get_if<CustomSource>(&s)) {
        if (c->ratio_upper) return c->ratio_upper(j);
        return std::nullopt;
    }
    return std::nullopt;  // finite sources have no infinite tail
}

// ============================================================
//  Certified tail sums: sum_{k>j} p(k) a^{k-j}
// ============================================================

inline Interval tail_exp_sum(const SourceModel& s, std::uint64_t j, double a) {
    if (!(a > 0.0)) throw InvalidParameter("tail_exp_sum needs a > 0");
    struct V {
        std::uint64_t j;
        double a;
        Interval operator()(const GeometricSource& g) const {
            double at = a * g.theta;
            if (at >= 1.0) return Interval::divergent();
            double v = (1.0 - g.theta) * std::pow(g.theta, static_cast<double>(j) + 1.0) *
                       a / (1.0 - at);
            return Interval::around(v);
        }
        Interval operator()(const PoissonSource& p) const {
            // Direct summation; remainder bounded by the geometric majorant
            // with ratio q = a*lambda/(k+2) once q < 1/2.
            KahanSum s;
            std::uint64_t k = j + 1;
            double log_a = std::log(a);
            for (;;) {
                double term = std::exp(detail::poisson_log_pmf(p.lambda, k) +
                                       static_cast<double>(k - j) * log_a);
                s.add(term);
                double q = a * p.lambda / (static_cast<double>(k) + 2.0);
                if (q < 0.5) {
                    double next = std::exp(detail::poisson_log_pmf(p.lambda, k + 1) +
                                           static_cast<double>(k + 1 - j) * log_a);
                    double rem = next / (1.0 - q);
                    if (rem <= 1e-16 * s.value() + 1e-300)
                        return {s.value(), s.value() * (1.0 + 1e-13) + rem};
                }
                ++k;
            }
        }
        Interval operator()(const FiniteWeights& f) const {
            KahanSum s;
            for (std::size_t k = static_cast<std::size_t>(j) + 1; k < f.w.size(); ++k)
                s.add(f.w[k] * std::pow(a, static_cast<double>(k - j)));
            return Interval::around(s.value());
        }
        Interval operator()(const CustomSource& c) const { return c.tail_exp_sum(j, a); }
    };
    return std::visit(V{j, a}, s);
}

// sum_{k>j} p(k) (plain tail mass).
inline Interval tail_mass(const SourceModel& s, std::uint64_t j) {
    return tail_exp_sum(s, j, 1.0);
}

// Upper bound on the shifted first moment sum_{k>j} (k-j) p(k).
inline double tail_first_moment_upper(const SourceModel& s, std::uint64_t j) {
    if (auto* g = std::get_if<GeometricSource>(&s)) {
        // sum_{t>=1} t (1-theta) theta^{j+t} = theta^{j+1} / (1-theta)
        return std::pow(g->theta, static_cast<double>(j) + 1.0) / (1.0 - g->theta);
    }
    if (auto* p = std::get_if<PoissonSource>(&s)) {
        double q = p->lambda / (static_cast<double>(j) + 2.0);
        if (q >= 1.0) {
            // Shift the start until the ratio certificate applies.
            double m = 0.0;
            std::uint64_t k = j;
            while (p->lambda / (static_cast<double>(k) + 2.0) >= 0.5) {
                ++k;
                m += static_cast<double>(k - j) * pmf(s, k);
            }
            double qq = p->lambda / (static_cast<double>(k) + 2.0);
            double pk1 = pmf(s, k + 1);
            // sum_{t>=1} (k - j + t) p(k+t) <= p(k+1) [ (k-j)/(1-q) + 1/(1-q)^2 ]
            return m + pk1 * (static_cast<double>(k - j) / (1.0 - qq) +
                              1.0 / ((1.0 - qq) * (1.0 - qq)));
        }
        double pk1 = pmf(s, j + 1);
        return pk1 / ((1.0 - q) * (1.0 - q));
    }
    if (auto* f = std::get_if<FiniteWeights>(&s)) {
        double m = 0.0;
        for (std::size_t k = static_cast<std::size_t>(j) + 1; k < f->w.size(); ++k)
            m += static_cast<double>(k - j) * f->w[k];
        return m;
    }
    if (auto* c = std::get_if<CustomSource>(&s)) {
        if (c->ratio_upper) {
            double rho = c->ratio_upper(j + 1);
            if (rho < 1.0)
                return c->pmf(j + 1) / ((1.0 - rho) * (1.0 - rho));
        }
        throw InvalidParameter("custom source needs a ratio certificate for moment tails");
    }
    throw InvalidParameter("no first-moment tail bound for this source");
}

}  // namespace xpc
