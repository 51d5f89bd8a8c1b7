#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <variant>

#include "xpc/code_lengths.hpp"
#include "xpc/errors.hpp"
#include "xpc/model.hpp"
#include "xpc/numeric.hpp"

namespace xpc {

namespace detail {

// log2 upper bound on sum_{j>i} p(j) a^{n(j)} given that the tail rule makes
// n(j) <= n(i) + ceil((j-i)/k). Kept in log scale so that long slow tails
// cannot overflow. Returns +inf when the certificate shows divergence.
inline double penalty_tail_upper_log2(const SourceModel& src, const CodeLengths& lengths,
                                      double a, std::uint64_t i) {
    double an_log2 = static_cast<double>(lengths.at(i)) * std::log2(a);
    if (a < 1.0) {
        Interval t = tail_mass(src, i);
        return an_log2 + std::log2(t.hi);
    }
    int k = *lengths.tail_period;
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        double atk = a * std::pow(g->theta, k);
        if (atk >= 1.0) return kInf;
        double factor = (1.0 - std::pow(g->theta, k)) * a / (1.0 - atk);
        return an_log2 + (static_cast<double>(i) + 1.0) * std::log2(g->theta) +
               std::log2(factor);
    }
    Interval t = tail_exp_sum(src, i, a);  // per-index majorant covers any period
    if (t.is_divergent()) return kInf;
    return an_log2 + std::log2(t.hi);
}

}  // namespace detail

// Expected codeword length sum_i p(i) n(i) with certified truncation.
inline double expected_length(const SourceModel& src, const CodeLengths& lengths,
                              double tol = 1e-10) {
    if (!(tol > 0.0)) throw InvalidParameter("tol must be > 0");
    if (auto n = alphabet_size(src)) {
        KahanSum s;
        for (std::uint64_t i = 0; i < *n; ++i)
            s.add(pmf(src, i) * static_cast<double>(lengths.at(i)));
        return s.value();
    }
    if (lengths.is_finite())
        throw InvalidParameter("finite length list cannot cover an infinite source");

    KahanSum s;
    for (std::uint64_t i = 0;; ++i) {
        if (i > detail::kMaxTruncationSteps)
            throw DivergentPenalty("expected_length: truncation did not converge");
        double n = static_cast<double>(lengths.at(i));
        s.add(pmf(src, i) * n);
        if (i + 1 >= lengths.head.size()) {
            double rem = n * tail_mass(src, i).hi + tail_first_moment_upper(src, i);
            if (rem < tol) return s.value();
        }
    }
}

// L_a(P, N) = log_a sum_i p(i) a^{n(i)}, within absolute tolerance tol.
// Closed-form tail certificates bound the truncation error; a = 1 routes to
// the expected length (the a -> 1 limit, computed exactly in linear form).
inline double penalty(const SourceModel& src, const CodeLengths& lengths, double a,
                      double tol = 1e-10) {
    Regime reg = classify(a);
    if (!(tol > 0.0)) throw InvalidParameter("tol must be > 0");
    if (reg == Regime::Linear) return expected_length(src, lengths, tol);

    // Log-scale-shifted accumulation: terms p(i) a^{n(i)} span many orders
    // of magnitude, and the linear-scale products overflow long before a
    // slow tail's stop condition fires.
    const double log2_a = std::log2(a);
    auto term_log2 = [&](std::uint64_t i) {
        return log2_pmf(src, i) + static_cast<double>(lengths.at(i)) * log2_a;
    };

    if (auto n = alphabet_size(src)) {
        Log2SumExp acc;
        for (std::uint64_t i = 0; i < *n; ++i) acc.add(term_log2(i));
        return acc.log2_value() / log2_a;
    }
    if (lengths.is_finite())
        throw InvalidParameter("finite length list cannot cover an infinite source");

    // Divergence pre-check for the geometric family.
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        if (a > 1.0 && a * std::pow(g->theta, *lengths.tail_period) >= 1.0)
            throw DivergentPenalty("penalty series diverges: a theta^period >= 1");
    }

    // |d log_a S| <= rem / (S |ln a|): stop once rem/S < tol |ln a|.
    const double stop_gap = std::log2(tol * std::abs(std::log(a)));
    Log2SumExp acc;
    for (std::uint64_t i = 0;; ++i) {
        if (i > detail::kMaxTruncationSteps)
            throw DivergentPenalty("penalty: truncation did not converge");
        acc.add(term_log2(i));
        if (i + 1 >= lengths.head.size()) {
            double rem_log2 = detail::penalty_tail_upper_log2(src, lengths, a, i);
            if (std::isinf(rem_log2) && rem_log2 > 0.0)
                throw DivergentPenalty("penalty series diverges (tail certificate)");
            if (rem_log2 - acc.log2_value() < stop_gap) return acc.log2_value() / log2_a;
        }
    }
}

namespace detail {

inline double shannon_entropy(const SourceModel& src, double tol) {
    if (auto n = alphabet_size(src)) {
        KahanSum s;
        for (std::uint64_t i = 0; i < *n; ++i) {
            double p = pmf(src, i);
            s.add(-p * std::log2(p));
        }
        return s.value();
    }
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        double c0 = -std::log2(1.0 - g->theta);
        double c1 = -std::log2(g->theta);
        KahanSum s;
        for (std::uint64_t i = 0;; ++i) {
            double p = pmf(src, i);
            s.add(p * (c0 + c1 * static_cast<double>(i)));
            // Exact tail: sum_{j>i} p(j)(c0 + c1 j)
            double tp = std::pow(g->theta, static_cast<double>(i) + 1.0);
            double moment = static_cast<double>(i) * tp + tp / (1.0 - g->theta);
            double rem = c0 * tp + c1 * moment;
            if (rem < tol) return s.value() + rem;
        }
    }
    if (auto* p = std::get_if<PoissonSource>(&src)) {
        const double lam = p->lambda;
        KahanSum s;
        for (std::uint64_t i = 0;; ++i) {
            if (i > kMaxTruncationSteps)
                throw DivergentEntropy("shannon: truncation did not converge");
            double l2p = log2_pmf(src, i);
            s.add(pmf(src, i) * (-l2p));
            // Term-ratio majorant: for x = j+1 >= e*lambda the per-term ratio
            // is bounded by f(x) = (lambda/x)(1 + log2(x/lambda)/Lmin), which
            // is decreasing in x.
            double x = static_cast<double>(i) + 2.0;
            if (x >= std::numbers::e * lam) {
                double lmin = -log2_pmf(src, i + 1);
                if (lmin > 0.0) {
                    double rho = (lam / x) * (1.0 + std::log2(x / lam) / lmin);
                    if (rho > 0.0 && rho < 0.9) {
                        double rem = pmf(src, i + 1) * lmin / (1.0 - rho);
                        if (rem < tol) return s.value();
                    }
                }
            }
        }
    }
    throw DivergentEntropy("no entropy tail certificate for this source");
}

}  // namespace detail

// H_alpha(P) = (1/(1-alpha)) log2 sum_i p(i)^alpha, within tol; alpha = 1 is
// the Shannon limit. Per-family ratio certificates bound the tail.
inline double renyi_entropy(const SourceModel& src, double alpha, double tol = 1e-10) {
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
    if (!(tol > 0.0)) throw InvalidParameter("tol must be > 0");
    if (alpha == 1.0) return detail::shannon_entropy(src, tol);

    if (auto n = alphabet_size(src)) {
        KahanSum s;
        for (std::uint64_t i = 0; i < *n; ++i)
            s.add(std::pow(pmf(src, i), alpha));
        return std::log2(s.value()) / (1.0 - alpha);
    }

    // |dH| <= rem / (|1-alpha| S ln 2)
    double scale = std::abs(1.0 - alpha) * std::numbers::ln2;
    KahanSum s;
    for (std::uint64_t i = 0;; ++i) {
        if (i > detail::kMaxTruncationSteps)
            throw DivergentEntropy("renyi_entropy: truncation did not converge");
        s.add(std::exp2(alpha * log2_pmf(src, i)));
        std::optional<double> ru = pmf_ratio_upper(src, i + 1);
        if (!ru) throw DivergentEntropy("no tail certificate for this source");
        double rho = std::pow(*ru, alpha);
        if (rho < 1.0) {
            double rem = std::exp2(alpha * log2_pmf(src, i + 1)) / (1.0 - rho);
            if (rem < tol * s.value() * scale)
                return std::log2(s.value()) / (1.0 - alpha);
        }
    }
}

// R-bar_a(N, P) = L_a(P, N) - H_{alpha(a)}(P); defined for a > 0.5.
inline double avg_redundancy(const SourceModel& src, const CodeLengths& lengths,
                             double a, double tol = 1e-10) {
    double alpha = renyi_order(a);  // rejects the degenerate regime
    return penalty(src, lengths, a, tol / 2) -
           renyi_entropy(src, alpha, tol / 2);
}

}  // namespace xpc
