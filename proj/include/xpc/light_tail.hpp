#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "xpc/bits.hpp"
#include "xpc/code_lengths.hpp"
#include "xpc/errors.hpp"
#include "xpc/exp_huffman.hpp"
#include "xpc/model.hpp"
#include "xpc/numeric.hpp"

namespace xpc {

// Unary-ended code: an exponential-Huffman head for symbols 0..r plus an
// all-ones continuation prefix; symbol i > r is the prefix followed by the
// unary code for i-r-1. Equivalently, every codeword j > r is j-x ones then
// one zero with x = r + 1 - |prefix|.
struct UnaryEndedCode {
    std::vector<BitString> head_codewords;
    BitString continuation_prefix;
    int x = 0;

    int r() const { return static_cast<int>(head_codewords.size()) - 1; }

    BitString codeword(std::uint64_t i) const {
        if (i < head_codewords.size()) return head_codewords[static_cast<std::size_t>(i)];
        BitString out = continuation_prefix;
        out.append(BitString::unary(i - head_codewords.size()));
        return out;
    }

    std::int64_t length(std::uint64_t i) const {
        if (i < head_codewords.size())
            return static_cast<std::int64_t>(head_codewords[static_cast<std::size_t>(i)].size());
        return static_cast<std::int64_t>(i) - x + 1;
    }

    CodeLengths lengths() const {
        std::vector<int> head;
        head.reserve(head_codewords.size() + 1);
        for (const auto& c : head_codewords) head.push_back(static_cast<int>(c.size()));
        head.push_back(static_cast<int>(continuation_prefix.size()) + 1);
        return CodeLengths::eventually_arithmetic(std::move(head), 1);
    }
};

// Sufficient r for Poisson(lambda): r = max(ceil(2 a lambda) - 2, ceil(e lambda) - 1).
inline int poisson_r(double lambda, double a) {
    if (!(lambda > 0.0) || !(a > 0.0))
        throw InvalidParameter("poisson_r: lambda and a must be > 0");
    double r1 = std::ceil(2.0 * a * lambda) - 2.0;
    double r2 = std::ceil(std::numbers::e * lambda) - 1.0;
    return static_cast<int>(std::max(r1, r2));
}

namespace detail {

// Finite certificate that dispatches condition (cond) for all j > J:
// a ratio bound rho with a rho^2 + a rho <= 1 makes every within-tail
// comparison hold, and min_{i<=J} p(i) >= p(J+1) max(1, a rho/(1-a rho))
// covers the head-vs-tail comparisons.
struct TailCertificate {
    std::uint64_t J;
    bool ok;
};

inline TailCertificate light_tail_certificate(const SourceModel& src, double a) {
    double rho_star = (std::sqrt(1.0 + 4.0 / a) - 1.0) / 2.0;
    double rho_req = std::min(rho_star, 1.0 - 1e-12);

    std::uint64_t J = 0;
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        if (g->theta > rho_req) return {0, false};
        J = 0;
    } else if (auto* p = std::get_if<PoissonSource>(&src)) {
        J = static_cast<std::uint64_t>(std::max(0.0, std::ceil(p->lambda / rho_req - 1.0)));
    } else {
        auto ru = pmf_ratio_upper(src, 0);
        if (!ru) return {0, false};
        for (J = 0; J < 1u << 20; ++J)
            if (*pmf_ratio_upper(src, J) <= rho_req) break;
        if (J == 1u << 20) return {0, false};
    }

    for (std::uint64_t cap = J + (1u << 20); J <= cap; ++J) {
        double rho = *pmf_ratio_upper(src, J);
        if (rho > rho_req) continue;
        double min_p = pmf(src, 0);
        for (std::uint64_t i = 1; i <= J; ++i) min_p = std::min(min_p, pmf(src, i));
        double arho = a * rho;
        double bound = pmf(src, J + 1) * std::max(1.0, arho / (1.0 - arho));
        if (min_p >= bound) return {J, true};
    }
    return {0, false};
}

}  // namespace detail

// Smallest r <= search_cap such that p(i) >= max(p(j), sum_{k>j} p(k) a^{k-j})
// for all j > r and i < j. The finitely many j up to the certificate index
// are checked against certified tail-sum intervals; the rest are dispatched
// by the ratio certificate above.
inline int find_r(const SourceModel& src, double a, int search_cap = 256) {
    if (!(a > 0.0)) throw InvalidParameter("find_r: a must be > 0");
    if (is_finite_source(src))
        throw InvalidParameter("find_r expects an infinite source");

    auto cert = detail::light_tail_certificate(src, a);
    if (!cert.ok)
        throw NotVerifiablyLightTailed("no ratio certificate for this source/exponent");

    std::uint64_t J = cert.J;
    std::vector<double> prefix_min;  // prefix_min[j] = min_{i<j} p(i)
    prefix_min.push_back(kInf);
    for (std::uint64_t j = 1; j <= J + 1; ++j)
        prefix_min.push_back(std::min(prefix_min.back(), pmf(src, j - 1)));

    for (int r = 0; r <= search_cap; ++r) {
        bool ok = true;
        for (std::uint64_t j = static_cast<std::uint64_t>(r) + 1; j <= J && ok; ++j) {
            Interval t = tail_exp_sum(src, j, a);
            double m = prefix_min[static_cast<std::size_t>(j)];
            ok = !t.is_divergent() && m >= pmf(src, j) && m >= t.hi;
        }
        if (ok) return r;
    }
    throw NotVerifiablyLightTailed("condition not certifiable up to search cap");
}

// Reduced alphabet weights: w(i) = p(i) for i <= r, and
// w(r+1) = sum_{k>r} p(k) a^{k-r}. The Poisson tail has the closed form
// a^{-r} e^{lambda(a-1)} - sum_{k<=r} p(k) a^{k-r}, evaluated in long double
// since the subtraction cancels several digits.
inline FiniteWeights reduced_weights(const SourceModel& src, double a, int r) {
    if (r < 0) throw InvalidParameter("reduced_weights: r must be >= 0");
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(r) + 2);
    for (int i = 0; i <= r; ++i) w.push_back(pmf(src, static_cast<std::uint64_t>(i)));

    double tail;
    if (auto* p = std::get_if<PoissonSource>(&src)) {
        long double lam = p->lambda, al = a;
        long double acc = 0.0L;
        for (int k = 0; k <= r; ++k) {
            long double logp = static_cast<long double>(k) * std::log(lam) - lam -
                               std::lgamma(static_cast<long double>(k) + 1.0L);
            acc += std::exp(logp + static_cast<long double>(k - r) * std::log(al));
        }
        long double t = std::pow(al, static_cast<long double>(-r)) *
                            std::exp(lam * (al - 1.0L)) -
                        acc;
        tail = static_cast<double>(t);
        if (!(tail > 0.0) || !std::isfinite(tail))
            tail = tail_exp_sum(src, static_cast<std::uint64_t>(r), a).mid();
    } else {
        Interval t = tail_exp_sum(src, static_cast<std::uint64_t>(r), a);
        if (t.is_divergent())
            throw DivergentPenalty("reduced_weights: tail sum diverges");
        tail = t.mid();
    }
    w.push_back(tail);
    return FiniteWeights(std::move(w));
}

namespace detail {

// Relabel sibling bits along one leaf's root-to-leaf path so that its
// codeword becomes all ones. Pure label swaps at internal nodes: lengths and
// the prefix property are untouched.
inline void relabel_all_ones(std::vector<BitString>& codewords, std::size_t target) {
    BitString& t = codewords[target];
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
        if (t.bit(pos) == 1) continue;
        for (auto& c : codewords) {
            if (c.size() <= pos) continue;
            bool shares = true;
            for (std::size_t q = 0; q < pos && shares; ++q)
                shares = c.bit(q) == t.bit(q);
            if (shares) c.flip(pos);
        }
    }
}

inline UnaryEndedCode assemble_unary_ended(FiniteCode reduced, int r) {
    relabel_all_ones(reduced.codewords, static_cast<std::size_t>(r) + 1);
    UnaryEndedCode code;
    code.continuation_prefix = reduced.codewords[static_cast<std::size_t>(r) + 1];
    if (!code.continuation_prefix.all_ones())
        throw Error("relabeling failed to produce an all-ones continuation");
    reduced.codewords.pop_back();
    code.head_codewords = std::move(reduced.codewords);
    code.x = r + 1 - static_cast<int>(code.continuation_prefix.size());
    return code;
}

}  // namespace detail

// Optimal unary-ended code for a light-tailed source. r_override picks the
// reduced-alphabet size explicitly; otherwise the Poisson formula or the
// minimal certified r from find_r is used.
inline UnaryEndedCode build_unary_ended(const SourceModel& src, double a,
                                        std::optional<int> r_override = std::nullopt) {
    classify(a);
    int r;
    if (r_override) {
        r = *r_override;
        if (r < 0) throw InvalidParameter("r must be >= 0");
    } else if (auto* p = std::get_if<PoissonSource>(&src)) {
        r = poisson_r(p->lambda, a);
    } else {
        r = find_r(src, a);
    }
    FiniteWeights w = reduced_weights(src, a, r);
    return detail::assemble_unary_ended(exp_huffman(w, a), r);
}

}  // namespace xpc
