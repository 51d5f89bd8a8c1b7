#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "xpc/code_lengths.hpp"
#include "xpc/errors.hpp"
#include "xpc/exp_huffman.hpp"
#include "xpc/golomb.hpp"
#include "xpc/light_tail.hpp"
#include "xpc/model.hpp"
#include "xpc/numeric.hpp"

namespace xpc {

// sup_i [n(i) + log2 p(i)] together with its certification status. When a
// monotone tail certificate exists the sup is exact (witness attains it);
// otherwise [lo, hi] is the certified bracket and exact is false.
struct RedundancyProfile {
    double sup = -kInf;
    std::optional<std::uint64_t> witness;
    bool exact = true;
    double lo = -kInf;
    double hi = kInf;
};

namespace detail {

// Treat |1 + period*slope| below this as zero drift (exact power-of-two
// boundaries land here after rounding).
constexpr double kDriftSlack = 1e-12;

}  // namespace detail

inline RedundancyProfile max_pointwise_redundancy(const SourceModel& src,
                                                  const CodeLengths& lengths) {
    RedundancyProfile prof;
    auto consider = [&](std::uint64_t i) {
        double v = static_cast<double>(lengths.at(i)) + log2_pmf(src, i);
        if (v > prof.sup) {
            prof.sup = v;
            prof.witness = i;
        }
    };

    if (auto n = alphabet_size(src)) {
        for (std::uint64_t i = 0; i < *n; ++i) consider(i);
        prof.lo = prof.hi = prof.sup;
        return prof;
    }
    if (lengths.is_finite())
        throw InvalidParameter("finite length list cannot cover an infinite source");

    const std::uint64_t m = lengths.head.size() - 1;
    const int period = *lengths.tail_period;
    for (std::uint64_t i = 0; i <= m; ++i) consider(i);

    // Divergence check: the geometric ratio is exact, so a positive drift
    // per period means the pointwise sequence grows without bound.
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        if (1.0 + period * std::log2(g->theta) > detail::kDriftSlack) {
            prof.sup = kInf;
            prof.witness.reset();
            prof.lo = prof.hi = kInf;
            return prof;
        }
    }

    for (std::uint64_t i = m + 1;; ++i) {
        if (i - m > 10'000'000) {
            // No certificate fired; report the scanned bracket only.
            prof.exact = false;
            prof.lo = prof.sup;
            prof.hi = kInf;
            return prof;
        }
        double v = static_cast<double>(lengths.at(i)) + log2_pmf(src, i);
        if (v > prof.sup) {
            prof.sup = v;
            prof.witness = i;
        }
        bool period_start = (i - (m + 1)) % static_cast<std::uint64_t>(period) == 0;
        if (!period_start) continue;
        auto ru = pmf_ratio_upper(src, i);
        if (!ru) {
            prof.exact = false;
            prof.lo = prof.sup;
            prof.hi = kInf;
            return prof;
        }
        double drift = 1.0 + period * std::log2(*ru);
        // Nonpositive drift: every later period start is <= this one, and
        // values fall within each period, so nothing beyond can exceed sup.
        if (drift <= detail::kDriftSlack && v <= prof.sup) {
            prof.lo = prof.hi = prof.sup;
            return prof;
        }
    }
}

// d-th exponential redundancy R_d = (1/d) log2 sum_i p(i)^{1+d} 2^{d n(i)},
// the d -> infinity approximant of the max pointwise redundancy.
inline double d_redundancy(const SourceModel& src, const CodeLengths& lengths, double d,
                           double tol = 1e-10) {
    if (!(d > 0.0)) throw InvalidParameter("d must be > 0");
    if (!(tol > 0.0)) throw InvalidParameter("tol must be > 0");

    auto term_log2 = [&](std::uint64_t i) {
        return (1.0 + d) * log2_pmf(src, i) + d * static_cast<double>(lengths.at(i));
    };

    Log2SumExp acc;
    if (auto n = alphabet_size(src)) {
        for (std::uint64_t i = 0; i < *n; ++i) acc.add(term_log2(i));
        return acc.log2_value() / d;
    }
    if (lengths.is_finite())
        throw InvalidParameter("finite length list cannot cover an infinite source");

    const std::uint64_t m = lengths.head.size() - 1;
    const int period = *lengths.tail_period;
    for (std::uint64_t i = 0; i <= m; ++i) acc.add(term_log2(i));

    if (auto* g = std::get_if<GeometricSource>(&src)) {
        if (d + (1.0 + d) * period * std::log2(g->theta) >= 0.0)
            throw DivergentPenalty("d_redundancy series diverges");
    }

    const double stop_gap = std::log2(tol * d * std::numbers::ln2);
    for (std::uint64_t i = m + 1;; ++i) {
        if (i - m > detail::kMaxTruncationSteps)
            throw DivergentPenalty("d_redundancy: truncation did not converge");
        double e = term_log2(i);
        acc.add(e);
        if ((i - (m + 1)) % static_cast<std::uint64_t>(period) != 0) continue;
        auto ru = pmf_ratio_upper(src, i);
        if (!ru) throw DivergentPenalty("no tail certificate for this source");
        double plog = d + (1.0 + d) * period * std::log2(*ru);
        if (plog >= -1e-9) continue;  // certificate not usable yet
        // Periods starting here sum to at most period * 2^e / (1 - 2^plog).
        double rem_log2 = std::log2(static_cast<double>(period)) + e -
                          std::log2(1.0 - std::exp2(plog));
        if (rem_log2 - acc.log2_value() < stop_gap) return acc.log2_value() / d;
    }
}

// Golomb parameter minimizing maximum pointwise redundancy for
// Geometric(theta): k = ceil(-1/log2 theta), repaired by comparing R* of the
// adjacent parameters directly (smallest k on ties).
inline int minimax_golomb_k(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidParameter("theta must be in (0,1)");
    double raw = std::ceil(-1.0 / std::log2(theta));
    std::int64_t k0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(raw));
    SourceModel src = GeometricSource(theta);
    int best_k = 0;
    double best = kInf;
    for (std::int64_t k = std::max<std::int64_t>(1, k0 - 1); k <= k0 + 1; ++k) {
        auto prof = max_pointwise_redundancy(src, golomb_lengths(GolombCode(static_cast<int>(k))));
        if (prof.sup < best) {
            best = prof.sup;
            best_k = static_cast<int>(k);
        }
    }
    return best_k;
}

// Smallest r <= search_cap with p(i) >= p(r) for all i < r and
// p(j) >= 2 p(j+1) for all j >= r. The infinite j-range is dispatched by a
// ratio certificate; the built-in families compare ratios exactly.
inline int minimax_light_tail_r(const SourceModel& src, int search_cap = 256) {
    if (auto* g = std::get_if<GeometricSource>(&src)) {
        if (g->theta <= 0.5) return 0;
        throw NotVerifiablyLightTailed("geometric ratio exceeds 1/2 at every j");
    }
    if (auto* p = std::get_if<PoissonSource>(&src)) {
        // p(j) >= 2 p(j+1)  <=>  2 lambda <= j+1, exactly.
        int r0 = 0;
        while (2.0 * p->lambda > static_cast<double>(r0) + 1.0) ++r0;
        for (int r = r0; r <= search_cap; ++r) {
            // p(i) >= p(r)  <=>  (r-i) ln lambda <= lgamma(r+1) - lgamma(i+1)
            bool ok = true;
            double lgr = std::lgamma(static_cast<double>(r) + 1.0);
            for (int i = 0; i < r && ok; ++i)
                ok = static_cast<double>(r - i) * std::log(p->lambda) <=
                     lgr - std::lgamma(static_cast<double>(i) + 1.0);
            if (ok) return r;
        }
        throw NotVerifiablyLightTailed("no r up to search cap");
    }
    if (auto* f = std::get_if<FiniteWeights>(&src)) {
        const auto& w = f->w;
        int n = static_cast<int>(w.size());
        for (int r = 0; r <= std::min(search_cap, n - 1); ++r) {
            bool ok = true;
            for (int i = 0; i < r && ok; ++i) ok = w[i] >= w[r];
            for (int j = r; j + 1 < n && ok; ++j) ok = w[j] >= 2.0 * w[j + 1];
            if (ok) return r;
        }
        throw NotVerifiablyLightTailed("no r up to search cap");
    }
    auto* c = std::get_if<CustomSource>(&src);
    if (!c || !c->ratio_upper)
        throw NotVerifiablyLightTailed("no ratio certificate for this source");
    std::uint64_t J = 0;
    while (c->ratio_upper(J) > 0.5) {
        if (++J > 1u << 20)
            throw NotVerifiablyLightTailed("ratio never certifiably <= 1/2");
    }
    for (int r = 0; r <= search_cap; ++r) {
        bool ok = true;
        for (int i = 0; i < r && ok; ++i) ok = c->pmf(i) >= c->pmf(r);
        for (std::uint64_t j = static_cast<std::uint64_t>(r); j < J && ok; ++j)
            ok = c->pmf(j) >= 2.0 * c->pmf(j + 1);
        if (ok) return r;
    }
    throw NotVerifiablyLightTailed("no r up to search cap");
}

namespace detail {

// Stable limit of exponential Huffman runs over d = 1, 2, 4, ..., 64 with
// per-d log2 weights supplied by the builder; stops once the length multiset
// survives two successive doublings.
template <typename WeightBuilder>
FiniteCode stabilized_d_limit(WeightBuilder&& log2_weights_for) {
    std::vector<int> prev1, prev2;
    for (double d = 1.0; d <= 64.0; d *= 2.0) {
        std::vector<double> lw = log2_weights_for(d);
        double mx = *std::max_element(lw.begin(), lw.end());
        std::vector<double> w;
        w.reserve(lw.size());
        for (double v : lw) w.push_back(std::exp2(v - mx));
        FiniteCode code = exp_huffman(FiniteWeights(std::move(w)), std::exp2(d));
        std::vector<int> sorted = code.lengths;
        std::sort(sorted.begin(), sorted.end());
        if (!prev1.empty() && !prev2.empty() && sorted == prev1 && sorted == prev2)
            return code;
        prev2 = std::move(prev1);
        prev1 = std::move(sorted);
    }
    throw NonStabilized("length multiset still changing at d = 64");
}

}  // namespace detail

// Stabilized-d code for a finite weight set: the d -> infinity limit of
// exponential Huffman on weights w(i)^{1+d} with exponent 2^d.
inline FiniteCode minimax_stable_code(const FiniteWeights& weights) {
    return detail::stabilized_d_limit([&](double d) {
        std::vector<double> lw;
        lw.reserve(weights.w.size());
        for (double w : weights.w) lw.push_back((1.0 + d) * std::log2(w));
        return lw;
    });
}

// Reduced code for the max pointwise redundancy penalty on an infinite
// light-tailed source: the reduced alphabet 0..r+1 with the 2^d analogue of
// the tail weight, run through the stabilized-d limit and assembled as a
// unary-ended code.
inline UnaryEndedCode minimax_reduced_code(const SourceModel& src, int r) {
    if (r < 0) throw InvalidParameter("r must be >= 0");
    if (is_finite_source(src))
        throw InvalidParameter(
            "minimax_reduced_code expects an infinite source; use "
            "minimax_stable_code for finite weight sets");

    auto build = [&](double d) {
        std::vector<double> lw;  // log2 weights
        lw.reserve(static_cast<std::size_t>(r) + 2);
        for (int i = 0; i <= r; ++i)
            lw.push_back((1.0 + d) * log2_pmf(src, static_cast<std::uint64_t>(i)));
        Log2SumExp tail;
        for (std::uint64_t k = static_cast<std::uint64_t>(r) + 1;; ++k) {
            double e = (1.0 + d) * log2_pmf(src, k) +
                       d * static_cast<double>(k - static_cast<std::uint64_t>(r));
            tail.add(e);
            auto ru = pmf_ratio_upper(src, k + 1);
            if (!ru) throw NotVerifiablyLightTailed("no tail certificate for this source");
            double rlog = (1.0 + d) * std::log2(*ru) + d;
            if (rlog < -1e-9) {
                double e_next = (1.0 + d) * log2_pmf(src, k + 1) +
                                d * static_cast<double>(k + 1 - static_cast<std::uint64_t>(r));
                double rem_log2 = e_next - std::log2(1.0 - std::exp2(rlog));
                if (rem_log2 - tail.log2_value() < std::log2(1e-15)) break;
            }
            if (k - static_cast<std::uint64_t>(r) > detail::kMaxTruncationSteps)
                throw DivergentPenalty("minimax tail weight did not converge");
        }
        lw.push_back(tail.log2_value());
        return lw;
    };
    return detail::assemble_unary_ended(detail::stabilized_d_limit(build), r);
}

}  // namespace xpc
