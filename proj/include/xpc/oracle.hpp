#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "xpc/errors.hpp"
#include "xpc/exp_huffman.hpp"
#include "xpc/golomb.hpp"
#include "xpc/model.hpp"
#include "xpc/numeric.hpp"

namespace xpc::oracle {

// All complete-code length multisets (Kraft sum exactly 1) for n leaves,
// each nondecreasing. Exact integer bookkeeping: capacity is counted in
// units of 2^{-(n-1)}.
inline std::vector<std::vector<int>> complete_length_multisets(int n) {
    if (n < 1 || n > 24) throw InvalidParameter("complete_length_multisets: 1 <= n <= 24");
    if (n == 1) return {{0}};
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    const std::int64_t total = std::int64_t{1} << (n - 1);
    auto rec = [&](auto&& self, int remaining_items, std::int64_t remaining_cap,
                   int min_len) -> void {
        if (remaining_items == 0) {
            if (remaining_cap == 0) out.push_back(cur);
            return;
        }
        for (int l = min_len; l <= n - 1; ++l) {
            std::int64_t unit = std::int64_t{1} << (n - 1 - l);
            // Larger l only shrinks what the remaining items can consume.
            if (unit * remaining_items < remaining_cap) break;
            // This l consumes too much; a larger one may fit.
            if (remaining_cap < unit + (remaining_items - 1)) continue;
            cur.push_back(l);
            self(self, remaining_items - 1, remaining_cap - unit, l);
            cur.pop_back();
        }
    };
    rec(rec, n, total, 1);
    return out;
}

struct OracleResult {
    std::vector<int> lengths;  // per input index
    double penalty;            // sum_i w(i) a^{n(i)} (sum_i w(i) n(i) at a = 1)
};

namespace detail {

inline double multiset_objective(const std::vector<double>& sorted_desc_w,
                                 const std::vector<int>& lens_asc, double a) {
    KahanSum s;
    for (std::size_t i = 0; i < sorted_desc_w.size(); ++i) {
        double t = (a == 1.0)
                       ? sorted_desc_w[i] * lens_asc[i]
                       : sorted_desc_w[i] * std::pow(a, static_cast<double>(lens_asc[i]));
        s.add(t);
    }
    return s.value();
}

}  // namespace detail

// Exhaustive optimum over all prefix codes: enumerate complete length
// multisets, assign lengths by the rearrangement pairing (largest weight,
// shortest length), and take the extreme of sum_i w(i) a^{n(i)} — minimum
// for a >= 1, maximum for a < 1 (the Campbell reduction direction).
inline OracleResult brute_force_optimal(const FiniteWeights& weights, double a) {
    const int n = static_cast<int>(weights.w.size());
    if (n > 8) throw InvalidParameter("brute_force_optimal: |weights| must be <= 8");
    classify(a);

    std::vector<int> order(weights.w.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return weights.w[i] > weights.w[j]; });
    std::vector<double> w_desc;
    w_desc.reserve(order.size());
    for (int i : order) w_desc.push_back(weights.w[i]);

    const bool minimize = a >= 1.0;
    double best = minimize ? kInf : -kInf;
    std::vector<int> best_lens;
    for (const auto& lens : complete_length_multisets(n)) {
        double v = detail::multiset_objective(w_desc, lens, a);
        if (minimize ? v < best : v > best) {
            best = v;
            best_lens = lens;
        }
    }
    OracleResult res;
    res.penalty = best;
    res.lengths.resize(weights.w.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        res.lengths[static_cast<std::size_t>(order[pos])] = best_lens[pos];
    return res;
}

// The m-reduced geometric source W_m: a finite family whose optima
// bracket the infinite geometric optimum.
// w(i) = (1-theta) theta^i for i <= m, and (1-theta) a theta^i / (1 - a theta^k)
// for m < i <= m+k. m = -1 yields only the k tail weights.
inline FiniteWeights m_reduced_source(double theta, double a, int k, int m) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidParameter("theta must be in (0,1)");
    if (!(a > 0.0)) throw InvalidParameter("a must be > 0");
    if (k < 1) throw InvalidParameter("k must be >= 1");
    if (m < -1) throw InvalidParameter("m must be >= -1");
    double atk = a * std::pow(theta, k);
    if (atk >= 1.0) throw DivergentPenalty("m_reduced_source needs a theta^k < 1");
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(m + k + 1));
    for (int i = 0; i <= m; ++i) w.push_back((1.0 - theta) * std::pow(theta, i));
    for (int i = m + 1; i <= m + k; ++i)
        w.push_back((1.0 - theta) * a * std::pow(theta, i) / (1.0 - atk));
    return FiniteWeights(std::move(w));
}

// One grid point of the Golomb sandwich: the optimal code for W_m must
// match the Golomb code on items 0..m, and its penalty must approach the
// Golomb closed form from below as m grows.
struct SandwichEntry {
    int m;
    bool lengths_match;
    double gap;  // closed-form Golomb penalty minus optimal W_m penalty
};

struct SandwichReport {
    double theta;
    double a;
    int k = 0;
    bool skipped_degenerate = false;
    bool pass = false;
    std::vector<SandwichEntry> entries;
    std::string note;
};

inline SandwichReport golomb_sandwich_check(double theta, double a, int m_max = 200) {
    SandwichReport rep;
    rep.theta = theta;
    rep.a = a;
    if (classify(a) == Regime::Degenerate) {
        rep.skipped_degenerate = true;
        rep.pass = true;
        rep.note = "degenerate a <= 0.5: unary optimal, no finite-k bracket";
        return rep;
    }
    rep.k = optimal_k(theta, a);
    GolombCode gc(rep.k);
    double closed = golomb_penalty_closed_form(theta, a, rep.k);

    rep.pass = true;
    for (int m = 0; m <= m_max; m += 5) {
        FiniteWeights wm = m_reduced_source(theta, a, rep.k, m);
        FiniteCode code = exp_huffman(wm, a);
        bool match = true;
        for (int i = 0; i <= m && match; ++i)
            match = code.lengths[static_cast<std::size_t>(i)] ==
                    static_cast<int>(length(gc, static_cast<std::uint64_t>(i)));
        double gap = closed - code_penalty(wm, code.lengths, a);
        rep.entries.push_back({m, match, gap});
        if (!match || gap < -1e-12) rep.pass = false;
    }
    if (!rep.entries.empty() && rep.entries.back().gap >= 1e-6) {
        rep.pass = false;
        rep.note = "bracket gap did not close by m_max";
    }
    return rep;
}

}  // namespace xpc::oracle
