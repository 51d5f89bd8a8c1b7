#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <queue>
#include <vector>

#include "xpc/bits.hpp"
#include "xpc/errors.hpp"
#include "xpc/model.hpp"
#include "xpc/numeric.hpp"

namespace xpc {

// A finite prefix code built by the combine procedure. root_weight is the
// final combined weight, which equals sum_i w(i) a^{n(i)}.
struct FiniteCode {
    std::vector<BitString> codewords;
    std::vector<int> lengths;
    double root_weight = 0.0;
};

struct SortedRunStats {
    std::size_t queue_ops = 0;
};

namespace detail {

struct HuffNode {
    double weight;
    int left = -1;   // bit 0 child
    int right = -1;  // bit 1 child
};

// Assign codewords by walking the finished tree; left edge emits 0.
inline FiniteCode emit_code(const std::vector<HuffNode>& nodes, int root,
                            std::size_t n_leaves, double scale) {
    FiniteCode code;
    code.codewords.resize(n_leaves);
    code.lengths.resize(n_leaves);
    code.root_weight = nodes[root].weight * scale;

    struct Frame {
        int node;
        BitString prefix;
    };
    std::vector<Frame> stack;
    stack.push_back({root, BitString{}});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        const HuffNode& nd = nodes[f.node];
        if (nd.left < 0) {
            code.lengths[static_cast<std::size_t>(f.node)] =
                static_cast<int>(f.prefix.size());
            code.codewords[static_cast<std::size_t>(f.node)] = std::move(f.prefix);
            continue;
        }
        BitString l = f.prefix, r = std::move(f.prefix);
        l.push_back(0);
        r.push_back(1);
        stack.push_back({nd.left, std::move(l)});
        stack.push_back({nd.right, std::move(r)});
    }
    return code;
}

// Normalize by a power of two near the max weight: division is exact, so
// every weight comparison (ties included) is unchanged.
inline double pow2_scale(const std::vector<double>& w) {
    double mx = *std::max_element(w.begin(), w.end());
    int e = 0;
    std::frexp(mx, &e);
    return std::ldexp(1.0, e - 1);
}

inline double combine(double a, double w1, double w2) {
    return a == 1.0 ? w1 + w2 : a * (w1 + w2);
}

}  // namespace detail

// Combine procedure for the exponential penalty: repeatedly merge the two
// smallest weights w(j), w(k) into a*(w(j)+w(k)) (plain sum at a = 1).
// Ties prefer the item created earliest: original items before merged ones,
// lower input index first. The smaller item of each merge takes bit 0.
inline FiniteCode exp_huffman(const FiniteWeights& weights, double a) {
    classify(a);  // validates a > 0
    const std::size_t n = weights.w.size();
    const double scale = detail::pow2_scale(weights.w);

    std::vector<detail::HuffNode> nodes;
    nodes.reserve(2 * n);
    for (double w : weights.w) nodes.push_back({w / scale});

    using Entry = std::pair<double, int>;  // (weight, creation seq)
    auto cmp = [](const Entry& x, const Entry& y) {
        return x.first > y.first || (x.first == y.first && x.second > y.second);
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
    for (std::size_t i = 0; i < n; ++i)
        heap.push({nodes[i].weight, static_cast<int>(i)});

    while (heap.size() > 1) {
        Entry first = heap.top();
        heap.pop();
        Entry second = heap.top();
        heap.pop();
        detail::HuffNode merged{detail::combine(a, first.first, second.first),
                                first.second, second.second};
        int id = static_cast<int>(nodes.size());
        nodes.push_back(merged);
        heap.push({merged.weight, id});
    }
    return detail::emit_code(nodes, heap.top().second, n, scale);
}

// Linear-time variant for weights already sorted nonincreasing: two queues,
// one over the original items (consumed smallest-first) and one over merged
// items, which stay in nondecreasing order of creation.
inline FiniteCode exp_huffman_sorted(const FiniteWeights& weights, double a,
                                     SortedRunStats* stats = nullptr) {
    classify(a);
    const std::size_t n = weights.w.size();
    for (std::size_t i = 1; i < n; ++i)
        if (weights.w[i] > weights.w[i - 1])
            throw InvalidParameter("exp_huffman_sorted: weights not sorted nonincreasing");

    const double scale = detail::pow2_scale(weights.w);
    std::vector<detail::HuffNode> nodes;
    nodes.reserve(2 * n);
    for (double w : weights.w) nodes.push_back({w / scale});

    std::size_t next_orig = n;  // consumed from the back: n-1, n-2, ...
    std::deque<int> merged;
    std::size_t ops = 0;

    auto pop_min = [&]() -> int {
        ++ops;
        bool have_orig = next_orig > 0;
        bool have_merged = !merged.empty();
        if (have_orig &&
            (!have_merged || nodes[next_orig - 1].weight <= nodes[merged.front()].weight))
            return static_cast<int>(--next_orig);
        int id = merged.front();
        merged.pop_front();
        return id;
    };

    int root = (n == 1) ? 0 : -1;
    std::size_t remaining = n;
    while (remaining > 1) {
        int i1 = pop_min();
        int i2 = pop_min();
        detail::HuffNode m{detail::combine(a, nodes[i1].weight, nodes[i2].weight), i1, i2};
        root = static_cast<int>(nodes.size());
        nodes.push_back(m);
        merged.push_back(root);
        ++ops;
        --remaining;
    }
    if (stats) stats->queue_ops = ops;
    return detail::emit_code(nodes, root, n, scale);
}

// Truncated unary lengths: {1, 2, ..., n-1, n-1}; the longest codeword is
// 1^{n-1} with no terminating zero. A single symbol gets the null string.
inline std::vector<int> unary_like_lengths(std::size_t n_symbols) {
    if (n_symbols == 0) throw InvalidParameter("unary_like_lengths: need n >= 1");
    if (n_symbols == 1) return {0};
    std::vector<int> out(n_symbols);
    for (std::size_t i = 0; i + 1 < n_symbols; ++i) out[i] = static_cast<int>(i) + 1;
    out[n_symbols - 1] = static_cast<int>(n_symbols) - 1;
    return out;
}

// Penalty of an explicit weight/length assignment: sum_i w(i) a^{n(i)},
// reported in the log_a form used by L_a (plain expectation at a = 1).
inline double code_penalty(const FiniteWeights& w, const std::vector<int>& lengths,
                           double a) {
    KahanSum s;
    for (std::size_t i = 0; i < w.w.size(); ++i) {
        double t = (a == 1.0) ? w.w[i] * lengths[i]
                              : w.w[i] * std::pow(a, static_cast<double>(lengths[i]));
        s.add(t);
    }
    return a == 1.0 ? s.value() : log_base(a, s.value());
}

}  // namespace xpc
