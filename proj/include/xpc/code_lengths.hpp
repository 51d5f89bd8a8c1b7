#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xpc/errors.hpp"
#include "xpc/numeric.hpp"

namespace xpc {

// A finitely described length sequence: explicit head n(0..M), optionally
// followed by the arithmetic tail n(i) = n(M) + ceil((i-M)/period) for i > M.
// period = 1 covers unary and unary-ended codes; period = k covers Golomb
// codes once the head reaches a group boundary.
struct CodeLengths {
    std::vector<int> head;
    std::optional<int> tail_period;

    static CodeLengths finite(std::vector<int> lengths) {
        return {std::move(lengths), std::nullopt};
    }
    static CodeLengths eventually_arithmetic(std::vector<int> head, int period) {
        if (head.empty()) throw InvalidParameter("CodeLengths: head must be nonempty");
        if (period < 1) throw InvalidParameter("CodeLengths: period must be >= 1");
        return {std::move(head), period};
    }

    bool is_finite() const { return !tail_period.has_value(); }

    std::int64_t at(std::uint64_t i) const {
        if (i < head.size()) return head[static_cast<std::size_t>(i)];
        if (!tail_period)
            throw OutOfAlphabet("length index beyond finite code");
        std::uint64_t m = head.size() - 1;
        return head.back() +
               ceil_div(static_cast<std::int64_t>(i - m), *tail_period);
    }

    // Generalized Kraft sum; closed form for the arithmetic tail:
    // sum_{i>M} 2^{-n(i)} = period * 2^{-n(M)}.
    double kraft_sum() const {
        KahanSum s;
        for (int n : head) s.add(std::exp2(-static_cast<double>(n)));
        if (tail_period)
            s.add(static_cast<double>(*tail_period) *
                  std::exp2(-static_cast<double>(head.back())));
        return s.value();
    }
};

}  // namespace xpc
