#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

#include "xpc/bits.hpp"
#include "xpc/code_lengths.hpp"
#include "xpc/errors.hpp"
#include "xpc/model.hpp"
#include "xpc/numeric.hpp"

namespace xpc {

enum class PrefixConvention {
    OnesThenZero,  // Golomb's original; alphabetic
    ZerosThenOne,  // Gallager/Van Voorhis polarity
};

// Golomb code G_k: unary prefix on floor(j/k), then a complete binary code
// on j mod k with g = floor(log2 k) + 1 and z = 2^g - k short suffixes.
struct GolombCode {
    int k;
    int g;
    int z;
    PrefixConvention prefix;

    explicit GolombCode(int k_, PrefixConvention p = PrefixConvention::OnesThenZero)
        : k(k_), prefix(p) {
        if (k < 1) throw InvalidParameter("Golomb parameter k must be >= 1");
        g = std::bit_width(static_cast<unsigned>(k));
        z = (1 << g) - k;
    }
};

inline std::int64_t length(const GolombCode& c, std::uint64_t j) {
    return ceil_div(static_cast<std::int64_t>(j) + 1 - c.z, c.k) + c.g;
}

inline BitString codeword(const GolombCode& c, std::uint64_t j) {
    std::uint64_t q = j / static_cast<std::uint64_t>(c.k);
    std::uint64_t rem = j % static_cast<std::uint64_t>(c.k);
    BitString out = BitString::unary(q, c.prefix == PrefixConvention::OnesThenZero);
    if (rem < static_cast<std::uint64_t>(c.z)) {
        out.append(BitString::binary(rem, c.g - 1));  // empty when k = 1
    } else {
        out.append(BitString::binary(rem + static_cast<std::uint64_t>(c.z), c.g));
    }
    return out;
}

// Head through the first group boundary (indices 0..z-1 all have length g),
// then +1 every k symbols.
inline CodeLengths golomb_lengths(const GolombCode& c) {
    std::vector<int> head(static_cast<std::size_t>(c.z), c.g);
    return CodeLengths::eventually_arithmetic(std::move(head), c.k);
}

namespace detail {

// Both sides of the Golomb optimality characterization, evaluated directly:
// theta^k (1+theta) <= 1/a < theta^{k-1} (1+theta).
inline bool golomb_k_valid(double theta, double a, int k) {
    double inv_a = 1.0 / a;
    double lhs = std::pow(theta, k) * (1.0 + theta);
    double rhs = std::pow(theta, k - 1) * (1.0 + theta);
    return lhs <= inv_a && inv_a < rhs;
}

}  // namespace detail

// Optimal Golomb parameter for Geometric(theta) under exponent a. The
// ceiling form k = max(1, ceil(-log_theta a - log_theta(1+theta))) is
// repaired by scanning k-2..k+2 against the characterization directly;
// scanning upward returns the smaller parameter when the left boundary is
// an equality. When no k satisfies the right inequality the unary code
// (k = 1) is optimal.
inline int optimal_k(double theta, double a) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidParameter("theta must be in (0,1)");
    if (!(a > 0.0)) throw InvalidParameter("a must be > 0");
    if (a * (1.0 + theta) <= 1.0) return 1;

    double raw = -(std::log(a) + std::log1p(theta)) / std::log(theta);
    std::int64_t k0 = static_cast<std::int64_t>(std::ceil(raw));
    if (k0 < 1) k0 = 1;
    for (std::int64_t k = std::max<std::int64_t>(1, k0 - 2); k <= k0 + 2; ++k)
        if (detail::golomb_k_valid(theta, a, static_cast<int>(k)))
            return static_cast<int>(k);
    // The window should never miss; fall back to a direct scan.
    for (int k = 1; k <= 1 << 20; ++k)
        if (detail::golomb_k_valid(theta, a, k)) return k;
    throw InvalidParameter("optimal_k: no parameter found");
}

// Closed-form L_a(P_theta, N_k) = g + log_a(1 + (a-1) theta^z / (1 - a theta^k)).
// At a = 1 this is the expected length g + theta^z / (1 - theta^k).
inline double golomb_penalty_closed_form(double theta, double a, int k) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidParameter("theta must be in (0,1)");
    classify(a);
    GolombCode c(k);
    double atk = a * std::pow(theta, k);
    if (atk >= 1.0)
        throw DivergentPenalty("a * theta^k >= 1: penalty series diverges");
    double tz = std::pow(theta, c.z);
    if (a == 1.0) return c.g + tz / (1.0 - std::pow(theta, k));
    return c.g + log_base(a, 1.0 + (a - 1.0) * tz / (1.0 - atk));
}

// Renyi entropy of Geometric(theta) at order alpha(a):
// log_a[(1-theta) / (1-theta^alpha)^{1/alpha}]; Shannon entropy at a = 1.
inline double geometric_renyi_entropy(double theta, double a) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidParameter("theta must be in (0,1)");
    Regime reg = classify(a);
    if (reg == Regime::Degenerate)
        throw DegenerateRegime("no Renyi entropy for a <= 0.5");
    if (reg == Regime::Linear) {
        return -std::log2(1.0 - theta) -
               theta / (1.0 - theta) * std::log2(theta);
    }
    double alpha = renyi_order(a);
    return log_base(a, (1.0 - theta) /
                           std::pow(1.0 - std::pow(theta, alpha), 1.0 / alpha));
}

// Average pointwise redundancy of the optimal code: L_a at optimal_k minus
// the Renyi entropy. Lies in [0,1) for a > 0.5.
inline double geometric_redundancy(double theta, double a) {
    int k = optimal_k(theta, a);
    return golomb_penalty_closed_form(theta, a, k) - geometric_renyi_entropy(theta, a);
}

}  // namespace xpc
