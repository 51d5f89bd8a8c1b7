#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace xpc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {
inline constexpr std::uint64_t kMaxTruncationSteps = 100'000'000;
}

// Certified enclosure of a nonnegative series value. A divergent sum is
// represented as [inf, inf].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double v) { return {v, v}; }
    static Interval divergent() { return {kInf, kInf}; }

    bool is_divergent() const { return !(hi < kInf); }
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }

    // Widen a point value by a relative epsilon to absorb FP rounding.
    static Interval around(double v, double rel = 1e-14) {
        double d = std::abs(v) * rel;
        return {v - d, v + d};
    }
};

// Neumaier compensated accumulator.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Accumulates sum of 2^{e_i} for exponents e_i given in log2 scale,
// keeping the running sum shifted by the max exponent seen so far.
class Log2SumExp {
public:
    void add(double log2_term) {
        if (std::isinf(log2_term) && log2_term < 0) return;
        if (empty_) {
            shift_ = log2_term;
            acc_.add(1.0);
            empty_ = false;
            return;
        }
        if (log2_term <= shift_) {
            acc_.add(std::exp2(log2_term - shift_));
        } else {
            double s = acc_.value() * std::exp2(shift_ - log2_term);
            acc_ = KahanSum();
            acc_.add(s);
            acc_.add(1.0);
            shift_ = log2_term;
        }
    }
    bool empty() const { return empty_; }
    // log2 of the accumulated sum.
    double log2_value() const { return shift_ + std::log2(acc_.value()); }
    // Linear-scale sum relative to 2^{ref} (may overflow if ref is far off).
    double value_scaled(double ref) const {
        return acc_.value() * std::exp2(shift_ - ref);
    }

private:
    bool empty_ = true;
    double shift_ = 0.0;
    KahanSum acc_;
};

inline double log_base(double base, double x) {
    return std::log(x) / std::log(base);
}

// ceil(num / den) for den > 0 and any sign of num.
inline std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
    std::int64_t q = num / den;
    if (num % den != 0 && (num > 0) == (den > 0)) ++q;
    return q;
}

}  // namespace xpc
