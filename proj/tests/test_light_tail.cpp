#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "xpc/light_tail.hpp"
#include "xpc/penalty.hpp"

using namespace xpc;

namespace {

constexpr double kE = std::numbers::e;

// Direct truncated evaluation of sum_{k>j} p(k) a^{k-j}.
double tail_direct(const SourceModel& src, std::uint64_t j, double a, int terms = 400) {
    KahanSum s;
    for (std::uint64_t k = j + 1; k < j + static_cast<std::uint64_t>(terms); ++k)
        s.add(std::exp2(log2_pmf(src, k) + static_cast<double>(k - j) * std::log2(a)));
    return s.value();
}

// Independent probe of condition (cond) at one j: every i < j must dominate
// both p(j) and the tail sum.
bool cond_holds_at(const SourceModel& src, double a, std::uint64_t j) {
    double m = kInf;
    for (std::uint64_t i = 0; i < j; ++i) m = std::min(m, pmf(src, i));
    return m >= pmf(src, j) && m >= tail_direct(src, j, a);
}

bool prefix_free_with_continuation(const UnaryEndedCode& c) {
    std::vector<BitString> all = c.head_codewords;
    all.push_back(c.continuation_prefix);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j)
            if (i != j && all[i].is_prefix_of(all[j])) return false;
    return true;
}

}  // namespace

TEST_CASE("poisson sufficiency formula") {
    CHECK(poisson_r(1.0, 1.0) == 2);
    CHECK(poisson_r(1.0, 2.0) == 2);
    CHECK(poisson_r(5.0, 1.0) == 13);
    CHECK_THROWS_AS(poisson_r(0.0, 1.0), InvalidParameter);
}

TEST_CASE("reduced tail weights match the worked examples") {
    SourceModel poi = PoissonSource(1.0);
    FiniteWeights w1 = reduced_weights(poi, 1.0, 2);
    REQUIRE(w1.w.size() == 4);
    CHECK(w1.w[3] == Catch::Approx(1.0 - 2.5 / kE).margin(1e-9));
    FiniteWeights w2 = reduced_weights(poi, 2.0, 2);
    CHECK(w2.w[3] == Catch::Approx(0.25 * kE - 1.25 / kE).margin(1e-9));
    for (int i = 0; i <= 2; ++i) CHECK(w1.w[i] == pmf(poi, i));
}

TEST_CASE("poisson closed-form tail weight vs direct summation") {
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
        SourceModel src = PoissonSource(lambda);
        for (double a : {0.6, 1.0, 2.0}) {
            int r = poisson_r(lambda, a);
            double closed = reduced_weights(src, a, r).w.back();
            double direct = tail_direct(src, static_cast<std::uint64_t>(r), a);
            CHECK(closed == Catch::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("geometric reduced tail weight closed form") {
    double theta = 0.6, a = 1.2;
    SourceModel src = GeometricSource(theta);
    for (int r : {0, 1, 4}) {
        double expected = (1.0 - theta) * std::pow(theta, r + 1) * a / (1.0 - a * theta);
        CHECK(reduced_weights(src, a, r).w.back() ==
              Catch::Approx(expected).epsilon(1e-12));
        CHECK(reduced_weights(src, a, r).w.back() ==
              Catch::Approx(tail_direct(src, static_cast<std::uint64_t>(r), a)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(reduced_weights(SourceModel(GeometricSource(0.9)), 2.0, 3),
                    DivergentPenalty);
}

TEST_CASE("find_r returns the minimal certified r") {
    SourceModel poi = PoissonSource(1.0);
    int r1 = find_r(poi, 1.0);
    int r2 = find_r(poi, 2.0);
    CHECK(r1 == 0);
    CHECK(r2 == 1);

    // Independent probe: the condition holds for a window of j > r and the
    // previous r admits a violation.
    for (std::uint64_t j = static_cast<std::uint64_t>(r2) + 1; j < 40; ++j)
        CHECK(cond_holds_at(poi, 2.0, j));
    CHECK_FALSE(cond_holds_at(poi, 2.0, static_cast<std::uint64_t>(r2)));

    // The formula r is sufficient but need not be minimal.
    CHECK(r1 <= poisson_r(1.0, 1.0));
    CHECK(r2 <= poisson_r(1.0, 2.0));
}

TEST_CASE("find_r rejects heavy tails and accepts degenerate-a geometrics") {
    CHECK_THROWS_AS(find_r(SourceModel(GeometricSource(0.9)), 2.0),
                    NotVerifiablyLightTailed);
    // Direct evidence: the tail sum diverges at every j for a theta > 1.
    CHECK(tail_exp_sum(SourceModel(GeometricSource(0.9)), 5, 2.0).is_divergent());

    CHECK(find_r(SourceModel(GeometricSource(0.9)), 0.4) == 0);
    CHECK(find_r(SourceModel(GeometricSource(0.5)), 1.0) == 0);
    CHECK_THROWS_AS(find_r(SourceModel(FiniteWeights({0.5, 0.5})), 1.0), InvalidParameter);
}

TEST_CASE("poisson(1) worked examples end to end") {
    SourceModel poi = PoissonSource(1.0);

    UnaryEndedCode c1 = build_unary_ended(poi, 1.0);
    std::vector<std::int64_t> first(20);
    for (std::uint64_t i = 0; i < 20; ++i) first[i] = c1.length(i);
    std::vector<std::int64_t> sorted = first;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK(sorted[i] == i + 1);  // unary distribution
    for (std::uint64_t i = c1.head_codewords.size(); i < 20; ++i)
        CHECK(c1.length(i) == static_cast<std::int64_t>(i) + 1);

    UnaryEndedCode c2 = build_unary_ended(poi, 2.0);
    CHECK(c2.length(0) == 2);
    CHECK(c2.length(1) == 2);
    CHECK(c2.length(2) == 2);
    for (std::uint64_t i = 3; i < 20; ++i)
        CHECK(c2.length(i) == static_cast<std::int64_t>(i));

    for (const UnaryEndedCode& c : {c1, c2}) {
        CHECK(c.continuation_prefix.all_ones());
        CHECK(c.x >= 0);
        CHECK(prefix_free_with_continuation(c));
        CHECK(c.lengths().kraft_sum() == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("codewords beyond r are runs of ones ended by a zero") {
    UnaryEndedCode c = build_unary_ended(SourceModel(PoissonSource(1.0)), 2.0);
    for (std::uint64_t i = c.head_codewords.size(); i < 15; ++i) {
        BitString cw = c.codeword(i);
        CHECK(static_cast<std::int64_t>(cw.size()) == c.length(i));
        for (std::size_t b = 0; b + 1 < cw.size(); ++b) CHECK(cw.bit(b) == 1);
        CHECK(cw.bit(cw.size() - 1) == 0);
        // tail law: i - x ones then one zero
        CHECK(static_cast<int>(cw.size()) == static_cast<int>(i) - c.x + 1);
    }
}

TEST_CASE("degenerate exponent yields the unary limit code") {
    // Poisson(0.5), a = 0.4: strictly decreasing pmf, so the unary limit
    // comes out per-symbol.
    UnaryEndedCode c = build_unary_ended(SourceModel(PoissonSource(0.5)), 0.4);
    for (std::uint64_t i = 0; i < 20; ++i)
        CHECK(c.length(i) == static_cast<std::int64_t>(i) + 1);
    CHECK(c.x == 0);
}

TEST_CASE("relabeling preserves the reduced length multiset") {
    SourceModel poi = PoissonSource(2.0);
    for (double a : {0.6, 1.0, 2.0}) {
        int r = poisson_r(2.0, a);
        FiniteWeights w = reduced_weights(poi, a, r);
        FiniteCode raw = exp_huffman(w, a);
        UnaryEndedCode assembled = build_unary_ended(poi, a);
        std::vector<int> before = raw.lengths;
        std::vector<int> after;
        for (const auto& cw : assembled.head_codewords)
            after.push_back(static_cast<int>(cw.size()));
        after.push_back(static_cast<int>(assembled.continuation_prefix.size()));
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);
    }
}

TEST_CASE("the infinite penalty equals the reduced root penalty") {
    // The reduced problem telescopes the tail exactly, so L_a of the
    // assembled infinite code must match log_a of the reduced root weight.
    for (double lambda : {0.5, 1.0, 2.0}) {
        SourceModel poi = PoissonSource(lambda);
        for (double a : {0.6, 2.0}) {
            int r = poisson_r(lambda, a);
            FiniteCode reduced = exp_huffman(reduced_weights(poi, a, r), a);
            UnaryEndedCode code = build_unary_ended(poi, a);
            double inf_penalty = penalty(poi, code.lengths(), a, 1e-11);
            CHECK(inf_penalty ==
                  Catch::Approx(log_base(a, reduced.root_weight)).epsilon(1e-9));
        }
    }
}

TEST_CASE("light-tail bracket closes as the reduction grows") {
    // W_m-style lower bounds: reduce at i_max = r+m+2 with tail weight
    // sum_{k>=i_max} p(k) a^{k-i_max+1}; the optimal reduced penalty must
    // bracket the assembled code's penalty from below, with vanishing gap.
    SourceModel poi = PoissonSource(1.0);
    double a = 2.0;
    int r = poisson_r(1.0, a);
    UnaryEndedCode code = build_unary_ended(poi, a);
    double upper = penalty(poi, code.lengths(), a, 1e-12);
    double prev_gap = kInf;
    for (int m : {0, 2, 4, 8}) {
        int i_max = r + m + 2;
        std::vector<double> w;
        for (int i = 0; i < i_max; ++i) w.push_back(pmf(poi, i));
        // w_m(i_max) = sum_{k>=i_max} p(k) a^{k-i_max+1}
        w.push_back(tail_exp_sum(poi, static_cast<std::uint64_t>(i_max) - 1, a).mid());
        FiniteCode reduced = exp_huffman(FiniteWeights(w), a);
        double lower = log_base(a, reduced.root_weight);
        double gap = upper - lower;
        CHECK(gap >= -1e-12);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-9);
}

TEST_CASE("r override is honored and penalty-equivalent") {
    SourceModel poi = PoissonSource(1.0);
    UnaryEndedCode minimal = build_unary_ended(poi, 2.0, find_r(poi, 2.0));
    UnaryEndedCode formula = build_unary_ended(poi, 2.0, poisson_r(1.0, 2.0));
    double pm = penalty(poi, minimal.lengths(), 2.0, 1e-12);
    double pf = penalty(poi, formula.lengths(), 2.0, 1e-12);
    CHECK(pm == Catch::Approx(pf).epsilon(1e-10));
}
