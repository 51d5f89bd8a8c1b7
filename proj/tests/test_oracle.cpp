#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "xpc/oracle.hpp"

using namespace xpc;

namespace {

// Raw full-binary-tree enumeration, independent of the multiset oracle:
// every plane tree with n leaves, leaf depth profiles left to right, with a
// shape counter for the Catalan assertion.
std::vector<std::vector<int>> plane_tree_profiles(int n, std::uint64_t& shapes) {
    if (n == 1) {
        ++shapes;
        return {{0}};
    }
    std::vector<std::vector<int>> out;
    for (int left = 1; left < n; ++left) {
        std::uint64_t ls = 0, rs = 0;
        auto lp = plane_tree_profiles(left, ls);
        auto rp = plane_tree_profiles(n - left, rs);
        for (const auto& l : lp) {
            for (const auto& r : rp) {
                std::vector<int> prof;
                prof.reserve(l.size() + r.size());
                for (int d : l) prof.push_back(d + 1);
                for (int d : r) prof.push_back(d + 1);
                out.push_back(std::move(prof));
                ++shapes;
            }
        }
    }
    return out;
}

std::uint64_t catalan(int n) {
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

}  // namespace

TEST_CASE("complete length multisets are exactly the plane-tree profiles") {
    for (int n = 1; n <= 7; ++n) {
        std::uint64_t shapes = 0;
        auto profiles = plane_tree_profiles(n, shapes);
        // Shape counter: full binary plane trees with n leaves.
        if (n >= 2) CHECK(profiles.size() == catalan(n - 1));

        std::vector<std::vector<int>> sorted_profiles;
        for (auto p : profiles) {
            std::sort(p.begin(), p.end());
            sorted_profiles.push_back(std::move(p));
        }
        std::sort(sorted_profiles.begin(), sorted_profiles.end());
        sorted_profiles.erase(
            std::unique(sorted_profiles.begin(), sorted_profiles.end()),
            sorted_profiles.end());

        auto multisets = oracle::complete_length_multisets(n);
        std::sort(multisets.begin(), multisets.end());
        CHECK(multisets == sorted_profiles);
    }
}

TEST_CASE("brute force basics") {
    auto single = oracle::brute_force_optimal(FiniteWeights({1.0}), 2.0);
    CHECK(single.lengths == std::vector<int>{0});
    CHECK(single.penalty == Catch::Approx(1.0));  // w(0) * a^0

    auto three = oracle::brute_force_optimal(FiniteWeights({0.5, 0.3, 0.2}), 2.0);
    CHECK(three.penalty == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(three.lengths == std::vector<int>{1, 2, 2});

    CHECK_THROWS_AS(
        oracle::brute_force_optimal(FiniteWeights(std::vector<double>(9, 1.0)), 2.0),
        InvalidParameter);
}

TEST_CASE("oracle direction: maximize the sum for a < 1") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        std::vector<double> w(n);
        for (auto& x : w) x = u(rng);
        std::vector<double> sorted = w;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());

        for (double a : {0.6, 1.5}) {
            auto res = oracle::brute_force_optimal(FiniteWeights(w), a);
            for (const auto& lens : oracle::complete_length_multisets(n)) {
                KahanSum s;
                for (int i = 0; i < n; ++i)
                    s.add(sorted[i] * std::pow(a, static_cast<double>(lens[i])));
                if (a < 1.0)
                    CHECK(res.penalty >= s.value() - 1e-12);
                else
                    CHECK(res.penalty <= s.value() + 1e-12);
            }
        }
    }
}

TEST_CASE("oracle invariance under permutation and scaling") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        std::vector<double> w(n);
        for (auto& x : w) x = u(rng);
        auto base = oracle::brute_force_optimal(FiniteWeights(w), 1.5);

        std::vector<double> perm = w;
        std::shuffle(perm.begin(), perm.end(), rng);
        auto permuted = oracle::brute_force_optimal(FiniteWeights(perm), 1.5);
        CHECK(permuted.penalty == Catch::Approx(base.penalty).epsilon(1e-12));

        std::vector<double> scaled = w;
        for (auto& x : scaled) x *= 16.0;
        auto s = oracle::brute_force_optimal(FiniteWeights(scaled), 1.5);
        CHECK(s.penalty == Catch::Approx(16.0 * base.penalty).epsilon(1e-12));
        std::vector<int> l1 = base.lengths, l2 = s.lengths;
        std::sort(l1.begin(), l1.end());
        std::sort(l2.begin(), l2.end());
        CHECK(l1 == l2);
    }
}

TEST_CASE("m-reduced geometric source") {
    FiniteWeights w = oracle::m_reduced_source(0.5, 1.0, 1, 1);
    REQUIRE(w.w.size() == 3);
    CHECK(w.w[0] == Catch::Approx(0.5));
    CHECK(w.w[1] == Catch::Approx(0.25));
    CHECK(w.w[2] == Catch::Approx(0.25));

    // m = -1: exactly k tail weights
    FiniteWeights tail_only = oracle::m_reduced_source(0.7, 1.2, 3, -1);
    CHECK(tail_only.w.size() == 3);

    // weight sums match the closed-form geometric partial sums
    for (double theta : {0.3, 0.7, 0.9}) {
        for (double a : {0.8, 1.0, 1.3}) {
            int k = optimal_k(theta, a);
            for (int m : {-1, 0, 4, 20}) {
                FiniteWeights wm = oracle::m_reduced_source(theta, a, k, m);
                KahanSum s;
                for (double x : wm.w) s.add(x);
                double atk = a * std::pow(theta, k);
                double head = 1.0 - std::pow(theta, m + 1);
                double tail = a * std::pow(theta, m + 1) * (1.0 - std::pow(theta, k)) /
                              (1.0 - atk);
                CHECK(s.value() == Catch::Approx(head + tail).epsilon(1e-12));
            }
        }
    }

    CHECK_THROWS_AS(oracle::m_reduced_source(0.9, 2.0, 1, 3), DivergentPenalty);
    CHECK_THROWS_AS(oracle::m_reduced_source(0.5, 1.0, 1, -2), InvalidParameter);
}

TEST_CASE("golomb sandwich check") {
    auto rep = oracle::golomb_sandwich_check(0.5, 1.0, 50);
    CHECK(rep.pass);
    CHECK(rep.k == 1);
    for (const auto& e : rep.entries) {
        CHECK(e.lengths_match);
        CHECK(e.gap >= -1e-12);
    }
    // dyadic case at m = 50: the bracket has closed to FP noise
    CHECK(std::abs(rep.entries.back().gap) < 1e-12);

    auto rep2 = oracle::golomb_sandwich_check(0.9, 1.5, 200);
    CHECK(rep2.pass);
    CHECK(rep2.entries.back().gap < 1e-6);
    CHECK(rep2.entries.back().gap >= -1e-12);

    auto deg = oracle::golomb_sandwich_check(0.9, 0.4, 200);
    CHECK(deg.skipped_degenerate);
    CHECK(deg.pass);
}
