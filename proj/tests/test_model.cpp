#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "xpc/model.hpp"
#include "xpc/json_io.hpp"

using namespace xpc;

TEST_CASE("regime classification") {
    CHECK(classify(0.3) == Regime::Degenerate);
    CHECK(classify(0.5) == Regime::Degenerate);
    CHECK(classify(1.0) == Regime::Linear);
    CHECK(classify(2.0) == Regime::Exponential);
    CHECK(classify(0.7) == Regime::Exponential);
    CHECK_THROWS_AS(classify(0.0), InvalidParameter);
    CHECK_THROWS_AS(classify(-1.0), InvalidParameter);
}

TEST_CASE("renyi order") {
    CHECK(renyi_order(1.0) == 1.0);
    CHECK(renyi_order(2.0) == Catch::Approx(0.5));
    CHECK_THROWS_AS(renyi_order(0.4), DegenerateRegime);
    CHECK_THROWS_AS(renyi_order(0.5), DegenerateRegime);

    // strictly decreasing on (0.5, inf)
    double prev = kInf;
    for (double a : {0.51, 0.6, 0.8, 0.99, 1.0, 1.01, 1.5, 2.0, 4.0, 16.0}) {
        double al = renyi_order(a);
        CHECK(al < prev);
        prev = al;
    }
}

TEST_CASE("pmf values") {
    SourceModel geo_half = GeometricSource(0.5);
    SourceModel geo9 = GeometricSource(0.9);
    SourceModel poi1 = PoissonSource(1.0);

    CHECK(pmf(geo_half, 0) == Catch::Approx(0.5));
    CHECK(pmf(poi1, 0) == Catch::Approx(0.367879441).epsilon(1e-9));
    CHECK(pmf(geo9, 2) == Catch::Approx(0.081).epsilon(1e-12));

    SourceModel fin = FiniteWeights({0.5, 0.3, 0.2});
    CHECK(pmf(fin, 1) == 0.3);
    CHECK_THROWS_AS(pmf(fin, 3), OutOfAlphabet);

    CHECK_THROWS_AS(GeometricSource(1.0), InvalidParameter);
    CHECK_THROWS_AS(GeometricSource(0.0), InvalidParameter);
    CHECK_THROWS_AS(PoissonSource(0.0), InvalidParameter);
    CHECK_THROWS_AS(FiniteWeights({1.0, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(FiniteWeights({}), InvalidParameter);
}

TEST_CASE("parametric pmfs sum to one") {
    for (double theta : {0.1, 0.5, 0.9, 0.95}) {
        SourceModel src = GeometricSource(theta);
        int m = static_cast<int>(100.0 / (1.0 - theta));
        KahanSum s;
        for (int i = 0; i <= m; ++i) s.add(pmf(src, i));
        CHECK(s.value() > 1.0 - 1e-12);
        CHECK(s.value() <= 1.0 + 1e-12);
    }
    for (double lambda : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        SourceModel src = PoissonSource(lambda);
        int m = static_cast<int>(lambda + 50.0 * std::sqrt(lambda) + 50.0);
        KahanSum s;
        for (int i = 0; i <= m; ++i) s.add(pmf(src, i));
        CHECK(s.value() > 1.0 - 1e-12);
        CHECK(s.value() <= 1.0 + 1e-12);
    }
}

TEST_CASE("log2 pmf agrees with pmf") {
    SourceModel poi = PoissonSource(2.0);
    SourceModel geo = GeometricSource(0.8);
    for (std::uint64_t i : {0u, 1u, 5u, 40u}) {
        CHECK(std::exp2(log2_pmf(poi, i)) == Catch::Approx(pmf(poi, i)).epsilon(1e-12));
        CHECK(std::exp2(log2_pmf(geo, i)) == Catch::Approx(pmf(geo, i)).epsilon(1e-12));
    }
    // log-space survives where the linear pmf underflows
    CHECK(std::isfinite(log2_pmf(poi, 900)));
    CHECK(log2_pmf(poi, 900) < -1000.0);
}

TEST_CASE("geometric tail_exp_sum closed form vs truncation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uth(0.05, 0.95), ua(0.3, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        double theta = uth(rng), a = ua(rng);
        if (a * theta >= 0.99) continue;
        SourceModel src = GeometricSource(theta);
        std::uint64_t j = rng() % 20;
        Interval t = tail_exp_sum(src, j, a);
        KahanSum direct;
        double term = pmf(src, j + 1) * a;
        for (int step = 0; step < 6000 && term > 1e-300; ++step) {
            direct.add(term);
            term *= theta * a;
        }
        CHECK(t.mid() == Catch::Approx(direct.value()).epsilon(1e-10));
        CHECK(t.lo <= t.hi);
    }
}

TEST_CASE("geometric tail_exp_sum divergence") {
    SourceModel src = GeometricSource(0.9);
    CHECK(tail_exp_sum(src, 3, 2.0).is_divergent());
    CHECK_FALSE(tail_exp_sum(src, 3, 1.0).is_divergent());
}

TEST_CASE("poisson tail interval encloses the direct sum") {
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
        for (double a : {0.6, 1.0, 2.0}) {
            SourceModel src = PoissonSource(lambda);
            for (std::uint64_t j : {0u, 2u, 7u}) {
                Interval t = tail_exp_sum(src, j, a);
                KahanSum direct;
                for (std::uint64_t k = j + 1; k < j + 300; ++k)
                    direct.add(std::exp2(log2_pmf(src, k) +
                                         static_cast<double>(k - j) * std::log2(a)));
                CHECK(t.lo <= direct.value() * (1.0 + 1e-12));
                CHECK(t.hi >= direct.value() * (1.0 - 1e-12));
                CHECK((t.hi - t.lo) / t.hi < 1e-10);
            }
        }
    }
}

TEST_CASE("source json round trip") {
    SourceModel g = GeometricSource(0.9);
    SourceModel p = PoissonSource(1.0);
    SourceModel f = FiniteWeights({0.5, 0.25, 0.25});

    CHECK(source_to_json(g).dump() == R"({"kind":"geometric","theta":0.9})");
    auto g2 = source_from_json(source_to_json(g));
    CHECK(std::get<GeometricSource>(g2).theta == 0.9);
    auto p2 = source_from_json(source_to_json(p));
    CHECK(std::get<PoissonSource>(p2).lambda == 1.0);
    auto f2 = source_from_json(source_to_json(f));
    CHECK(std::get<FiniteWeights>(f2).w == std::vector<double>{0.5, 0.25, 0.25});

    CHECK_THROWS_AS(source_from_json(json::parse(R"({"kind":"zipf","s":1.1})")),
                    InvalidParameter);
}
