#include <doctest.h>

#include <vector>

#include "heliocast/errors.hpp"
#include "heliocast/sampling.hpp"
#include "oracles.hpp"

using namespace helio;

namespace {

std::vector<long> draw_counts(const AliasTable& table, std::size_t draws, std::uint64_t seed) {
    std::vector<long> counts(table.size(), 0);
    Rng rng = make_rng(seed);
    for (std::size_t i = 0; i < draws; ++i) ++counts[table.sample(rng)];
    return counts;
}

}  // namespace

TEST_CASE("single outcome always wins") {
    const std::vector<double> w = {1.0};
    const AliasTable table(w);
    Rng rng = make_rng(3);
    for (int i = 0; i < 100; ++i) CHECK(table.sample(rng) == 0);
}

TEST_CASE("uniform pair passes chi-square") {
    const std::vector<double> w = {1.0, 1.0};
    const AliasTable table(w);
    const auto counts = draw_counts(table, 100000, 17);
    const std::vector<double> probs = {0.5, 0.5};
    CHECK(oracles::chi_square_gof(counts, probs) > 0.01);
}

TEST_CASE("1:3 weights match the analytic distribution") {
    const std::vector<double> w = {1.0, 3.0};
    const AliasTable table(w);
    const auto counts = draw_counts(table, 100000, 23);
    const std::vector<double> probs = {0.25, 0.75};  // weights normalized analytically
    CHECK(oracles::chi_square_gof(counts, probs) > 0.01);
}

TEST_CASE("random weight vectors pass chi-square") {
    Rng meta = make_rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 2 + uniform_below(meta, 40);
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) {
            x = 0.05 + canonical(meta) * 4.0;
            total += x;
        }
        const AliasTable table(w);
        const auto counts = draw_counts(table, 100000, 1000 + rep);
        std::vector<double> probs(n);
        for (std::size_t i = 0; i < n; ++i) probs[i] = w[i] / total;
        CHECK(oracles::chi_square_gof(counts, probs) > 0.01);
    }
}

TEST_CASE("table invariants: probabilities in [0,1], aliases in range") {
    Rng meta = make_rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 1 + uniform_below(meta, 64);
        std::vector<double> w(n);
        for (auto& x : w) x = 0.01 + canonical(meta);
        const AliasTable table(w);
        REQUIRE(table.size() == n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(table.probabilities()[i] >= 0.0);
            CHECK(table.probabilities()[i] <= 1.0 + 1e-12);
            CHECK(table.aliases()[i] >= 0);
            CHECK(table.aliases()[i] < static_cast<int>(n));
        }
    }
}

TEST_CASE("bad inputs are rejected") {
    CHECK_THROWS_AS(AliasTable(std::vector<double>{}), EmptyWeights);
    CHECK_THROWS_AS(AliasTable(std::vector<double>{1.0, 0.0}), NonPositiveWeight);
    CHECK_THROWS_AS(AliasTable(std::vector<double>{1.0, -2.0}), NonPositiveWeight);
}
