#include <gmpxx.h>

#include "doctest.h"
#include "oracles.hpp"
#include "pcc/energy.hpp"
#include "pcc/errors.hpp"
#include "pcc/paircorr.hpp"
#include "pcc/rng.hpp"

using namespace pcc;

namespace {

SequencePrefix seq(std::initializer_list<long> v) {
    std::vector<mpz_class> e;
    for (long x : v) e.emplace_back(x);
    return oracles::prefix_of(std::move(e));
}

}  // namespace

TEST_CASE("alpha = 0 gives F = N - 1") {
    SequencePrefix a = seq({3, 17, 40, 41, 99});
    PairCorrResult r = pair_corr_direct(CircleScalar(mpq_class(0)), 1, a);
    CHECK(r.value == 4);
    CHECK(r.contributing_pairs == 20);
}

TEST_CASE("worked example: A = {1,2,3,4}, alpha = 1/2, s = 1") {
    PairCorrResult r =
        pair_corr_direct(CircleScalar(mpq_class(1, 2)), 1, seq({1, 2, 3, 4}));
    CHECK(r.value == 1);
    CHECK(r.contributing_pairs == 4);
}

TEST_CASE("worked example: A = {1,4,9}, alpha = 1/3, s = 1") {
    PairCorrResult r =
        pair_corr_direct(CircleScalar(mpq_class(1, 3)), 1, seq({1, 4, 9}));
    CHECK(r.value == 2);
    CHECK(r.contributing_pairs == 6);
}

TEST_CASE("difference form matches on the worked examples") {
    for (auto& [alpha, a] :
         std::vector<std::pair<mpq_class, SequencePrefix>>{
             {mpq_class(0), seq({3, 17, 40, 41, 99})},
             {mpq_class(1, 2), seq({1, 2, 3, 4})},
             {mpq_class(1, 3), seq({1, 4, 9})}}) {
        CircleScalar al(alpha);
        RepresentationProfile prof = representation_profile(a.elements);
        PairCorrResult d = pair_corr_direct(al, 1, a);
        PairCorrResult g = pair_corr_by_differences(al, 1, prof, a.size());
        CHECK(d.value == g.value);
        CHECK(d.contributing_pairs == g.contributing_pairs);
    }
}

TEST_CASE("three-way equivalence on random instances") {
    SplitMix64 rng(7001);
    for (int i = 0; i < 120; ++i) {
        std::size_t n = 2 + rng.next() % 40;
        SequencePrefix a =
            oracles::prefix_of(oracles::random_set(rng, n, 1'000'000'000ULL));
        CircleScalar alpha = oracles::random_alpha(rng, 100000);
        mpq_class s = make_q(1 + rng.next() % 30, 1 + rng.next() % 10);
        PairCorrResult d = pair_corr_direct(alpha, s, a);
        PairCorrResult g = pair_corr_by_differences(
            alpha, s, representation_profile(a.elements), a.size());
        mpz_class brute = oracles::pair_count_brute_force(alpha, s, a.elements);
        CHECK(d.value == g.value);
        CHECK(d.contributing_pairs == brute);
    }
}

TEST_CASE("monotone in s and bounded by N - 1") {
    SplitMix64 rng(7002);
    for (int i = 0; i < 60; ++i) {
        SequencePrefix a = oracles::prefix_of(
            oracles::random_set(rng, 3 + rng.next() % 20, 1'000'000ULL));
        CircleScalar alpha = oracles::random_alpha(rng, 10000);
        mpq_class s1 = make_q(rng.next() % 50, 40);
        mpq_class s2 = s1 + make_q(1 + rng.next() % 20, 40);
        PairCorrResult r1 = pair_corr_direct(alpha, s1, a);
        PairCorrResult r2 = pair_corr_direct(alpha, s2, a);
        CHECK(r1.value <= r2.value);
        mpz_class n(static_cast<unsigned long>(a.size()));
        CHECK(r2.value <= mpq_class(n - 1));
    }
}

TEST_CASE("s = 0 counts exact coincidences only") {
    // alpha = 1/4: elements 1 and 5 coincide mod 1 after dilation by 1/4.
    SequencePrefix a = seq({1, 4, 5});
    PairCorrResult r = pair_corr_direct(CircleScalar(mpq_class(1, 4)), 0, a);
    CHECK(r.contributing_pairs == 2);
    CHECK(r.value == mpq_class(2, 3));
}

TEST_CASE("dilation transport identity") {
    SplitMix64 rng(7003);
    SequencePrefix a = seq({1, 2, 3, 4});
    CHECK(dilation_transport_check(CircleScalar(mpq_class(1, 2)), 1, a, 1));
    CHECK(dilation_transport_check(CircleScalar(mpq_class(0)), 1, a, 17));
    for (int i = 0; i < 80; ++i) {
        SequencePrefix b = oracles::prefix_of(
            oracles::random_set(rng, 2 + rng.next() % 15, 100000));
        CircleScalar alpha = oracles::random_alpha(rng, 50000);
        mpz_class delta(1 + rng.next() % 100000);
        CHECK(dilation_transport_check(alpha, 1, b, delta));
    }
}

TEST_CASE("contract violations") {
    SequencePrefix single = seq({5});
    CHECK_THROWS_AS(pair_corr_direct(CircleScalar(mpq_class(1, 3)), 1, single),
                    InvariantError);
    RepresentationProfile prof = representation_profile(single.elements);
    CHECK_THROWS_AS(
        pair_corr_by_differences(CircleScalar(mpq_class(1, 3)), 1, prof, 1),
        InvariantError);
    SequencePrefix pair = seq({5, 6});
    CHECK_THROWS_AS(pair_corr_direct(CircleScalar(mpq_class(1, 3)),
                                     mpq_class(-1), pair),
                    InvariantError);
}
