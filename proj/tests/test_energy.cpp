#include <gmpxx.h>

#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pcc/energy.hpp"
#include "pcc/errors.hpp"
#include "pcc/rng.hpp"
#include "pcc/sequences.hpp"

using namespace pcc;

namespace {

std::vector<mpz_class> zs(std::initializer_list<long> v) {
    std::vector<mpz_class> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("profile of {1,2,3}") {
    RepresentationProfile p = representation_profile(zs({1, 2, 3}));
    CHECK(p.set_size == 3);
    CHECK(p.r(0) == 3);
    CHECK(p.r(1) == 2);
    CHECK(p.r(-1) == 2);
    CHECK(p.r(2) == 1);
    CHECK(p.r(-2) == 1);
    CHECK(p.r(3) == 0);
    CHECK(p.total() == 9);
}

TEST_CASE("profile of a singleton") {
    RepresentationProfile p = representation_profile(zs({7}));
    CHECK(p.set_size == 1);
    CHECK(p.positive.empty());
    CHECK(energy_of_profile(p) == 1);
}

TEST_CASE("profile is translation invariant and scales keys under dilation") {
    auto base = zs({1, 2, 3});
    RepresentationProfile p0 = representation_profile(base);
    auto shifted = zs({101, 102, 103});
    RepresentationProfile p1 = representation_profile(shifted);
    CHECK(p0.positive == p1.positive);
    auto scaled = zs({5, 10, 15});
    RepresentationProfile p2 = representation_profile(scaled);
    for (const auto& [h, c] : p0.positive) CHECK(p2.r(5 * h) == c);
}

TEST_CASE("energy examples") {
    CHECK(additive_energy(zs({1, 2, 3})) == 19);
    CHECK(additive_energy(zs({42})) == 1);
}

TEST_CASE("energy of {1..N} matches the closed form and brute force") {
    for (unsigned long n = 1; n <= 100; ++n) {
        std::vector<mpz_class> a;
        for (unsigned long j = 1; j <= n; ++j) a.emplace_back(j);
        mpz_class nz(n);
        mpz_class expected = nz * nz + (nz - 1) * nz * (2 * nz - 1) / 3;
        CHECK(additive_energy(a) == expected);
        if (n <= 12) CHECK(additive_energy(a) == oracles::energy_brute_force(a));
    }
}

TEST_CASE("energy equals brute force on random small sets") {
    SplitMix64 rng(31);
    for (int i = 0; i < 60; ++i) {
        auto a = oracles::random_set(rng, 2 + rng.next() % 11, 60);
        CHECK(additive_energy(a) == oracles::energy_brute_force(a));
    }
}

TEST_CASE("dilation and translation invariance of energy") {
    SplitMix64 rng(32);
    for (int i = 0; i < 100; ++i) {
        auto a = oracles::random_set(rng, 2 + rng.next() % 20, 10000);
        mpz_class delta(1 + rng.next() % 1000000);
        mpz_class shift(rng.next() % 1000000000);
        std::vector<mpz_class> b;
        for (const auto& x : a) b.push_back(delta * x + shift);
        CHECK(additive_energy(a) == additive_energy(b));
    }
}

TEST_CASE("cauchy-schwarz extremes") {
    SplitMix64 rng(33);
    for (int i = 0; i < 50; ++i) {
        auto a = oracles::random_set(rng, 2 + rng.next() % 30, 1000000);
        mpz_class e = additive_energy(a);
        mpz_class n(static_cast<unsigned long>(a.size()));
        CHECK(e >= n * n);
        CHECK(e <= n * n * n);
    }
}

TEST_CASE("block energy example and delta invariance") {
    Block b;
    b.level = 4;
    b.psi_inv = 1;
    b.delta = 1000000;
    for (long v : {5, 6, 7, 8}) b.elements.push_back(b.delta * v);
    CHECK(block_energy(b) == 44);
    CHECK(block_energy(b) == additive_energy(b.elements));

    Block unit = b;
    unit.delta = 1;
    unit.elements.clear();
    for (long v : {5, 6, 7, 8}) unit.elements.emplace_back(v);
    CHECK(block_energy(unit) == 44);
}

TEST_CASE("block energy equals element energy on sampled verified blocks") {
    for (unsigned long level : {8UL, 16UL, 32UL}) {
        Block b = block_sample_verified(level, 2, mpz_class(1) << 20, 77, 1000);
        CHECK(block_energy(b) == additive_energy(b.elements));
    }
}

TEST_CASE("profile rejects unsorted input") {
    CHECK_THROWS_AS(representation_profile(zs({3, 1, 2})), InvariantError);
    CHECK_THROWS_AS(representation_profile(zs({1, 1})), InvariantError);
}

TEST_CASE("profile csv is ascending with both signs") {
    RepresentationProfile p = representation_profile(zs({1, 2, 3}));
    std::ostringstream os;
    write_profile_csv(os, p);
    CHECK(os.str() == "h,r\n-2,1\n-1,2\n0,3\n1,2\n2,1\n");
}
