#include <gmpxx.h>

#include "doctest.h"
#include "oracles.hpp"
#include "pcc/energy.hpp"
#include "pcc/errors.hpp"
#include "pcc/rng.hpp"
#include "pcc/sequences.hpp"

using namespace pcc;

TEST_CASE("degenerate Bernoulli p=1 keeps every index") {
    Block b = block_sample(4, 1, mpz_class(7), 12345);
    REQUIRE(b.elements.size() == 4);
    for (long j = 0; j < 4; ++j)
        CHECK(b.elements[static_cast<std::size_t>(j)] == 7 * (5 + j));
}

TEST_CASE("sampled elements live in delta * (N*psi_inv, 2*N*psi_inv]") {
    Block b = block_sample(8, 4, mpz_class(1), 999);
    for (const auto& e : b.elements) {
        CHECK(e > 32);
        CHECK(e <= 64);
    }
    // mean size is N = 8; a wildly different size would indicate a broken draw
    CHECK(b.elements.size() >= 1);
    CHECK(b.elements.size() <= 32);
}

TEST_CASE("block_sample is deterministic in the seed") {
    Block a = block_sample(16, 2, mpz_class(3), 2718);
    Block b = block_sample(16, 2, mpz_class(3), 2718);
    CHECK(a.elements == b.elements);
    Block c = block_sample(16, 2, mpz_class(3), 2719);
    CHECK(a.elements != c.elements);  // overwhelmingly likely, fixed seeds
}

TEST_CASE("elements divisible by delta") {
    Block b = block_sample(16, 2, mpz_class(100003), 5);
    for (const auto& e : b.elements) CHECK(e % 100003 == 0);
}

TEST_CASE("verify accepts the deterministic N=4 block and flags vacuity") {
    Block b = block_sample(4, 1, mpz_class(9), 1);
    BlockCheck c = block_verify(b);
    CHECK(c.ok);
    CHECK(c.property2_vacuous);
}

TEST_CASE("verify rejects undersized and oversized synthetic blocks") {
    Block small;
    small.level = 8;
    small.psi_inv = 1;
    small.delta = 1;
    small.elements = {mpz_class(9), mpz_class(10)};  // |B| = 2 < N/2
    BlockCheck cs = block_verify(small);
    CHECK_FALSE(cs.ok);
    CHECK(cs.failed_property == 3);

    Block big;
    big.level = 4;
    big.psi_inv = 3;  // index range (12, 24], room for 12 > 2N elements
    big.delta = 1;
    for (long v = 13; v <= 24; ++v) big.elements.emplace_back(v);
    BlockCheck cb = block_verify(big);
    CHECK_FALSE(cb.ok);
    CHECK(cb.failed_property == 3);
}

TEST_CASE("verified sampler output re-verifies and records attempts") {
    for (unsigned long level : {1UL, 2UL, 4UL, 8UL, 16UL, 32UL, 64UL}) {
        long psi_inv = level >= 64 ? 3 : (level >= 8 ? 2 : 1);
        Block b = block_sample_verified(level, psi_inv, mpz_class(1), 42, 1000);
        CHECK(b.attempts >= 1);
        CHECK(block_verify(b).ok);
    }
}

TEST_CASE("energy of verified blocks sits in the loose band") {
    for (unsigned long level : {8UL, 16UL, 32UL, 64UL}) {
        long psi_inv = level >= 64 ? 3 : 2;
        Block b = block_sample_verified(level, psi_inv, mpz_class(5), 271828, 1000);
        mpq_class ratio = make_q(block_energy(b) * psi_inv,
                                 pow_z(mpz_class(level), 3));
        CHECK(ratio >= mpq_class(1, 1000));
        CHECK(ratio <= 1000);
    }
}

TEST_CASE("retry contract") {
    CHECK_THROWS_AS(block_sample_verified(8, 2, mpz_class(1), 0, 0),
                    InvariantError);
}

TEST_CASE("concat examples") {
    Block b1 = block_sample(1, 1, mpz_class(1), 3);  // {2}
    Block b2 = block_sample(2, 1, mpz_class(16), 3);
    SequencePrefix single = concat_blocks({b1});
    CHECK(single.elements == b1.elements);
    REQUIRE(single.block_boundaries.size() == 1);

    SequencePrefix both = concat_blocks({b1, b2});
    CHECK(both.size() == b1.elements.size() + b2.elements.size());
    for (std::size_t i = 1; i < both.size(); ++i)
        CHECK(both.elements[i] > both.elements[i - 1]);

    CHECK_THROWS_AS(concat_blocks({b2, b1}), OverlapError);

    // shrinking delta makes the later range collide with the earlier one
    Block lo = block_sample(2, 1, mpz_class(100), 3);   // elements in {300, 400}
    Block clash = block_sample(4, 1, mpz_class(10), 3);  // elements in {50..80}
    CHECK_THROWS_AS(concat_blocks({lo, clash}), OverlapError);
}

TEST_CASE("truncate examples") {
    SequencePrefix s = oracles::prefix_of({mpz_class(2), mpz_class(5),
                                           mpz_class(7), mpz_class(11)});
    SequencePrefix t = truncate(s, 3);
    REQUIRE(t.size() == 3);
    CHECK(t.elements[2] == 7);
    CHECK(truncate(s, 4).elements == s.elements);
    CHECK(truncate(s, 0).size() == 0);
    CHECK_THROWS_AS(truncate(s, 5), InvariantError);
}

TEST_CASE("truncation composes") {
    SplitMix64 rng(55);
    auto elems = oracles::random_set(rng, 30, 100000);
    SequencePrefix s = oracles::prefix_of(elems);
    SequencePrefix a = truncate(truncate(s, 20), 10);
    SequencePrefix b = truncate(s, 10);
    CHECK(a.elements == b.elements);
}

TEST_CASE("control sequences") {
    CHECK(control_sequence(ControlKind::naturals, 1, 4).elements ==
          std::vector<mpz_class>{1, 2, 3, 4});
    CHECK(control_sequence(ControlKind::powers, 2, 3).elements ==
          std::vector<mpz_class>{1, 4, 9});
    CHECK(control_sequence(ControlKind::lacunary, 2, 3).elements ==
          std::vector<mpz_class>{2, 4, 8});
    CHECK_THROWS_AS(control_sequence(ControlKind::lacunary, 1, 3), ConfigError);
}

TEST_CASE("block parameter validation") {
    CHECK_THROWS_AS(block_sample(3, 1, mpz_class(1), 0), InvariantError);
    CHECK_THROWS_AS(block_sample(4, 0, mpz_class(1), 0), InvariantError);
    CHECK_THROWS_AS(block_sample(4, 1, mpz_class(0), 0), InvariantError);
}
