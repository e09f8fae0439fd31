#pragma once

// Deterministic seeded randomness. splitmix64 is used both as the stream
// generator and as the mixing function for derived sub-seeds, so runs are
// reproducible across platforms and thread counts.

#include <gmpxx.h>

#include <cstdint>

#include "pcc/rat.hpp"

namespace pcc {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sub-seed for (tag, index) pairs, e.g. (seed, N, attempt).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0) {
    return mix64(mix64(mix64(seed) ^ a) ^ b);
}

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // P(true) = 1/m up to a modulo bias below 2^-60 for the m used here.
    bool bernoulli_one_in(std::uint64_t m) { return next() % m == 0; }

    // Uniform rational in [0,1) with denominator 2^64.
    mpq_class unit_rational() {
        mpz_class den = pow_z(2, 64);
        mpz_class num(0);
        std::uint64_t u = next();
        mpz_import(num.get_mpz_t(), 1, 1, sizeof u, 0, 0, &u);
        return make_q(num, den);
    }

    // Roughly uniform integer in [0, bound); bias is negligible because we
    // draw 64 extra bits beyond the size of bound.
    mpz_class below(const mpz_class& bound) {
        size_t words = mpz_sizeinbase(bound.get_mpz_t(), 2) / 64 + 2;
        mpz_class acc(0);
        for (size_t i = 0; i < words; ++i) {
            acc <<= 64;
            std::uint64_t u = next();
            mpz_class w(0);
            mpz_import(w.get_mpz_t(), 1, 1, sizeof u, 0, 0, &u);
            acc += w;
        }
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), acc.get_mpz_t(), bound.get_mpz_t());
        return r;
    }
};

}  // namespace pcc
