#pragma once

// Test-only oracles, kept independent of the library's production paths:
// brute-force quadruple counting for energy, naive pair counting for the
// correlation statistic, and a common-denominator grid for interval-set
// measure. Deliberately slow and simple.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "pcc/circle.hpp"
#include "pcc/intervals.hpp"
#include "pcc/rng.hpp"
#include "pcc/sequences.hpp"

namespace oracles {

// E(A) counted literally over all quadruples (a,b,c,d) with a+b = c+d.
inline mpz_class energy_brute_force(const std::vector<mpz_class>& a) {
    mpz_class count(0);
    for (const auto& x : a)
        for (const auto& y : a)
            for (const auto& z : a)
                for (const auto& w : a)
                    if (x + y == z + w) ++count;
    return count;
}

// F * N counted literally over ordered pairs.
inline mpz_class pair_count_brute_force(const pcc::CircleScalar& alpha,
                                        const mpq_class& s,
                                        const std::vector<mpz_class>& a) {
    const std::size_t n = a.size();
    mpq_class eps = s / mpq_class(static_cast<unsigned long>(n));
    mpz_class count(0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            mpq_class x = alpha.value() * mpq_class(a[i] - a[j]);
            if (pcc::circle_norm(x).value <= eps) ++count;
        }
    return count;
}

// Exact measure of an interval union by counting cells of the common
// 1/L grid spanned by all endpoints. Independent of the sweep/merge code.
inline mpq_class measure_by_grid(const pcc::IntervalSet& s) {
    mpz_class lcm(1);
    for (const auto& p : s.split_parts()) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.lo.get_den_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.hi.get_den_mpz_t());
    }
    if (!lcm.fits_ulong_p() || lcm.get_ui() > 200'000'000UL)
        throw std::runtime_error("grid oracle: denominator LCM too large");
    unsigned long L = lcm.get_ui();
    std::vector<bool> cell(L, false);
    for (const auto& p : s.split_parts()) {
        // [lo, hi] covers cells [lo*L, hi*L) of width 1/L exactly.
        unsigned long a = mpz_class(p.lo * static_cast<unsigned long>(L)).get_ui();
        unsigned long b = mpz_class(p.hi * static_cast<unsigned long>(L)).get_ui();
        for (unsigned long c = a; c < b; ++c) cell[c] = true;
    }
    unsigned long covered = 0;
    for (bool c : cell) covered += c;
    return pcc::make_q(covered, L);
}

// Random helpers, all deterministic from the given generator.

inline mpq_class random_rational(pcc::SplitMix64& rng, unsigned long max_den) {
    unsigned long q = 1 + rng.next() % max_den;
    unsigned long p = rng.next() % (10 * max_den);
    mpq_class r = pcc::make_q(p, q);
    if (rng.next() % 2) r = -r;
    return r;
}

inline pcc::CircleScalar random_alpha(pcc::SplitMix64& rng,
                                      unsigned long max_den = 1'000'000UL) {
    unsigned long q = 1 + rng.next() % max_den;
    unsigned long p = rng.next() % q;
    return pcc::CircleScalar(pcc::make_q(p, q));
}

inline std::vector<mpz_class> random_set(pcc::SplitMix64& rng, std::size_t size,
                                         std::uint64_t max_value) {
    std::set<mpz_class> vals;
    while (vals.size() < size)
        vals.insert(mpz_class(1 + rng.next() % max_value));
    return {vals.begin(), vals.end()};
}

inline pcc::SequencePrefix prefix_of(std::vector<mpz_class> elems) {
    pcc::SequencePrefix s;
    s.elements = std::move(elems);
    s.block_boundaries.push_back(s.elements.size());
    return s;
}

inline pcc::IntervalSet random_interval_set(pcc::SplitMix64& rng, int max_parts,
                                            unsigned long max_den = 64) {
    std::vector<std::pair<mpq_class, mpq_class>> raw;
    int parts = 1 + static_cast<int>(rng.next() % max_parts);
    for (int i = 0; i < parts; ++i) {
        unsigned long q1 = 2 + rng.next() % max_den;
        unsigned long q2 = 2 + rng.next() % max_den;
        mpq_class lo = pcc::make_q(rng.next() % q1, q1);
        mpq_class len = pcc::make_q(rng.next() % q2, 4 * q2);
        raw.emplace_back(lo, lo + len);
    }
    return pcc::IntervalSet::from_raw(raw);
}

}  // namespace oracles
