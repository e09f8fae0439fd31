#pragma once

// The pair-correlation statistic
//   F(alpha, s, N, A) = (1/N) * #{(a,b) in A_N^2, a != b : ||alpha(a-b)|| <= s/N}
// in both the definitional form and the difference-grouped form
//   F = (1/N) * sum_{d != 0} r(d) * [||d*alpha|| <= s/N],
// both exact. The two must agree on the same data.

#include <gmpxx.h>

#include "pcc/circle.hpp"
#include "pcc/energy.hpp"
#include "pcc/sequences.hpp"

namespace pcc {

struct PairCorrResult {
    mpq_class value;             // contributing_pairs / n
    mpz_class contributing_pairs;  // ordered pairs inside the window
    CircleScalar alpha;
    mpq_class s;
    std::size_t n = 0;
};

// Definitional form. Counts pairs over sorted residues of alpha*a mod 1
// (all of which share alpha's denominator), O(N log N); requires N >= 2.
PairCorrResult pair_corr_direct(const CircleScalar& alpha, const mpq_class& s,
                                const SequencePrefix& a);

// Difference-grouped form over a representation profile of a set of size n.
PairCorrResult pair_corr_by_differences(const CircleScalar& alpha,
                                        const mpq_class& s,
                                        const RepresentationProfile& profile,
                                        std::size_t n);

// F(alpha, s, N, delta*A) = F(delta*alpha mod 1, s, N, A), exactly.
bool dilation_transport_check(const CircleScalar& alpha, const mpq_class& s,
                              const SequencePrefix& a, const mpz_class& delta);

}  // namespace pcc
