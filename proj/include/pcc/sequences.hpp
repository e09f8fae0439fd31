#pragma once

// Sequence model: Bernoulli-thinned dilated blocks, the three block
// properties, concatenation into a single increasing sequence with
// recorded block boundaries, truncations, and control sequences.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace pcc {

// One block instance: elements are delta*(n_inv + j) for j in (0, n_inv]
// kept by the Bernoulli draw, where n_inv = level * psi_inv.
struct Block {
    unsigned long level = 0;  // N, a power of 2
    long psi_inv = 1;         // 1/psi(N), integer by construction
    mpz_class delta = 1;
    std::vector<mpz_class> elements;
    int attempts = 1;  // sampling attempts consumed by the verified sampler
};

struct BlockCheck {
    bool ok = false;
    int failed_property = 0;  // 1..3, or 0 when ok
    mpz_class witness_d = 0;
    bool property2_vacuous = false;
    std::string message;
};

struct SequencePrefix {
    std::vector<mpz_class> elements;          // strictly increasing
    std::vector<std::size_t> block_boundaries;  // cumulative sizes M_t

    std::size_t size() const { return elements.size(); }
};

// Exactly level*psi_inv Bernoulli(1/psi_inv) draws in index order from the
// seeded generator; deterministic given (level, psi_inv, delta, seed).
Block block_sample(unsigned long level, long psi_inv, const mpz_class& delta,
                   std::uint64_t rng_seed);

// The three properties, checked with exact rational bounds against integer
// overlap counts:
//   1. r(d) <= 2*N*psi       for all d != 0
//   2. r(d) >= N*psi/2       for all 0 < |d| < N/(10*psi)
//   3. N/2 <= |B| <= 2N
// where r(d) = |B intersect (B + delta*d)|. Property 2 is vacuous (and
// flagged) when its range contains no integer.
BlockCheck block_verify(const Block& b);

// Resamples with sub-seeds derived from (seed, level, attempt) until
// block_verify passes; throws RetriesExhausted after max_retries failures.
Block block_sample_verified(unsigned long level, long psi_inv,
                            const mpz_class& delta, std::uint64_t seed,
                            int max_retries = 1000);

// Blocks must be ordered by level with strictly increasing element ranges;
// throws OverlapError otherwise.
SequencePrefix concat_blocks(const std::vector<Block>& blocks);

// First n elements; boundaries clipped. Rejects n > size.
SequencePrefix truncate(const SequencePrefix& s, std::size_t n);

enum class ControlKind { naturals, powers, lacunary };

// naturals: 1..n; powers(k): j^k; lacunary(q): q^j (j starting at 1).
SequencePrefix control_sequence(ControlKind kind, unsigned long param,
                                std::size_t n);

}  // namespace pcc
