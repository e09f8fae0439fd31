#include "pcc/sequences.hpp"

#include <bit>
#include <map>

#include "pcc/errors.hpp"
#include "pcc/rng.hpp"

namespace pcc {

namespace {

void require_block_params(unsigned long level, long psi_inv,
                          const mpz_class& delta) {
    if (level == 0 || !std::has_single_bit(level))
        throw InvariantError("block: level must be a power of 2");
    if (psi_inv < 1) throw InvariantError("block: psi_inv must be >= 1");
    if (delta < 1) throw InvariantError("block: delta must be >= 1");
    if (level > (1UL << 40) / static_cast<unsigned long>(psi_inv))
        throw GuardError("block: level * psi_inv exceeds index guard");
}

}  // namespace

Block block_sample(unsigned long level, long psi_inv, const mpz_class& delta,
                   std::uint64_t rng_seed) {
    require_block_params(level, psi_inv, delta);
    Block b;
    b.level = level;
    b.psi_inv = psi_inv;
    b.delta = delta;

    const unsigned long n_inv = level * static_cast<unsigned long>(psi_inv);
    SplitMix64 rng(rng_seed);
    for (unsigned long j = 1; j <= n_inv; ++j) {
        bool keep = rng.bernoulli_one_in(static_cast<std::uint64_t>(psi_inv));
        if (keep) b.elements.push_back(delta * mpz_class(n_inv + j));
    }
    return b;
}

BlockCheck block_verify(const Block& b) {
    BlockCheck out;
    const unsigned long n = b.level;
    const long p = b.psi_inv;
    const unsigned long n_inv = n * static_cast<unsigned long>(p);

    // Reduced representatives in (n_inv, 2*n_inv]; overlap counts at lag
    // delta*d equal difference counts of the representatives at lag d.
    std::vector<unsigned long> idx;
    idx.reserve(b.elements.size());
    for (const auto& e : b.elements) {
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), b.delta.get_mpz_t());
        if (r != 0) {
            out.failed_property = 1;
            out.message = "element not divisible by delta";
            return out;
        }
        if (!q.fits_ulong_p()) {
            out.failed_property = 1;
            out.message = "reduced element out of range";
            return out;
        }
        unsigned long v = q.get_ui();
        if (v <= n_inv || v > 2 * n_inv) {
            out.failed_property = 1;
            out.message = "reduced element outside (N/psi, 2N/psi]";
            return out;
        }
        if (!idx.empty() && v <= idx.back()) {
            out.failed_property = 1;
            out.message = "elements not strictly increasing";
            return out;
        }
        idx.push_back(v);
    }

    const unsigned long size = idx.size();

    // Property 3: N/2 <= |B| <= 2N.
    if (2 * size < n || size > 2 * n) {
        out.failed_property = 3;
        out.message = "size " + std::to_string(size) + " outside [N/2, 2N]";
        return out;
    }

    std::map<unsigned long, unsigned long> lag_counts;
    for (std::size_t j = 1; j < size; ++j)
        for (std::size_t i = 0; i < j; ++i) lag_counts[idx[j] - idx[i]]++;

    // Property 1: r(d)*psi_inv <= 2N for every d != 0 (counts vanish
    // beyond the support width, so positive lags cover everything).
    for (const auto& [d, c] : lag_counts) {
        if (c * static_cast<unsigned long>(p) > 2 * n) {
            out.failed_property = 1;
            out.witness_d = d;
            out.message = "overlap " + std::to_string(c) + " at d=" +
                          std::to_string(d) + " exceeds 2N*psi";
            return out;
        }
    }

    // Property 2: 2*psi_inv*r(d) >= N for 0 < d < N*psi_inv/10, i.e.
    // 10*d < n_inv. Vacuous when that range has no integer.
    const unsigned long d_hi = (n_inv > 10) ? (n_inv - 1) / 10 : 0;
    out.property2_vacuous = (d_hi == 0);
    for (unsigned long d = 1; d <= d_hi; ++d) {
        unsigned long c = lag_counts.count(d) ? lag_counts[d] : 0;
        if (2 * c * static_cast<unsigned long>(p) < n) {
            out.failed_property = 2;
            out.witness_d = d;
            out.message = "overlap " + std::to_string(c) + " at d=" +
                          std::to_string(d) + " below N*psi/2";
            return out;
        }
    }

    out.ok = true;
    return out;
}

Block block_sample_verified(unsigned long level, long psi_inv,
                            const mpz_class& delta, std::uint64_t seed,
                            int max_retries) {
    if (max_retries < 1)
        throw InvariantError("block_sample_verified: max_retries must be >= 1");
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        std::uint64_t sub = derive_seed(seed, level, static_cast<std::uint64_t>(attempt));
        Block b = block_sample(level, psi_inv, delta, sub);
        if (block_verify(b).ok) {
            b.attempts = attempt;
            return b;
        }
    }
    throw RetriesExhausted("block_sample_verified: no verified block at level " +
                           std::to_string(level) + " within " +
                           std::to_string(max_retries) + " attempts");
}

SequencePrefix concat_blocks(const std::vector<Block>& blocks) {
    SequencePrefix s;
    unsigned long prev_level = 0;
    for (const auto& b : blocks) {
        if (b.level <= prev_level)
            throw OverlapError("concat_blocks: blocks out of order");
        prev_level = b.level;
        if (!b.elements.empty() && !s.elements.empty() &&
            b.elements.front() <= s.elements.back())
            throw OverlapError("concat_blocks: element ranges intersect at level " +
                               std::to_string(b.level));
        s.elements.insert(s.elements.end(), b.elements.begin(), b.elements.end());
        s.block_boundaries.push_back(s.elements.size());
    }
    return s;
}

SequencePrefix truncate(const SequencePrefix& s, std::size_t n) {
    if (n > s.elements.size())
        throw InvariantError("truncate: n exceeds sequence size");
    SequencePrefix out;
    out.elements.assign(s.elements.begin(), s.elements.begin() + n);
    for (std::size_t b : s.block_boundaries)
        if (b <= n) out.block_boundaries.push_back(b);
    return out;
}

SequencePrefix control_sequence(ControlKind kind, unsigned long param,
                                std::size_t n) {
    SequencePrefix s;
    s.elements.reserve(n);
    switch (kind) {
        case ControlKind::naturals:
            for (std::size_t j = 1; j <= n; ++j) s.elements.push_back(mpz_class(j));
            break;
        case ControlKind::powers: {
            if (param < 1) throw ConfigError("powers control: k must be >= 1");
            for (std::size_t j = 1; j <= n; ++j)
                s.elements.push_back(pow_z(mpz_class(j), param));
            break;
        }
        case ControlKind::lacunary: {
            if (param < 2) throw ConfigError("lacunary control: q must be >= 2");
            mpz_class v(1);
            for (std::size_t j = 1; j <= n; ++j) {
                v *= param;
                s.elements.push_back(v);
            }
            break;
        }
    }
    s.block_boundaries.push_back(s.elements.size());
    return s;
}

}  // namespace pcc
