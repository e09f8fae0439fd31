#include "pcc/paircorr.hpp"

#include <algorithm>

#include "pcc/errors.hpp"

namespace pcc {

namespace {

void require_window(const mpq_class& s, std::size_t n) {
    if (sgn(s) < 0) throw InvariantError("pair correlation: s must be >= 0");
    if (n < 2) throw InvariantError("pair correlation: need N >= 2");
}

// Ordered pairs with circular min-distance <= w over sorted residues,
// assuming w < q/2. Decomposes into equal-residue pairs (distance 0, both
// orderings) plus strict forward pairs: for distinct values exactly one
// ordering has forward difference in (0, w], so each unordered close pair
// is seen once in the doubled-array window scan.
mpz_class pairs_within_window(const std::vector<mpz_class>& res,
                              const mpz_class& q, const mpz_class& w) {
    const std::size_t n = res.size();
    std::vector<mpz_class> doubled(res);
    doubled.reserve(2 * n);
    for (const auto& r : res) doubled.push_back(r + q);

    mpz_class forward(0);
    for (std::size_t i = 0; i < n; ++i) {
        auto lo = std::upper_bound(doubled.begin(), doubled.end(), res[i]);
        auto hi = std::upper_bound(doubled.begin(), doubled.end(), res[i] + w);
        forward += static_cast<unsigned long>(hi - lo);
    }

    mpz_class equal_ordered(0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && res[j] == res[i]) ++j;
        mpz_class c(static_cast<unsigned long>(j - i));
        equal_ordered += c * (c - 1);
        i = j;
    }
    return 2 * forward + equal_ordered;
}

}  // namespace

PairCorrResult pair_corr_direct(const CircleScalar& alpha, const mpq_class& s,
                                const SequencePrefix& a) {
    const std::size_t n = a.size();
    require_window(s, n);

    PairCorrResult out;
    out.alpha = alpha;
    out.s = s;
    out.n = n;

    mpz_class nz(static_cast<unsigned long>(n));
    // ||x|| <= 1/2 always, so s/N >= 1/2 admits every pair.
    if (2 * s >= mpq_class(nz)) {
        out.contributing_pairs = nz * (nz - 1);
        out.value = make_q(out.contributing_pairs, nz);
        return out;
    }

    const mpz_class& p = alpha.value().get_num();
    const mpz_class& q = alpha.value().get_den();

    std::vector<mpz_class> res;
    res.reserve(n);
    for (const auto& e : a.elements) {
        mpz_class r;
        mpz_class prod = p * e;
        mpz_fdiv_r(r.get_mpz_t(), prod.get_mpz_t(), q.get_mpz_t());
        res.push_back(r);
    }
    std::sort(res.begin(), res.end());

    // ||(r_i - r_j)/q|| <= s/n  <=>  m <= w or m >= q - w, m = (r_i-r_j) mod q,
    // with w = floor(s*q/n); w < q/2 here because s/n < 1/2 was handled above.
    mpz_class w = floor_q(s * mpq_class(q) / mpq_class(nz));
    out.contributing_pairs = pairs_within_window(res, q, w);
    out.value = make_q(out.contributing_pairs, nz);
    return out;
}

PairCorrResult pair_corr_by_differences(const CircleScalar& alpha,
                                        const mpq_class& s,
                                        const RepresentationProfile& profile,
                                        std::size_t n) {
    require_window(s, n);
    if (profile.set_size != n)
        throw InvariantError("pair_corr_by_differences: profile size mismatch");

    PairCorrResult out;
    out.alpha = alpha;
    out.s = s;
    out.n = n;

    mpz_class nz(static_cast<unsigned long>(n));
    mpq_class eps = s / mpq_class(nz);
    mpz_class pairs(0);
    for (const auto& [d, c] : profile.positive)
        if (indicator_d_eps(alpha, d, eps)) pairs += 2 * mpz_class(c);
    out.contributing_pairs = pairs;
    out.value = make_q(pairs, nz);
    return out;
}

bool dilation_transport_check(const CircleScalar& alpha, const mpq_class& s,
                              const SequencePrefix& a, const mpz_class& delta) {
    if (delta < 1) throw InvariantError("dilation_transport_check: delta >= 1");
    SequencePrefix scaled;
    scaled.block_boundaries = a.block_boundaries;
    scaled.elements.reserve(a.size());
    for (const auto& e : a.elements) scaled.elements.push_back(delta * e);

    PairCorrResult lhs = pair_corr_direct(alpha, s, scaled);
    CircleScalar pulled = reduce_mod1(mpq_class(delta) * alpha.value());
    PairCorrResult rhs = pair_corr_direct(pulled, s, a);
    return lhs.value == rhs.value &&
           lhs.contributing_pairs == rhs.contributing_pairs;
}

}  // namespace pcc
