#pragma once

// Exact additive energy E(A) = #{(a,b,c,d) in A^4 : a+b = c+d} and the
// difference representation counts r(h) = |A intersect (A+h)| it factors
// through: E(A) = sum_h r(h)^2 (h = 0 included).

#include <gmpxx.h>

#include <map>
#include <ostream>
#include <vector>

namespace pcc {

struct Block;

// r(0) = |A| is implicit; positive lags carry the rest by symmetry.
struct RepresentationProfile {
    std::size_t set_size = 0;
    std::map<mpz_class, unsigned long> positive;

    unsigned long r(const mpz_class& h) const;
    mpz_class total() const;  // sum over all h, equals |A|^2
};

// Pairwise difference accumulation, O(|A|^2); elements must be sorted and
// distinct. Magnitudes are arbitrary (big-integer keys), which is the
// point: dilated blocks are astronomically sparse.
RepresentationProfile representation_profile(const std::vector<mpz_class>& elems);

mpz_class energy_of_profile(const RepresentationProfile& p);
mpz_class additive_energy(const std::vector<mpz_class>& elems);

// E(B) computed over the block's reduced representatives (elements / delta);
// equal to additive_energy(b.elements) by dilation invariance.
mpz_class block_energy(const Block& b);

// CSV export: header "h,r", rows in ascending h over the full signed support.
void write_profile_csv(std::ostream& os, const RepresentationProfile& p);

}  // namespace pcc
