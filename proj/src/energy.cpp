#include "pcc/energy.hpp"

#include "pcc/errors.hpp"
#include "pcc/sequences.hpp"

namespace pcc {

unsigned long RepresentationProfile::r(const mpz_class& h) const {
    if (h == 0) return set_size;
    mpz_class key = h < 0 ? mpz_class(-h) : h;
    auto it = positive.find(key);
    return it == positive.end() ? 0 : it->second;
}

mpz_class RepresentationProfile::total() const {
    mpz_class t(set_size);
    for (const auto& [h, c] : positive) t += 2 * mpz_class(c);
    return t;
}

RepresentationProfile representation_profile(const std::vector<mpz_class>& elems) {
    for (std::size_t i = 1; i < elems.size(); ++i)
        if (elems[i] <= elems[i - 1])
            throw InvariantError("representation_profile: elements must be sorted and distinct");

    RepresentationProfile p;
    p.set_size = elems.size();
    for (std::size_t j = 1; j < elems.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) p.positive[elems[j] - elems[i]]++;

    // r(h) <= |A| and sum_h r(h) = |A|^2, checked on every build.
    mpz_class n(static_cast<unsigned long>(p.set_size));
    for (const auto& [h, c] : p.positive)
        if (mpz_class(c) > n)
            throw InvariantError("representation_profile: r(h) exceeds |A|");
    if (p.total() != n * n)
        throw InvariantError("representation_profile: counts do not sum to |A|^2");
    return p;
}

mpz_class energy_of_profile(const RepresentationProfile& p) {
    mpz_class n(static_cast<unsigned long>(p.set_size));
    mpz_class e = n * n;
    for (const auto& [h, c] : p.positive) {
        mpz_class cc(c);
        e += 2 * cc * cc;
    }
    if (p.set_size > 0 && (e < n * n || e > n * n * n))
        throw InvariantError("additive energy outside [|A|^2, |A|^3]");
    return e;
}

mpz_class additive_energy(const std::vector<mpz_class>& elems) {
    return energy_of_profile(representation_profile(elems));
}

mpz_class block_energy(const Block& b) {
    std::vector<mpz_class> reduced;
    reduced.reserve(b.elements.size());
    for (const auto& e : b.elements) {
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(),
                    b.delta.get_mpz_t());
        if (r != 0)
            throw InvariantError("block_energy: element not divisible by delta");
        reduced.push_back(q);
    }
    return additive_energy(reduced);
}

void write_profile_csv(std::ostream& os, const RepresentationProfile& p) {
    os << "h,r\n";
    for (auto it = p.positive.rbegin(); it != p.positive.rend(); ++it)
        os << "-" << it->first.get_str() << "," << it->second << "\n";
    if (p.set_size > 0) os << "0," << p.set_size << "\n";
    for (const auto& [h, c] : p.positive) os << h.get_str() << "," << c << "\n";
}

}  // namespace pcc
