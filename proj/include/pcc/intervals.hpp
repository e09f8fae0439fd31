#pragma once

// Finite unions of closed intervals on the torus with exact rational
// endpoints: canonicalization, measure, intersection, union, and the
// preimage under the times-k map. All measures are exact.
//
// Canonical form: parts sorted by lo, pairwise disjoint, touching parts
// merged. At most one part wraps through 0 (hi < lo); it sorts last. The
// full torus is the single part [0,1].

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "pcc/rat.hpp"

namespace pcc {

struct Interval {
    mpq_class lo, hi;
    bool wraps() const { return hi < lo; }
    mpq_class length() const {
        return wraps() ? mpq_class((1 - lo) + hi) : mpq_class(hi - lo);
    }
};

class IntervalSet {
  public:
    IntervalSet() = default;

    // Accepts arbitrary rational pairs. (lo, hi) with lo <= hi is the
    // projection of the segment [lo, hi] to the torus (length >= 1 fills
    // it); lo > hi is a wrap [lo,1] u [0,hi] after reduction mod 1.
    static IntervalSet from_raw(
        const std::vector<std::pair<mpq_class, mpq_class>>& raw);
    static IntervalSet full_torus();

    bool empty() const { return parts_.empty(); }
    bool is_full() const;
    std::size_t size() const { return parts_.size(); }
    const std::vector<Interval>& parts() const { return parts_; }

    mpq_class measure() const;
    bool contains(const mpq_class& x) const;  // x reduced mod 1

    IntervalSet intersect(const IntervalSet& o) const;
    IntervalSet unite(const IntervalSet& o) const;

    // {alpha : k*alpha mod 1 in this}; k >= 1. Preserves measure exactly.
    IntervalSet dilate_preimage(const mpz_class& k) const;

    // Parts with the wrap split at 0: every piece has 0 <= lo <= hi <= 1.
    std::vector<Interval> split_parts() const;

    // Endpoint pairs in canonical lowest-terms strings, for ledgers.
    std::vector<std::pair<std::string, std::string>> endpoint_strings() const;

  private:
    static IntervalSet canonicalize(std::vector<Interval> pieces);
    std::vector<Interval> parts_;
};

// Piecewise-linear CDF of a set: cdf(x) = measure(s intersect [0,x]).
class IntervalCdf {
  public:
    explicit IntervalCdf(const IntervalSet& s);
    mpq_class operator()(const mpq_class& x) const;  // 0 <= x <= 1
    const mpq_class& total() const { return total_; }

    // Measure of {beta in [0,x] : beta mod 1 in s} for any x >= 0.
    mpq_class lifted(const mpq_class& x) const;

  private:
    std::vector<mpq_class> lo_, hi_, prefix_;
    mpq_class total_;
};

// Exact measure of T_k^{-1}(a) intersect b, where T_k is the times-k map,
// without materializing the k-fold preimage. This is what makes the
// quasi-independence certificates tractable for astronomically large k.
mpq_class dilated_intersection_measure(const IntervalSet& a,
                                       const mpz_class& k,
                                       const IntervalSet& b);

}  // namespace pcc
