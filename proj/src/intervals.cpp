#include "pcc/intervals.hpp"

#include <algorithm>

#include "pcc/errors.hpp"

namespace pcc {

namespace {

// Guard for materializing operations (dilate_preimage); the schedule path
// never materializes, see dilated_intersection_measure.
constexpr unsigned long kMaterializeGuard = 10'000'000UL;

}  // namespace

IntervalSet IntervalSet::full_torus() {
    IntervalSet s;
    s.parts_ = {Interval{mpq_class(0), mpq_class(1)}};
    return s;
}

bool IntervalSet::is_full() const {
    return parts_.size() == 1 && parts_[0].lo == 0 && parts_[0].hi == 1;
}

IntervalSet IntervalSet::from_raw(
    const std::vector<std::pair<mpq_class, mpq_class>>& raw) {
    std::vector<Interval> pieces;
    pieces.reserve(raw.size() + 4);
    for (const auto& [lo_raw, hi_raw] : raw) {
        mpq_class lo = canon(lo_raw), hi = canon(hi_raw);
        if (lo <= hi) {
            mpq_class len = hi - lo;
            if (len >= 1) return full_torus();
            mpq_class base = frac1(lo);
            mpq_class top = base + len;
            if (top <= 1) {
                pieces.push_back({base, top});
            } else {
                pieces.push_back({base, mpq_class(1)});
                pieces.push_back({mpq_class(0), top - 1});
            }
        } else {
            // wrap given directly as (lo, hi) with lo > hi
            mpq_class l = frac1(lo), h = frac1(hi);
            if (l <= h) {
                pieces.push_back({l, h});
            } else {
                pieces.push_back({l, mpq_class(1)});
                pieces.push_back({mpq_class(0), h});
            }
        }
    }
    return canonicalize(std::move(pieces));
}

IntervalSet IntervalSet::canonicalize(std::vector<Interval> pieces) {
    IntervalSet out;
    if (pieces.empty()) return out;

    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
        int c = cmp(a.lo, b.lo);
        if (c != 0) return c < 0;
        return cmp(a.hi, b.hi) < 0;
    });

    std::vector<Interval> merged;
    merged.push_back(pieces[0]);
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        Interval& cur = merged.back();
        if (pieces[i].lo <= cur.hi) {
            if (pieces[i].hi > cur.hi) cur.hi = pieces[i].hi;
        } else {
            merged.push_back(pieces[i]);
        }
    }

    // Reassemble a wrap: a part ending at 1 and a part starting at 0 are
    // the same point of the torus.
    if (merged.size() >= 2 && merged.front().lo == 0 && merged.back().hi == 1) {
        Interval wrap{merged.back().lo, merged.front().hi};
        merged.erase(merged.begin());
        merged.pop_back();
        merged.push_back(wrap);  // max lo, stays sorted
    }

    out.parts_ = std::move(merged);
    return out;
}

mpq_class IntervalSet::measure() const {
    mpq_class m(0);
    for (const auto& p : parts_) m += p.length();
    return m;
}

std::vector<Interval> IntervalSet::split_parts() const {
    std::vector<Interval> out;
    out.reserve(parts_.size() + 1);
    for (const auto& p : parts_) {
        if (p.wraps()) {
            out.push_back({mpq_class(0), p.hi});
            out.push_back({p.lo, mpq_class(1)});
        } else {
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
        return cmp(a.lo, b.lo) < 0;
    });
    return out;
}

bool IntervalSet::contains(const mpq_class& x) const {
    if (parts_.empty()) return false;
    mpq_class v = frac1(x);
    // parts_ sorted by lo; candidate is the last part with lo <= v.
    auto it = std::upper_bound(
        parts_.begin(), parts_.end(), v,
        [](const mpq_class& val, const Interval& p) { return cmp(val, p.lo) < 0; });
    if (it != parts_.begin()) {
        const Interval& p = *std::prev(it);
        if (p.wraps() ? v >= p.lo : v <= p.hi) return true;
    }
    // v may still land in the tail of a wrap (v < lo of every part), or on
    // the shared endpoint 0 == 1.
    if (parts_.back().wraps() && v <= parts_.back().hi) return true;
    if (v == 0 && parts_.back().hi == 1) return true;
    return false;
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
    if (empty() || o.empty()) return IntervalSet();
    if (is_full()) return o;
    if (o.is_full()) return *this;
    std::vector<Interval> a = split_parts(), b = o.split_parts();
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        mpq_class lo = std::max(a[i].lo, b[j].lo);
        mpq_class hi = std::min(a[i].hi, b[j].hi);
        if (lo <= hi) out.push_back({lo, hi});  // may be a single point
        if (a[i].hi < b[j].hi)
            ++i;
        else
            ++j;
    }
    return canonicalize(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
    if (is_full() || o.is_full()) return full_torus();
    std::vector<Interval> all = split_parts();
    std::vector<Interval> b = o.split_parts();
    all.insert(all.end(), b.begin(), b.end());
    return canonicalize(std::move(all));
}

IntervalSet IntervalSet::dilate_preimage(const mpz_class& k) const {
    if (k < 1) throw InvariantError("dilate_preimage: k must be >= 1");
    if (empty() || is_full() || k == 1) return *this;
    std::vector<Interval> pieces = split_parts();
    mpz_class count = k * mpz_class(pieces.size());
    if (count > kMaterializeGuard)
        throw GuardError("dilate_preimage: " + count.get_str() +
                         " intervals exceeds materialization guard " +
                         std::to_string(kMaterializeGuard));
    unsigned long ku = mpz_get_ui(k.get_mpz_t());
    std::vector<Interval> out;
    out.reserve(pieces.size() * ku);
    mpq_class kq(k);
    for (unsigned long j = 0; j < ku; ++j) {
        for (const auto& p : pieces)
            out.push_back({(j + p.lo) / kq, (j + p.hi) / kq});
    }
    return canonicalize(std::move(out));
}

std::vector<std::pair<std::string, std::string>> IntervalSet::endpoint_strings()
    const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.emplace_back(rat_str(p.lo), rat_str(p.hi));
    return out;
}

IntervalCdf::IntervalCdf(const IntervalSet& s) : total_(0) {
    for (const auto& p : s.split_parts()) {
        lo_.push_back(p.lo);
        hi_.push_back(p.hi);
        prefix_.push_back(total_);
        total_ += p.hi - p.lo;
    }
}

mpq_class IntervalCdf::operator()(const mpq_class& x) const {
    // Largest i with lo_[i] <= x; pieces before it are fully counted.
    auto it = std::upper_bound(lo_.begin(), lo_.end(), x,
                               [](const mpq_class& v, const mpq_class& l) {
                                   return cmp(v, l) < 0;
                               });
    if (it == lo_.begin()) return mpq_class(0);
    std::size_t i = static_cast<std::size_t>(it - lo_.begin()) - 1;
    mpq_class partial = std::min(x, hi_[i]) - lo_[i];
    return prefix_[i] + partial;
}

mpq_class IntervalCdf::lifted(const mpq_class& x) const {
    mpz_class whole = floor_q(x);
    return mpq_class(whole) * total_ + (*this)(x - mpq_class(whole));
}

mpq_class dilated_intersection_measure(const IntervalSet& a, const mpz_class& k,
                                       const IntervalSet& b) {
    if (k < 1)
        throw InvariantError("dilated_intersection_measure: k must be >= 1");
    if (a.empty() || b.empty()) return mpq_class(0);
    IntervalCdf cdf(a);
    mpq_class kq(k);
    mpq_class acc(0);
    // For each piece [u,v] of b, the preimage points are those alpha whose
    // image k*alpha lands in a copy of a inside [ku, kv].
    for (const auto& p : b.split_parts())
        acc += cdf.lifted(kq * p.hi) - cdf.lifted(kq * p.lo);
    return acc / kq;
}

}  // namespace pcc
