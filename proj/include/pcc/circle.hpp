#pragma once

// Exact arithmetic on the torus R/Z: canonical representatives in [0,1),
// distance to the nearest integer, and the window indicator used by the
// pair-correlation statistic. No rounding anywhere in this module.

#include <gmpxx.h>

#include <compare>
#include <string>

#include "pcc/rat.hpp"

namespace pcc {

// A point of [0,1), stored in lowest terms.
class CircleScalar {
  public:
    CircleScalar() : v_(0) {}
    explicit CircleScalar(const mpq_class& x) : v_(frac1(canon(x))) {}

    const mpq_class& value() const { return v_; }
    std::string str() const { return rat_str(v_); }

    friend bool operator==(const CircleScalar& a, const CircleScalar& b) {
        return a.v_ == b.v_;
    }

  private:
    mpq_class v_;
};

// min over n in Z of |x - n|; always in [0, 1/2].
struct CircleDistance {
    mpq_class value;
    auto operator<=>(const CircleDistance& o) const {
        return cmp(value, o.value) <=> 0;
    }
    bool operator==(const CircleDistance& o) const { return value == o.value; }
};

CircleScalar reduce_mod1(const mpq_class& x);
CircleDistance circle_norm(const mpq_class& x);

// True iff ||d * alpha|| <= eps (closed condition; boundary points count).
// Rejects d = 0.
bool indicator_d_eps(const CircleScalar& alpha, const mpz_class& d,
                     const mpq_class& eps);

}  // namespace pcc
