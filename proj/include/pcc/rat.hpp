#pragma once

// Exact rational helpers on top of GMP's C++ interface. Everything that
// touches the circle or a measure is an mpq_class; doubles appear only in
// display formatting and in the log-family density rounding (where the
// value is immediately quantized to an integer).

#include <gmpxx.h>

#include <cstdio>
#include <optional>
#include <string>

#include "pcc/errors.hpp"

namespace pcc {

inline mpz_class floor_q(const mpq_class& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

inline mpz_class ceil_q(const mpq_class& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

// Round half up; callers only pass x >= 0.
inline mpz_class round_half_up(const mpq_class& x) {
    return floor_q(x + mpq_class(1, 2));
}

// Fractional part in [0,1).
inline mpq_class frac1(const mpq_class& x) {
    return x - mpq_class(floor_q(x));
}

inline mpq_class make_q(const mpz_class& num, const mpz_class& den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

// GMP arithmetic assumes canonical operands; use this on rationals that
// arrive from outside the library.
inline mpq_class canon(const mpq_class& x) {
    mpq_class c(x);
    c.canonicalize();
    return c;
}

// Exact square root of a rational, if it is the square of a rational.
inline std::optional<mpq_class> exact_sqrt(const mpq_class& x) {
    if (sgn(x) < 0) return std::nullopt;
    if (!mpz_perfect_square_p(x.get_num_mpz_t()) ||
        !mpz_perfect_square_p(x.get_den_mpz_t()))
        return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
    return make_q(n, d);
}

// Parse "p/q" or "p" (decimal, optional sign). Throws ConfigError.
inline mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw ConfigError("empty rational literal");
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw ConfigError("bad rational literal: '" + s + "'");
    if (sgn(mpq_class(q.get_den())) <= 0)
        throw ConfigError("nonpositive denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

// Canonical lowest-terms string; integers print without the denominator.
inline std::string rat_str(const mpq_class& x) { return x.get_str(); }

// Display-only decimal rendering.
inline std::string dec_str(const mpq_class& x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", mpq_get_d(x.get_mpq_t()));
    return buf;
}

inline mpz_class pow_z(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

}  // namespace pcc
