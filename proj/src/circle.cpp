#include "pcc/circle.hpp"

#include "pcc/errors.hpp"

namespace pcc {

CircleScalar reduce_mod1(const mpq_class& x) { return CircleScalar(x); }

CircleDistance circle_norm(const mpq_class& x) {
    mpq_class f = frac1(canon(x));
    mpq_class other = 1 - f;
    return CircleDistance{f <= other ? f : other};
}

bool indicator_d_eps(const CircleScalar& alpha, const mpz_class& d,
                     const mpq_class& eps) {
    if (d == 0) throw InvariantError("indicator_d_eps: d must be nonzero");
    if (sgn(eps) < 0) throw InvariantError("indicator_d_eps: eps must be >= 0");
    return circle_norm(mpq_class(d) * alpha.value()).value <= eps;
}

}  // namespace pcc
