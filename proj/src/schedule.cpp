#include "pcc/schedule.hpp"

#include <cmath>

#include "pcc/errors.hpp"

namespace pcc {

namespace {

constexpr unsigned long kIntervalGuard = 10'000'000UL;

// Exact check that N2^(3v-u) * p1^v >= N1^(3v-u) * p2^v, which is
// N^(3-delta)/psi_inv nondecreasing with delta = u/v, without leaving
// integer arithmetic.
bool energy_exponent_ok(unsigned long n1, long p1, unsigned long n2, long p2,
                        const mpq_class& delta_exp) {
    unsigned long u = mpz_get_ui(delta_exp.get_num_mpz_t());
    unsigned long v = mpz_get_ui(delta_exp.get_den_mpz_t());
    unsigned long e = 3 * v - u;
    mpz_class lhs = pow_z(mpz_class(n2), e) * pow_z(mpz_class(p1), v);
    mpz_class rhs = pow_z(mpz_class(n1), e) * pow_z(mpz_class(p2), v);
    return lhs >= rhs;
}

}  // namespace

// ---------------------------------------------------------------------------
// PsiSpec
// ---------------------------------------------------------------------------

PsiSpec PsiSpec::power(const mpq_class& beta, const mpq_class& delta_exponent) {
    if (sgn(beta) <= 0 || beta >= 3)
        throw ConfigError("psi power family: beta must be in (0, 3)");
    PsiSpec s;
    s.family_ = Family::power;
    s.beta_ = beta;
    s.delta_exponent_ = delta_exponent;
    if (sgn(delta_exponent) <= 0 || delta_exponent >= 3)
        throw ConfigError("psi: delta exponent must be in (0, 3)");
    return s;
}

PsiSpec PsiSpec::log_iterate(int r, const mpq_class& delta_exponent) {
    if (r < 1) throw ConfigError("psi log family: r must be >= 1");
    PsiSpec s;
    s.family_ = Family::log_iterate;
    s.log_r_ = r;
    s.delta_exponent_ = delta_exponent;
    if (sgn(delta_exponent) <= 0 || delta_exponent >= 3)
        throw ConfigError("psi: delta exponent must be in (0, 3)");
    return s;
}

PsiSpec PsiSpec::constant_table(const std::map<unsigned long, long>& table,
                                const mpq_class& delta_exponent) {
    if (table.empty()) throw ConfigError("psi table: empty");
    PsiSpec s;
    s.family_ = Family::constant_table;
    s.table_ = table;
    s.delta_exponent_ = delta_exponent;
    if (sgn(delta_exponent) <= 0 || delta_exponent >= 3)
        throw ConfigError("psi: delta exponent must be in (0, 3)");
    return s;
}

long PsiSpec::eval_raw(unsigned long n) const {
    if (n < 1) throw DomainError("psi: N must be >= 1");
    switch (family_) {
        case Family::power: {
            // round(N^beta) exactly: with beta = u/v, take the integer v-th
            // root of N^u and decide the half by (2r+1)^v vs 2^v * N^u.
            unsigned long u = mpz_get_ui(beta_.get_num_mpz_t());
            unsigned long v = mpz_get_ui(beta_.get_den_mpz_t());
            mpz_class nu = pow_z(mpz_class(n), u);
            mpz_class root;
            mpz_root(root.get_mpz_t(), nu.get_mpz_t(), v);
            mpz_class half_cmp = pow_z(2 * root + 1, v);
            mpz_class scaled = pow_z(mpz_class(2), v) * nu;
            mpz_class rounded = (scaled >= half_cmp) ? root + 1 : root;
            if (!rounded.fits_slong_p())
                throw GuardError("psi: psi_inv overflows long");
            return std::max(1L, rounded.get_si());
        }
        case Family::log_iterate: {
            // Product of r iterated natural logs; the value is quantized to
            // an integer immediately, so double evaluation is adequate.
            double x = static_cast<double>(n);
            double prod = 1.0;
            for (int i = 0; i < log_r_; ++i) {
                x = std::log(x);
                if (i < log_r_ - 1 && x <= 0)
                    throw DomainError("psi log family: iterated log undefined at N=" +
                                      std::to_string(n));
                prod *= x;
            }
            if (prod < 0)
                throw DomainError("psi log family: negative density at N=" +
                                  std::to_string(n));
            double rounded = std::floor(prod + 0.5);
            return std::max(1L, static_cast<long>(rounded));
        }
        case Family::constant_table: {
            // Value of the largest tabulated point <= N.
            auto it = table_.upper_bound(n);
            if (it == table_.begin())
                throw DomainError("psi table: N below first tabulated point");
            return std::prev(it)->second;
        }
    }
    throw ConfigError("psi: unknown family");
}

long PsiSpec::eval(unsigned long n) const {
    auto it = evaluated_.find(n);
    if (it != evaluated_.end()) return it->second;
    long v = eval_raw(n);
    evaluated_[n] = v;
    check_invariants();
    return v;
}

void PsiSpec::check_invariants() const {
    const auto& ev = evaluated_;
    for (auto it = std::next(ev.begin()); it != ev.end(); ++it) {
        auto prev = std::prev(it);
        if (it->second < prev->second)
            throw InvariantError("psi: psi_inv decreasing between N=" +
                                 std::to_string(prev->first) + " and N=" +
                                 std::to_string(it->first));
        if (!energy_exponent_ok(prev->first, prev->second, it->first, it->second,
                                delta_exponent_))
            throw InvariantError("psi: N^(3-delta)*psi(N) not nondecreasing between N=" +
                                 std::to_string(prev->first) + " and N=" +
                                 std::to_string(it->first));
    }
}

std::string PsiSpec::describe() const {
    switch (family_) {
        case Family::power:
            return "power(" + rat_str(beta_) + ")";
        case Family::log_iterate:
            return "log_iterate(" + std::to_string(log_r_) + ")";
        case Family::constant_table:
            return "constant_table[" + std::to_string(table_.size()) + "]";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// IotaSpec
// ---------------------------------------------------------------------------

IotaSpec IotaSpec::inverse_log_log() { return inverse_log_iterate(2); }

IotaSpec IotaSpec::inverse_log_iterate(int r) {
    if (r < 1 || r > 4) throw ConfigError("iota: r must be in [1, 4]");
    IotaSpec s;
    s.family_ = r == 2 ? Family::inverse_log_log : Family::inverse_log_iterate;
    s.r_ = r;
    return s;
}

IotaSpec IotaSpec::constant_one() {
    IotaSpec s;
    s.family_ = Family::constant_one;
    s.r_ = 0;
    return s;
}

long IotaSpec::level_index(unsigned long n) const {
    if (family_ == Family::constant_one) return 1;
    auto it = evaluated_.find(n);
    if (it != evaluated_.end()) return it->second;

    // offset = tower of r twos, so the iterated log is >= 1 at N = 1.
    mpz_class offset(2);
    for (int i = 1; i < r_; ++i) offset = pow_z(mpz_class(2), offset.get_ui());
    mpz_class m = mpz_class(n) + offset;

    // k = ceil(log2^(r)(m)): smallest k >= 1 with m <= 2^2^...^2^k.
    long k = 1;
    for (;; ++k) {
        mpz_class tower(k);
        bool overflow = false;
        for (int i = 0; i < r_; ++i) {
            if (!tower.fits_ulong_p() || tower.get_ui() > 1'000'000UL) {
                overflow = true;  // already astronomically larger than m
                break;
            }
            tower = pow_z(mpz_class(2), tower.get_ui());
        }
        if (overflow || m <= tower) break;
        if (k > 64) throw GuardError("iota: level index search exhausted");
    }
    evaluated_[n] = k;
    // Nonincreasing iota == nondecreasing k across evaluated points.
    auto cur = evaluated_.find(n);
    if (cur != evaluated_.begin() && std::prev(cur)->second > k)
        throw InvariantError("iota: increasing at N=" + std::to_string(n));
    if (std::next(cur) != evaluated_.end() && std::next(cur)->second < k)
        throw InvariantError("iota: increasing after N=" + std::to_string(n));
    return k;
}

mpq_class IotaSpec::eval(unsigned long n) const {
    long k = level_index(n);
    return make_q(1, mpz_class(k) * k);
}

mpq_class IotaSpec::sqrt_eval(unsigned long n) const {
    return make_q(1, level_index(n));
}

std::string IotaSpec::describe() const {
    switch (family_) {
        case Family::inverse_log_log:
            return "inverse_log_log";
        case Family::inverse_log_iterate:
            return "inverse_log_iterate(" + std::to_string(r_) + ")";
        case Family::constant_one:
            return "constant_one";
    }
    return "?";
}

std::vector<mpq_class> divergence_partial_sums(const PsiSpec& psi,
                                               const IotaSpec& iota, int t_max) {
    if (t_max < 1) throw ConfigError("divergence_partial_sums: t_max >= 1");
    std::vector<mpq_class> sums;
    mpq_class acc(0);
    for (int t = 0; t <= t_max; ++t) {
        unsigned long n = 1UL << t;
        acc += make_q(1, psi.eval(n)) * iota.eval(n);
        sums.push_back(acc);
    }
    return sums;
}

// ---------------------------------------------------------------------------
// S_N construction
// ---------------------------------------------------------------------------

SnParams sn_params(unsigned long n, long psi_inv, const mpq_class& iota) {
    if (n < 1 || psi_inv < 1) throw ConfigError("sn_params: bad N or psi_inv");
    if (sgn(iota) <= 0 || iota > 1)
        throw ConfigError("sn_params: iota must be in (0, 1]");
    auto root = exact_sqrt(iota);
    if (!root)
        throw ConfigError("sn_params: iota must be the square of a rational, got " +
                          rat_str(iota));
    SnParams p;
    p.sqrt_iota = *root;
    p.eps = p.sqrt_iota / (mpq_class(psi_inv) * n);
    mpz_class dm = floor_q(mpq_class(n) * p.sqrt_iota);
    if (dm < 1)
        throw EmptyRangeError("sn_params: floor(N*sqrt(iota)) < 1 at N=" +
                              std::to_string(n) + " (adjust iota)");
    p.d_max = dm.get_si();
    return p;
}

IntervalSet sn_build_base(unsigned long n, long psi_inv, const mpq_class& iota) {
    SnParams p = sn_params(n, psi_inv, iota);
    if (2 * p.eps >= 1) return IntervalSet::full_torus();
    std::vector<std::pair<mpq_class, mpq_class>> raw;
    for (long d = 1; d <= p.d_max; ++d) {
        // {beta : ||d*beta|| <= eps} = union of radius eps/d about j/d.
        mpq_class radius = p.eps / d;
        for (long j = 0; j < d; ++j) {
            mpq_class center = make_q(j, d);
            raw.emplace_back(center - radius, center + radius);
        }
    }
    return IntervalSet::from_raw(raw);
}

IntervalSet sn_build(unsigned long n, long psi_inv, const mpq_class& iota,
                     const mpz_class& delta) {
    if (delta < 1) throw ConfigError("sn_build: delta must be >= 1");
    SnParams p = sn_params(n, psi_inv, iota);
    mpz_class count = delta * mpz_class(p.d_max) * (p.d_max + 1) / 2;
    if (count > kIntervalGuard)
        throw GuardError("sn_build: " + count.get_str() +
                         " intervals exceeds guard " + std::to_string(kIntervalGuard));
    return sn_build_base(n, psi_inv, iota).dilate_preimage(delta);
}

// ---------------------------------------------------------------------------
// Quasi-independence and the delta search
// ---------------------------------------------------------------------------

QiResult quasi_independence_certificate(const IntervalSet& s_new,
                                        const std::vector<IntervalSet>& earlier,
                                        const mpq_class& c) {
    mpq_class mu_new = s_new.measure();
    if (sgn(mu_new) <= 0)
        throw InvariantError("quasi_independence: new set has measure 0");
    QiResult out;
    out.worst_ratio = 0;
    for (std::size_t i = 0; i < earlier.size(); ++i) {
        mpq_class mu_e = earlier[i].measure();
        if (sgn(mu_e) <= 0)
            throw InvariantError("quasi_independence: earlier set has measure 0");
        mpq_class inter = s_new.intersect(earlier[i]).measure();
        mpq_class ratio = inter / (mu_new * mu_e);
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_index = static_cast<int>(i);
        }
    }
    out.ok = out.worst_ratio <= c;
    return out;
}

mpq_class sn_intersection_measure(const ScheduleEntry& a, const ScheduleEntry& b) {
    const ScheduleEntry& hi = (a.delta >= b.delta) ? a : b;
    const ScheduleEntry& lo = (a.delta >= b.delta) ? b : a;
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), hi.delta.get_mpz_t(),
                lo.delta.get_mpz_t());
    if (r != 0)
        throw InvariantError("sn_intersection_measure: deltas not nested");
    // meas(T_D1^{-1}A & T_D2^{-1}B) = meas(T_{D1/D2}^{-1}A & B) for D2 | D1,
    // because T_D2 preserves measure.
    return dilated_intersection_measure(hi.s_base, q, lo.s_base);
}

QiResult quasi_independence_certificate(const IntervalSet& base_new,
                                        const mpz_class& delta_new,
                                        const std::vector<ScheduleEntry>& earlier,
                                        const mpq_class& c) {
    mpq_class mu_new = base_new.measure();
    if (sgn(mu_new) <= 0)
        throw InvariantError("quasi_independence: new set has measure 0");
    QiResult out;
    out.worst_ratio = 0;
    for (std::size_t i = 0; i < earlier.size(); ++i) {
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), delta_new.get_mpz_t(),
                    earlier[i].delta.get_mpz_t());
        if (r != 0)
            throw InvariantError("quasi_independence: candidate delta not a multiple");
        mpq_class inter =
            dilated_intersection_measure(base_new, q, earlier[i].s_base);
        mpq_class ratio = inter / (mu_new * earlier[i].measure_sn);
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_index = static_cast<int>(i);
        }
    }
    out.ok = out.worst_ratio <= c;
    return out;
}

ScheduleEntry choose_delta(int t, long m, const std::vector<ScheduleEntry>& prior,
                           const PsiSpec& psi, const IotaSpec& iota,
                           const mpz_class& separation_floor, int k_max) {
    if (t < 0 || t > 62) throw ConfigError("choose_delta: t out of range");
    if (m < 2) throw ConfigError("choose_delta: m must be >= 2");

    ScheduleEntry e;
    e.t = t;
    e.n = 1UL << t;
    e.m = m;
    e.psi_inv = psi.eval(e.n);

    // iota too small leaves no admissible d at tiny N; raise it to 1 there.
    // The clamp can only fire on a prefix of levels (N/k(N) is increasing),
    // so the effective sequence stays nonincreasing.
    mpq_class iota_val = iota.eval(e.n);
    mpq_class nsq = mpq_class(e.n) * *exact_sqrt(iota_val);
    if (floor_q(nsq) < 1) {
        iota_val = 1;
        e.iota_clamped = true;
    }
    e.iota = iota_val;

    SnParams p = sn_params(e.n, e.psi_inv, iota_val);
    e.sqrt_iota = p.sqrt_iota;
    e.eps = p.eps;
    e.d_max = p.d_max;
    e.s_base = sn_build_base(e.n, e.psi_inv, iota_val);
    e.measure_sn = e.s_base.measure();
    if (sgn(e.measure_sn) <= 0)
        throw InvariantError("choose_delta: S_N has measure 0");

    // Smallest k with m^k >= separation_floor and m^k > every prior delta.
    mpz_class lower = separation_floor;
    if (!prior.empty() && prior.back().delta >= lower)
        lower = prior.back().delta + 1;
    int k = 0;
    mpz_class cand(1);
    while (cand < lower) {
        cand *= m;
        ++k;
        if (k > k_max)
            throw SearchExhausted("choose_delta: t=" + std::to_string(t) +
                                  ": separation floor " + lower.get_str() +
                                  " above m^" + std::to_string(k_max));
    }

    const mpq_class c(2);
    mpq_class best_ratio(-1);
    for (; k <= k_max; ++k, cand *= m) {
        QiResult qi = quasi_independence_certificate(e.s_base, cand, prior, c);
        if (qi.ok) {
            e.delta = cand;
            e.delta_pow = k;
            e.worst_qi_ratio = qi.worst_ratio;
            return e;
        }
        best_ratio = qi.worst_ratio;
    }
    throw SearchExhausted("choose_delta: no power of " + std::to_string(m) +
                          " up to exponent " + std::to_string(k_max) +
                          " passes quasi-independence at t=" + std::to_string(t) +
                          " (last worst ratio " + rat_str(best_ratio) + ")");
}

}  // namespace pcc
