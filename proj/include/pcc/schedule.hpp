#pragma once

// The construction ledger: density profile psi and slack function iota with
// validity enforcement, the interval sets
//   S_N = {alpha : ||Delta_N * d * alpha|| <= psi(N)*sqrt(iota(N))/N
//                  for some 0 < d <= N*sqrt(iota(N))}
// and the inductive choice of Delta_N as the smallest admissible power of m.
//
// S_N is held in factored form: a base set S with S_N = T_Delta^{-1}(S).
// Dilation preserves measure, so measure(S_N) = measure(S), and pairwise
// intersection measures reduce to dilated_intersection_measure with the
// delta ratio; the full S_N is only materialized on demand (sn_build),
// behind an interval-count guard.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "pcc/intervals.hpp"
#include "pcc/rat.hpp"

namespace pcc {

// Nonincreasing density profile psi with integer reciprocal values.
// Quantization: psi_inv(N) = max(1, round(1/psi_raw(N))). Both validity
// invariants (psi_inv nondecreasing, N^(3-delta)/psi_inv nondecreasing) are
// re-checked exactly over all evaluated points after every evaluation.
class PsiSpec {
  public:
    enum class Family { power, log_iterate, constant_table };

    static PsiSpec power(const mpq_class& beta, const mpq_class& delta_exponent);
    static PsiSpec log_iterate(int r, const mpq_class& delta_exponent);
    static PsiSpec constant_table(const std::map<unsigned long, long>& table,
                                  const mpq_class& delta_exponent);

    long eval(unsigned long n) const;  // psi_inv(N)

    Family family() const { return family_; }
    const mpq_class& beta() const { return beta_; }
    int log_r() const { return log_r_; }
    const mpq_class& delta_exponent() const { return delta_exponent_; }
    const std::map<unsigned long, long>& evaluated() const { return evaluated_; }
    std::string describe() const;

  private:
    PsiSpec() = default;
    long eval_raw(unsigned long n) const;
    void check_invariants() const;

    Family family_ = Family::power;
    mpq_class beta_;
    int log_r_ = 1;
    std::map<unsigned long, long> table_;
    mpq_class delta_exponent_;
    mutable std::map<unsigned long, long> evaluated_;
};

// Slack function iota(N) = 1/k(N)^2 with k(N) = ceil of the r-fold iterated
// base-2 log of N + tower_r(1); squaring keeps sqrt(iota) exactly rational.
// k is computed by pure integer comparisons (N + off <= 2^2^...^k).
class IotaSpec {
  public:
    enum class Family { inverse_log_log, inverse_log_iterate, constant_one };

    static IotaSpec inverse_log_log();  // the r = 2 iterate
    static IotaSpec inverse_log_iterate(int r);
    static IotaSpec constant_one();  // iota = 1, for controls and tests

    mpq_class eval(unsigned long n) const;       // iota(N)
    mpq_class sqrt_eval(unsigned long n) const;  // sqrt(iota(N)), rational
    long level_index(unsigned long n) const;     // the k above

    Family family() const { return family_; }
    int r() const { return r_; }
    std::string describe() const;

  private:
    IotaSpec() = default;
    Family family_ = Family::inverse_log_log;
    int r_ = 2;
    mutable std::map<unsigned long, long> evaluated_;
};

// Partial sums sum_{t<=T} psi(2^t)*iota(2^t) of the condensed series for
// T = 0..t_max; strictly increasing, reported not asserted divergent.
std::vector<mpq_class> divergence_partial_sums(const PsiSpec& psi,
                                               const IotaSpec& iota, int t_max);

struct SnParams {
    mpq_class eps;        // psi(N)*sqrt(iota(N))/N
    mpq_class sqrt_iota;
    long d_max = 0;       // floor(N*sqrt(iota(N)))
};

// Throws EmptyRangeError if d_max < 1 (iota too small for this N) and
// ConfigError if iota is not the square of a rational.
SnParams sn_params(unsigned long n, long psi_inv, const mpq_class& iota);

// Base set S with S_N = T_Delta^{-1}(S): the union over 1 <= d <= d_max of
// {beta : ||d*beta|| <= eps}.
IntervalSet sn_build_base(unsigned long n, long psi_inv, const mpq_class& iota);

// Fully materialized S_N; refuses configurations whose interval count
// sum_d Delta*d exceeds 10^7.
IntervalSet sn_build(unsigned long n, long psi_inv, const mpq_class& iota,
                     const mpz_class& delta);

struct ScheduleEntry {
    int t = 0;
    unsigned long n = 1;       // N = 2^t
    long m = 2;
    int delta_pow = 0;         // Delta = m^delta_pow
    mpz_class delta = 1;
    long psi_inv = 1;
    mpq_class iota;            // effective value (see iota_clamped)
    mpq_class sqrt_iota;
    mpq_class eps;
    long d_max = 1;
    bool iota_clamped = false;  // raised to 1 where floor(N*sqrt(iota)) < 1
    IntervalSet s_base;
    mpq_class measure_sn;       // == measure(s_base) == measure(S_N)
    mpq_class worst_qi_ratio;   // max over earlier entries; 0 when none
};

struct QiResult {
    bool ok = true;
    mpq_class worst_ratio;  // max of meas(S&T)/(meas(S)*meas(T))
    int worst_index = -1;
};

// Exact check of meas(new & earlier) <= C * meas(new) * meas(earlier) on
// materialized sets.
QiResult quasi_independence_certificate(const IntervalSet& s_new,
                                        const std::vector<IntervalSet>& earlier,
                                        const mpq_class& c);

// Exact meas(S_A intersect S_B) for factored entries; the smaller delta
// must divide the larger (always true for powers of one m).
mpq_class sn_intersection_measure(const ScheduleEntry& a, const ScheduleEntry& b);

// Factored certificate for a candidate (base, delta) against prior entries.
QiResult quasi_independence_certificate(const IntervalSet& base_new,
                                        const mpz_class& delta_new,
                                        const std::vector<ScheduleEntry>& earlier,
                                        const mpq_class& c);

// Assembles the level-t entry: evaluates psi and iota (clamping iota to 1
// when d_max would vanish), builds the base set, and picks the smallest
// power m^k >= separation_floor whose S_N passes the C = 2 certificate
// against all prior entries. Throws SearchExhausted past k_max.
ScheduleEntry choose_delta(int t, long m, const std::vector<ScheduleEntry>& prior,
                           const PsiSpec& psi, const IotaSpec& iota,
                           const mpz_class& separation_floor, int k_max = 64);

}  // namespace pcc
