#pragma once

// Experiment orchestration: the inductive construction, witness sampling
// from S_N, the staged lower-bound chain, energy growth tables, control
// diagnostics, and deterministic CSV/JSON report emission.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pcc/circle.hpp"
#include "pcc/schedule.hpp"
#include "pcc/sequences.hpp"

namespace pcc {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    PsiSpec psi = PsiSpec::power(mpq_class(1, 4), mpq_class(1, 2));
    IotaSpec iota = IotaSpec::inverse_log_log();
    long m = 2;
    int t_max = 6;
    std::uint64_t seed = 42;
    mpq_class s = 1;  // window parameter for controls / standalone queries
    int alpha_samples = 8;
    mpq_class band_lo = mpq_class(1, 1000);
    mpq_class band_hi = mpq_class(1000);
    int threads = 1;
    int retry_cap = 1000;
    int k_max = 64;
    std::string out_dir = "out";
    OutputFormat format = OutputFormat::csv;

    // Flat key=value echo, embedded in every report header.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv);

struct Construction {
    std::vector<ScheduleEntry> schedule;
    std::vector<Block> blocks;
    SequencePrefix sequence;
    std::vector<mpq_class> condensed_partial_sums;
};

// Builds schedule entries and verified blocks for t = 0..t_max and
// concatenates them; deterministic for a fixed config.
Construction run_construction(const ExperimentConfig& cfg);

// Exact rational witnesses inside S_N: deterministic part-midpoints (seed
// independent) plus seeded draws from within the parts; membership is
// re-asserted on every sample.
std::vector<CircleScalar> sample_witness_alphas(const ScheduleEntry& entry,
                                                int count, std::uint64_t seed);

// One evaluation of the staged inequality chain at level t, window s = 1:
//   F(alpha,1,M_t) >= L1 >= L2 >= L3  and finally  >= 1/(40*sqrt(iota)).
struct ChainReport {
    int t = 0;
    unsigned long n = 1;
    std::size_t m_t = 0;
    CircleScalar alpha;
    long witness_d = 0;       // smallest admissible d
    mpq_class witness_norm;   // ||Delta * d * alpha||
    mpz_class k_certified;    // multiples of d certified to contribute
    mpq_class k_nominal;      // 1/(10*psi*sqrt(iota)), ignores flooring
    mpq_class l0, l1, l2, l3; // F and the three staged minorants
    mpq_class bound;          // 1/(40*sqrt(iota(N)))
    bool ineq01 = false, ineq12 = false, ineq23 = false;
    bool final_ok = false;
    bool gated = false;  // floor(N/(10*psi)) >= 1: bound is asserted here
};

ChainReport verify_lower_bound_chain(const CircleScalar& alpha,
                                     const ScheduleEntry& entry,
                                     const Block& block,
                                     const SequencePrefix& seq);

struct EnergyRow {
    int t = 0;
    unsigned long n = 1;   // 2^t
    std::size_t m_t = 0;   // truncation length of this row
    mpz_class energy;
    long psi_inv = 1;
    mpq_class ratio;  // E * psi_inv / M^3
    bool in_band = false;
};

// Exact E(A_M) at every block boundary and at midpoints between
// boundaries, with the band verdict; E must be nondecreasing.
std::vector<EnergyRow> energy_growth_report(const SequencePrefix& seq,
                                            const PsiSpec& psi,
                                            const mpq_class& band_lo,
                                            const mpq_class& band_hi);

struct ControlReport {
    std::string kind;
    std::size_t n = 0;
    mpq_class s;
    std::vector<std::pair<CircleScalar, mpq_class>> rows;  // (alpha, F)
    mpq_class median, q1, q3, fmin, fmax;
};

// Empirical F over seeded random rational alphas (denominators kept in
// [1e5, 1e6] so the rational grid does not dominate the window). The
// naturals control also reports the exact alpha = 0 row F = N-1.
ControlReport control_diagnostics(ControlKind kind, unsigned long param,
                                  std::size_t n, int alpha_count,
                                  std::uint64_t seed, const mpq_class& s,
                                  int threads);

struct ExperimentResult {
    Construction cons;
    std::vector<EnergyRow> energy_rows;
    std::vector<ChainReport> chains;
    bool all_energy_in_band = true;
    bool all_gated_chains_ok = true;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes schedule.csv, energy.csv, paircorr.csv, chains.kv, schedule.kv and
// sequence.txt under cfg.out_dir (plus run.json when format = json).
// Byte-identical for identical config + seed, independent of cfg.threads.
void write_experiment_reports(const ExperimentResult& res,
                              const ExperimentConfig& cfg);

// Deterministic static-partition parallel map; results land in index order.
void parallel_for_indexed(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& fn);

}  // namespace pcc
