#include "pcc/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pcc/energy.hpp"
#include "pcc/errors.hpp"
#include "pcc/io.hpp"
#include "pcc/paircorr.hpp"
#include "pcc/rng.hpp"

namespace pcc {

namespace {

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

long parse_long(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("psi_family", psi.describe());
    kv.emplace_back("psi_delta_exponent", rat_str(psi.delta_exponent()));
    kv.emplace_back("iota_family", iota.describe());
    kv.emplace_back("m", std::to_string(m));
    kv.emplace_back("t_max", std::to_string(t_max));
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("s", rat_str(s));
    kv.emplace_back("alpha_samples", std::to_string(alpha_samples));
    kv.emplace_back("energy_band_lo", rat_str(band_lo));
    kv.emplace_back("energy_band_hi", rat_str(band_hi));
    kv.emplace_back("retry_cap", std::to_string(retry_cap));
    kv.emplace_back("k_max", std::to_string(k_max));
    return kv;
}

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;

    static const std::vector<std::string> known = {
        "psi_family", "psi_beta", "psi_log_r", "psi_table",
        "psi_delta_exponent", "iota_family", "iota_r", "m", "t_max", "seed",
        "s", "alpha_samples", "energy_band_lo", "energy_band_hi", "threads",
        "retry_cap", "k_max", "out_dir", "format"};
    for (const auto& [k, v] : kv)
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw ConfigError("config: unknown key '" + k + "'");

    auto get = [&](const std::string& k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };

    mpq_class delta_exp(1, 2);
    if (auto* v = get("psi_delta_exponent")) delta_exp = parse_rational(*v);

    std::string psi_family = "power";
    if (auto* v = get("psi_family")) psi_family = *v;
    if (psi_family == "power") {
        mpq_class beta(1, 4);
        if (auto* v = get("psi_beta")) beta = parse_rational(*v);
        cfg.psi = PsiSpec::power(beta, delta_exp);
    } else if (psi_family == "log_iterate") {
        long r = 1;
        if (auto* v = get("psi_log_r")) r = parse_long(*v, "psi_log_r");
        cfg.psi = PsiSpec::log_iterate(static_cast<int>(r), delta_exp);
    } else if (psi_family == "constant") {
        std::map<unsigned long, long> table;
        if (auto* v = get("psi_table")) {
            // "1:1,16:2,64:3"
            std::istringstream ss(*v);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::size_t colon = item.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("config: psi_table entries are N:psi_inv");
                table[parse_u64(item.substr(0, colon), "psi_table N")] =
                    parse_long(item.substr(colon + 1), "psi_table value");
            }
        } else {
            table[1] = 1;
        }
        cfg.psi = PsiSpec::constant_table(table, delta_exp);
    } else {
        throw ConfigError("config: unknown psi_family '" + psi_family + "'");
    }

    std::string iota_family = "inverse_log_log";
    if (auto* v = get("iota_family")) iota_family = *v;
    if (iota_family == "inverse_log_log") {
        cfg.iota = IotaSpec::inverse_log_log();
    } else if (iota_family == "inverse_log_iterate") {
        long r = 2;
        if (auto* v = get("iota_r")) r = parse_long(*v, "iota_r");
        cfg.iota = IotaSpec::inverse_log_iterate(static_cast<int>(r));
    } else if (iota_family == "constant_one") {
        cfg.iota = IotaSpec::constant_one();
    } else {
        throw ConfigError("config: unknown iota_family '" + iota_family + "'");
    }

    if (auto* v = get("m")) cfg.m = parse_long(*v, "m");
    if (auto* v = get("t_max")) cfg.t_max = static_cast<int>(parse_long(*v, "t_max"));
    if (auto* v = get("seed")) cfg.seed = parse_u64(*v, "seed");
    if (auto* v = get("s")) cfg.s = parse_rational(*v);
    if (auto* v = get("alpha_samples"))
        cfg.alpha_samples = static_cast<int>(parse_long(*v, "alpha_samples"));
    if (auto* v = get("energy_band_lo")) cfg.band_lo = parse_rational(*v);
    if (auto* v = get("energy_band_hi")) cfg.band_hi = parse_rational(*v);
    if (auto* v = get("threads"))
        cfg.threads = static_cast<int>(parse_long(*v, "threads"));
    if (auto* v = get("retry_cap"))
        cfg.retry_cap = static_cast<int>(parse_long(*v, "retry_cap"));
    if (auto* v = get("k_max")) cfg.k_max = static_cast<int>(parse_long(*v, "k_max"));
    if (auto* v = get("out_dir")) cfg.out_dir = *v;
    if (auto* v = get("format")) {
        if (*v == "csv")
            cfg.format = OutputFormat::csv;
        else if (*v == "json")
            cfg.format = OutputFormat::json;
        else
            throw ConfigError("config: format must be csv or json");
    }

    if (cfg.m < 2) throw ConfigError("config: m must be >= 2");
    if (cfg.t_max < 0 || cfg.t_max > 24)
        throw ConfigError("config: t_max must be in [0, 24]");
    if (sgn(cfg.s) < 0) throw ConfigError("config: s must be >= 0");
    if (cfg.alpha_samples < 1) throw ConfigError("config: alpha_samples >= 1");
    if (cfg.threads < 1 || cfg.threads > 256)
        throw ConfigError("config: threads must be in [1, 256]");
    if (cfg.retry_cap < 1) throw ConfigError("config: retry_cap >= 1");
    if (sgn(cfg.band_lo) <= 0 || cfg.band_hi < cfg.band_lo)
        throw ConfigError("config: bad energy band");
    return cfg;
}

// ---------------------------------------------------------------------------
// Parallel helper (deterministic static partition)
// ---------------------------------------------------------------------------

void parallel_for_indexed(std::size_t count, int threads,
                          const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t nthreads = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    pool.reserve(nthreads);
    for (std::size_t w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += nthreads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Construction run_construction(const ExperimentConfig& cfg) {
    Construction c;
    mpz_class max_elem(0);
    for (int t = 0; t <= cfg.t_max; ++t) {
        mpz_class separation_floor = 4 * max_elem + 1;
        ScheduleEntry e = choose_delta(t, cfg.m, c.schedule, cfg.psi, cfg.iota,
                                       separation_floor, cfg.k_max);
        Block b = block_sample_verified(e.n, e.psi_inv, e.delta, cfg.seed,
                                        cfg.retry_cap);
        if (!b.elements.empty() && b.elements.back() > max_elem)
            max_elem = b.elements.back();
        c.schedule.push_back(std::move(e));
        c.blocks.push_back(std::move(b));
    }
    c.sequence = concat_blocks(c.blocks);
    if (cfg.t_max >= 1)
        c.condensed_partial_sums =
            divergence_partial_sums(cfg.psi, cfg.iota, cfg.t_max);
    return c;
}

// ---------------------------------------------------------------------------
// Witness sampling
// ---------------------------------------------------------------------------

namespace {

// alpha lies in S_N iff some 0 < d <= d_max has ||Delta*d*alpha|| <= eps.
bool sn_member(const ScheduleEntry& e, const CircleScalar& alpha) {
    for (long d = 1; d <= e.d_max; ++d)
        if (indicator_d_eps(alpha, e.delta * d, e.eps)) return true;
    return false;
}

mpq_class part_midpoint(const Interval& p) {
    return p.wraps() ? frac1(p.lo + p.length() / 2) : (p.lo + p.hi) / 2;
}

mpq_class part_point(const Interval& p, const mpq_class& u) {
    // u in [0,1) picks a point of the part, wrap-aware.
    return frac1(p.lo + p.length() * u);
}

}  // namespace

std::vector<CircleScalar> sample_witness_alphas(const ScheduleEntry& entry,
                                                int count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("sample_witness_alphas: count >= 1");
    const auto& parts = entry.s_base.parts();
    if (parts.empty())
        throw InvariantError("sample_witness_alphas: empty S_N base");

    std::vector<CircleScalar> out;
    out.reserve(count);
    mpq_class delta_q(entry.delta);

    // Midpoints are seed-independent: base part i, lifted to the branch
    // floor(delta * i / n_mid) so they spread over the torus.
    int n_mid = std::max(1, count / 2);
    for (int i = 0; i < n_mid; ++i) {
        const Interval& p = parts[static_cast<std::size_t>(i) % parts.size()];
        mpz_class j = floor_q(mpq_class(entry.delta * i) / n_mid);
        mpz_class jr;
        mpz_fdiv_r(jr.get_mpz_t(), j.get_mpz_t(), entry.delta.get_mpz_t());
        CircleScalar alpha(
            (mpq_class(jr) + part_midpoint(p)) / delta_q);
        if (!sn_member(entry, alpha))
            throw InvariantError("witness midpoint escapes S_N (membership bug)");
        out.push_back(alpha);
    }

    SplitMix64 rng(seed);
    for (int i = n_mid; i < count; ++i) {
        const Interval& p = parts[rng.next() % parts.size()];
        mpq_class u = rng.unit_rational();
        mpz_class j = rng.below(entry.delta);
        CircleScalar alpha((mpq_class(j) + part_point(p, u)) / delta_q);
        if (!sn_member(entry, alpha))
            throw InvariantError("witness draw escapes S_N (membership bug)");
        out.push_back(alpha);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lower-bound chain
// ---------------------------------------------------------------------------

ChainReport verify_lower_bound_chain(const CircleScalar& alpha,
                                     const ScheduleEntry& entry,
                                     const Block& block,
                                     const SequencePrefix& seq) {
    ChainReport r;
    r.t = entry.t;
    r.n = entry.n;
    r.alpha = alpha;
    if (static_cast<std::size_t>(entry.t) >= seq.block_boundaries.size())
        throw InvariantError("chain: sequence lacks boundary for level");
    r.m_t = seq.block_boundaries[static_cast<std::size_t>(entry.t)];

    const unsigned long n = entry.n;
    const long p = entry.psi_inv;
    const unsigned long n_inv = n * static_cast<unsigned long>(p);
    const mpq_class window = make_q(1, 4 * mpz_class(n));

    // (i) the defining witness: smallest admissible d.
    r.witness_d = 0;
    for (long d = 1; d <= entry.d_max; ++d) {
        CircleDistance nd = circle_norm(mpq_class(entry.delta * d) * alpha.value());
        if (nd.value <= entry.eps) {
            r.witness_d = d;
            r.witness_norm = nd.value;
            break;
        }
    }
    if (r.witness_d == 0)
        throw WitnessNotFound("chain: alpha " + alpha.str() + " is not in S_N");

    // (ii) multiples k*d of the witness certified to contribute: the k-th
    // multiple needs 10*k*d < N*psi_inv (stays in the property-2 range) and
    // k*||Delta*d*alpha|| <= 1/(4N) (subadditivity of the torus norm).
    mpq_class range_q = make_q(n_inv, 10 * mpz_class(r.witness_d));
    mpz_class k_range = ceil_q(range_q) - 1;
    if (k_range < 0) k_range = 0;
    mpz_class k_cert = k_range;
    if (sgn(r.witness_norm) > 0) {
        mpz_class k_norm = floor_q(window / r.witness_norm);
        if (k_norm < k_cert) k_cert = k_norm;
    }
    r.k_certified = k_cert;
    r.k_nominal = make_q(p, 10) / entry.sqrt_iota;  // 1/(10*psi*sqrt(iota))

    // (iii) the staged quantities on actual data, all exact.
    SequencePrefix prefix = truncate(seq, r.m_t);
    RepresentationProfile prof = representation_profile(prefix.elements);
    r.l0 = pair_corr_by_differences(alpha, mpq_class(1), prof, r.m_t).value;

    std::vector<mpz_class> reduced;
    reduced.reserve(block.elements.size());
    for (const auto& e : block.elements) reduced.push_back(e / block.delta);
    RepresentationProfile bprof = representation_profile(reduced);

    mpz_class within_sum(0);
    for (const auto& [d, cnt] : bprof.positive)
        if (indicator_d_eps(alpha, entry.delta * d, window))
            within_sum += 2 * mpz_class(cnt);
    r.l1 = make_q(within_sum, 4 * mpz_class(n));

    const unsigned long d_hi = (n_inv > 10) ? (n_inv - 1) / 10 : 0;
    unsigned long close_count = 0;
    for (unsigned long d = 1; d <= d_hi; ++d)
        if (indicator_d_eps(alpha, entry.delta * mpz_class(d), window))
            ++close_count;
    r.l2 = make_q(2 * mpz_class(close_count), 8 * mpz_class(p));
    r.l3 = make_q(close_count, 4 * mpz_class(p));

    if (mpz_class(close_count) < k_cert)
        throw InvariantError("chain: certified multiples exceed indicator count");

    r.ineq01 = r.l0 >= r.l1;
    r.ineq12 = r.l1 >= r.l2;
    r.ineq23 = r.l2 >= r.l3;

    // (iv) the final bound, asserted at gated levels.
    r.bound = make_q(1, 40) / entry.sqrt_iota;
    r.final_ok = r.l0 >= r.bound;
    r.gated = (n_inv >= 10);
    return r;
}

// ---------------------------------------------------------------------------
// Energy growth
// ---------------------------------------------------------------------------

std::vector<EnergyRow> energy_growth_report(const SequencePrefix& seq,
                                            const PsiSpec& psi,
                                            const mpq_class& band_lo,
                                            const mpq_class& band_hi) {
    std::vector<std::pair<int, std::size_t>> points;  // (t, truncation)
    for (std::size_t t = 0; t < seq.block_boundaries.size(); ++t) {
        std::size_t m = seq.block_boundaries[t];
        if (t >= 1) {
            std::size_t prev = seq.block_boundaries[t - 1];
            std::size_t mid = (prev + m) / 2;
            if (mid > prev && mid < m)
                points.emplace_back(static_cast<int>(t), mid);
        }
        points.emplace_back(static_cast<int>(t), m);
    }

    std::vector<EnergyRow> rows;
    mpz_class prev_energy(-1);
    for (const auto& [t, m] : points) {
        if (m == 0) continue;
        EnergyRow row;
        row.t = t;
        row.n = 1UL << t;
        row.m_t = m;
        row.energy = additive_energy(truncate(seq, m).elements);
        row.psi_inv = psi.eval(m);
        mpz_class mz(static_cast<unsigned long>(m));
        row.ratio = make_q(row.energy * row.psi_inv, mz * mz * mz);
        row.in_band = row.ratio >= band_lo && row.ratio <= band_hi;
        if (row.energy < prev_energy)
            throw InvariantError("energy_growth_report: E decreasing");
        prev_energy = row.energy;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Controls
// ---------------------------------------------------------------------------

ControlReport control_diagnostics(ControlKind kind, unsigned long param,
                                  std::size_t n, int alpha_count,
                                  std::uint64_t seed, const mpq_class& s,
                                  int threads) {
    if (alpha_count < 1) throw ConfigError("controls: alpha_count >= 1");
    SequencePrefix seq = control_sequence(kind, param, n);

    std::vector<CircleScalar> alphas;
    if (kind == ControlKind::naturals) alphas.emplace_back(mpq_class(0));
    SplitMix64 rng(seed);
    for (int i = 0; i < alpha_count; ++i) {
        unsigned long q = 100001UL + rng.next() % 900000UL;
        unsigned long p = rng.next() % q;
        alphas.emplace_back(make_q(p, q));
    }

    std::vector<mpq_class> values(alphas.size());
    parallel_for_indexed(alphas.size(), threads, [&](std::size_t i) {
        values[i] = pair_corr_direct(alphas[i], s, seq).value;
    });

    ControlReport rep;
    switch (kind) {
        case ControlKind::naturals: rep.kind = "naturals"; break;
        case ControlKind::powers: rep.kind = "powers(" + std::to_string(param) + ")"; break;
        case ControlKind::lacunary: rep.kind = "lacunary(" + std::to_string(param) + ")"; break;
    }
    rep.n = n;
    rep.s = s;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        rep.rows.emplace_back(alphas[i], values[i]);

    // Stats over the random rows only (the alpha = 0 row is structural).
    std::vector<mpq_class> sorted;
    for (std::size_t i = (kind == ControlKind::naturals ? 1u : 0u);
         i < values.size(); ++i)
        sorted.push_back(values[i]);
    std::sort(sorted.begin(), sorted.end());
    std::size_t c = sorted.size();
    rep.median = (sorted[(c - 1) / 2] + sorted[c / 2]) / 2;
    rep.q1 = sorted[(c - 1) / 4];
    rep.q3 = sorted[(3 * (c - 1)) / 4];
    rep.fmin = sorted.front();
    rep.fmax = sorted.back();
    return rep;
}

// ---------------------------------------------------------------------------
// Experiment
// ---------------------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.cons = run_construction(cfg);
    res.energy_rows = energy_growth_report(res.cons.sequence, cfg.psi,
                                           cfg.band_lo, cfg.band_hi);
    for (const auto& row : res.energy_rows)
        if (!row.in_band) res.all_energy_in_band = false;

    // Chains start at t = 1: the statistic needs at least two elements.
    for (int t = 1; t <= cfg.t_max; ++t) {
        const ScheduleEntry& entry = res.cons.schedule[static_cast<std::size_t>(t)];
        std::vector<CircleScalar> alphas = sample_witness_alphas(
            entry, cfg.alpha_samples, derive_seed(cfg.seed, 0xA1FA, t));
        std::vector<ChainReport> level(alphas.size());
        parallel_for_indexed(alphas.size(), cfg.threads, [&](std::size_t i) {
            level[i] = verify_lower_bound_chain(
                alphas[i], entry, res.cons.blocks[static_cast<std::size_t>(t)],
                res.cons.sequence);
        });
        for (auto& cr : level) {
            if (cr.gated && !(cr.final_ok && cr.ineq01 && cr.ineq12 && cr.ineq23))
                res.all_gated_chains_ok = false;
            res.chains.push_back(std::move(cr));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

void write_config_echo(std::ostream& os, const ExperimentConfig& cfg) {
    for (const auto& [k, v] : cfg.echo()) os << "# " << k << "=" << v << "\n";
}

std::string delta_pow_str(const ScheduleEntry& e) {
    return std::to_string(e.m) + "^" + std::to_string(e.delta_pow);
}

void write_schedule_csv(std::ostream& os, const ExperimentResult& res,
                        const ExperimentConfig& cfg) {
    write_config_echo(os, cfg);
    os << "t,N,delta_pow,psi_inv,iota_pq,meas_sn_pq,worst_qi_ratio_pq\n";
    for (const auto& e : res.cons.schedule) {
        os << e.t << "," << e.n << "," << delta_pow_str(e) << "," << e.psi_inv
           << "," << rat_str(e.iota) << "," << rat_str(e.measure_sn) << ","
           << rat_str(e.worst_qi_ratio) << "\n";
    }
}

void write_energy_csv(std::ostream& os, const ExperimentResult& res,
                      const ExperimentConfig& cfg) {
    write_config_echo(os, cfg);
    os << "t,N,M_t,E,psi_inv,ratio_pq,ratio_dec\n";
    for (const auto& r : res.energy_rows) {
        os << r.t << "," << r.n << "," << r.m_t << "," << r.energy.get_str()
           << "," << r.psi_inv << "," << rat_str(r.ratio) << ","
           << dec_str(r.ratio) << "\n";
    }
}

void write_paircorr_csv(std::ostream& os, const ExperimentResult& res,
                        const ExperimentConfig& cfg) {
    write_config_echo(os, cfg);
    os << "t,N,M_t,alpha_pq,s_pq,F_pq,F_dec,bound_pq,pass\n";
    for (const auto& c : res.chains) {
        os << c.t << "," << c.n << "," << c.m_t << "," << c.alpha.str() << ",1,"
           << rat_str(c.l0) << "," << dec_str(c.l0) << "," << rat_str(c.bound)
           << "," << fmt_bool(c.final_ok) << "\n";
    }
}

void write_chains_kv(std::ostream& os, const ExperimentResult& res,
                     const ExperimentConfig& cfg) {
    write_config_echo(os, cfg);
    for (const auto& c : res.chains) {
        os << "t=" << c.t << " N=" << c.n << " M=" << c.m_t
           << " alpha=" << c.alpha.str() << " witness_d=" << c.witness_d
           << " witness_norm=" << rat_str(c.witness_norm)
           << " K=" << c.k_certified.get_str()
           << " K_nominal=" << rat_str(c.k_nominal) << " L0=" << rat_str(c.l0)
           << " L1=" << rat_str(c.l1) << " L2=" << rat_str(c.l2)
           << " L3=" << rat_str(c.l3) << " bound=" << rat_str(c.bound)
           << " ineq01=" << fmt_bool(c.ineq01) << " ineq12=" << fmt_bool(c.ineq12)
           << " ineq23=" << fmt_bool(c.ineq23) << " final=" << fmt_bool(c.final_ok)
           << " gated=" << fmt_bool(c.gated) << "\n";
    }
}

void write_schedule_kv(std::ostream& os, const ExperimentResult& res,
                       const ExperimentConfig& cfg) {
    write_config_echo(os, cfg);
    for (std::size_t i = 0; i < res.cons.schedule.size(); ++i) {
        const auto& e = res.cons.schedule[i];
        const auto& b = res.cons.blocks[i];
        os << "t=" << e.t << " N=" << e.n << " delta=" << e.delta.get_str()
           << " delta_pow=" << delta_pow_str(e) << " psi_inv=" << e.psi_inv
           << " iota=" << rat_str(e.iota) << " sqrt_iota=" << rat_str(e.sqrt_iota)
           << " eps=" << rat_str(e.eps) << " d_max=" << e.d_max
           << " iota_clamped=" << fmt_bool(e.iota_clamped)
           << " meas_sn=" << rat_str(e.measure_sn)
           << " worst_qi_ratio=" << rat_str(e.worst_qi_ratio)
           << " base_parts=" << e.s_base.size() << " block_size=" << b.elements.size()
           << " block_attempts=" << b.attempts
           << " M_t=" << res.cons.sequence.block_boundaries[i];
        os << " s_base=";
        const auto& eps = e.s_base.endpoint_strings();
        for (std::size_t k = 0; k < eps.size(); ++k) {
            if (k) os << ",";
            os << eps[k].first << ":" << eps[k].second;
        }
        os << "\n";
    }
    for (std::size_t i = 0; i < res.cons.condensed_partial_sums.size(); ++i)
        os << "condensed_partial_sum_" << i << "="
           << rat_str(res.cons.condensed_partial_sums[i]) << "\n";
}

nlohmann::json chains_json(const ExperimentResult& res) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : res.chains) {
        arr.push_back({{"t", c.t},
                       {"N", c.n},
                       {"M_t", c.m_t},
                       {"alpha", c.alpha.str()},
                       {"witness_d", c.witness_d},
                       {"witness_norm", rat_str(c.witness_norm)},
                       {"K", c.k_certified.get_str()},
                       {"K_nominal", rat_str(c.k_nominal)},
                       {"L0", rat_str(c.l0)},
                       {"L1", rat_str(c.l1)},
                       {"L2", rat_str(c.l2)},
                       {"L3", rat_str(c.l3)},
                       {"bound", rat_str(c.bound)},
                       {"ineq01", c.ineq01},
                       {"ineq12", c.ineq12},
                       {"ineq23", c.ineq23},
                       {"final_ok", c.final_ok},
                       {"gated", c.gated}});
    }
    return arr;
}

void write_run_json(std::ostream& os, const ExperimentResult& res,
                    const ExperimentConfig& cfg) {
    nlohmann::json j;
    for (const auto& [k, v] : cfg.echo()) j["config"][k] = v;
    nlohmann::json sched = nlohmann::json::array();
    for (const auto& e : res.cons.schedule) {
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& [lo, hi] : e.s_base.endpoint_strings())
            parts.push_back({lo, hi});
        sched.push_back({{"t", e.t},
                         {"N", e.n},
                         {"delta", e.delta.get_str()},
                         {"delta_pow", delta_pow_str(e)},
                         {"psi_inv", e.psi_inv},
                         {"iota", rat_str(e.iota)},
                         {"meas_sn", rat_str(e.measure_sn)},
                         {"worst_qi_ratio", rat_str(e.worst_qi_ratio)},
                         {"iota_clamped", e.iota_clamped},
                         {"s_base", parts}});
    }
    j["schedule"] = sched;
    nlohmann::json energy = nlohmann::json::array();
    for (const auto& r : res.energy_rows)
        energy.push_back({{"t", r.t},
                          {"N", r.n},
                          {"M_t", r.m_t},
                          {"E", r.energy.get_str()},
                          {"psi_inv", r.psi_inv},
                          {"ratio", rat_str(r.ratio)},
                          {"in_band", r.in_band}});
    j["energy"] = energy;
    j["chains"] = chains_json(res);
    j["verdicts"] = {{"all_energy_in_band", res.all_energy_in_band},
                     {"all_gated_chains_ok", res.all_gated_chains_ok}};
    os << j.dump(2) << "\n";
}

void write_file(const std::filesystem::path& p,
                const std::function<void(std::ostream&)>& writer) {
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write " + p.string());
    writer(f);
}

}  // namespace

void write_experiment_reports(const ExperimentResult& res,
                              const ExperimentConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "schedule.csv",
               [&](std::ostream& os) { write_schedule_csv(os, res, cfg); });
    write_file(dir / "energy.csv",
               [&](std::ostream& os) { write_energy_csv(os, res, cfg); });
    write_file(dir / "paircorr.csv",
               [&](std::ostream& os) { write_paircorr_csv(os, res, cfg); });
    write_file(dir / "chains.kv",
               [&](std::ostream& os) { write_chains_kv(os, res, cfg); });
    write_file(dir / "schedule.kv",
               [&](std::ostream& os) { write_schedule_kv(os, res, cfg); });
    write_file(dir / "sequence.txt",
               [&](std::ostream& os) { write_sequence(os, res.cons.sequence); });
    std::filesystem::create_directories(dir / "blocks");
    for (std::size_t i = 0; i < res.cons.blocks.size(); ++i)
        write_file(dir / "blocks" / ("block_t" + std::to_string(i) + ".txt"),
                   [&](std::ostream& os) { write_block(os, res.cons.blocks[i]); });
    if (cfg.format == OutputFormat::json)
        write_file(dir / "run.json",
                   [&](std::ostream& os) { write_run_json(os, res, cfg); });
}

}  // namespace pcc
