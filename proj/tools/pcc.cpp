// Command-line frontend. Subcommands mirror the library surface:
//   construct, schedule, experiment  - run the block construction
//   energy, paircorr, sn, controls   - direct queries on one module
// Exit codes: 0 ok, 1 unexpected, 2 invariant violation, 3 resource guard,
// 4 config error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pcc/energy.hpp"
#include "pcc/errors.hpp"
#include "pcc/harness.hpp"
#include "pcc/io.hpp"
#include "pcc/paircorr.hpp"
#include "pcc/rng.hpp"

namespace {

using namespace pcc;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool out_set = false;
    bool format_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "flat key=value config file");
    cmd->add_option("--out", c.out_dir, "output directory")
        ->each([&c](const std::string&) { c.out_set = true; });
    cmd->add_option("--format", c.format, "csv or json")
        ->each([&c](const std::string&) { c.format_set = true; });
    cmd->add_option("--seed", c.seed, "RNG seed")
        ->each([&c](const std::string&) { c.seed_set = true; });
}

ExperimentConfig load_config(const CommonOpts& c) {
    std::map<std::string, std::string> kv;
    if (!c.config_path.empty()) kv = parse_kv_file(c.config_path);
    ExperimentConfig cfg = config_from_kv(kv);
    if (c.seed_set) cfg.seed = c.seed;
    if (c.out_set) cfg.out_dir = c.out_dir;
    if (c.format_set) {
        if (c.format == "csv")
            cfg.format = OutputFormat::csv;
        else if (c.format == "json")
            cfg.format = OutputFormat::json;
        else
            throw ConfigError("--format must be csv or json");
    }
    return cfg;
}

ControlKind parse_control(const std::string& kind) {
    if (kind == "naturals") return ControlKind::naturals;
    if (kind == "squares") return ControlKind::powers;  // param forced to 2
    if (kind == "powers") return ControlKind::powers;
    if (kind == "lacunary") return ControlKind::lacunary;
    throw ConfigError("unknown control kind: " + kind);
}

SequencePrefix load_input_sequence(const std::string& in_path,
                                   const std::string& control,
                                   unsigned long control_param, std::size_t n) {
    if (!in_path.empty()) {
        std::ifstream f(in_path);
        if (!f) throw ConfigError("cannot open " + in_path);
        SequencePrefix s = read_sequence(f);
        if (n > 0 && n < s.size()) s = truncate(s, n);
        return s;
    }
    if (control.empty())
        throw ConfigError("need --in FILE or --control KIND");
    ControlKind kind = parse_control(control);
    unsigned long param = control_param;
    if (control == "squares") param = 2;
    if (control == "naturals") param = 1;
    if (n == 0) throw ConfigError("--n is required with --control");
    return control_sequence(kind, param, n);
}

int run(int argc, char** argv) {
    CLI::App app{"exact pair-correlation and additive-energy toolkit"};
    app.require_subcommand(1);

    // construct / schedule / experiment share the experiment config.
    CommonOpts c_construct, c_schedule, c_experiment;
    auto* cmd_construct =
        app.add_subcommand("construct", "build schedule, blocks and sequence");
    add_common(cmd_construct, c_construct);
    auto* cmd_schedule =
        app.add_subcommand("schedule", "build and print the schedule ledger");
    add_common(cmd_schedule, c_schedule);
    auto* cmd_experiment = app.add_subcommand(
        "experiment", "full run: construction, chains, energy report");
    add_common(cmd_experiment, c_experiment);

    // energy
    CommonOpts c_energy;
    std::string energy_in, energy_control, energy_profile_out;
    unsigned long energy_param = 1;
    std::size_t energy_n = 0;
    auto* cmd_energy = app.add_subcommand("energy", "exact additive energy");
    add_common(cmd_energy, c_energy);
    cmd_energy->add_option("--in", energy_in, "pcc-sequence file");
    cmd_energy->add_option("--control", energy_control,
                           "naturals|squares|powers|lacunary");
    cmd_energy->add_option("--param", energy_param, "k for powers, q for lacunary");
    cmd_energy->add_option("--n", energy_n, "number of elements");
    cmd_energy->add_option("--profile-out", energy_profile_out,
                           "write representation profile CSV here");

    // paircorr
    CommonOpts c_pc;
    std::string pc_in, pc_control, pc_alpha = "0", pc_s = "1";
    unsigned long pc_param = 1;
    std::size_t pc_n = 0;
    auto* cmd_pc = app.add_subcommand("paircorr", "exact pair correlation F");
    add_common(cmd_pc, c_pc);
    cmd_pc->add_option("--in", pc_in, "pcc-sequence file");
    cmd_pc->add_option("--control", pc_control, "naturals|squares|powers|lacunary");
    cmd_pc->add_option("--param", pc_param, "k for powers, q for lacunary");
    cmd_pc->add_option("--n", pc_n, "number of elements");
    cmd_pc->add_option("--alpha", pc_alpha, "rational alpha, e.g. 13/50");
    cmd_pc->add_option("--s", pc_s, "window parameter");

    // sn
    CommonOpts c_sn;
    unsigned long sn_n = 2;
    long sn_psi_inv = 1;
    std::string sn_iota = "1/4", sn_delta = "1";
    auto* cmd_sn = app.add_subcommand("sn", "materialize S_N and print it");
    add_common(cmd_sn, c_sn);
    cmd_sn->add_option("--n", sn_n, "level size N")->required();
    cmd_sn->add_option("--psi-inv", sn_psi_inv, "integer 1/psi(N)")->required();
    cmd_sn->add_option("--iota", sn_iota, "iota(N), a square of a rational");
    cmd_sn->add_option("--delta", sn_delta, "dilation factor");

    // controls
    CommonOpts c_ctl;
    std::string ctl_kind = "squares", ctl_s = "1";
    unsigned long ctl_param = 2;
    std::size_t ctl_n = 10000;
    int ctl_alphas = 50;
    int ctl_threads = 1;
    auto* cmd_ctl =
        app.add_subcommand("controls", "diagnostic F statistics on controls");
    add_common(cmd_ctl, c_ctl);
    cmd_ctl->add_option("--kind", ctl_kind, "naturals|squares|powers|lacunary");
    cmd_ctl->add_option("--param", ctl_param, "k for powers, q for lacunary");
    cmd_ctl->add_option("--n", ctl_n, "number of elements");
    cmd_ctl->add_option("--alphas", ctl_alphas, "random alpha count");
    cmd_ctl->add_option("--s", ctl_s, "window parameter");
    cmd_ctl->add_option("--threads", ctl_threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    if (cmd_construct->parsed() || cmd_schedule->parsed() ||
        cmd_experiment->parsed()) {
        bool full = cmd_experiment->parsed();
        CommonOpts& c = full ? c_experiment
                             : (cmd_construct->parsed() ? c_construct : c_schedule);
        ExperimentConfig cfg = load_config(c);
        ExperimentResult res;
        if (full) {
            res = run_experiment(cfg);
        } else {
            res.cons = run_construction(cfg);
            res.energy_rows =
                energy_growth_report(res.cons.sequence, cfg.psi, cfg.band_lo,
                                     cfg.band_hi);
        }
        write_experiment_reports(res, cfg);
        std::cout << "levels: " << res.cons.schedule.size()
                  << "  sequence length: " << res.cons.sequence.size() << "\n";
        for (const auto& e : res.cons.schedule)
            std::cout << "t=" << e.t << " N=" << e.n << " delta=" << e.m << "^"
                      << e.delta_pow << " psi_inv=" << e.psi_inv
                      << " meas_sn=" << rat_str(e.measure_sn)
                      << " worst_qi=" << rat_str(e.worst_qi_ratio) << "\n";
        if (full)
            std::cout << "energy band: "
                      << (res.all_energy_in_band ? "all in band" : "VIOLATION")
                      << "  gated chains: "
                      << (res.all_gated_chains_ok ? "all pass" : "FAILURE")
                      << "\n";
        std::cout << "reports in " << cfg.out_dir << "\n";
        if (full && !(res.all_energy_in_band && res.all_gated_chains_ok))
            return 2;
        return 0;
    }

    if (cmd_energy->parsed()) {
        SequencePrefix s =
            load_input_sequence(energy_in, energy_control, energy_param, energy_n);
        RepresentationProfile prof = representation_profile(s.elements);
        mpz_class e = energy_of_profile(prof);
        std::cout << "n=" << s.size() << " E=" << e.get_str() << "\n";
        if (!energy_profile_out.empty()) {
            std::ofstream f(energy_profile_out);
            if (!f) throw ConfigError("cannot write " + energy_profile_out);
            write_profile_csv(f, prof);
            std::cout << "profile written to " << energy_profile_out << "\n";
        }
        return 0;
    }

    if (cmd_pc->parsed()) {
        SequencePrefix s = load_input_sequence(pc_in, pc_control, pc_param, pc_n);
        CircleScalar alpha = reduce_mod1(parse_rational(pc_alpha));
        mpq_class sv = parse_rational(pc_s);
        PairCorrResult r = pair_corr_direct(alpha, sv, s);
        std::cout << "alpha_pq,s_pq,n,F_pq,F_dec\n";
        std::cout << alpha.str() << "," << rat_str(sv) << "," << r.n << ","
                  << rat_str(r.value) << "," << dec_str(r.value) << "\n";
        return 0;
    }

    if (cmd_sn->parsed()) {
        mpq_class iota = parse_rational(sn_iota);
        mpz_class delta(sn_delta);
        IntervalSet sn = sn_build(sn_n, sn_psi_inv, iota, delta);
        std::cout << "intervals=" << sn.size()
                  << " measure=" << rat_str(sn.measure()) << "\n";
        for (const auto& [lo, hi] : sn.endpoint_strings())
            std::cout << lo << " " << hi << "\n";
        return 0;
    }

    if (cmd_ctl->parsed()) {
        ExperimentConfig cfg = load_config(c_ctl);
        ControlKind kind = parse_control(ctl_kind);
        unsigned long param = ctl_param;
        if (ctl_kind == "squares") param = 2;
        if (ctl_kind == "naturals") param = 1;
        ControlReport rep =
            control_diagnostics(kind, param, ctl_n, ctl_alphas, cfg.seed,
                                parse_rational(ctl_s), ctl_threads);
        std::cout << "kind=" << rep.kind << " n=" << rep.n
                  << " s=" << rat_str(rep.s) << "\n";
        std::cout << "median=" << rat_str(rep.median) << " ("
                  << dec_str(rep.median) << ")  q1=" << dec_str(rep.q1)
                  << " q3=" << dec_str(rep.q3) << " min=" << dec_str(rep.fmin)
                  << " max=" << dec_str(rep.fmax) << "\n";
        std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        std::ofstream f(dir / "controls.csv");
        f << "kind,n,alpha_pq,s_pq,F_pq,F_dec\n";
        for (const auto& [alpha, v] : rep.rows)
            f << rep.kind << "," << rep.n << "," << alpha.str() << ","
              << rat_str(rep.s) << "," << rat_str(v) << "," << dec_str(v) << "\n";
        std::cout << "rows in " << (dir / "controls.csv").string() << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pcc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const pcc::GuardError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const pcc::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
