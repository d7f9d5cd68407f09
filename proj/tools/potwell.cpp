// potwell: spectral simulator and classifier for a heat flow with a
// critical nonlocal (pair-interaction) source on a Dirichlet box.
//
// Subcommands: simulate, scan-lambda, ground-state, constants,
// picard-compare, verify. Exit codes: 0 ok, 1 verify failures, 2 config
// errors.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "potwell/classifier.hpp"
#include "potwell/config.hpp"
#include "potwell/evolution.hpp"
#include "potwell/functionals.hpp"
#include "potwell/ground_state.hpp"
#include "potwell/io.hpp"
#include "potwell/verify.hpp"

namespace {

using namespace potwell;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
};

RunConfig load_run_config(const CommonOpts& c) {
    ConfigFile cfg;
    if (!c.config_path.empty()) cfg = ConfigFile::load(c.config_path);
    for (const std::string& kv : c.overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set wants key=value, got: " + kv);
        std::string key = kv.substr(0, eq);
        std::string val = kv.substr(eq + 1);
        auto strip = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
        };
        strip(key);
        strip(val);
        cfg.set(key, val);
    }
    return RunConfig::from_config(cfg);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::HorizonReached: return "horizon-reached";
        case Verdict::BlowUp: return "blow-up";
        case Verdict::EnteredW: return "entered-stable-set";
        case Verdict::EnteredV: return "entered-unstable-set";
    }
    return "?";
}

const char* kind_name(TrajectoryVerdict::Kind k) {
    switch (k) {
        case TrajectoryVerdict::Kind::EntersW: return "enters-W";
        case TrajectoryVerdict::Kind::EntersV: return "enters-V";
        case TrajectoryVerdict::Kind::Undetermined: return "undetermined";
    }
    return "?";
}

int cmd_constants(double mu) {
    const Exponents exps(mu);
    const Constants c = constants_build(mu);
    std::printf("mu     = %s\n", format_double(mu).c_str());
    std::printf("p      = %s\n", format_double(exps.p).c_str());
    std::printf("c_hls  = %s\n", format_double(c.c_hls).c_str());
    std::printf("s_sob  = %s\n", format_double(c.s_sob).c_str());
    std::printf("s_hl   = %s\n", format_double(c.s_hl).c_str());
    std::printf("m_mu   = %s\n", format_double(c.m_mu).c_str());
    return 0;
}

int cmd_simulate(const RunConfig& rc) {
    const BoxDomain dom(rc.L, rc.M);
    const Exponents exps(rc.mu);
    const Constants consts = constants_build(rc.mu);
    auto kernel = shared_kernel(dom, rc.mu);
    const Field u0 = build_initial_field(rc);

    const RunOutcome out = integrate(u0, rc.solver, *kernel, exps, consts);

    std::filesystem::create_directories(rc.output_dir);
    const std::string csv = rc.output_dir + "/timeseries.csv";
    write_timeseries(out.records, csv);
    const std::string ck = rc.output_dir + "/final.chk";
    if (all_finite(out.final_state))
        write_checkpoint(out.final_state, out.records.back().t, rc.mu, ck);

    std::printf("verdict      = %s\n", verdict_name(out.verdict));
    std::printf("t_event      = %s\n", format_double(out.t_event).c_str());
    std::printf("records      = %zu\n", out.records.size());
    std::printf("final linf   = %s\n", format_double(out.records.back().linf).c_str());
    std::printf("final j      = %s\n", format_double(out.records.back().j).c_str());
    std::printf("timeseries   = %s\n", csv.c_str());
    return 0;
}

int cmd_scan(const RunConfig& rc) {
    const BoxDomain dom(rc.L, rc.M);
    const Exponents exps(rc.mu);
    const Constants consts = constants_build(rc.mu);
    auto kernel = shared_kernel(dom, rc.mu);
    const Field phi = build_initial_field(rc);

    const LambdaScanResult scan =
        lambda_scan(phi, rc.lambda_min, rc.lambda_max, rc.bracket_tol, rc.solver,
                    *kernel, exps, consts, rc.max_probes);

    std::filesystem::create_directories(rc.output_dir);
    const std::string csv = rc.output_dir + "/probes.csv";
    {
        std::FILE* f = std::fopen(csv.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot open " + csv);
        std::fprintf(f, "lambda,kind,t0,verdict\n");
        for (const LambdaProbe& p : scan.probes)
            std::fprintf(f, "%s,%s,%s,%s\n", format_double(p.lambda).c_str(),
                         kind_name(p.verdict.kind), format_double(p.verdict.t0).c_str(),
                         verdict_name(p.verdict.outcome.verdict));
        std::fclose(f);
    }

    std::printf("lambda1      = [%s, %s]\n", format_double(scan.lambda1_lo).c_str(),
                format_double(scan.lambda1_hi).c_str());
    std::printf("lambda2      = [%s, %s]\n", format_double(scan.lambda2_lo).c_str(),
                format_double(scan.lambda2_hi).c_str());
    std::printf("probes       = %zu\n", scan.probes.size());
    std::printf("ordering_ok  = %s\n", scan.ordering_ok ? "true" : "false");
    std::printf("exhausted    = %s\n", scan.budget_exhausted ? "true" : "false");
    std::printf("probes_csv   = %s\n", csv.c_str());
    return scan.ordering_ok ? 0 : 1;
}

int cmd_ground_state(const RunConfig& rc) {
    const BoxDomain dom(rc.L, rc.M);
    const Exponents exps(rc.mu);
    const Constants consts = constants_build(rc.mu);
    auto kernel = shared_kernel(dom, rc.mu);
    const Field u0 = build_initial_field(rc);

    const QuotientResult qr =
        minimize_quotient(u0, rc.gs_max_iter, rc.gs_tol, *kernel, exps, consts);

    std::filesystem::create_directories(rc.output_dir);
    const std::string ck = rc.output_dir + "/minimizer.chk";
    write_checkpoint(qr.minimizer, 0.0, rc.mu, ck);

    std::printf("q_min        = %s\n", format_double(qr.q_min).c_str());
    std::printf("s_hl         = %s\n", format_double(consts.s_hl).c_str());
    std::printf("m_est        = %s\n", format_double(qr.m_est).c_str());
    std::printf("m_mu         = %s\n", format_double(consts.m_mu).c_str());
    std::printf("iterations   = %d\n", qr.iterations);
    std::printf("stalled      = %s\n", qr.stalled ? "true" : "false");
    std::printf("minimizer    = %s\n", ck.c_str());
    return 0;
}

int cmd_picard_compare(const RunConfig& rc) {
    const BoxDomain dom(rc.L, rc.M);
    const Exponents exps(rc.mu);
    const Constants consts = constants_build(rc.mu);
    auto kernel = shared_kernel(dom, rc.mu);
    const Field u0 = build_initial_field(rc);

    PicardResult pr = picard_mild_solve(u0, rc.picard_T, rc.picard_nodes, rc.picard_tol,
                                        rc.picard_max_iter, *kernel, exps);

    SolverConfig scfg = rc.solver;
    scfg.t_end = rc.picard_T;
    const RunOutcome er = integrate(u0, scfg, *kernel, exps, consts);

    double diff = 0.0;
    for (std::size_t i = 0; i < pr.u.values.size(); ++i) {
        const double d = pr.u.values[i] - er.final_state.values[i];
        diff += d * d;
    }
    const double h3 = dom.h * dom.h * dom.h;
    const double rel = std::sqrt(h3 * diff) / std::max(norm(er.final_state, 2.0), 1e-300);

    std::printf("T            = %s\n", format_double(rc.picard_T).c_str());
    std::printf("converged    = %s\n", pr.converged ? "true" : "false");
    std::printf("iterations   = %d\n", pr.iterations);
    std::printf("rel_l2_diff  = %s\n", format_double(rel).c_str());
    if (!pr.contraction.empty()) {
        double worst = 0.0;
        for (double r : pr.contraction) worst = std::max(worst, r);
        std::printf("max_ratio    = %s\n", format_double(worst).c_str());
    }
    return pr.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral potential-well simulator for a nonlocal critical heat flow"};
    app.require_subcommand(1);

    CommonOpts common;
    double constants_mu = 2.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "key = value config file");
        sub->add_option("--set", common.overrides, "override, key=value (repeatable)");
    };

    CLI::App* c_sim = app.add_subcommand("simulate", "integrate one trajectory");
    add_common(c_sim);
    CLI::App* c_scan = app.add_subcommand("scan-lambda", "bisect the two amplitude thresholds");
    add_common(c_scan);
    CLI::App* c_gs = app.add_subcommand("ground-state", "minimize the pair-interaction quotient");
    add_common(c_gs);
    CLI::App* c_const = app.add_subcommand("constants", "print the derived constants");
    c_const->add_option("--mu", constants_mu, "interaction exponent in (0,3)");
    CLI::App* c_pic = app.add_subcommand("picard-compare",
                                         "cross-check stepper vs mild-solution iteration");
    add_common(c_pic);

    VerifyOptions vopts;
    CLI::App* c_ver = app.add_subcommand("verify", "run the invariant suite");
    c_ver->add_option("--seed", vopts.seed, "rng seed");
    c_ver->add_option("--mu", vopts.mu, "interaction exponent in (0,3)");
    c_ver->add_flag("--quick", vopts.quick, "skip the slow trajectory checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_const->parsed()) return cmd_constants(constants_mu);
        if (c_ver->parsed()) {
            const int failures = run_verify(vopts, std::cout);
            return failures == 0 ? 0 : 1;
        }
        const RunConfig rc = load_run_config(common);
        if (c_sim->parsed()) return cmd_simulate(rc);
        if (c_scan->parsed()) return cmd_scan(rc);
        if (c_gs->parsed()) return cmd_ground_state(rc);
        if (c_pic->parsed()) return cmd_picard_compare(rc);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const BracketInvalid& e) {
        std::cerr << "scan error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
