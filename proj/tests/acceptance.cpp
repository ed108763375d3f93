// Acceptance gate. Runs every release-blocking property at full scale and
// prints one PASS/FAIL line per criterion. Exit status 0 only when all pass.
//
// Scale and tolerances are pinned here on purpose: seed 42, eps_eq 1e-9,
// eps_psd 1e-9, 1000 random samples per family, 100 table mutations per
// fixture, 100 random composite maps.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "effalg/suite.hpp"
#include "json.hpp"

using namespace effalg;

namespace {

int failures = 0;

void report(int idx, const std::string& label, bool pass, long long checks, double ms,
            double budget_ms, const std::vector<std::string>& witnesses) {
    bool in_budget = budget_ms <= 0 || ms <= budget_ms;
    bool ok = pass && in_budget;
    if (!ok) ++failures;
    std::printf("%s %2d %s: %lld checks in %.2f s", ok ? "PASS" : "FAIL", idx,
                label.c_str(), checks, ms / 1000.0);
    if (budget_ms > 0) std::printf(" (budget %.0f s)", budget_ms / 1000.0);
    if (!in_budget) std::printf(" [over budget]");
    std::printf("\n");
    for (size_t i = 0; i < witnesses.size() && i < 4; ++i)
        std::printf("        %s\n", witnesses[i].c_str());
}

void run_one(int idx, const std::string& label,
             TheoremResult (*check)(const SuiteConfig&), const SuiteConfig& cfg,
             double budget_ms = 0) {
    TheoremResult r;
    try {
        r = check(cfg);
    } catch (const std::exception& ex) {
        r.pass = false;
        r.witnesses.push_back(std::string("exception: ") + ex.what());
    }
    report(idx, label, r.pass, r.checks, r.ms, budget_ms, r.witnesses);
}

struct CliRun {
    int code = -1;
    std::string out;
    double ms = 0;
};

CliRun run_cli_suite(const char* cli) {
    CliRun r;
    std::string cmd = std::string(cli) + " suite --seed 42 --format json 2>/dev/null";
    auto t0 = std::chrono::steady_clock::now();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[8192];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int st = pclose(pipe);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
               .count();
    return r;
}

}  // namespace

int main() {
    SuiteConfig cfg;  // seed 42, eps 1e-9/1e-9, 1000 samples, 100 mutations
    std::printf("acceptance gate: seed %llu, eps_eq %.0e, eps_psd %.0e, samples %d, "
                "mutations %d, composites %d\n",
                (unsigned long long)cfg.seed, cfg.tol.eps_eq, cfg.tol.eps_psd,
                cfg.samples, cfg.mutations, cfg.composites);

    run_one(1, "axiom gate over bundled tables and single-cell mutations",
            check_axiom_gate, cfg, 1000);
    run_one(2, "state operator laws on every enumerated operator",
            check_state_operator_laws, cfg, 10000);
    run_one(3, "faithful implies strong across all enumerated operators",
            check_faithful_implies_strong, cfg);
    run_one(4, "kernel quotients yield faithful operators; diamond collapses to the 2-chain",
            check_quotient_faithfulness, cfg);
    run_one(5, "induced states are states for every operator and vertex",
            check_induced_states, cfg);
    run_one(6, "Kadison-Schwarz square inequality on the random family",
            check_kadison_schwarz, cfg);
    run_one(7, "Luders pinching: idempotent, compatible, faithful, range characterized",
            check_pinching_operator, cfg, 30000);

    // criterion 8 spans the pointwise and the averaged multiplicativity lemmas
    {
        TheoremResult a, b;
        try {
            a = check_multiplicative_domain(cfg);
            b = check_averaged_multiplicativity(cfg);
        } catch (const std::exception& ex) {
            a.pass = false;
            a.witnesses.push_back(std::string("exception: ") + ex.what());
        }
        auto witnesses = a.witnesses;
        witnesses.insert(witnesses.end(), b.witnesses.begin(), b.witnesses.end());
        report(8, "multiplicativity clauses agree, pointwise and averaged",
               a.pass && b.pass, a.checks + b.checks, a.ms + b.ms, 0, witnesses);
    }

    run_one(9, "support decomposition: corner example and random composites",
            check_support_decomposition, cfg);
    run_one(10, "min closure equals product closure; straddle witnessed on both sides",
            check_strong_equals_ce, cfg);
    run_one(11, "conditional average integral identity, exact arithmetic",
            check_conditional_identity, cfg);
    run_one(12, "quotient averaging is strong with block-constant range",
            check_quotient_averaging, cfg);

    // criterion 13: the CLI suite is byte-deterministic and finishes in time
    {
        const char* cli = std::getenv("EFFALG_CLI");
        if (!cli) {
            ++failures;
            std::printf("FAIL 13 CLI suite determinism: EFFALG_CLI not set\n");
        } else {
            CliRun first = run_cli_suite(cli);
            CliRun second = run_cli_suite(cli);
            bool identical = !first.out.empty() && first.out == second.out;
            bool clean = first.code == 0 && second.code == 0;
            bool in_budget = first.ms < 300000 && second.ms < 300000;
            bool parsed_pass = false;
            try {
                parsed_pass = nlohmann::json::parse(first.out).at("pass").get<bool>();
            } catch (...) {
            }
            bool ok = identical && clean && in_budget && parsed_pass;
            if (!ok) ++failures;
            std::printf("%s 13 CLI suite determinism: two runs %s, exit %d/%d, "
                        "%.1f s and %.1f s (budget 300 s)\n",
                        ok ? "PASS" : "FAIL",
                        identical ? "byte-identical" : "DIFFER", first.code,
                        second.code, first.ms / 1000.0, second.ms / 1000.0);
        }
    }

    if (failures == 0) {
        std::printf("acceptance gate: all 13 criteria pass\n");
        return 0;
    }
    std::printf("acceptance gate: %d criteria failing\n", failures);
    return 1;
}
