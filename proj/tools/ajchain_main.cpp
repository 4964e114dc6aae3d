// Command-line front end: parses flags into a RunConfig and executes it.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ajchain/cli.hpp"

namespace {

void add_chain_flags(CLI::App* cmd, ajchain::RunConfig& cfg, bool require_ab = true) {
    auto* a = cmd->add_option("--alpha", cfg.alpha, "chain parameter alpha in (-1,1)");
    auto* b = cmd->add_option("--beta", cfg.beta, "chain parameter beta in (-1,0)");
    if (require_ab) {
        a->required();
        b->required();
    }
    cmd->add_option("--t", cfg.t, "shift parameter t")->each([&cfg](const std::string&) {
        cfg.has_t = true;
    });
    cmd->add_option("--A", cfg.A, "urn parameter A (alpha = 1/A)");
    cmd->add_option("--B", cfg.B, "urn parameter B (beta = -1/B)");
    cmd->add_option("--T", cfg.T, "urn parameter T (t = 1/T + K)")->each([&cfg](const std::string&) {
        cfg.has_urn_params = true;
    });
    cmd->add_option("--K", cfg.K, "urn parameter K (t = 1/T + K)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bilateral birth-death chain of the associated Jacobi recurrence"};
    app.require_subcommand(1);

    ajchain::RunConfig cfg;

    auto* regions = app.add_subcommand("regions", "classify (alpha, beta) and list admissible t intervals");
    add_chain_flags(regions, cfg);
    regions->add_option("--n-lo", cfg.n_lo, "lowest interval index");
    regions->add_option("--n-hi", cfg.n_hi, "highest interval index");

    auto* coeffs = app.add_subcommand("coeffs", "chain coefficients p,r,q,a,b,pi over an index range");
    add_chain_flags(coeffs, cfg);
    coeffs->add_option("--n-lo", cfg.n_lo, "lowest state index");
    coeffs->add_option("--n-hi", cfg.n_hi, "highest state index");

    auto* fact = app.add_subcommand("factorize", "stochastic UL/LU factor entries and the continued fractions");
    add_chain_flags(fact, cfg);
    fact->add_option("--kind", cfg.kind, "UL or LU")->check(CLI::IsMember({"UL", "LU"}));
    fact->add_option("--n-lo", cfg.n_lo, "lowest entry index");
    fact->add_option("--n-hi", cfg.n_hi, "highest entry index");

    auto* dens = app.add_subcommand("density", "spectral density as CSV (x, w11, w12, w22)");
    add_chain_flags(dens, cfg);
    dens->add_option("--family", cfg.family, "W, psi, ul (Psi~) or lu (Psi^)")
        ->check(CLI::IsMember({"W", "psi", "ul", "lu"}));
    dens->add_option("--format", cfg.output_format, "csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));
    dens->add_option("--points", cfg.points, "grid size");
    dens->add_option("--x-min", cfg.x_min, "grid start (0,1)");
    dens->add_option("--x-max", cfg.x_max, "grid end (0,1)");

    auto* trans = app.add_subcommand("transition", "n-step transition probability: spectral formula vs exact oracle");
    add_chain_flags(trans, cfg);
    trans->add_option("--i", cfg.i, "start state")->required();
    trans->add_option("--j", cfg.j, "end state")->required();
    trans->add_option("--n", cfg.n, "number of steps")->required();
    trans->add_option("--nodes", cfg.nodes, "quadrature nodes per rule (default AJCHAIN_NODES or 200)");

    auto* urn = app.add_subcommand("urn", "simulate the two-experiment urn model against the exact law");
    urn->add_option("--A", cfg.A, "urn parameter A")->required();
    urn->add_option("--B", cfg.B, "urn parameter B")->required();
    urn->add_option("--T", cfg.T, "urn parameter T")->required();
    urn->add_option("--K", cfg.K, "urn parameter K")->required();
    urn->add_option("--start", cfg.start, "initial state");
    urn->add_option("--steps", cfg.steps, "chain steps per replica");
    urn->add_option("--replicas", cfg.replicas, "number of replicas");
    urn->add_option("--seed", cfg.seed, "64-bit seed");

    auto* verify = app.add_subcommand("verify", "run the invariant battery for one parameter set");
    add_chain_flags(verify, cfg);
    verify->add_option("--nodes", cfg.nodes, "quadrature nodes per rule");

    CLI11_PARSE(app, argc, argv);

    if (regions->parsed()) cfg.command = ajchain::Command::regions;
    else if (coeffs->parsed()) cfg.command = ajchain::Command::coeffs;
    else if (fact->parsed()) cfg.command = ajchain::Command::factorize;
    else if (dens->parsed()) cfg.command = ajchain::Command::density;
    else if (trans->parsed()) cfg.command = ajchain::Command::transition;
    else if (urn->parsed()) cfg.command = ajchain::Command::urn;
    else if (verify->parsed()) cfg.command = ajchain::Command::verify;

    return ajchain::run(cfg, std::cout, std::cerr);
}
