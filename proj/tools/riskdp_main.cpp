// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: solve models, evaluate nested risk on trees, and
// run the verification harnesses. Exit codes: 0 success, 1 a checked claim
// failed, 2 bad input, 3 iteration budget exhausted.

#include "riskdp/errors.hpp"
#include "riskdp/harness.hpp"
#include "riskdp/mdp.hpp"
#include "riskdp/oracles.hpp"
#include "riskdp/report_io.hpp"
#include "riskdp/solver.hpp"
#include "riskdp/tree.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace riskdp;

constexpr int kExitOk = 0;
constexpr int kExitClaimFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitIterationBudget = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("IO_ERROR", "", "cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out)
        throw ValidationError("IO_ERROR", "", "cannot write '" + output_path + "'");
    out << text;
}

struct CommonOptions {
    std::string model_path;
    std::string tree_path;
    std::string policy_path;
    std::string risk;
    double theta = 1e-8;
    long max_iters = 1'000'000;
    std::uint64_t seed = 0;
    int trials = 1000;
    double amplitude = 10.0;
    std::string output_path;
    std::string format = "json";
    bool self_test_break = false;
};

MdpModel load_model_with_risk(const CommonOptions& opt) {
    MdpModel model = MdpModel::load(read_file(opt.model_path));
    if (!opt.risk.empty())
        model.set_risk(RiskSpec::parse(opt.risk));
    return model;
}

bool monotone_edges(const ScenarioTree& tree, const AdaptedProcess& process, bool increasing) {
    for (int i = 1; i < tree.size(); ++i) {
        const double step = process[i] - process[tree.node(i).parent];
        if ((increasing && step < 0.0) || (!increasing && step > 0.0)) return false;
    }
    return true;
}

int cmd_solve(const CommonOptions& opt) {
    const MdpModel model = load_model_with_risk(opt);
    const SolveReport report = value_iteration(model, zero_value(model), opt.theta, opt.max_iters);
    std::cerr << "converged in " << report.iterations << " sweeps, "
              << report.elapsed_seconds << " s\n";
    emit(opt.format == "csv" ? solve_report_csv(model, report)
                             : solve_report_json(model, report),
         opt.output_path);
    return kExitOk;
}

int cmd_evaluate_policy(const CommonOptions& opt) {
    const MdpModel model = load_model_with_risk(opt);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(opt.policy_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("PARSE", "", e.what());
    }
    if (!doc.is_object())
        throw ValidationError("SCHEMA", "", "policy document must map states to actions");

    // Restrict each state to the chosen action and re-solve: the restricted
    // sweep is the fixed-policy recursion.
    std::vector<std::string> states = model.states();
    std::vector<std::vector<std::string>> actions(states.size());
    std::vector<std::vector<double>> rewards(states.size());
    std::vector<std::vector<std::vector<MdpModel::Transition>>> transitions(states.size());
    for (int s = 0; s < model.num_states(); ++s) {
        const std::string& name = states[s];
        if (!doc.contains(name) || !doc[name].is_string())
            throw ValidationError("POLICY_STATE", "/" + name,
                                  "policy must name an action for every state");
        const std::string action_name = doc[name].get<std::string>();
        const int a = model.action_index(s, action_name);
        if (a < 0)
            throw ValidationError("POLICY_ACTION", "/" + name,
                                  "action '" + action_name + "' not admissible");
        actions[s] = {action_name};
        rewards[s] = {model.reward(s, a)};
        const auto row = model.transitions(s, a);
        transitions[s] = {std::vector<MdpModel::Transition>(row.begin(), row.end())};
    }
    MdpModel restricted(std::move(states), std::move(actions), std::move(rewards),
                        std::move(transitions), model.gamma(), model.risk());
    const SolveReport report =
        value_iteration(restricted, zero_value(restricted), opt.theta, opt.max_iters);
    emit(opt.format == "csv" ? solve_report_csv(restricted, report)
                             : solve_report_json(restricted, report),
         opt.output_path);
    return kExitOk;
}

int cmd_check_contraction(const CommonOptions& opt) {
    const MdpModel model = load_model_with_risk(opt);
    const double gamma = model.gamma();
    const double operator_gamma =
        opt.self_test_break ? gamma + 0.6 * (1.0 - gamma) : gamma;
    const ContractionReport report =
        check_contraction(model, opt.trials, opt.amplitude, opt.seed, operator_gamma);
    emit(opt.format == "csv" ? contraction_report_csv(report)
                             : contraction_report_json(report),
         opt.output_path);
    return report.violations.empty() ? kExitOk : kExitClaimFailed;
}

int cmd_check_axioms(const CommonOptions& opt) {
    const RiskSpec spec = RiskSpec::parse(opt.risk.empty() ? "expectation" : opt.risk);
    const auto axioms = harness::axiom_suite(spec, opt.trials, opt.seed);
    emit(opt.format == "csv" ? axiom_report_csv(axioms)
                             : axiom_report_json(spec, opt.trials, opt.seed, axioms),
         opt.output_path);
    for (const auto& a : axioms)
        if (!a.pass) return kExitClaimFailed;
    return kExitOk;
}

int cmd_nested_eval(const CommonOptions& opt) {
    const TreeDocument doc = load_tree(read_file(opt.tree_path));
    const RiskSpec spec = RiskSpec::parse(opt.risk.empty() ? "expectation" : opt.risk);

    std::vector<double> trace(doc.tree.depth() + 1);
    for (int t = 0; t <= doc.tree.depth(); ++t)
        trace[t] = rho_t(doc.tree, doc.process, spec, t);

    std::vector<NestedEvalCheck> checks;
    if (monotone_edges(doc.tree, doc.process, /*increasing=*/false)) {
        try {
            rho_limit(doc.tree, doc.process, spec);
            checks.push_back({"monotone-limit", "pass", ""});
        } catch (const VerificationError& e) {
            checks.push_back({"monotone-limit", "fail", e.what()});
        }
    } else {
        checks.push_back({"monotone-limit", "skipped", "process is not non-increasing"});
    }

    const bool nondecreasing = monotone_edges(doc.tree, doc.process, /*increasing=*/true);
    if (doc.eps && nondecreasing) {
        try {
            const UniformBoundReport r =
                check_uniform_bound(doc.tree, doc.process, spec, *doc.eps);
            checks.push_back({"uniform-bound", "pass",
                              "max_excess=" + format_double(r.max_excess)});
        } catch (const ValidationError& e) {
            // file-supplied bounds do not cover the increments: not applicable
            checks.push_back({"uniform-bound", "skipped", e.what()});
        } catch (const VerificationError& e) {
            checks.push_back({"uniform-bound", "fail", e.what()});
        }
    } else {
        checks.push_back({"uniform-bound", "skipped",
                          doc.eps ? "process is not non-decreasing"
                                  : "no stage increment bounds in the file"});
    }

    if (nondecreasing) {
        try {
            const DecompositionResult r = check_decomposition(doc.tree, doc.process, spec);
            checks.push_back({"decomposition", "pass",
                              "residual=" + format_double(std::fabs(r.lhs - r.rhs))});
        } catch (const VerificationError& e) {
            checks.push_back({"decomposition", "fail", e.what()});
        }
    } else {
        checks.push_back({"decomposition", "skipped", "process is not non-decreasing"});
    }

    emit(opt.format == "csv" ? nested_eval_csv(trace) : nested_eval_json(trace, checks),
         opt.output_path);
    for (const auto& c : checks)
        if (c.status == "fail") return kExitClaimFailed;
    return kExitOk;
}

int cmd_verify(const CommonOptions& opt) {
    std::vector<RiskSpec> specs;
    if (!opt.risk.empty()) {
        specs.push_back(RiskSpec::parse(opt.risk));
    } else {
        specs = {RiskSpec::expectation(), RiskSpec::cvar(0.25),
                 RiskSpec::mean_cvar(0.5, 0.25), RiskSpec::worst_case()};
    }
    std::optional<MdpModel> model;
    if (!opt.model_path.empty()) model = load_model_with_risk(opt);

    const harness::VerifyReport report = harness::verify_all(
        specs, model ? &*model : nullptr, opt.trials, opt.seed, opt.self_test_break);
    emit(opt.format == "csv" ? verify_report_csv(report)
                             : verify_report_json(report, opt.seed, opt.trials),
         opt.output_path);
    return report.all_pass ? kExitOk : kExitClaimFailed;
}

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool model, bool tree, bool solveish) {
    if (model) cmd->add_option("--model", opt.model_path, "model file");
    if (tree) cmd->add_option("--tree", opt.tree_path, "tree file");
    cmd->add_option("--risk", opt.risk,
                    "risk spec: expectation | cvar:<a> | mean-cvar:<l>:<a> | worst-case");
    if (solveish) {
        cmd->add_option("--theta", opt.theta, "stopping precision (default 1e-8)");
        cmd->add_option("--max-iters", opt.max_iters, "sweep budget (default 1e6)");
    }
    cmd->add_option("--seed", opt.seed, "random seed (default 0)");
    cmd->add_option("--trials", opt.trials, "random trials (default 1000)");
    cmd->add_option("--output", opt.output_path, "write the report here instead of stdout");
    cmd->add_option("--format", opt.format, "json | csv (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"risk-averse discounted dynamic programming"};
    app.require_subcommand(1);

    CommonOptions opt;

    CLI::App* solve = app.add_subcommand("solve", "value iteration on a model file");
    add_common_flags(solve, opt, true, false, true);
    solve->get_option("--model")->required();

    CLI::App* eval_policy = app.add_subcommand(
        "evaluate-policy", "fixed-policy value via the single-action recursion");
    add_common_flags(eval_policy, opt, true, false, true);
    eval_policy->get_option("--model")->required();
    eval_policy->add_option("--policy", opt.policy_path, "policy file: {\"state\": \"action\"}")
        ->required();

    CLI::App* contraction =
        app.add_subcommand("check-contraction", "operator Lipschitz factor on random pairs");
    add_common_flags(contraction, opt, true, false, false);
    contraction->get_option("--model")->required();
    contraction->add_option("--amplitude", opt.amplitude, "value amplitude (default 10)");
    contraction->add_flag("--self-test-break", opt.self_test_break,
                          "mis-scale the applied discount to prove the harness can fail");

    CLI::App* axioms = app.add_subcommand("check-axioms", "coherence axiom property suite");
    add_common_flags(axioms, opt, false, false, false);

    CLI::App* nested = app.add_subcommand("nested-eval", "nested risk trace and checks on a tree");
    add_common_flags(nested, opt, false, true, false);
    nested->get_option("--tree")->required();

    CLI::App* verify = app.add_subcommand("verify", "run every claim check on built-in fixtures");
    add_common_flags(verify, opt, true, false, false);
    verify->add_flag("--self-test-corrupt", opt.self_test_break,
                     "corrupt the contraction check to prove the harness can fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (eval_policy->parsed()) return cmd_evaluate_policy(opt);
        if (contraction->parsed()) return cmd_check_contraction(opt);
        if (axioms->parsed()) return cmd_check_axioms(opt);
        if (nested->parsed()) return cmd_nested_eval(opt);
        if (verify->parsed()) return cmd_verify(opt);
    } catch (const IterationLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIterationBudget;
    } catch (const SizeLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const VerificationError& e) {
        std::cerr << "claim violated: " << e.what() << "\n";
        return kExitClaimFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
