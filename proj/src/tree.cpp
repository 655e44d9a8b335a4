// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/tree.hpp"

#include "riskdp/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace riskdp {

namespace {

constexpr double kProbSumTol = 1e-9;
constexpr double kBoundTol = 1e-9;

std::string node_path(int i) { return "nodes[" + std::to_string(i) + "]"; }

} // namespace

ScenarioTree ScenarioTree::build(const std::vector<std::pair<int, double>>& parent_prob) {
    if (parent_prob.empty())
        throw ValidationError("TREE_EMPTY", "", "tree needs at least a root node");
    ScenarioTree tree;
    tree.nodes_.resize(parent_prob.size());
    for (std::size_t i = 0; i < parent_prob.size(); ++i) {
        const auto [parent, prob] = parent_prob[i];
        Node& n = tree.nodes_[i];
        n.parent = parent;
        n.prob = prob;
        if (i == 0) {
            if (parent != -1)
                throw ValidationError("TREE_ROOT", node_path(0), "first node must be the root");
            if (prob != 1.0)
                throw ValidationError("TREE_ROOT_PROB", node_path(0),
                                      "root branch probability must be 1.0");
            n.depth = 0;
            continue;
        }
        if (parent < 0 || parent >= static_cast<int>(i))
            throw ValidationError("TREE_PARENT_ORDER", node_path(static_cast<int>(i)),
                                  "parent index must precede the node");
        if (!std::isfinite(prob) || prob <= 0.0)
            throw ValidationError("TREE_PROB", node_path(static_cast<int>(i)),
                                  "branch probability must be finite and > 0");
        n.depth = tree.nodes_[parent].depth + 1;
        tree.nodes_[parent].children.push_back(static_cast<int>(i));
    }

    int leaf_depth = -1;
    for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
        const Node& n = tree.nodes_[i];
        if (!n.children.empty()) {
            double mass = 0.0;
            for (int c : n.children)
                mass += tree.nodes_[c].prob;
            if (std::fabs(mass - 1.0) > kProbSumTol)
                throw ValidationError("TREE_BRANCH_SUM", node_path(static_cast<int>(i)),
                                      "children probabilities sum to " + std::to_string(mass));
        } else {
            if (leaf_depth == -1)
                leaf_depth = n.depth;
            else if (leaf_depth != n.depth)
                throw ValidationError("TREE_RAGGED", node_path(static_cast<int>(i)),
                                      "all leaves must share one depth");
        }
    }
    tree.depth_ = leaf_depth;
    tree.slices_.assign(leaf_depth + 1, {});
    for (std::size_t i = 0; i < tree.nodes_.size(); ++i)
        tree.slices_[tree.nodes_[i].depth].push_back(static_cast<int>(i));
    return tree;
}

ScenarioTree ScenarioTree::chain(int depth) {
    std::vector<std::pair<int, double>> spec_nodes;
    spec_nodes.emplace_back(-1, 1.0);
    for (int d = 1; d <= depth; ++d)
        spec_nodes.emplace_back(d - 1, 1.0);
    return build(spec_nodes);
}

AdaptedProcess::AdaptedProcess(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw ValidationError("NODE_VALUE_NONFINITE", node_path(static_cast<int>(i)),
                                  "process value must be finite");
}

namespace {

void require_process_matches(const ScenarioTree& tree, const AdaptedProcess& process) {
    if (process.size() != static_cast<std::size_t>(tree.size()))
        throw ValidationError("PROCESS_SIZE", "",
                              "process assigns " + std::to_string(process.size()) +
                                  " values to a tree of " + std::to_string(tree.size()) +
                                  " nodes");
}

/// Backward recursion from depth t to the root over a node-indexed buffer.
double rho_impl(const ScenarioTree& tree, const AdaptedProcess& process, const RiskSpec& spec,
                int t, detail::SigmaWorkspace& ws, std::vector<double>& buf,
                std::vector<double>& child_values, std::vector<double>& child_probs) {
    buf.resize(tree.size());
    for (int node : tree.depth_slice(t))
        buf[node] = process[node];
    for (int s = t; s >= 1; --s) {
        for (int node : tree.depth_slice(s - 1)) {
            const auto& children = tree.node(node).children;
            child_values.resize(children.size());
            child_probs.resize(children.size());
            for (std::size_t k = 0; k < children.size(); ++k) {
                child_values[k] = buf[children[k]];
                child_probs[k] = tree.node(children[k]).prob;
            }
            buf[node] = detail::sigma_atoms(spec, child_values, child_probs, ws);
        }
    }
    return buf[0];
}

void require_monotone(const ScenarioTree& tree, const AdaptedProcess& process, bool increasing) {
    for (int i = 1; i < tree.size(); ++i) {
        const int parent = tree.node(i).parent;
        const double step = process[i] - process[parent];
        if ((increasing && step < 0.0) || (!increasing && step > 0.0))
            throw ValidationError("PROCESS_NOT_MONOTONE", node_path(i),
                                  "edge " + std::to_string(parent) + "->" + std::to_string(i) +
                                      " moves by " + std::to_string(step) + ", expected " +
                                      (increasing ? "non-decreasing" : "non-increasing"));
    }
}

} // namespace

double rho_t(const ScenarioTree& tree, const AdaptedProcess& process, const RiskSpec& spec,
             int t) {
    require_process_matches(tree, process);
    if (t < 0 || t > tree.depth())
        throw ValidationError("DEPTH_RANGE", "",
                              "stage " + std::to_string(t) + " outside tree depth " +
                                  std::to_string(tree.depth()));
    detail::SigmaWorkspace ws;
    std::vector<double> buf, cv, cp;
    return rho_impl(tree, process, spec, t, ws, buf, cv, cp);
}

RhoLimitResult rho_limit(const ScenarioTree& tree, const AdaptedProcess& process,
                         const RiskSpec& spec) {
    require_process_matches(tree, process);
    require_monotone(tree, process, /*increasing=*/false);

    const int T = tree.depth();
    RhoLimitResult result;
    result.trace.resize(T + 1);
    detail::SigmaWorkspace ws;
    std::vector<double> buf, cv, cp;
    for (int t = 0; t <= T; ++t)
        result.trace[t] = rho_impl(tree, process, spec, t, ws, buf, cv, cp);
    result.value = result.trace[T];

    // The trace must fall monotonically and stay inside [min Z_T, Z_0].
    double lo = process[tree.depth_slice(T).front()];
    for (int node : tree.depth_slice(T))
        lo = std::min(lo, process[node]);
    const double hi = process[0];
    for (int t = 0; t <= T; ++t) {
        if (t > 0 && result.trace[t] > result.trace[t - 1] + kBoundTol)
            throw VerificationError("rho trace increases at stage " + std::to_string(t));
        if (result.trace[t] < lo - kBoundTol || result.trace[t] > hi + kBoundTol)
            throw VerificationError("rho trace leaves the support bounds at stage " +
                                    std::to_string(t));
    }
    return result;
}

UniformBoundReport check_uniform_bound(const ScenarioTree& tree, const AdaptedProcess& process,
                                       const RiskSpec& spec, std::span<const double> eps) {
    require_process_matches(tree, process);
    require_monotone(tree, process, /*increasing=*/true);
    const int T = tree.depth();
    if (static_cast<int>(eps.size()) < T)
        throw ValidationError("EPS_SIZE", "",
                              "need an increment bound per stage: " + std::to_string(T) +
                                  " required, got " + std::to_string(eps.size()));
    for (int i = 1; i < tree.size(); ++i) {
        const int parent = tree.node(i).parent;
        const double step = process[i] - process[parent];
        const double bound = eps[tree.node(i).depth - 1];
        if (step > bound)
            throw ValidationError("INCREMENT_BOUND", node_path(i),
                                  "edge increment " + std::to_string(step) +
                                      " exceeds its stage bound " + std::to_string(bound));
    }

    // e_t = sum of eps from stage t on.
    std::vector<double> tail(T + 1, 0.0);
    for (int t = T - 1; t >= 0; --t)
        tail[t] = tail[t + 1] + eps[t];

    detail::SigmaWorkspace ws;
    std::vector<double> buf, cv, cp;
    std::vector<double> trace(T + 1);
    for (int t = 0; t <= T; ++t)
        trace[t] = rho_impl(tree, process, spec, t, ws, buf, cv, cp);

    UniformBoundReport report{-std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity(), 0};
    for (int t = 0; t <= T; ++t) {
        for (int u = t + 1; u <= T; ++u) {
            const double diff = trace[u] - trace[t];
            report.max_excess = std::max(report.max_excess, diff - tail[t]);
            report.min_difference = std::min(report.min_difference, diff);
            ++report.pairs_checked;
            if (diff < -kBoundTol)
                throw VerificationError("rho difference " + std::to_string(diff) +
                                        " negative for stages " + std::to_string(t) + ".." +
                                        std::to_string(u));
            if (diff > tail[t] + kBoundTol)
                throw VerificationError("rho difference " + std::to_string(diff) +
                                        " exceeds tail bound " + std::to_string(tail[t]) +
                                        " for stages " + std::to_string(t) + ".." +
                                        std::to_string(u));
        }
    }
    return report;
}

DecompositionResult check_decomposition(const ScenarioTree& tree, const AdaptedProcess& process,
                                        const RiskSpec& spec) {
    require_process_matches(tree, process);
    require_monotone(tree, process, /*increasing=*/true);
    const int T = tree.depth();
    const double z0 = process[0];

    detail::SigmaWorkspace ws;
    std::vector<double> buf, cv, cp;
    DecompositionResult result;
    result.lhs = rho_impl(tree, process, spec, T, ws, buf, cv, cp);

    // Right side: evaluate each root child's subtree on the shifted process
    // by plain recursive descent (different traversal order from rho_impl).
    auto fold = [&](auto&& self, int node) -> double {
        if (tree.node(node).depth == T)
            return process[node] - z0;
        const auto& children = tree.node(node).children;
        std::vector<double> values(children.size());
        std::vector<double> probs(children.size());
        for (std::size_t k = 0; k < children.size(); ++k) {
            values[k] = self(self, children[k]);
            probs[k] = tree.node(children[k]).prob;
        }
        return detail::sigma_atoms(spec, values, probs, ws);
    };

    const auto& root_children = tree.node(0).children;
    if (root_children.empty()) {
        result.rhs = result.lhs; // depth-0 tree: nothing to decompose
        return result;
    }
    std::vector<double> child_values(root_children.size());
    std::vector<double> child_probs(root_children.size());
    for (std::size_t k = 0; k < root_children.size(); ++k) {
        child_values[k] = fold(fold, root_children[k]);
        child_probs[k] = tree.node(root_children[k]).prob;
    }
    result.rhs = z0 + detail::sigma_atoms(spec, child_values, child_probs, ws);

    if (std::fabs(result.lhs - result.rhs) > kBoundTol)
        throw VerificationError("decomposition mismatch: lhs " + std::to_string(result.lhs) +
                                " vs rhs " + std::to_string(result.rhs));
    return result;
}

TreeDocument load_tree(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("PARSE", "", e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        throw ValidationError("SCHEMA", "/nodes", "expected an object with a 'nodes' array");

    const auto& nodes = doc["nodes"];
    std::vector<std::pair<int, double>> parent_prob;
    std::vector<double> values;
    parent_prob.reserve(nodes.size());
    values.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string path = "/nodes/" + std::to_string(i);
        const auto& n = nodes[i];
        if (!n.is_object())
            throw ValidationError("SCHEMA", path, "node must be an object");
        if (!n.contains("id") || !n["id"].is_number_integer() ||
            n["id"].get<long>() != static_cast<long>(i))
            throw ValidationError("SCHEMA", path + "/id", "ids must be dense and in order");
        if (!n.contains("parent") || (!n["parent"].is_null() && !n["parent"].is_number_integer()))
            throw ValidationError("SCHEMA", path + "/parent", "parent must be an id or null");
        if (!n.contains("prob") || !n["prob"].is_number())
            throw ValidationError("SCHEMA", path + "/prob", "prob must be a number");
        if (!n.contains("z") || !n["z"].is_number())
            throw ValidationError("NODE_VALUE_MISSING", path + "/z",
                                  "every node needs a process value 'z'");
        parent_prob.emplace_back(n["parent"].is_null() ? -1 : n["parent"].get<int>(),
                                 n["prob"].get<double>());
        values.push_back(n["z"].get<double>());
    }

    TreeDocument out{ScenarioTree::build(parent_prob), AdaptedProcess(std::move(values)), {}};
    if (doc.contains("eps")) {
        if (!doc["eps"].is_array())
            throw ValidationError("SCHEMA", "/eps", "eps must be an array of numbers");
        std::vector<double> eps;
        for (const auto& e : doc["eps"]) {
            if (!e.is_number())
                throw ValidationError("SCHEMA", "/eps", "eps must be an array of numbers");
            eps.push_back(e.get<double>());
        }
        out.eps = std::move(eps);
    }
    return out;
}

std::string save_tree(const TreeDocument& doc) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string out = "{\"nodes\": [";
    for (int i = 0; i < doc.tree.size(); ++i) {
        const auto& n = doc.tree.node(i);
        if (i) out += ", ";
        out += "{\"id\": " + std::to_string(i) + ", \"parent\": " +
               (n.parent < 0 ? std::string("null") : std::to_string(n.parent)) +
               ", \"prob\": " + num(n.prob) + ", \"z\": " + num(doc.process[i]) + "}";
    }
    out += "]";
    if (doc.eps) {
        out += ", \"eps\": [";
        for (std::size_t i = 0; i < doc.eps->size(); ++i) {
            if (i) out += ", ";
            out += num((*doc.eps)[i]);
        }
        out += "]";
    }
    out += "}\n";
    return out;
}

} // namespace riskdp
