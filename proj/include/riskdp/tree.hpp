// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riskdp/risk.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace riskdp {

/// Finite rooted tree with branch probabilities. Depth-t nodes are the atoms
/// of the stage-t information structure; each non-leaf node's children carry
/// the conditional one-step law directly, so no conditioning arithmetic is
/// ever needed. All leaves sit at the same depth.
class ScenarioTree {
  public:
    struct Node {
        int parent; // -1 for the root
        double prob;
        int depth;
        std::vector<int> children;
    };

    /// Parent-before-child construction: entry i holds (parent index, branch
    /// probability); entry 0 must be the root (parent -1, probability 1).
    static ScenarioTree build(const std::vector<std::pair<int, double>>& parent_prob);

    /// Degenerate tree: one node per depth, branch probability 1.
    static ScenarioTree chain(int depth);

    int depth() const noexcept { return depth_; }
    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    const Node& node(int i) const { return nodes_[i]; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::span<const int> depth_slice(int d) const { return slices_[d]; }

  private:
    std::vector<Node> nodes_;
    std::vector<std::vector<int>> slices_;
    int depth_ = 0;
};

/// Node-indexed stage values Z_t(node); node at depth t carries Z_t.
class AdaptedProcess {
  public:
    explicit AdaptedProcess(std::vector<double> values);

    double operator[](int node) const { return values_[node]; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }

  private:
    std::vector<double> values_;
};

/// Stage-t nested risk: one-stage evaluations composed backward from depth t
/// to the root. t = 0 returns the root value.
double rho_t(const ScenarioTree& tree, const AdaptedProcess& process, const RiskSpec& spec,
             int t);

struct RhoLimitResult {
    double value;              // rho at full depth T
    std::vector<double> trace; // rho_0 .. rho_T
};

/// Full-depth nested risk of a path-wise non-increasing bounded process,
/// together with the full trace. The trace is checked to be non-increasing
/// and confined to [min Z_T, Z_0]; a violation is a VerificationError.
/// Non-monotone inputs are rejected up front, naming the offending edge.
RhoLimitResult rho_limit(const ScenarioTree& tree, const AdaptedProcess& process,
                         const RiskSpec& spec);

struct UniformBoundReport {
    double max_excess;     // worst (rho_{t+s} - rho_t) - e_t over all pairs; <= 0 when tight
    double min_difference; // smallest rho_{t+s} - rho_t observed; >= 0 up to tolerance
    int pairs_checked;
};

/// For a path-wise non-decreasing process with stage increments inside
/// [0, eps[t]], verifies 0 <= rho_{t+s} - rho_{t} <= e_t for every pair
/// t < t+s <= T, where e_t is the tail sum of eps. Tolerance 1e-9 on both
/// sides; violations raise VerificationError.
UniformBoundReport check_uniform_bound(const ScenarioTree& tree, const AdaptedProcess& process,
                                       const RiskSpec& spec, std::span<const double> eps);

struct DecompositionResult {
    double lhs; // rho at full depth of Z
    double rhs; // Z_0 + sigma over the root's children of the shifted subtree values
};

/// One-step decomposition of the nested risk: evaluates both sides by
/// independent traversal orders and checks they agree to 1e-9. Requires a
/// non-decreasing process (root value deterministic by construction).
DecompositionResult check_decomposition(const ScenarioTree& tree, const AdaptedProcess& process,
                                        const RiskSpec& spec);

/// Tree document: tree + adapted process (+ optional stage increment bounds).
struct TreeDocument {
    ScenarioTree tree;
    AdaptedProcess process;
    std::optional<std::vector<double>> eps;
};

/// Parses the textual tree format:
/// {"nodes":[{"id":0,"parent":null,"prob":1.0,"z":0.0}, ...], "eps":[...]}
/// ids must be dense, ordered parent-before-child; the root's prob is 1.0.
TreeDocument load_tree(const std::string& text);

std::string save_tree(const TreeDocument& doc);

} // namespace riskdp
