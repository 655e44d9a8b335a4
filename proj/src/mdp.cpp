// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/mdp.hpp"

#include "riskdp/errors.hpp"
#include "riskdp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

namespace riskdp {

namespace {

constexpr double kProbSumTol = 1e-9;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

} // namespace

MdpModel::MdpModel(std::vector<std::string> states, std::vector<std::vector<std::string>> actions,
                   std::vector<std::vector<double>> rewards,
                   std::vector<std::vector<std::vector<Transition>>> transitions, double gamma,
                   RiskSpec risk)
    : states_(std::move(states)), actions_(std::move(actions)), rewards_(std::move(rewards)),
      transitions_(std::move(transitions)), gamma_(gamma), risk_(risk) {
    if (states_.empty())
        throw ValidationError("NO_STATES", "/states", "model needs at least one state");
    if (!(gamma_ >= 0.0) || !(gamma_ < 1.0))
        throw ValidationError("GAMMA_RANGE", "/gamma",
                              "discount factor must lie in [0,1), got " + std::to_string(gamma_));
    if (actions_.size() != states_.size() || rewards_.size() != states_.size() ||
        transitions_.size() != states_.size())
        throw ValidationError("SCHEMA", "", "per-state tables must cover every state");

    std::unordered_map<std::string_view, int> seen;
    for (int s = 0; s < num_states(); ++s) {
        if (!seen.emplace(states_[s], s).second)
            throw ValidationError("DUPLICATE_STATE", "/states/" + std::to_string(s),
                                  "state name '" + states_[s] + "' repeats");
    }

    for (int s = 0; s < num_states(); ++s) {
        const std::string spath = "/" + states_[s];
        if (actions_[s].empty())
            throw ValidationError("EMPTY_ACTIONS", "/actions" + spath,
                                  "state needs at least one admissible action");
        if (rewards_[s].size() != actions_[s].size() ||
            transitions_[s].size() != actions_[s].size())
            throw ValidationError("SCHEMA", spath,
                                  "rewards and transitions must cover every admissible action");
        for (std::size_t a = 0; a < actions_[s].size(); ++a) {
            const std::string apath = spath + "/" + actions_[s][a];
            const double r = rewards_[s][a];
            if (!std::isfinite(r))
                throw ValidationError("REWARD_NONFINITE", "/rewards" + apath,
                                      "reward must be finite");
            if (r < 0.0)
                throw ValidationError("REWARD_NEGATIVE", "/rewards" + apath,
                                      "reward must be non-negative, got " + std::to_string(r));
            r_max_ = std::max(r_max_, r);
            const auto& row = transitions_[s][a];
            if (row.empty())
                throw ValidationError("EMPTY_ROW", "/transitions" + apath,
                                      "transition row must not be empty");
            double mass = 0.0;
            for (std::size_t k = 0; k < row.size(); ++k) {
                const std::string kpath =
                    "/transitions" + apath + "/" + std::to_string(k);
                if (row[k].next_state < 0 || row[k].next_state >= num_states())
                    throw ValidationError("DANGLING_STATE", kpath,
                                          "next state index out of range");
                if (!std::isfinite(row[k].probability) || row[k].probability <= 0.0)
                    throw ValidationError("PROB_NONPOSITIVE", kpath,
                                          "transition probability must be > 0");
                mass += row[k].probability;
            }
            if (std::fabs(mass - 1.0) > kProbSumTol)
                throw ValidationError("PROB_ROW_SUM", "/transitions" + apath,
                                      "row probabilities sum to " + std::to_string(mass));
        }
    }
}

int MdpModel::state_index(std::string_view name) const {
    for (int s = 0; s < num_states(); ++s)
        if (states_[s] == name) return s;
    return -1;
}

int MdpModel::action_index(int s, std::string_view name) const {
    for (std::size_t a = 0; a < actions_[s].size(); ++a)
        if (actions_[s][a] == name) return static_cast<int>(a);
    return -1;
}

DiscreteDistribution MdpModel::next_value_distribution(const ValueFunction& v, int s, int a) const {
    if (a < 0 || a >= static_cast<int>(actions_[s].size()))
        throw ValidationError("ACTION_RANGE", "",
                              "action index " + std::to_string(a) + " not admissible in state " +
                                  states_[s]);
    std::vector<Atom> atoms;
    const auto row = transitions(s, a);
    atoms.reserve(row.size());
    for (const Transition& t : row)
        atoms.push_back({v.values[t.next_state], t.probability});
    return DiscreteDistribution(std::move(atoms));
}

MdpModel MdpModel::load(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("PARSE", "", e.what());
    }
    if (!doc.is_object())
        throw ValidationError("SCHEMA", "", "model document must be an object");

    for (const char* key : {"gamma", "states", "actions", "rewards", "transitions"})
        if (!doc.contains(key))
            throw ValidationError("SCHEMA", std::string("/") + key, "required key missing");

    if (!doc["gamma"].is_number())
        throw ValidationError("SCHEMA", "/gamma", "gamma must be a number");
    const double gamma = doc["gamma"].get<double>();

    RiskSpec risk = RiskSpec::expectation();
    if (doc.contains("risk")) {
        if (!doc["risk"].is_string())
            throw ValidationError("SCHEMA", "/risk", "risk must be a spec string");
        risk = RiskSpec::parse(doc["risk"].get<std::string>());
    }

    if (!doc["states"].is_array() || doc["states"].empty())
        throw ValidationError("SCHEMA", "/states", "states must be a non-empty array");
    std::vector<std::string> states;
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < doc["states"].size(); ++i) {
        if (!doc["states"][i].is_string())
            throw ValidationError("SCHEMA", "/states/" + std::to_string(i),
                                  "state names must be strings");
        states.push_back(doc["states"][i].get<std::string>());
        index.emplace(states.back(), static_cast<int>(i));
    }

    std::vector<std::vector<std::string>> actions(states.size());
    std::vector<std::vector<double>> rewards(states.size());
    std::vector<std::vector<std::vector<Transition>>> transitions(states.size());

    for (std::size_t s = 0; s < states.size(); ++s) {
        const std::string& name = states[s];
        const auto& actions_doc = doc["actions"];
        if (!actions_doc.is_object() || !actions_doc.contains(name))
            throw ValidationError("EMPTY_ACTIONS", "/actions/" + name,
                                  "every state needs an admissible action list");
        const auto& list = actions_doc[name];
        if (!list.is_array() || list.empty())
            throw ValidationError("EMPTY_ACTIONS", "/actions/" + name,
                                  "admissible action list must be a non-empty array");
        for (const auto& a : list) {
            if (!a.is_string())
                throw ValidationError("SCHEMA", "/actions/" + name,
                                      "action names must be strings");
            actions[s].push_back(a.get<std::string>());
        }

        for (std::size_t a = 0; a < actions[s].size(); ++a) {
            const std::string& aname = actions[s][a];
            const std::string rpath = "/rewards/" + name + "/" + aname;
            if (!doc["rewards"].is_object() || !doc["rewards"].contains(name) ||
                !doc["rewards"][name].is_object() || !doc["rewards"][name].contains(aname))
                throw ValidationError("MISSING_REWARD", rpath,
                                      "every admissible action needs a reward");
            if (!doc["rewards"][name][aname].is_number())
                throw ValidationError("SCHEMA", rpath, "reward must be a number");
            rewards[s].push_back(doc["rewards"][name][aname].get<double>());

            const std::string tpath = "/transitions/" + name + "/" + aname;
            if (!doc["transitions"].is_object() || !doc["transitions"].contains(name) ||
                !doc["transitions"][name].is_object() ||
                !doc["transitions"][name].contains(aname))
                throw ValidationError("MISSING_TRANSITION", tpath,
                                      "every admissible action needs a transition row");
            const auto& row = doc["transitions"][name][aname];
            if (!row.is_array() || row.empty())
                throw ValidationError("SCHEMA", tpath, "transition row must be a non-empty array");
            std::vector<Transition> parsed;
            for (std::size_t k = 0; k < row.size(); ++k) {
                const std::string kpath = tpath + "/" + std::to_string(k);
                const auto& entry = row[k];
                if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                    !entry[1].is_number())
                    throw ValidationError("SCHEMA", kpath,
                                          "transition entries are [next-state, probability]");
                const std::string next = entry[0].get<std::string>();
                const auto it = index.find(next);
                if (it == index.end())
                    throw ValidationError("DANGLING_STATE", kpath,
                                          "next state '" + next + "' is not declared");
                parsed.push_back({it->second, entry[1].get<double>()});
            }
            transitions[s].push_back(std::move(parsed));
        }
    }

    return MdpModel(std::move(states), std::move(actions), std::move(rewards),
                    std::move(transitions), gamma, risk);
}

MdpModel MdpModel::random(int n_states, int n_actions, int branching, double gamma,
                          std::uint64_t seed) {
    if (n_states < 1)
        throw ValidationError("PARAM_RANGE", "", "n_states must be >= 1");
    if (n_actions < 1)
        throw ValidationError("PARAM_RANGE", "", "n_actions must be >= 1");
    if (branching < 1 || branching > n_states)
        throw ValidationError("PARAM_RANGE", "",
                              "branching must lie in [1, n_states], got " +
                                  std::to_string(branching));
    if (!(gamma >= 0.0) || !(gamma < 1.0))
        throw ValidationError("GAMMA_RANGE", "", "discount factor must lie in [0,1)");

    Rng rng(seed);
    std::vector<std::string> states(n_states);
    for (int s = 0; s < n_states; ++s)
        states[s] = "s" + std::to_string(s);
    std::vector<std::string> action_names(n_actions);
    for (int a = 0; a < n_actions; ++a)
        action_names[a] = "a" + std::to_string(a);

    std::vector<std::vector<std::string>> actions(n_states, action_names);
    std::vector<std::vector<double>> rewards(n_states);
    std::vector<std::vector<std::vector<Transition>>> transitions(n_states);

    std::vector<int> candidates(n_states);
    for (int s = 0; s < n_states; ++s) {
        rewards[s].resize(n_actions);
        transitions[s].resize(n_actions);
        for (int a = 0; a < n_actions; ++a) {
            rewards[s][a] = rng.uniform01();
            // `branching` distinct successors via a partial shuffle.
            std::iota(candidates.begin(), candidates.end(), 0);
            for (int k = 0; k < branching; ++k) {
                const int j = static_cast<int>(rng.uniform_int(k, n_states - 1));
                std::swap(candidates[k], candidates[j]);
            }
            // Simplex-uniform weights: normalized exponentials.
            std::vector<double> weights(branching);
            double total = 0.0;
            for (int k = 0; k < branching; ++k) {
                weights[k] = -std::log(rng.uniform_open01());
                total += weights[k];
            }
            auto& row = transitions[s][a];
            row.resize(branching);
            for (int k = 0; k < branching; ++k)
                row[k] = {candidates[k], weights[k] / total};
        }
    }

    return MdpModel(std::move(states), std::move(actions), std::move(rewards),
                    std::move(transitions), gamma, RiskSpec::expectation());
}

std::string MdpModel::save() const {
    std::string out = "{\n";
    out += "  \"gamma\": " + fmt17(gamma_) + ",\n";
    out += "  \"risk\": \"" + risk_.to_string() + "\",\n";
    out += "  \"states\": [";
    for (int s = 0; s < num_states(); ++s) {
        if (s) out += ", ";
        out += "\"" + json_escape(states_[s]) + "\"";
    }
    out += "],\n";

    out += "  \"actions\": {";
    for (int s = 0; s < num_states(); ++s) {
        if (s) out += ", ";
        out += "\"" + json_escape(states_[s]) + "\": [";
        for (std::size_t a = 0; a < actions_[s].size(); ++a) {
            if (a) out += ", ";
            out += "\"" + json_escape(actions_[s][a]) + "\"";
        }
        out += "]";
    }
    out += "},\n";

    out += "  \"rewards\": {";
    for (int s = 0; s < num_states(); ++s) {
        if (s) out += ", ";
        out += "\"" + json_escape(states_[s]) + "\": {";
        for (std::size_t a = 0; a < actions_[s].size(); ++a) {
            if (a) out += ", ";
            out += "\"" + json_escape(actions_[s][a]) + "\": " + fmt17(rewards_[s][a]);
        }
        out += "}";
    }
    out += "},\n";

    out += "  \"transitions\": {\n";
    for (int s = 0; s < num_states(); ++s) {
        out += "    \"" + json_escape(states_[s]) + "\": {";
        for (std::size_t a = 0; a < actions_[s].size(); ++a) {
            if (a) out += ", ";
            out += "\"" + json_escape(actions_[s][a]) + "\": [";
            const auto& row = transitions_[s][a];
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (k) out += ", ";
                out += "[\"" + json_escape(states_[row[k].next_state]) + "\", " +
                       fmt17(row[k].probability) + "]";
            }
            out += "]";
        }
        out += "}";
        out += (s + 1 < num_states()) ? ",\n" : "\n";
    }
    out += "  }\n}\n";
    return out;
}

} // namespace riskdp
