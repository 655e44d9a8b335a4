// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riskdp/harness.hpp"
#include "riskdp/mdp.hpp"
#include "riskdp/solver.hpp"
#include "riskdp/tree.hpp"

#include <string>
#include <vector>

namespace riskdp {

/// Doubles rendered with 17 significant digits: parsing the text recovers
/// the exact bit pattern.
std::string format_double(double v);

/// Minimal deterministic JSON emitter — key order is insertion order, no
/// whitespace surprises, doubles via format_double. Output is byte-stable
/// for identical inputs, which report serialization relies on.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& value(double v);
    JsonWriter& value(long v);
    JsonWriter& value(int v) { return value(static_cast<long>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);

    std::string str() const { return out_; }

  private:
    void separate();
    std::string out_;
    std::vector<bool> first_;
    bool pending_key_ = false;
};

std::string solve_report_json(const MdpModel& model, const SolveReport& report);
std::string solve_report_csv(const MdpModel& model, const SolveReport& report);

std::string contraction_report_json(const ContractionReport& report);
std::string contraction_report_csv(const ContractionReport& report);

std::string axiom_report_json(const RiskSpec& spec, int trials, std::uint64_t seed,
                              const std::vector<harness::AxiomResult>& axioms);
std::string axiom_report_csv(const std::vector<harness::AxiomResult>& axioms);

struct NestedEvalCheck {
    std::string name;
    std::string status; // pass | fail | skipped
    std::string detail;
};

std::string nested_eval_json(const std::vector<double>& trace,
                             const std::vector<NestedEvalCheck>& checks);
std::string nested_eval_csv(const std::vector<double>& trace);

std::string verify_report_json(const harness::VerifyReport& report, std::uint64_t seed,
                               int trials);
std::string verify_report_csv(const harness::VerifyReport& report);

} // namespace riskdp
