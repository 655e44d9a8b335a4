// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace riskdp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += '{';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += '[';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    first_.pop_back();
    return *this;
}

void JsonWriter::separate() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ", ";
        first_.back() = false;
    }
}

namespace {

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
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

JsonWriter& JsonWriter::key(std::string_view name) {
    separate();
    out_ += '"';
    out_ += escape(name);
    out_ += "\": ";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separate();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(long v) {
    separate();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separate();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    separate();
    out_ += '"';
    out_ += escape(v);
    out_ += '"';
    return *this;
}

std::string solve_report_json(const MdpModel& model, const SolveReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("risk").value(model.risk().to_string());
    w.key("gamma").value(model.gamma());
    w.key("theta").value(report.theta);
    w.key("iterations").value(static_cast<long>(report.iterations));
    w.key("banach_bound").value(report.banach_bound);
    w.key("v_star").begin_object();
    for (int s = 0; s < model.num_states(); ++s)
        w.key(model.states()[s]).value(report.v_star.values[s]);
    w.end_object();
    w.key("policy").begin_object();
    for (int s = 0; s < model.num_states(); ++s)
        w.key(model.states()[s]).value(model.actions(s)[report.policy.action[s]]);
    w.end_object();
    w.key("residuals").begin_array();
    for (double r : report.residuals)
        w.value(r);
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

std::string solve_report_csv(const MdpModel& model, const SolveReport& report) {
    std::string out = "iteration,residual,banach_bound\n";
    const double gamma = model.gamma();
    const double first = report.residuals.empty() ? 0.0 : report.residuals.front();
    for (std::size_t k = 0; k < report.residuals.size(); ++k) {
        const double bound = std::pow(gamma, k + 1) / (1.0 - gamma) * first;
        out += std::to_string(k + 1) + "," + format_double(report.residuals[k]) + "," +
               format_double(bound) + "\n";
    }
    return out;
}

std::string contraction_report_json(const ContractionReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("trials").value(static_cast<long>(report.trials));
    w.key("gamma").value(report.gamma);
    w.key("max_ratio").value(report.max_ratio);
    w.key("violations").begin_array();
    for (const ContractionViolation& v : report.violations) {
        w.begin_object();
        w.key("seed").value(static_cast<long>(v.seed));
        w.key("ratio").value(v.ratio);
        w.end_object();
    }
    w.end_array();
    w.key("pass").value(report.violations.empty());
    w.end_object();
    return w.str() + "\n";
}

std::string contraction_report_csv(const ContractionReport& report) {
    std::string out = "trials,gamma,max_ratio,violations\n";
    out += std::to_string(report.trials) + "," + format_double(report.gamma) + "," +
           format_double(report.max_ratio) + "," + std::to_string(report.violations.size()) +
           "\n";
    return out;
}

std::string axiom_report_json(const RiskSpec& spec, int trials, std::uint64_t seed,
                              const std::vector<harness::AxiomResult>& axioms) {
    JsonWriter w;
    w.begin_object();
    w.key("risk").value(spec.to_string());
    w.key("trials").value(static_cast<long>(trials));
    w.key("seed").value(static_cast<long>(seed));
    bool all = true;
    w.key("axioms").begin_array();
    for (const auto& a : axioms) {
        all = all && a.pass;
        w.begin_object();
        w.key("name").value(a.name);
        w.key("pass").value(a.pass);
        w.key("worst_slack").value(a.worst_slack);
        w.end_object();
    }
    w.end_array();
    w.key("all_pass").value(all);
    w.end_object();
    return w.str() + "\n";
}

std::string axiom_report_csv(const std::vector<harness::AxiomResult>& axioms) {
    std::string out = "axiom,pass,worst_slack\n";
    for (const auto& a : axioms)
        out += a.name + "," + (a.pass ? "true" : "false") + "," +
               format_double(a.worst_slack) + "\n";
    return out;
}

std::string nested_eval_json(const std::vector<double>& trace,
                             const std::vector<NestedEvalCheck>& checks) {
    JsonWriter w;
    w.begin_object();
    w.key("depth").value(static_cast<long>(trace.empty() ? 0 : trace.size() - 1));
    w.key("trace").begin_array();
    for (double v : trace)
        w.value(v);
    w.end_array();
    if (trace.size() >= 2)
        w.key("last_step_delta").value(std::fabs(trace.back() - trace[trace.size() - 2]));
    bool all = true;
    w.key("checks").begin_array();
    for (const auto& c : checks) {
        all = all && c.status != "fail";
        w.begin_object();
        w.key("name").value(c.name);
        w.key("status").value(c.status);
        if (!c.detail.empty()) w.key("detail").value(c.detail);
        w.end_object();
    }
    w.end_array();
    w.key("all_pass").value(all);
    w.end_object();
    return w.str() + "\n";
}

std::string nested_eval_csv(const std::vector<double>& trace) {
    std::string out = "stage,rho\n";
    for (std::size_t t = 0; t < trace.size(); ++t)
        out += std::to_string(t) + "," + format_double(trace[t]) + "\n";
    return out;
}

std::string verify_report_json(const harness::VerifyReport& report, std::uint64_t seed,
                               int trials) {
    JsonWriter w;
    w.begin_object();
    w.key("seed").value(static_cast<long>(seed));
    w.key("trials").value(static_cast<long>(trials));
    w.key("checks").begin_array();
    for (const auto& c : report.checks) {
        w.begin_object();
        w.key("name").value(c.name);
        w.key("pass").value(c.pass);
        w.key("detail").value(c.detail);
        w.end_object();
    }
    w.end_array();
    w.key("all_pass").value(report.all_pass);
    w.end_object();
    return w.str() + "\n";
}

std::string verify_report_csv(const harness::VerifyReport& report) {
    std::string out = "check,pass\n";
    for (const auto& c : report.checks)
        out += c.name + "," + (c.pass ? "true" : "false") + "\n";
    return out;
}

} // namespace riskdp
