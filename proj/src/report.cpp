#include "pascal/report.hpp"

#include <sstream>

#include <json.hpp>

namespace pascal {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string hex64(uint64_t v) {
    std::ostringstream s;
    s << "0x" << std::hex << v;
    return s.str();
}

ordered_json inputs_json(const std::map<std::string, uint64_t> &m) {
    ordered_json j = ordered_json::object();
    for (const auto &[k, v] : m)
        j[k] = hex64(v);
    return j;
}

ordered_json witness_json(const TraceWitness &w) {
    ordered_json j;
    j["public_inputs"] = inputs_json(w.stimulus.public_inputs);
    j["secret_inputs"] = inputs_json(w.stimulus.secret_inputs);
    j["completed"] = w.completed;
    j["latency"] = w.latency;
    ordered_json wave = ordered_json::array();
    for (uint64_t v : w.waveform(w.trace_signals.empty() ? "" : w.trace_signals[0]))
        wave.push_back((int)v);
    j["done_waveform"] = wave;
    j["data_at_done"] = inputs_json(w.data_at_done);
    if (!w.failed_assertions.empty())
        j["failed_assertions"] = w.failed_assertions;
    return j;
}

} // namespace

std::string report_to_json(const ReportDocument &doc) {
    ordered_json j;
    j["schema"] = 1;
    j["design"] = {{"name", doc.design_name},
                   {"file", doc.input_file},
                   {"sha256", doc.content_sha256}};
    j["t_bound"] = doc.t_bound;
    j["taint"] = {{"verdict", doc.taint_verdict}};
    if (!doc.tainted_signals.empty())
        j["taint"]["tainted"] = doc.tainted_signals;
    if (!doc.witness_cones.empty()) {
        ordered_json cones = ordered_json::object();
        for (const auto &[obs, cone] : doc.witness_cones)
            cones[obs] = cone;
        j["taint"]["witness_cones"] = cones;
    }
    if (doc.classes) {
        const TimingClassReport &r = *doc.classes;
        ordered_json cj;
        cj["engine"] = r.engine;
        cj["mode"] = r.mode;
        cj["verdict"] = enum_verdict_name(r.verdict);
        cj["exhausted"] = r.exhausted;
        cj["iterations"] = r.iterations;
        cj["count"] = r.classes.size();
        if (!r.classes.empty())
            cj["t_max"] = r.t_max();
        cj["exhaustion_check_ms"] = r.exhaustion_check_ms;
        ordered_json list = ordered_json::array();
        for (const auto &c : r.classes) {
            ordered_json e;
            e["latency"] = c.latency;
            e["discovery_ms"] = c.discovery_ms;
            e["witness"] = witness_json(c.witness);
            list.push_back(std::move(e));
        }
        cj["list"] = std::move(list);
        j["classes"] = std::move(cj);
    }
    if (doc.noninterference) {
        const NoninterferenceResult &ni = *doc.noninterference;
        ordered_json nj;
        nj["verdict"] = ni_verdict_name(ni.verdict);
        nj["wall_ms"] = ni.wall_ms;
        if (ni.witness_pair) {
            nj["pair"] = {{"first", witness_json(ni.witness_pair->first)},
                          {"second", witness_json(ni.witness_pair->second)}};
        }
        j["noninterference"] = std::move(nj);
    }
    if (doc.compensator) {
        const CompensatorSpec &c = *doc.compensator;
        ordered_json sj;
        sj["t_max"] = c.t_max;
        sj["counter_width"] = c.counter_width;
        sj["reset_condition"] = c.reset_condition;
        ordered_json gated = ordered_json::array();
        for (const auto &[port, hold] : c.gated_ports)
            gated.push_back({{"port", port}, {"holding_register", hold}});
        sj["gated_ports"] = std::move(gated);
        j["compensator"] = std::move(sj);
    }
    if (doc.overhead) {
        const OverheadReport &o = *doc.overhead;
        j["overhead"] = {{"counter_flops", o.counter_flops},
                         {"holding_flops", o.holding_flops},
                         {"total_added_flops", o.total_added_flops},
                         {"path_balanced_unit", o.path_balanced_unit},
                         {"path_balanced_scaled", o.path_balanced_scaled},
                         {"savings_ratio", o.savings_ratio}};
        if (!o.note.empty())
            j["overhead"]["note"] = o.note;
    }
    if (!doc.sduv_file.empty())
        j["sduv_file"] = doc.sduv_file;
    return j.dump(2) + "\n";
}

std::string classes_to_csv(const TimingClassReport &report) {
    std::ostringstream out;
    out << "class_index,latency_cycles,discovery_wall_ms,discovery_normalized\n";
    double total = 0;
    for (const auto &c : report.classes)
        total += c.discovery_ms;
    int idx = 0;
    for (const auto &c : report.classes) {
        double normalized =
            total > 0 ? c.discovery_ms / total : 1.0 / (double)report.classes.size();
        out << idx++ << "," << c.latency << "," << c.discovery_ms << "," << normalized
            << "\n";
    }
    return out.str();
}

CompensatorSpec compensator_from_report_json(const std::string &json_text) {
    json j = json::parse(json_text);
    if (!j.contains("compensator"))
        throw std::runtime_error("report has no compensator section");
    const auto &cj = j["compensator"];
    CompensatorSpec spec;
    spec.t_max = cj.at("t_max").get<int>();
    spec.counter_width = cj.at("counter_width").get<int>();
    spec.reset_condition = cj.at("reset_condition").get<std::string>();
    for (const auto &g : cj.at("gated_ports"))
        spec.gated_ports.push_back({g.at("port").get<std::string>(),
                                    g.at("holding_register").get<std::string>()});
    return spec;
}

} // namespace pascal
