#include "cofcheck/formats.hpp"

#include "cofcheck/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace cofcheck {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw spec_error("malformed JSON document");
    return j;
}

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) throw spec_error(std::string("missing field: ") + key);
    return j.at(key);
}

std::vector<std::string> string_list(const json& j) {
    std::vector<std::string> out;
    if (!j.is_array()) throw spec_error("expected an array of strings");
    for (const auto& e : j) out.push_back(e.get<std::string>());
    return out;
}

schedule_file named_lasso(const algorithm& alg, const lasso& l) {
    schedule_file out;
    for (int p : l.prefix) out.prefix.push_back(alg.proc(p).name);
    for (int p : l.cycle) out.cycle.push_back(alg.proc(p).name);
    return out;
}

} // namespace

std::string object_to_text(const sequential_object& obj) {
    json j;
    j["name"] = obj.name;
    j["states"] = obj.states;
    j["initial"] = obj.initial_state;
    j["operations"] = obj.operations;
    j["responses"] = obj.responses;
    json trans = json::array();
    for (const auto& [key, val] : obj.transition)
        trans.push_back({{"op", key.first},
                         {"from", key.second},
                         {"response", val.first},
                         {"to", val.second}});
    j["transitions"] = trans;
    return j.dump(2) + "\n";
}

sequential_object object_from_text(const std::string& text) {
    json j = parse(text);
    sequential_object obj;
    obj.name = require(j, "name").get<std::string>();
    obj.states = string_list(require(j, "states"));
    obj.initial_state = require(j, "initial").get<std::string>();
    obj.operations = string_list(require(j, "operations"));
    obj.responses = string_list(require(j, "responses"));
    for (const auto& t : require(j, "transitions")) {
        auto op = require(t, "op").get<std::string>();
        auto from = require(t, "from").get<std::string>();
        obj.transition[{op, from}] = {require(t, "response").get<std::string>(),
                                      require(t, "to").get<std::string>()};
    }
    obj.validate();
    return obj;
}

std::string algorithm_to_text(const algorithm_spec& spec) {
    json j;
    j["name"] = spec.name;
    j["object"] = spec.object;
    json regs = json::array();
    for (const auto& r : spec.registers)
        regs.push_back({{"id", r.id}, {"domain", r.domain}, {"initial", r.initial}});
    j["registers"] = regs;
    json procs = json::array();
    for (const auto& p : spec.processes) {
        json pj;
        pj["name"] = p.name;
        pj["local_states"] = p.local_states;
        json inputs = json::object();
        for (const auto& [v, c] : p.inputs) {
            inputs[v] = {{"initial", c.initial_state}, {"operations", c.operations}};
            if (c.repeat) inputs[v]["repeat"] = true;
        }
        pj["inputs"] = inputs;
        json pending = json::object();
        for (const auto& [s, a] : p.pending) {
            pending[s] = {{"action", a.action == mem_action::read ? "R" : "W"}, {"reg", a.reg}};
            if (a.action == mem_action::write) pending[s]["value"] = a.value;
        }
        pj["pending"] = pending;
        json on_read = json::object();
        for (const auto& [s, branches] : p.on_read) on_read[s] = branches;
        pj["on_read"] = on_read;
        pj["on_write"] = p.on_write;
        pj["response"] = p.response;
        procs.push_back(pj);
    }
    j["processes"] = procs;
    j["inputs"] = spec.inputs;
    return j.dump(2) + "\n";
}

algorithm_spec algorithm_from_text(const std::string& text) {
    json j = parse(text);
    algorithm_spec spec;
    spec.name = require(j, "name").get<std::string>();
    spec.object = require(j, "object").get<std::string>();
    for (const auto& r : require(j, "registers"))
        spec.registers.push_back({require(r, "id").get<std::string>(),
                                  string_list(require(r, "domain")),
                                  require(r, "initial").get<std::string>()});
    for (const auto& pj : require(j, "processes")) {
        process_spec p;
        p.name = require(pj, "name").get<std::string>();
        p.local_states = string_list(require(pj, "local_states"));
        for (const auto& [v, c] : require(pj, "inputs").items()) {
            input_case_spec ic;
            ic.initial_state = require(c, "initial").get<std::string>();
            ic.operations = string_list(require(c, "operations"));
            ic.repeat = c.value("repeat", false);
            p.inputs[v] = ic;
        }
        for (const auto& [s, a] : require(pj, "pending").items()) {
            auto act = require(a, "action").get<std::string>();
            if (act != "R" && act != "W") throw spec_error("action must be R or W");
            pending_action_spec pa;
            pa.action = act == "R" ? mem_action::read : mem_action::write;
            pa.reg = require(a, "reg").get<std::string>();
            if (pa.action == mem_action::write) pa.value = require(a, "value").get<std::string>();
            p.pending[s] = pa;
        }
        for (const auto& [s, branches] : require(pj, "on_read").items())
            for (const auto& [v, next] : branches.items())
                p.on_read[s][v] = next.get<std::string>();
        for (const auto& [s, next] : require(pj, "on_write").items())
            p.on_write[s] = next.get<std::string>();
        for (const auto& [s, resp] : require(pj, "response").items())
            p.response[s] = resp.get<std::string>();
        spec.processes.push_back(std::move(p));
    }
    for (const auto& [p, v] : require(j, "inputs").items()) spec.inputs[p] = v.get<std::string>();
    return spec;
}

std::string manifest_to_text(const algorithm_manifest& m) {
    json j;
    j["name"] = m.name;
    j["object"] = m.object;
    j["processes"] = m.processes;
    j["linearizable"] = m.linearizable;
    j["progress"] = m.progress;
    j["input_domains"] = m.input_domains;
    return j.dump(2) + "\n";
}

algorithm_manifest manifest_from_text(const std::string& text) {
    json j = parse(text);
    algorithm_manifest m;
    m.name = require(j, "name").get<std::string>();
    m.object = require(j, "object").get<std::string>();
    m.processes = require(j, "processes").get<int>();
    m.linearizable = require(j, "linearizable").get<bool>();
    for (const auto& [k, v] : require(j, "progress").items()) m.progress[k] = v.get<bool>();
    for (const auto& [k, v] : require(j, "input_domains").items())
        m.input_domains[k] = string_list(v);
    return m;
}

std::string schedule_to_text(const schedule_file& s) {
    std::ostringstream os;
    os << "# schedule: one process per line\n";
    for (const auto& p : s.prefix) os << p << "\n";
    if (!s.cycle.empty()) {
        os << "CYCLE:\n";
        for (const auto& p : s.cycle) os << p << "\n";
    }
    return os.str();
}

schedule_file schedule_from_text(const std::string& text) {
    schedule_file out;
    std::istringstream is(text);
    std::string line;
    bool in_cycle = false;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line == "CYCLE:") {
            if (in_cycle) throw spec_error("duplicate CYCLE: marker");
            in_cycle = true;
            continue;
        }
        (in_cycle ? out.cycle : out.prefix).push_back(line);
    }
    return out;
}

schedule resolve_schedule(const algorithm& alg, const std::vector<std::string>& names) {
    schedule out;
    for (const auto& n : names) {
        int p = alg.process_index(n);
        if (p < 0) throw spec_error("schedule references unknown process: " + n);
        out.push_back(p);
    }
    return out;
}

std::string verdict_to_text(const algorithm& alg, const progress_verdict& v) {
    json j;
    j["condition"] = to_string(v.condition);
    j["holds"] = v.holds;
    j["stats"] = {{"states", v.stats.states},
                  {"edges", v.stats.edges},
                  {"scc_count", v.stats.scc_count}};
    if (v.witness) {
        auto named = named_lasso(alg, v.witness->l);
        j["witness"] = {{"process", alg.proc(v.witness->process).name},
                        {"instance", v.witness->instance},
                        {"operation", v.witness->op},
                        {"prefix", named.prefix},
                        {"cycle", named.cycle}};
    }
    return j.dump(2) + "\n";
}

std::string refutation_to_text(const algorithm& alg, const refutation& r) {
    json j;
    j["ok"] = r.ok;
    if (!r.diagnosis.empty()) j["diagnosis"] = r.diagnosis;
    json prem = json::array();
    for (const auto& p : r.premises)
        prem.push_back({{"name", p.name}, {"ok", p.ok}, {"detail", p.detail}});
    j["premises"] = prem;
    j["stats"] = {{"states", r.stats.states}, {"edges", r.stats.edges}};
    if (r.ok) {
        auto named = named_lasso(alg, r.l);
        std::vector<std::string> path;
        for (int p : r.bivalent_path) path.push_back(alg.proc(p).name);
        j["bivalent_path"] = path;
        j["lasso"] = {{"prefix", named.prefix}, {"cycle", named.cycle}};
    }
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw spec_error("cannot read file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw spec_error("cannot write file: " + path);
    f << content;
}

} // namespace cofcheck
