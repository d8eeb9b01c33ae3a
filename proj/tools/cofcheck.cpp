// Command-line front end: loads object/algorithm/schedule files, runs the
// checkers, and emits text, machine-readable, or DOT reports.
//
// Exit codes: 0 condition holds / command succeeded, 1 condition violated
// (witness printed), 2 input or usage errors, 3 state budget exhausted.

#include "cofcheck/catalog.hpp"
#include "cofcheck/errors.hpp"
#include "cofcheck/formats.hpp"
#include "cofcheck/graph.hpp"
#include "cofcheck/history.hpp"
#include "cofcheck/linearizability.hpp"
#include "cofcheck/object.hpp"
#include "cofcheck/progress.hpp"
#include "cofcheck/valency.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cofcheck;
using nlohmann::json;

namespace {

constexpr const char* tool_version = "cofcheck 1.0.0";

// Content digest for the reproducibility header (FNV-1a 64).
std::string digest(const std::string& content) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct loaded_file {
    std::string path;
    std::string content;
};

struct report_ctx {
    std::vector<loaded_file> inputs;
    std::string format = "text";
    std::string out_path;

    loaded_file& load(const std::string& path) {
        inputs.push_back({path, read_file(path)});
        return inputs.back();
    }
    std::string header() const {
        std::ostringstream os;
        os << "# " << tool_version << "\n";
        for (const auto& f : inputs) os << "# input " << f.path << " fnv1a:" << digest(f.content) << "\n";
        return os.str();
    }
    json header_json() const {
        json j;
        j["tool"] = tool_version;
        j["inputs"] = json::array();
        for (const auto& f : inputs)
            j["inputs"].push_back({{"path", f.path}, {"digest", digest(f.content)}});
        return j;
    }
    void emit(const std::string& text) const {
        if (out_path.empty())
            std::cout << text;
        else
            write_file(out_path, text);
    }
};

std::size_t default_budget_from_env() {
    if (const char* e = std::getenv("COFCHECK_BUDGET")) {
        char* end = nullptr;
        auto v = std::strtoull(e, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
        throw spec_error("COFCHECK_BUDGET must be a positive integer");
    }
    return default_state_budget;
}

std::map<std::string, std::string> parse_inputs(const std::string& s) {
    std::map<std::string, std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw spec_error("inputs must be name=value pairs: " + item);
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

sequential_object resolve_object(report_ctx& ctx, const std::string& object_path,
                                 const std::string& name_hint) {
    if (!object_path.empty()) return object_from_text(ctx.load(object_path).content);
    if (auto obj = builtin_object(name_hint)) return *obj;
    throw spec_error("no --object file given and '" + name_hint + "' is not a builtin object");
}

algorithm load_algorithm(report_ctx& ctx, const std::string& path,
                         const std::string& inputs_arg) {
    auto spec = algorithm_from_text(ctx.load(path).content);
    auto alg = algorithm::compile(std::move(spec));
    if (!inputs_arg.empty()) alg = alg.with_inputs(parse_inputs(inputs_arg));
    return alg;
}

int cmd_conflicts(report_ctx& ctx, const std::string& object_path) {
    auto obj = object_from_text(ctx.load(object_path).content);
    auto wit = conflict_witnesses(obj);
    if (ctx.format == "json-like") {
        json j = ctx.header_json();
        j["object"] = obj.name;
        j["conflicts"] = json::array();
        for (const auto& [pair, state] : wit)
            j["conflicts"].push_back({{"a", pair.first}, {"b", pair.second}, {"witness_state", state}});
        ctx.emit(j.dump(2) + "\n");
        return 0;
    }
    std::ostringstream os;
    os << ctx.header() << "object: " << obj.name << "\n";
    if (wit.empty()) {
        os << "no conflicts\n";
    } else {
        for (const auto& [pair, state] : wit)
            os << pair.first << " \xe2\x89\x8d " << pair.second << " @ state " << state << "\n";
    }
    ctx.emit(os.str());
    return 0;
}

int cmd_check(report_ctx& ctx, const std::string& algorithm_path, const std::string& object_path,
              const std::string& condition_arg, const std::string& inputs_arg, std::size_t budget,
              int threads) {
    auto cond = parse_progress_condition(condition_arg);
    if (!cond) throw spec_error("unknown condition: " + condition_arg + " (use wf|of|cof)");
    auto alg = load_algorithm(ctx, algorithm_path, inputs_arg);
    auto obj = resolve_object(ctx, object_path, alg.object_name());
    auto cr = derive_conflict_relation(obj);
    auto verdict = find_violation(alg, *cond, cr, budget, threads);
    if (ctx.format == "json-like") {
        json j = ctx.header_json();
        j.update(json::parse(verdict_to_text(alg, verdict)));
        ctx.emit(j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << ctx.header() << "condition: " << to_string(verdict.condition)
           << "\nholds: " << (verdict.holds ? "yes" : "no") << "\nstates: " << verdict.stats.states
           << " edges: " << verdict.stats.edges << " sccs: " << verdict.stats.scc_count << "\n";
        if (verdict.witness) {
            const auto& w = *verdict.witness;
            os << "witness: process " << alg.proc(w.process).name << " instance " << w.instance
               << " op " << w.op << " never completes\n";
            schedule_file named;
            for (int p : w.l.prefix) named.prefix.push_back(alg.proc(p).name);
            for (int p : w.l.cycle) named.cycle.push_back(alg.proc(p).name);
            os << schedule_to_text(named);
        }
        ctx.emit(os.str());
    }
    return verdict.holds ? 0 : 1;
}

int cmd_refute(report_ctx& ctx, const std::string& algorithm_path, const std::string& inputs_arg,
               std::size_t budget) {
    auto alg = load_algorithm(ctx, algorithm_path, inputs_arg);
    if (ctx.format == "dot") {
        auto vg = build_valency_graph(alg, budget);
        ctx.emit(export_valency_dot(vg));
        return 0;
    }
    auto r = construct_refutation(alg, budget);
    if (ctx.format == "json-like") {
        json j = ctx.header_json();
        j.update(json::parse(refutation_to_text(alg, r)));
        ctx.emit(j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << ctx.header();
        for (const auto& p : r.premises)
            os << "premise " << p.name << ": " << (p.ok ? "holds" : "fails")
               << (p.detail.empty() ? "" : " (" + p.detail + ")") << "\n";
        if (!r.ok) {
            os << "refutation failed: " << r.diagnosis << "\n";
        } else {
            os << "refutation: verified lasso, " << r.l.prefix.size() << "-step prefix, "
               << r.l.cycle.size() << "-step cycle (observers only, decision-free)\n";
            schedule_file named;
            for (int p : r.l.prefix) named.prefix.push_back(alg.proc(p).name);
            for (int p : r.l.cycle) named.cycle.push_back(alg.proc(p).name);
            os << schedule_to_text(named);
        }
        ctx.emit(os.str());
    }
    return r.ok ? 0 : 2;
}

int cmd_replay(report_ctx& ctx, const std::string& algorithm_path, const std::string& schedule_path,
               const std::string& object_path, const std::string& inputs_arg, unsigned seed,
               int random_steps) {
    auto alg = load_algorithm(ctx, algorithm_path, inputs_arg);
    auto obj = resolve_object(ctx, object_path, alg.object_name());
    schedule prefix, cycle;
    if (!schedule_path.empty()) {
        auto sf = schedule_from_text(ctx.load(schedule_path).content);
        prefix = resolve_schedule(alg, sf.prefix);
        cycle = resolve_schedule(alg, sf.cycle);
    } else {
        std::mt19937 rng(seed);
        for (int i = 0; i < random_steps; ++i)
            prefix.push_back(static_cast<int>(rng() % alg.process_count()));
    }
    std::vector<algorithm::trace_entry> trace;
    if (cycle.empty()) {
        trace = alg.run(alg.initial_configuration(), prefix).trace;
    } else {
        auto l = make_lasso(alg, prefix, cycle);
        if (!l) throw spec_error("schedule cycle does not close on the post-prefix configuration");
        auto rep = replay_lasso(alg, *l);
        trace = rep.prefix;
        trace.insert(trace.end(), rep.cycle.begin(), rep.cycle.end());
    }
    auto h = collect_history(alg, trace);
    auto lin = is_linearizable(h, obj);
    if (ctx.format == "json-like") {
        json j = ctx.header_json();
        j["steps"] = trace.size();
        j["history"] = history_to_text(h);
        j["linearizable"] = lin.linearizable;
        if (lin.linearizable) {
            j["witness"] = json::array();
            for (const auto& pt : lin.witness)
                j["witness"].push_back({{"process", pt.process},
                                        {"operation", pt.operation},
                                        {"response", pt.response},
                                        {"pending", pt.was_pending}});
        }
        ctx.emit(j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << ctx.header() << format_trace(alg, trace) << "\nhistory:\n" << history_to_text(h)
           << "linearizable: " << (lin.linearizable ? "yes" : "no") << "\n";
        if (lin.linearizable)
            for (const auto& pt : lin.witness)
                os << "  " << pt.process << " " << pt.operation << " -> " << pt.response
                   << (pt.was_pending ? " (pending, completed by witness)" : "") << "\n";
        ctx.emit(os.str());
    }
    return lin.linearizable ? 0 : 1;
}

int cmd_catalog(report_ctx& ctx, const std::string& export_dir) {
    auto entries = reference_catalog();
    if (!export_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(export_dir);
        std::map<std::string, sequential_object> objects;
        for (const auto& e : entries) {
            write_file(export_dir + "/" + e.manifest.name + ".alg.json", algorithm_to_text(e.spec));
            write_file(export_dir + "/" + e.manifest.name + ".manifest.json",
                       manifest_to_text(e.manifest));
            if (auto obj = builtin_object(e.manifest.object)) objects[e.manifest.object] = *obj;
        }
        for (const auto& [name, obj] : objects)
            write_file(export_dir + "/" + name + ".obj.json", object_to_text(obj));
        auto fig = figure1_scenario();
        auto alg = algorithm::compile(fig.spec);
        schedule_file named;
        for (int p : fig.l.prefix) named.prefix.push_back(alg.proc(p).name);
        for (int p : fig.l.cycle) named.cycle.push_back(alg.proc(p).name);
        write_file(export_dir + "/figure1.schedule", schedule_to_text(named));
    }
    if (ctx.format == "json-like") {
        json j = ctx.header_json();
        j["entries"] = json::array();
        for (const auto& e : entries) j["entries"].push_back(json::parse(manifest_to_text(e.manifest)));
        ctx.emit(j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << ctx.header();
        for (const auto& e : entries) {
            os << e.manifest.name << ": object=" << e.manifest.object
               << " processes=" << e.manifest.processes
               << " linearizable=" << (e.manifest.linearizable ? "yes" : "no");
            for (const auto& [c, v] : e.manifest.progress) os << " " << c << "=" << (v ? "holds" : "violated");
            os << "\n";
        }
        ctx.emit(os.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"model checker for progress conditions over read/write algorithms"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    std::string object_path, algorithm_path, schedule_path, inputs_arg, condition_arg = "cof";
    std::string format = "text", out_path, export_dir;
    std::size_t budget = 0;
    unsigned seed = 0;
    int parallel = 1, random_steps = 32;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--format", format)->check(CLI::IsMember({"text", "json-like", "dot"}));
        c->add_option("--out", out_path, "write the report to a file instead of stdout");
    };
    auto* conflicts = app.add_subcommand("conflicts", "derive an object's conflict relation");
    conflicts->add_option("--object", object_path)->required();
    add_common(conflicts);

    auto* check = app.add_subcommand("check", "verify or refute a progress condition");
    check->add_option("--algorithm", algorithm_path)->required();
    check->add_option("--object", object_path, "object file (default: the builtin the algorithm names)");
    check->add_option("--condition", condition_arg, "wf | of | cof");
    check->add_option("--inputs", inputs_arg, "override inputs, e.g. p0=0,p1=1,p2=1");
    check->add_option("--budget", budget, "state budget (default $COFCHECK_BUDGET or 10000000)");
    check->add_option("--parallel", parallel, "worker threads for graph construction");
    add_common(check);

    auto* refute = app.add_subcommand("refute", "run the valency analysis end to end");
    refute->add_option("--algorithm", algorithm_path)->required();
    refute->add_option("--inputs", inputs_arg);
    refute->add_option("--budget", budget);
    add_common(refute);

    auto* replay = app.add_subcommand("replay", "run a schedule; print trace, history, verdict");
    replay->add_option("--algorithm", algorithm_path)->required();
    replay->add_option("--schedule", schedule_path, "schedule file (omit for a random schedule)");
    replay->add_option("--object", object_path);
    replay->add_option("--inputs", inputs_arg);
    replay->add_option("--seed", seed, "seed for random schedule generation");
    replay->add_option("--steps", random_steps, "length of the generated random schedule");
    add_common(replay);

    auto* catalog = app.add_subcommand("catalog", "list or export the bundled algorithms");
    catalog->add_option("--out", export_dir, "directory to export object/algorithm/manifest files");
    catalog->add_option("--format", format)->check(CLI::IsMember({"text", "json-like"}));

    CLI11_PARSE(app, argc, argv);

    report_ctx ctx;
    ctx.format = format;
    try {
        if (budget == 0) budget = default_budget_from_env();
        if (app.got_subcommand(catalog)) return cmd_catalog(ctx, export_dir);
        ctx.out_path = out_path;
        if (app.got_subcommand(conflicts)) return cmd_conflicts(ctx, object_path);
        if (app.got_subcommand(check))
            return cmd_check(ctx, algorithm_path, object_path, condition_arg, inputs_arg, budget,
                             parallel);
        if (app.got_subcommand(refute)) return cmd_refute(ctx, algorithm_path, inputs_arg, budget);
        if (app.got_subcommand(replay))
            return cmd_replay(ctx, algorithm_path, schedule_path, object_path, inputs_arg, seed,
                              random_steps);
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << " (states seen: " << e.states_seen << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
