#include "cofcheck/execution.hpp"

#include "cofcheck/errors.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cofcheck {

namespace {

int index_of(const std::vector<std::string>& v, const std::string& x) {
    auto it = std::find(v.begin(), v.end(), x);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

} // namespace

algorithm algorithm::compile(algorithm_spec spec) {
    algorithm alg;
    alg.spec_ = std::move(spec);
    const auto& sp = alg.spec_;

    for (const auto& rd : sp.registers) {
        if (rd.domain.empty())
            throw spec_error("register '" + rd.id + "': empty domain");
        reg r;
        r.id = rd.id;
        r.domain = rd.domain;
        r.initial = index_of(rd.domain, rd.initial);
        if (r.initial < 0)
            throw spec_error("register '" + rd.id + "': initial value '" + rd.initial +
                             "' not in domain");
        for (const auto& other : alg.regs_)
            if (other.id == r.id) throw spec_error("duplicate register id '" + r.id + "'");
        alg.regs_.push_back(std::move(r));
    }

    for (const auto& ps : sp.processes) {
        process p;
        p.name = ps.name;
        p.state_names = ps.local_states;
        const int n = static_cast<int>(p.state_names.size());
        if (n == 0) throw spec_error("process '" + ps.name + "': no local states");

        auto state_idx = [&](const std::string& s) {
            int i = index_of(p.state_names, s);
            if (i < 0)
                throw spec_error("process '" + ps.name + "': unknown local state '" + s + "'");
            return i;
        };

        p.pending.assign(n, std::nullopt);
        p.on_read.assign(n, {});
        p.on_write.assign(n, -1);
        p.response.assign(n, std::nullopt);

        for (const auto& [state, act] : ps.pending) {
            int s = state_idx(state);
            int r = alg.register_index(act.reg);
            if (r < 0)
                throw spec_error("process '" + ps.name + "': state '" + state +
                                 "' references unknown register '" + act.reg + "'");
            compiled_action ca{act.action, r, -1};
            if (act.action == mem_action::write) {
                ca.value = index_of(alg.regs_[r].domain, act.value);
                if (ca.value < 0)
                    throw spec_error("process '" + ps.name + "': write value '" + act.value +
                                     "' outside domain of register '" + act.reg + "'");
                auto it = ps.on_write.find(state);
                if (it == ps.on_write.end())
                    throw spec_error("process '" + ps.name + "': missing on_write for state '" +
                                     state + "'");
                p.on_write[s] = state_idx(it->second);
            } else {
                auto it = ps.on_read.find(state);
                if (it == ps.on_read.end())
                    throw spec_error("process '" + ps.name + "': missing on_read for state '" +
                                     state + "'");
                const auto& dom = alg.regs_[r].domain;
                p.on_read[s].assign(dom.size(), -1);
                for (std::size_t v = 0; v < dom.size(); ++v) {
                    auto vt = it->second.find(dom[v]);
                    if (vt == it->second.end())
                        throw spec_error("process '" + ps.name + "': on_read for state '" + state +
                                         "' undefined for value '" + dom[v] + "'");
                    p.on_read[s][v] = state_idx(vt->second);
                }
            }
            p.pending[s] = ca;
        }
        for (const auto& [state, resp] : ps.response) p.response[state_idx(state)] = resp;

        auto in = sp.inputs.find(ps.name);
        if (in == sp.inputs.end())
            throw spec_error("no input assigned to process '" + ps.name + "'");
        auto ic = ps.inputs.find(in->second);
        if (ic == ps.inputs.end())
            throw spec_error("process '" + ps.name + "': no case for input '" + in->second + "'");
        p.initial_state = state_idx(ic->second.initial_state);
        p.op_sequence = ic->second.operations;
        p.repeat_ops = ic->second.repeat;
        p.input_value = in->second;

        // Response annotation: responses emitted along any path from the
        // initial state. Consistent only for acyclic instance structure.
        p.resp_count.assign(n, -1);
        p.last_response.assign(n, std::nullopt);
        p.annotation_consistent = true;
        std::deque<int> work;
        p.resp_count[p.initial_state] = 0;
        work.push_back(p.initial_state);
        while (!work.empty() && p.annotation_consistent) {
            int s = work.front();
            work.pop_front();
            if (!p.pending[s]) continue;
            std::vector<int> succs;
            if (p.pending[s]->action == mem_action::write) {
                succs.push_back(p.on_write[s]);
            } else {
                succs = p.on_read[s];
            }
            for (int t : succs) {
                int rc = p.resp_count[s] + (p.response[t] ? 1 : 0);
                auto lr = p.response[t] ? p.response[t] : p.last_response[s];
                if (p.resp_count[t] == -1) {
                    p.resp_count[t] = rc;
                    p.last_response[t] = lr;
                    work.push_back(t);
                } else if (p.resp_count[t] != rc || p.last_response[t] != lr) {
                    p.annotation_consistent = false;
                    break;
                }
            }
        }
        alg.procs_.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < alg.procs_.size(); ++i)
        for (std::size_t j = i + 1; j < alg.procs_.size(); ++j)
            if (alg.procs_[i].name == alg.procs_[j].name)
                throw spec_error("duplicate process name '" + alg.procs_[i].name + "'");
    return alg;
}

int algorithm::process_index(const std::string& name) const {
    for (int i = 0; i < process_count(); ++i)
        if (procs_[i].name == name) return i;
    return -1;
}

int algorithm::register_index(const std::string& id) const {
    for (int i = 0; i < register_count(); ++i)
        if (regs_[i].id == id) return i;
    return -1;
}

configuration algorithm::initial_configuration() const {
    configuration c;
    c.local.reserve(procs_.size());
    c.mem.reserve(regs_.size());
    for (const auto& p : procs_) c.local.push_back(p.initial_state);
    for (const auto& r : regs_) c.mem.push_back(r.initial);
    return c;
}

algorithm algorithm::with_inputs(const std::map<std::string, std::string>& inputs) const {
    algorithm_spec sp = spec_;
    for (const auto& [proc, val] : inputs) sp.inputs[proc] = val;
    return compile(std::move(sp));
}

bool algorithm::halted(const configuration& c, int p) const {
    return !procs_.at(p).pending.at(c.local.at(p)).has_value();
}

std::optional<step_info> algorithm::enabled_step(const configuration& c, int p) const {
    const auto& act = procs_.at(p).pending.at(c.local.at(p));
    if (!act) return std::nullopt;
    return step_info{p, act->reg, act->action};
}

configuration algorithm::apply_step(const configuration& c, int p) const {
    const auto& pr = procs_.at(p);
    int s = c.local.at(p);
    const auto& act = pr.pending.at(s);
    if (!act) throw usage_error("apply_step: process '" + pr.name + "' is halted");
    configuration next = c;
    if (act->action == mem_action::write) {
        next.mem[act->reg] = act->value;
        next.local[p] = pr.on_write[s];
    } else {
        next.local[p] = pr.on_read[s][c.mem[act->reg]];
    }
    return next;
}

algorithm::run_result algorithm::run(const configuration& c, const schedule& s,
                                     std::vector<int> start_resp_counts) const {
    if (start_resp_counts.empty()) start_resp_counts.assign(procs_.size(), 0);
    run_result out;
    out.final = c;
    int seq = 0;
    for (int p : s) {
        if (p < 0 || p >= process_count()) throw spec_error("schedule references unknown process");
        const auto& pr = procs_[p];
        int st = out.final.local[p];
        const auto& act = pr.pending[st];
        if (!act) continue; // halted processes are skipped in schedule replay
        trace_entry e;
        e.seq = seq++;
        e.process = p;
        e.reg = act->reg;
        e.action = act->action;
        e.instance_index = start_resp_counts[p];
        e.op = instance_op(p, e.instance_index);
        int value_idx = act->action == mem_action::write ? act->value : out.final.mem[act->reg];
        e.value = regs_[act->reg].domain[value_idx];
        out.final = apply_step(out.final, p);
        int entered = out.final.local[p];
        if (pr.response[entered]) {
            e.response = pr.response[entered];
            ++start_resp_counts[p];
        }
        out.trace.push_back(std::move(e));
    }
    return out;
}

std::string algorithm::instance_op(int p, int k) const {
    const auto& pr = procs_.at(p);
    if (pr.op_sequence.empty())
        throw usage_error("process '" + pr.name + "' declares no operation instances");
    if (k < static_cast<int>(pr.op_sequence.size())) return pr.op_sequence[k];
    if (pr.repeat_ops) return pr.op_sequence[k % pr.op_sequence.size()];
    throw usage_error("process '" + pr.name + "' has no operation instance #" + std::to_string(k));
}

int algorithm::instance_count(int p) const {
    const auto& pr = procs_.at(p);
    return pr.repeat_ops ? -1 : static_cast<int>(pr.op_sequence.size());
}

int algorithm::pending_instance(const configuration& c, int p) const {
    const auto& pr = procs_.at(p);
    int s = c.local.at(p);
    if (!pr.pending[s]) return -1;
    if (!pr.annotation_consistent)
        throw usage_error("process '" + pr.name +
                          "' has a cyclic instance structure; pending_instance is undefined");
    if (pr.resp_count[s] < 0)
        throw usage_error("process '" + pr.name + "': state not reachable from its initial state");
    return pr.resp_count[s];
}

bool indistinguishable(const configuration& a, const configuration& b, const std::set<int>& P) {
    if (a.mem != b.mem) return false;
    for (int p : P)
        if (a.local.at(p) != b.local.at(p)) return false;
    return true;
}

bool is_p_only(const schedule& s, const std::set<int>& P) {
    return std::all_of(s.begin(), s.end(), [&](int p) { return P.count(p) != 0; });
}

std::optional<lasso> close_lasso(const algorithm& alg, const configuration& prefix_end,
                                 const schedule& candidate_cycle,
                                 std::vector<int> start_resp_counts) {
    if (candidate_cycle.empty()) return std::nullopt;
    auto res = alg.run(prefix_end, candidate_cycle, std::move(start_resp_counts));
    if (res.trace.empty()) return std::nullopt; // no effective steps
    if (!(res.final == prefix_end)) return std::nullopt;
    lasso l;
    l.cycle = candidate_cycle;
    l.anchor = prefix_end;
    return l;
}

std::optional<lasso> make_lasso(const algorithm& alg, const schedule& prefix, const schedule& cycle) {
    auto pre = alg.run(alg.initial_configuration(), prefix);
    std::vector<int> counts(alg.process_count(), 0);
    for (const auto& e : pre.trace)
        if (e.response) ++counts[e.process];
    auto l = close_lasso(alg, pre.final, cycle, counts);
    if (!l) return std::nullopt;
    l->prefix = prefix;
    return l;
}

std::string format_trace(const algorithm& alg, const std::vector<algorithm::trace_entry>& trace) {
    std::ostringstream os;
    for (const auto& e : trace) {
        os << e.seq << ' ' << alg.proc(e.process).name << ' ' << alg.register_at(e.reg).id << ' '
           << (e.action == mem_action::read ? 'R' : 'W') << ' ' << e.value << ' '
           << (e.response ? *e.response : "-") << '\n';
    }
    return os.str();
}

} // namespace cofcheck
