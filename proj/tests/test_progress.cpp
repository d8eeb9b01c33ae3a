#include "cofcheck/builder.hpp"
#include "cofcheck/errors.hpp"
#include "cofcheck/graph.hpp"
#include "cofcheck/progress.hpp"

#include "doctest.h"

#include <random>

using namespace cofcheck;

namespace {

// Two optimistic incrementers that raise a flag, check the other's flag, and
// back off on contention; a reader that samples the counter register twice.
// With the incrementers interleaved in lock step nobody ever finishes.
algorithm contended_counter() {
    algorithm_spec spec;
    spec.name = "contended-counter";
    spec.object = "bounded-counter(1)";
    spec.registers = {{"f2", {"0", "1"}, "0"}, {"f3", {"0", "1"}, "0"}, {"T", {"0", "1"}, "0"}};

    auto reader = process_builder("reader")
                      .read_any("r0", "T", {"0", "1"}, "r1")
                      .read("r1", "T", {{"0", "rz"}, {"1", "ro"}})
                      .respond("rz", "0")
                      .respond("ro", "1")
                      .halt("rz")
                      .halt("ro")
                      .input("", "r0", {"read"})
                      .build();
    auto inc = [](const std::string& name, const std::string& mine, const std::string& other) {
        return process_builder(name)
            .write("a0", mine, "1", "a1")
            .read("a1", other, {{"0", "a3"}, {"1", "a2"}})
            .write("a2", mine, "0", "a0")
            .write("a3", "T", "1", "dn")
            .respond("dn", "ack")
            .halt("dn")
            .input("", "a0", {"inc"})
            .build();
    };
    spec.processes = {reader, inc("inc2", "f2", "f3"), inc("inc3", "f3", "f2")};
    spec.inputs = {{"reader", ""}, {"inc2", ""}, {"inc3", ""}};
    return algorithm::compile(spec);
}

// Livelocking pair over one register: p0 wants to move g from 0 to 1, p1 the
// other way; each resets and retries when it sees the wrong value. Solo runs
// always finish, concurrent runs can starve each other forever.
algorithm toggle_duel() {
    algorithm_spec spec;
    spec.name = "toggle-duel";
    spec.object = "total-conflict-register";
    spec.registers = {{"g", {"0", "1"}, "0"}};
    spec.processes = {process_builder("up")
                          .read("t0", "g", {{"0", "t1"}, {"1", "t2"}})
                          .write("t1", "g", "1", "d0")
                          .write("t2", "g", "0", "t0")
                          .respond("d0", "ok")
                          .halt("d0")
                          .input("", "t0", {"write(a)"})
                          .build(),
                      process_builder("down")
                          .read("u0", "g", {{"1", "u1"}, {"0", "u2"}})
                          .write("u1", "g", "0", "d1")
                          .write("u2", "g", "1", "u0")
                          .respond("d1", "ok")
                          .halt("d1")
                          .input("", "u0", {"write(b)"})
                          .build()};
    spec.inputs = {{"up", ""}, {"down", ""}};
    return algorithm::compile(spec);
}

algorithm disjoint_writers() {
    algorithm_spec spec;
    spec.name = "disjoint-writers";
    spec.object = "commuting-only";
    spec.registers = {{"x", {"0", "1"}, "0"}, {"y", {"0", "1"}, "0"}};
    spec.processes = {process_builder("w0")
                          .write("s", "x", "1", "d")
                          .respond("d", "ack")
                          .halt("d")
                          .input("", "s", {"inc"})
                          .build(),
                      process_builder("w1")
                          .write("s", "y", "1", "d")
                          .respond("d", "ack")
                          .halt("d")
                          .input("", "s", {"inc"})
                          .build()};
    spec.inputs = {{"w0", ""}, {"w1", ""}};
    return algorithm::compile(spec);
}

// Single-writer counter: each incrementer writes its own cell once; the
// reader sums both cells. Every operation finishes in a bounded number of
// its own steps.
algorithm swsr_counter() {
    algorithm_spec spec;
    spec.name = "swsr-counter";
    spec.object = "bounded-counter(2)";
    spec.registers = {{"c0", {"0", "1"}, "0"}, {"c1", {"0", "1"}, "0"}};
    auto inc = [](const std::string& name, const std::string& cell) {
        return process_builder(name)
            .write("s", cell, "1", "d")
            .respond("d", "ack")
            .halt("d")
            .input("", "s", {"inc"})
            .build();
    };
    auto reader = process_builder("reader")
                      .read("r0", "c0", {{"0", "ra"}, {"1", "rb"}})
                      .read("ra", "c1", {{"0", "z0"}, {"1", "z1"}})
                      .read("rb", "c1", {{"0", "z1b"}, {"1", "z2"}})
                      .respond("z0", "0")
                      .respond("z1", "1")
                      .respond("z1b", "1")
                      .respond("z2", "2")
                      .halt("z0")
                      .halt("z1")
                      .halt("z1b")
                      .halt("z2")
                      .input("", "r0", {"read"})
                      .build();
    spec.processes = {inc("inc0", "c0"), inc("inc1", "c1"), reader};
    spec.inputs = {{"inc0", ""}, {"inc1", ""}, {"reader", ""}};
    return algorithm::compile(spec);
}

// Mixed automata over the pairwise-conflicting register: a one-shot writer,
// a responder gated on seeing "b", and a poller that never completes. Rich in
// cycles, which makes it a good lasso generator.
algorithm conflict_zoo() {
    algorithm_spec spec;
    spec.name = "conflict-zoo";
    spec.object = "total-conflict-register";
    spec.registers = {{"X", {"a", "b", "c"}, "a"}};
    spec.processes = {process_builder("wa")
                          .read_any("s0", "X", {"a", "b", "c"}, "s1")
                          .write("s1", "X", "a", "d")
                          .respond("d", "ok")
                          .halt("d")
                          .input("", "s0", {"write(a)"})
                          .build(),
                      process_builder("gb")
                          .read("g0", "X", {{"a", "g0"}, {"b", "g1"}, {"c", "g0"}})
                          .write("g1", "X", "b", "d")
                          .respond("d", "ok")
                          .halt("d")
                          .input("", "g0", {"write(b)"})
                          .build(),
                      process_builder("pc")
                          .read_any("w0", "X", {"a", "b", "c"}, "w0")
                          .input("", "w0", {"write(c)"})
                          .build()};
    spec.inputs = {{"wa", ""}, {"gb", ""}, {"pc", ""}};
    return algorithm::compile(spec);
}

lasso must_lasso(const algorithm& alg, const schedule& prefix, const schedule& cycle) {
    auto l = make_lasso(alg, prefix, cycle);
    REQUIRE(l.has_value());
    return *l;
}

} // namespace

TEST_CASE("contended counter: both incrementers starve but only the reader sees conflict") {
    auto alg = contended_counter();
    auto cr = derive_conflict_relation(*builtin_object("bounded-counter(1)"));
    // reader takes one step, then the incrementers chase each other's flags
    auto l = must_lasso(alg, {0}, {1, 2, 1, 2, 1, 2});

    CHECK_FALSE(eventually_scf(alg, l, 1, 0));
    CHECK_FALSE(eventually_scf(alg, l, 2, 0));
    CHECK(eventually_conflict_scf(alg, l, 1, 0, cr)); // inc commutes with inc
    CHECK(eventually_conflict_scf(alg, l, 2, 0, cr));

    CHECK_FALSE(eventually_scf(alg, l, 0, 0));
    CHECK_FALSE(eventually_conflict_scf(alg, l, 0, 0, cr)); // a read conflicts with an inc

    CHECK_FALSE(correct_in(alg, l, 0)); // crashed mid-read
    CHECK(correct_in(alg, l, 1));
    CHECK(correct_in(alg, l, 2));
}

TEST_CASE("empty conflict relation makes every instance eventually conflict-scf") {
    auto alg = contended_counter();
    auto l = must_lasso(alg, {0}, {1, 2, 1, 2, 1, 2});
    conflict_relation none;
    for (int p = 0; p < 3; ++p) CHECK(eventually_conflict_scf(alg, l, p, 0, none));
}

TEST_CASE("completion in the prefix wins regardless of the cycle") {
    auto alg = contended_counter();
    auto cr = derive_conflict_relation(*builtin_object("bounded-counter(1)"));
    auto l = must_lasso(alg, {0, 0}, {1, 2, 1, 2, 1, 2}); // reader finishes first
    CHECK(eventually_scf(alg, l, 0, 0));
    CHECK(eventually_conflict_scf(alg, l, 0, 0, cr));
    CHECK(correct_in(alg, l, 0)); // nothing pending once answered
}

TEST_CASE("a solo suffix is eventually step-contention free") {
    auto alg = contended_counter();
    // inc3 raises its flag and stalls; inc2 loops raise-check-back-off alone
    auto l = must_lasso(alg, {2, 1}, {1, 1, 1});
    CHECK(eventually_scf(alg, l, 1, 0));
    CHECK_FALSE(instance_completes_in(alg, l, 1, 0));
}

TEST_CASE("a process that never invoked anything counts as correct") {
    auto alg = contended_counter();
    auto l = must_lasso(alg, {}, {1, 2, 1, 2, 1, 2});
    CHECK(correct_in(alg, l, 0));
}

TEST_CASE("classification rejects never-invoked instances and broken lassos") {
    auto alg = contended_counter();
    auto l = must_lasso(alg, {}, {1, 2, 1, 2, 1, 2});
    CHECK_THROWS_AS(eventually_scf(alg, l, 0, 0), usage_error);

    lasso bad = l;
    bad.anchor.mem[0] ^= 1;
    CHECK_THROWS_AS(replay_lasso(alg, bad), usage_error);
}

TEST_CASE("instance statuses summarize the replay") {
    auto alg = contended_counter();
    auto cr = derive_conflict_relation(*builtin_object("bounded-counter(1)"));
    auto l = must_lasso(alg, {0}, {1, 2, 1, 2, 1, 2});
    auto sts = instance_statuses(alg, l, cr);
    REQUIRE(sts.size() == 3);
    for (const auto& st : sts) {
        CHECK_FALSE(st.completed_at.has_value());
        if (st.process == 0) {
            CHECK(st.op == "read");
            CHECK_FALSE(st.steps_in_cycle);
            CHECK(st.conflicting_steps_in_cycle);
        } else {
            CHECK(st.op == "inc");
            CHECK(st.steps_in_cycle);
            CHECK_FALSE(st.conflicting_steps_in_cycle); // only other incs around
        }
    }
}

TEST_CASE("contended counter fails wait-freedom, obstruction-freedom and the conflict variant") {
    auto alg = contended_counter();
    auto cr = derive_conflict_relation(*builtin_object("bounded-counter(1)"));
    for (auto cond : {progress_condition::wait_free, progress_condition::obstruction_free,
                      progress_condition::conflict_obstruction_free}) {
        auto v = find_violation(alg, cond, cr);
        CHECK_FALSE(v.holds);
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->op == "inc");
        // the witness was replay-verified inside find_violation; sanity-check anyway
        CHECK(close_lasso(alg, v.witness->l.anchor, v.witness->l.cycle,
                          [&] {
                              auto r = alg.run(alg.initial_configuration(), v.witness->l.prefix);
                              std::vector<int> counts(3, 0);
                              for (const auto& t : r.trace)
                                  if (t.response) ++counts[t.process];
                              return counts;
                          }())
                  .has_value());
        CHECK(v.stats.states > 0);
        CHECK(v.stats.edges > 0);
        CHECK(v.stats.scc_count > 0);
    }
}

TEST_CASE("toggle duel: livelocked, yet obstruction-free and conflict-obstruction-free") {
    auto alg = toggle_duel();
    auto cr = derive_conflict_relation(total_conflict_register_object());
    auto wf = find_violation(alg, progress_condition::wait_free, cr);
    auto of = find_violation(alg, progress_condition::obstruction_free, cr);
    auto cof = find_violation(alg, progress_condition::conflict_obstruction_free, cr);
    CHECK_FALSE(wf.holds);
    CHECK(of.holds);
    CHECK(cof.holds);
    CHECK_FALSE(of.witness.has_value());
    REQUIRE(wf.witness.has_value());
    // in the witness cycle both writers keep stepping, neither answers
    CHECK_FALSE(instance_completes_in(alg, wf.witness->l, wf.witness->process,
                                      wf.witness->instance));
}

TEST_CASE("bounded solo implementations satisfy everything") {
    for (auto alg : {disjoint_writers(), swsr_counter()}) {
        conflict_relation cr =
            alg.object_name() == "commuting-only"
                ? derive_conflict_relation(commuting_only_object())
                : derive_conflict_relation(*builtin_object(alg.object_name()));
        for (auto cond : {progress_condition::wait_free, progress_condition::obstruction_free,
                          progress_condition::conflict_obstruction_free}) {
            auto v = find_violation(alg, cond, cr);
            CHECK(v.holds);
            CHECK_FALSE(v.witness.has_value());
        }
    }
}

TEST_CASE("implication chain: wait-free implies conflict-obstruction-free implies obstruction-free") {
    struct row {
        algorithm alg;
        conflict_relation cr;
    };
    std::vector<row> rows;
    rows.push_back({contended_counter(),
                    derive_conflict_relation(*builtin_object("bounded-counter(1)"))});
    rows.push_back({toggle_duel(), derive_conflict_relation(total_conflict_register_object())});
    rows.push_back({disjoint_writers(), {}});
    rows.push_back({swsr_counter(), derive_conflict_relation(*builtin_object("bounded-counter(2)"))});
    rows.push_back({conflict_zoo(), derive_conflict_relation(total_conflict_register_object())});
    for (const auto& r : rows) {
        bool wf = find_violation(r.alg, progress_condition::wait_free, r.cr).holds;
        bool cof = find_violation(r.alg, progress_condition::conflict_obstruction_free, r.cr).holds;
        bool of = find_violation(r.alg, progress_condition::obstruction_free, r.cr).holds;
        if (wf) CHECK(cof);
        if (cof) CHECK(of);
    }
}

TEST_CASE("with an empty conflict relation the conflict condition degenerates to wait-freedom") {
    conflict_relation none;
    for (auto alg : {contended_counter(), toggle_duel(), disjoint_writers(), swsr_counter()}) {
        auto wf = find_violation(alg, progress_condition::wait_free, none);
        auto cof = find_violation(alg, progress_condition::conflict_obstruction_free, none);
        CHECK(wf.holds == cof.holds);
    }
}

TEST_CASE("total conflict relation: conflict-scf coincides with plain scf on generated lassos") {
    auto alg = conflict_zoo();
    auto cr = derive_conflict_relation(total_conflict_register_object());
    auto g = build_configuration_graph(alg, 1u << 20);

    std::mt19937 rng(7);
    int lassos = 0, checks = 0;
    for (int attempt = 0; attempt < 50000 && lassos < 1200; ++attempt) {
        int u = static_cast<int>(rng() % g.nodes.size());
        int len = 1 + static_cast<int>(rng() % 8);
        schedule walk;
        int cur = u;
        for (int i = 0; i < len; ++i) {
            std::vector<int> open;
            for (int q = 0; q < g.nprocs; ++q)
                if (g.successor(cur, q) >= 0) open.push_back(q);
            if (open.empty()) break;
            int q = open[rng() % open.size()];
            walk.push_back(q);
            cur = g.successor(cur, q);
        }
        if (cur != u || walk.empty()) continue;
        auto l = make_lasso(alg, g.path_from_root(u), walk);
        if (!l) continue;
        ++lassos;
        for (int p = 0; p < alg.process_count(); ++p) {
            for (int k = 0; k < static_cast<int>(alg.proc(p).op_sequence.size()); ++k) {
                bool scf, cscf;
                try {
                    scf = eventually_scf(alg, *l, p, k);
                    cscf = eventually_conflict_scf(alg, *l, p, k, cr);
                } catch (const usage_error&) {
                    continue; // instance never invoked in this lasso
                }
                CHECK(scf == cscf);
                ++checks;
            }
        }
    }
    CHECK(lassos >= 1000);
    CHECK(checks >= 1000);
}

TEST_CASE("configuration graph matches hand enumeration on a two-node toy") {
    algorithm_spec spec;
    spec.name = "one-writer";
    spec.object = "commuting-only";
    spec.registers = {{"g", {"0", "1"}, "0"}};
    spec.processes = {process_builder("w")
                          .write("s", "g", "1", "d")
                          .respond("d", "ack")
                          .halt("d")
                          .input("", "s", {"inc"})
                          .build()};
    spec.inputs = {{"w", ""}};
    auto alg = algorithm::compile(spec);
    auto g = build_configuration_graph(alg, 100);
    REQUIRE(g.nodes.size() == 2);
    CHECK(g.edge_count == 1);
    CHECK(g.successor(0, 0) == 1);
    CHECK(g.successor(1, 0) == -1);
    CHECK(g.path_from_root(1) == schedule{0});
    CHECK(g.nodes[0] == alg.initial_configuration());
}

TEST_CASE("graph construction is identical with and without worker threads") {
    // six independent three-phase togglers: 729 configurations, wide layers
    algorithm_spec spec;
    spec.name = "togglers";
    spec.object = "commuting-only";
    for (int i = 0; i < 6; ++i) {
        std::string r = "r" + std::to_string(i);
        spec.registers.push_back({r, {"0", "1"}, "0"});
        spec.processes.push_back(process_builder("q" + std::to_string(i))
                                     .write("s0", r, "1", "s1")
                                     .write("s1", r, "0", "s2")
                                     .write("s2", r, "0", "s0")
                                     .input("", "s0", {"spin"})
                                     .build());
        spec.inputs["q" + std::to_string(i)] = "";
    }
    auto alg = algorithm::compile(spec);
    auto serial = build_configuration_graph(alg, 1u << 20, 1);
    auto parallel = build_configuration_graph(alg, 1u << 20, 4);
    REQUIRE(serial.nodes.size() == 729);
    CHECK(serial.nodes == parallel.nodes);
    CHECK(serial.succ == parallel.succ);
    CHECK(serial.parent_node == parallel.parent_node);
    CHECK(serial.edge_count == parallel.edge_count);
}

TEST_CASE("strongly connected components on a hand-built graph") {
    // 0 -> 1 -> 2 -> 1, node 3 isolated (nprocs = 1)
    std::vector<int> succ = {1, 2, 1, -1};
    std::vector<bool> edges(4, true), nodes(4, true);
    auto scc = strongly_connected_components(4, 1, succ, edges, nodes);
    CHECK(scc.count == 3);
    CHECK(scc.component[1] == scc.component[2]);
    CHECK(scc.component[0] != scc.component[1]);
    CHECK(scc.component[3] != scc.component[1]);

    nodes[2] = false; // cutting the cycle splits 1 and 2
    auto scc2 = strongly_connected_components(4, 1, succ, edges, nodes);
    CHECK(scc2.component[2] == -1);
    CHECK(scc2.count == 3);
}

TEST_CASE("exhausting the configuration budget reports partial progress") {
    auto alg = contended_counter();
    conflict_relation cr;
    try {
        find_violation(alg, progress_condition::wait_free, cr, 3);
        FAIL("expected budget_error");
    } catch (const budget_error& e) {
        CHECK(e.states_seen >= 3);
    }
}
