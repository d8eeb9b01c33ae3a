#include "cofcheck/catalog.hpp"

#include "cofcheck/builder.hpp"
#include "cofcheck/errors.hpp"

#include <stdexcept>

namespace cofcheck {

namespace {

std::string flip(const std::string& v) { return v == "0" ? "1" : "0"; }

// One proposer round with value v: publish the preference, read the
// opponent's, take the fast path when it is still unset, agree when it
// matches, and otherwise duel by flag parity. All states carry `tag` so a
// process can host one round per input value. On deciding, control moves to
// `win` (own value v prevails) or `lose` (opponent value adopted).
void duel_round(process_builder& b, const std::string& tag, const std::string& v,
                const std::string& myp, const std::string& otherp, const std::string& myf,
                const std::string& otherf, const std::string& win, const std::string& lose) {
    const std::string w = flip(v);
    auto s = [&](const std::string& n) { return tag + "_" + n; };
    b.write(s("m0"), myp, v, s("m1"));
    b.read(s("m1"), otherp, {{"n", s("c0")}, {v, win}, {w, s("dx0")}});
    // fast path: claim the flag, check the opponent has not
    b.write(s("c0"), myf, "1", s("c1"));
    b.read(s("c1"), otherf, {{"0", win}, {"1", s("c2")}});
    b.read(s("c2"), otherp, {{v, win}, {w, s("dx1")}, {"n", s("c2")}});
    // duel: flip the own flag while the flags agree with the local parity;
    // once they differ, the raised flag names the winner
    b.read(s("dx0"), otherf, {{"0", s("up")}, {"1", lose}});
    b.write(s("up"), myf, "1", s("dx1"));
    b.read(s("dx1"), otherf, {{"1", s("dn")}, {"0", win}});
    b.write(s("dn"), myf, "0", s("dx0"));
}

process_spec cons2_proposer(const std::string& name, const std::string& myp,
                            const std::string& otherp, const std::string& myf,
                            const std::string& otherf) {
    process_builder b(name);
    for (const std::string v : {"0", "1"}) {
        const std::string w = flip(v);
        duel_round(b, "r" + v, v, myp, otherp, myf, otherf, "D" + v, "D" + w);
        b.input(v, "r" + v + "_m0", {"propose(" + v + ")"});
    }
    b.respond("D0", "0").halt("D0");
    b.respond("D1", "1").halt("D1");
    return b.build();
}

// ---------------------------------------------------------------------------
// cons3-naive: a round-based commit/adopt candidate for three processes.
//
// Every unordered pair of processes shares a "lock": a hold mark per side
// (0 none, 1 planted, 2 climbing, 3 passed) and a static turn register.
// Each process also owns a decision board carrying its announced claim
// (c0, c1) or its committed decision (d0, d1). The board is the only place
// a value lives; the marks only say how far a round has come.
//
// A round with value v scans the other boards (adopting any committed
// value), publishes the claim cv on its own board, and takes its two locks
// one at a time in a value-dependent order: value-0 rounds climb lock 1
// first, value-1 rounds lock 2 first, so a round blocked at its second lock
// hands over to a round that starts there. A lock is entered through a
// read-only "peek"; only when the peek passes does the round plant mark 1
// and climb, re-reading the partner's mark after every write of its own.
// That ordering makes the gates meaningful: a mark the partner writes after
// my first sighting of it precedes a re-read of mine the partner still has
// ahead. A partner first met below mark 2 is therefore contested through
// the turn register, which rounds with conflicting claims never move: the
// favoured side climbs, the other adopts the winner's claim. Meeting a
// same-valued partner costs a backoff that steals the turn and retries the
// lock; only such same-claim backoffs move a turn register, and a planted
// mark is never seen to dip. A partner first seen at mark 2 or 3 may
// already have finished its re-reads, so it is passed only through a
// "door" on its board: a standing conflicting claim makes the round adopt
// -- unless the claimant is provably doomed at its other lock, where a
// standing third party holds a claim conflicting the claimant (and hence
// shares my value): already climbing or past there, or still at mark 1 but
// favoured by that lock's turn. Such a claimant is passed where it stands.
//
// The door's evidence can be stale in one way: the third party may long ago
// have resolved to adopt against a *discarded* round of mine whose marks it
// saw, and only act on that resolution -- releasing its stand -- after the
// door used it. A round therefore leaves no trace when it gives up before
// planting anything: the first lock's peek defers straight to the rescan.
// Any defer after planting (a lost turn, an in-ladder door, the second
// lock's peek) releases the planted marks and permanently drops the process
// into a tainted mode whose doors always adopt: the discarded marks may be
// exactly such a frozen premise, so the process renounces door passes
// rather than risk one built on evidence it poisoned itself.
//
// After passing both locks the round commits dv. Equal proposals commute,
// so two same-value rounds may ping-pong the turn of their shared lock
// forever: each backoff steals the turn the other just took. That
// obstruction involves no conflicting operations.

struct lock_cfg {
    std::string D, E;        // own / partner hold mark on this lock
    std::string T, tme, tot; // this lock's turn register, own / partner tag
    std::string XB;          // the partner's decision board
    // the partner's mark on its other lock, plus the third party's mark
    // there, the third party's board, that lock's turn register, and its
    // third-party / partner tags
    std::string XO, TD, TB, TT, ttz, ttx;
};

process_spec cons3_racer(const std::string& name, const std::string& myB, const std::string& oB1,
                         const std::string& oB2, const lock_cfg& L1, const lock_cfg& L2) {
    process_builder b(name);
    b.write("w0", myB, "d0", "DEC0");
    b.write("w1", myB, "d1", "DEC1");
    b.respond("DEC0", "0").halt("DEC0");
    b.respond("DEC1", "1").halt("DEC1");
    for (const std::string v : {"0", "1"}) {
        const std::string o = flip(v);
        const int first = v == "0" ? 1 : 2;
        // giving up after planting: release the locks in reverse order and
        // rescan with the opposite value, tainted from here on
        const std::string taint = "ad1_" + v + "t";
        for (const std::string w : {"c", "t"}) {
            const bool clean = w == "c";
            auto S = [&](const std::string& n) { return n + "_" + v + w; };
            // adopt a committed value the moment it is on a board; standing
            // claims are contested at the locks instead
            b.read(S("b1"), oB1,
                   {{"n", S("b2")}, {"c0", S("b2")}, {"c1", S("b2")}, {"d0", "w0"}, {"d1", "w1"}});
            b.read(S("b2"), oB2,
                   {{"n", S("cl")}, {"c0", S("cl")}, {"c1", S("cl")}, {"d0", "w0"}, {"d1", "w1"}});
            b.write(S("cl"), myB, "c" + v, "pe" + std::to_string(first) + "_" + v + w);
            for (int l = 1; l <= 2; ++l) {
                const lock_cfg& L = l == 1 ? L1 : L2;
                auto N = [&](const std::string& n) { return n + std::to_string(l) + "_" + v + w; };
                const std::string pass =
                    l == first ? "pe" + std::to_string(3 - first) + "_" + v + w : S("dn");
                // only a first-lock peek has planted nothing yet and may defer
                // without trace; every other defer goes through the release
                const std::string pdef = l == first ? "b1_" + o + w : taint;
                auto door = [&](const std::string& tag, const std::string& go,
                                const std::string& def) {
                    if (!clean) {
                        b.read(tag, L.XB,
                               {{"n", go},
                                {"c" + v, go},
                                {"d" + v, go},
                                {"c" + o, def},
                                {"d" + o, def}});
                        return;
                    }
                    b.read(tag, L.XB,
                           {{"n", go},
                            {"c" + v, go},
                            {"d" + v, go},
                            {"c" + o, tag + "x"},
                            {"d" + o, def}});
                    // doom chain: the claimant must not have passed its other
                    // lock, and the third party must stand there against it
                    b.read(tag + "x", L.XO,
                           {{"0", tag + "y"}, {"1", tag + "y"}, {"2", tag + "y"}, {"3", def}});
                    b.read(tag + "y", L.TD,
                           {{"0", def}, {"1", tag + "p"}, {"2", tag + "q"}, {"3", tag + "q"}});
                    b.read(tag + "p", L.TB,
                           {{"n", def},
                            {"c" + v, tag + "z"},
                            {"d" + v, tag + "z"},
                            {"c" + o, def},
                            {"d" + o, def}});
                    b.read(tag + "z", L.TT, {{L.ttz, go}, {L.ttx, def}});
                    b.read(tag + "q", L.TB,
                           {{"n", def},
                            {"c" + v, go},
                            {"d" + v, go},
                            {"c" + o, def},
                            {"d" + o, def}});
                };
                // read-only entry peek: plant only on a clear or winnable lock
                b.read(N("pe"), L.E,
                       {{"0", N("pl")}, {"1", N("pb")}, {"2", N("pd")}, {"3", N("pd")}});
                b.read(N("pb"), L.XB,
                       {{"n", N("pl")},
                        {"c" + v, N("pl")},
                        {"d" + v, N("pl")},
                        {"c" + o, N("pt")},
                        {"d" + o, pdef}});
                b.read(N("pt"), L.T, {{L.tme, N("pl")}, {L.tot, pdef}});
                door(N("pd"), N("pl"), pdef);
                b.write(N("pl"), L.D, "1", N("e1"));
                // the ladder: every mark write is followed by a re-read of the
                // partner's mark, so a mark the partner writes after my first
                // sighting of it precedes a re-read of mine it still has ahead
                b.read(N("e1"), L.E,
                       {{"0", N("w2")}, {"1", N("x1")}, {"2", N("n1")}, {"3", N("n1")}});
                b.read(N("x1"), L.XB,
                       {{"n", N("w2")},
                        {"c" + v, N("s1")},
                        {"d" + v, N("s1")},
                        {"c" + o, N("c1")},
                        {"d" + o, taint}});
                b.read(N("c1"), L.T, {{L.tme, N("w2")}, {L.tot, taint}});
                b.read(N("s1"), L.T, {{L.tme, N("w2")}, {L.tot, N("bo")}});
                door(N("n1"), N("w2"), taint);
                b.write(N("w2"), L.D, "2", N("e2"));
                b.read(N("e2"), L.E,
                       {{"0", N("w3")}, {"1", N("x2")}, {"2", N("x2")}, {"3", N("n2")}});
                b.read(N("x2"), L.XB,
                       {{"n", N("w3")},
                        {"c" + v, N("s2")},
                        {"d" + v, N("s2")},
                        {"c" + o, N("c2")},
                        {"d" + o, taint}});
                b.read(N("c2"), L.T, {{L.tme, N("w3")}, {L.tot, taint}});
                b.read(N("s2"), L.T, {{L.tme, N("w3")}, {L.tot, N("bo")}});
                door(N("n2"), N("w3"), taint);
                b.write(N("w3"), L.D, "3", pass);
                // same-value backoff: steal the turn and retry this lock; the
                // planted mark never dips
                b.write(N("bo"), L.T, L.tme, N("e1"));
            }
            b.write(S("dn"), myB, "d" + v, "DEC" + v);
        }
        b.write("ad1_" + v + "t", (first == 1 ? L2 : L1).D, "0", "ad2_" + v + "t");
        b.write("ad2_" + v + "t", (first == 1 ? L1 : L2).D, "0", "b1_" + o + "t");
        b.input(v, "b1_" + v + "c", {"propose(" + v + ")"});
    }
    return b.build();
}

} // namespace

algorithm_spec cons2_spec() {
    algorithm_spec spec;
    spec.name = "cons2";
    spec.object = "binary-consensus";
    spec.registers = {{"pa", {"n", "0", "1"}, "n"},
                      {"pb", {"n", "0", "1"}, "n"},
                      {"fa", {"0", "1"}, "0"},
                      {"fb", {"0", "1"}, "0"}};
    spec.processes = {cons2_proposer("a", "pa", "pb", "fa", "fb"),
                      cons2_proposer("b", "pb", "pa", "fb", "fa")};
    spec.inputs = {{"a", "0"}, {"b", "1"}};
    return spec;
}

algorithm_spec cons3_spec() {
    algorithm_spec spec;
    spec.name = "cons3-naive";
    spec.object = "binary-consensus";
    // per lock and side: hold mark d<lock><side>; per lock: turn register;
    // per process: a decision-board cell
    for (const std::string d : {"d01a", "d01b", "d02a", "d02c", "d12b", "d12c"})
        spec.registers.push_back({d, {"0", "1", "2", "3"}, "0"});
    spec.registers.push_back({"t01", {"a", "b"}, "a"});
    spec.registers.push_back({"t02", {"a", "c"}, "a"});
    spec.registers.push_back({"t12", {"b", "c"}, "b"});
    for (const std::string r : {"B0", "B1", "B2"})
        spec.registers.push_back({r, {"n", "c0", "c1", "d0", "d1"}, "n"});
    spec.processes = {
        cons3_racer("p0", "B0", "B1", "B2",
                    {"d01a", "d01b", "t01", "a", "b", "B1",
                     "d12b", "d12c", "B2", "t12", "c", "b"},
                    {"d02a", "d02c", "t02", "a", "c", "B2",
                     "d12c", "d12b", "B1", "t12", "b", "c"}),
        cons3_racer("p1", "B1", "B0", "B2",
                    {"d12b", "d12c", "t12", "b", "c", "B2",
                     "d02c", "d02a", "B0", "t02", "a", "c"},
                    {"d01b", "d01a", "t01", "b", "a", "B0",
                     "d02a", "d02c", "B2", "t02", "c", "a"}),
        cons3_racer("p2", "B2", "B0", "B1",
                    {"d12c", "d12b", "t12", "c", "b", "B1",
                     "d01b", "d01a", "B0", "t01", "a", "b"},
                    {"d02c", "d02a", "t02", "c", "a", "B0",
                     "d01a", "d01b", "B1", "t01", "b", "a"})};
    spec.inputs = {{"p0", "0"}, {"p1", "1"}, {"p2", "1"}};
    return spec;
}

algorithm_spec counter_swsr_spec() {
    algorithm_spec spec;
    spec.name = "counter-swsr";
    spec.object = "bounded-counter(4)";
    spec.registers = {{"c2", {"0", "1", "2"}, "0"}, {"c3", {"0", "1", "2"}, "0"}};
    auto inc = [](const std::string& name, const std::string& cell) {
        return process_builder(name)
            .write("i0", cell, "1", "k0")
            .respond("k0", "ack")
            .write("k0", cell, "2", "k1")
            .respond("k1", "ack")
            .halt("k1")
            .input("", "i0", {"inc", "inc"})
            .build();
    };
    process_builder reader("p1");
    reader.input("", "r0", {"read"});
    for (int a = 0; a <= 2; ++a) {
        std::map<std::string, std::string> first;
        for (int v = 0; v <= 2; ++v) first[std::to_string(v)] = "r1_" + std::to_string(v);
        if (a == 0) reader.read("r0", "c2", first);
        std::map<std::string, std::string> second;
        for (int v = 0; v <= 2; ++v) second[std::to_string(v)] = "z" + std::to_string(a + v);
        reader.read("r1_" + std::to_string(a), "c3", second);
    }
    for (int s = 0; s <= 4; ++s)
        reader.respond("z" + std::to_string(s), std::to_string(s)).halt("z" + std::to_string(s));
    spec.processes = {reader.build(), inc("p2", "c2"), inc("p3", "c3")};
    spec.inputs = {{"p1", ""}, {"p2", ""}, {"p3", ""}};
    return spec;
}

algorithm_spec figure1_spec() {
    algorithm_spec spec;
    spec.name = "figure1-counter";
    spec.object = "bounded-counter(2)";
    spec.registers = {{"c2", {"0", "1"}, "0"}, {"c3", {"0", "1"}, "0"}};
    auto inc = [](const std::string& name, const std::string& cell) {
        return process_builder(name)
            .read_any("s0", cell, {"0", "1"}, "s1")
            .write("s1", cell, "1", "s0")
            .respond("s0", "ack")
            .input("", "s0", {"inc"}, /*repeat=*/true)
            .build();
    };
    auto reader = process_builder("p1")
                      .read("r0", "c2", {{"0", "ra"}, {"1", "rb"}})
                      .read("ra", "c3", {{"0", "z0"}, {"1", "z1"}})
                      .read("rb", "c3", {{"0", "z1"}, {"1", "z2"}})
                      .respond("z0", "0")
                      .respond("z1", "1")
                      .respond("z2", "2")
                      .halt("z0")
                      .halt("z1")
                      .halt("z2")
                      .input("", "r0", {"read"})
                      .build();
    spec.processes = {reader, inc("p2", "c2"), inc("p3", "c3")};
    spec.inputs = {{"p1", ""}, {"p2", ""}, {"p3", ""}};
    return spec;
}

figure1_bundle figure1_scenario() {
    figure1_bundle f;
    f.spec = figure1_spec();
    auto alg = algorithm::compile(f.spec);
    // the reader samples c2 and crashes; each incrementer completes its first
    // increment and has already read for the second when the cycle starts
    schedule prefix = {0, 1, 1, 1, 2, 2, 2};
    // responses for the open instances come first, the instances opened by
    // the trailing reads complete only in the next unrolling
    schedule cycle = {1, 2, 1, 2};
    auto l = make_lasso(alg, prefix, cycle);
    if (!l) throw std::logic_error("figure 1 lasso failed to close");
    f.l = *l;
    f.reader_process = 0;
    f.completing_incs = {{1, 1}, {2, 1}};
    f.straddling_incs = {{1, 2}, {2, 2}};
    return f;
}

std::vector<catalog_entry> reference_catalog() {
    std::vector<catalog_entry> out;
    {
        catalog_entry e{{}, cons2_spec()};
        e.manifest.name = "cons2";
        e.manifest.object = "binary-consensus";
        e.manifest.processes = 2;
        e.manifest.linearizable = true;
        e.manifest.progress = {{"wf", false}, {"of", true}, {"cof", true}};
        e.manifest.input_domains = {{"a", {"0", "1"}}, {"b", {"0", "1"}}};
        out.push_back(std::move(e));
    }
    {
        catalog_entry e{{}, counter_swsr_spec()};
        e.manifest.name = "counter-swsr";
        e.manifest.object = "bounded-counter(4)";
        e.manifest.processes = 3;
        e.manifest.linearizable = true;
        e.manifest.progress = {{"wf", true}, {"of", true}, {"cof", true}};
        e.manifest.input_domains = {{"p1", {""}}, {"p2", {""}}, {"p3", {""}}};
        out.push_back(std::move(e));
    }
    {
        catalog_entry e{{}, cons3_spec()};
        e.manifest.name = "cons3-naive";
        e.manifest.object = "binary-consensus";
        e.manifest.processes = 3;
        e.manifest.linearizable = true;
        e.manifest.progress = {{"wf", false}, {"of", true}, {"cof", false}};
        e.manifest.input_domains = {{"p0", {"0", "1"}}, {"p1", {"0", "1"}}, {"p2", {"0", "1"}}};
        out.push_back(std::move(e));
    }
    {
        catalog_entry e{{}, figure1_spec()};
        e.manifest.name = "figure1-counter";
        e.manifest.object = "bounded-counter(2)";
        e.manifest.processes = 3;
        e.manifest.linearizable = true; // checked on the replayed history
        e.manifest.input_domains = {{"p1", {""}}, {"p2", {""}}, {"p3", {""}}};
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace cofcheck
