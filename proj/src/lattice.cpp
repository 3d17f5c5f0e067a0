#include "smp/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <queue>

namespace smp {

namespace {

// id -> dense slot helper for one side of an instance.
struct SlotMap {
    explicit SlotMap(std::span<const int> ids) {
        int mx = -1;
        for (int id : ids) mx = std::max(mx, id);
        slot_.assign(mx + 1, -1);
        for (std::size_t i = 0; i < ids.size(); ++i)
            slot_[ids[i]] = static_cast<int>(i);
    }
    int operator()(int id) const { return slot_[id]; }
    bool contains(int id) const {
        return id >= 0 && id < static_cast<int>(slot_.size()) && slot_[id] != -1;
    }

private:
    std::vector<int> slot_;
};

}  // namespace

Matching deferred_acceptance(const Instance& inst, Proposers proposers) {
    const bool men_propose = proposers == Proposers::Men;
    std::span<const int> props = men_propose ? inst.men() : inst.women();
    std::span<const int> recvs = men_propose ? inst.women() : inst.men();
    SlotMap pslot(props), rslot(recvs);

    const int np = static_cast<int>(props.size());
    const int nr = static_cast<int>(recvs.size());

    // Proposal lists as receiver slots; receiver ranks over proposer slots.
    std::vector<std::vector<int>> plist(np);
    for (int i = 0; i < np; ++i) {
        auto prefs = men_propose ? inst.pref_of_man(props[i])
                                 : inst.pref_of_woman(props[i]);
        for (int id : prefs) plist[i].push_back(rslot(id));
    }
    std::vector<std::vector<int>> rrank(nr, std::vector<int>(np));
    for (int j = 0; j < nr; ++j) {
        auto prefs = men_propose ? inst.pref_of_woman(recvs[j])
                                 : inst.pref_of_man(recvs[j]);
        for (std::size_t r = 0; r < prefs.size(); ++r)
            rrank[j][pslot(prefs[r])] = static_cast<int>(r);
    }

    std::vector<int> next(np, 0), holder(nr, -1);
    std::vector<int> free;
    for (int i = np - 1; i >= 0; --i) free.push_back(i);
    while (!free.empty()) {
        int i = free.back();
        free.pop_back();
        if (next[i] >= static_cast<int>(plist[i].size())) continue;  // exhausted
        int j = plist[i][next[i]++];
        if (holder[j] == -1) {
            holder[j] = i;
        } else if (rrank[j][i] < rrank[j][holder[j]]) {
            free.push_back(holder[j]);
            holder[j] = i;
        } else {
            free.push_back(i);
        }
    }

    std::vector<Pair> pairs;
    for (int j = 0; j < nr; ++j) {
        if (holder[j] == -1) continue;
        int p = props[holder[j]], r = recvs[j];
        pairs.push_back(men_propose ? Pair{p, r} : Pair{r, p});
    }
    return Matching(std::move(pairs));
}

Matching men_optimal(const Instance& inst) {
    return deferred_acceptance(inst, Proposers::Men);
}

Matching women_optimal(const Instance& inst) {
    return deferred_acceptance(inst, Proposers::Women);
}

void WeightFn::set(int man, int woman, std::int64_t w) {
    if (w == 0)
        w_.erase({man, woman});
    else
        w_[{man, woman}] = w;
}

std::int64_t WeightFn::operator()(int man, int woman) const {
    auto it = w_.find({man, woman});
    return it == w_.end() ? 0 : it->second;
}

std::int64_t WeightFn::total(const Matching& m) const {
    std::int64_t t = 0;
    for (const Pair& p : m.pairs()) t += (*this)(p.man, p.woman);
    return t;
}

WeightFn WeightFn::indicator(const Matching& m) {
    WeightFn f;
    for (const Pair& p : m.pairs()) f.set(p.man, p.woman, 1);
    return f;
}

std::int64_t RotationPoset::weight_delta(int rotation_index, const WeightFn& f) const {
    const auto& cycle = rotations[rotation_index].cycle;
    std::int64_t d = 0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Pair& cur = cycle[i];
        const Pair& nxt = cycle[(i + 1) % cycle.size()];
        d += f(cur.man, nxt.woman) - f(cur.man, cur.woman);
    }
    return d;
}

namespace {

// Sweep state for rotation discovery: current matching plus, per woman, the
// rank of her current partner. A pair (u,w) is still available ("alive")
// exactly when w does not strictly prefer her current partner to u; the
// proposal phase establishes this on the full instance and eliminations
// maintain it.
struct Sweep {
    const Instance& inst;
    std::vector<int> wife;     // by man id, -1 when outside the core
    std::vector<int> husband;  // by woman id
    std::vector<int> bound;    // by woman id, rank of current partner

    explicit Sweep(const Instance& inst_) : inst(inst_) {
        Matching m0 = men_optimal(inst);
        int max_m = 0, max_w = 0;
        for (int m : inst.men()) max_m = std::max(max_m, m + 1);
        for (int w : inst.women()) max_w = std::max(max_w, w + 1);
        wife.assign(max_m, -1);
        husband.assign(max_w, -1);
        bound.assign(max_w, -1);
        for (const Pair& p : m0.pairs()) {
            wife[p.man] = p.woman;
            husband[p.woman] = p.man;
            bound[p.woman] = inst.woman_rank(p.woman, p.man);
        }
    }

    bool in_core_man(int u) const { return wife[u] != -1; }
    bool alive(int u, int w) const {
        return husband[w] != -1 && inst.woman_rank(w, u) <= bound[w];
    }

    // First alive woman strictly after u's current wife on his list, if any.
    int successor_wife(int u) const {
        auto prefs = inst.pref_of_man(u);
        std::size_t start = inst.man_rank(u, wife[u]) + 1;
        for (std::size_t r = start; r < prefs.size(); ++r)
            if (alive(u, prefs[r])) return prefs[r];
        return -1;
    }

    int next_man(int u) const {
        int w = successor_wife(u);
        return w == -1 ? -1 : husband[w];
    }
};

}  // namespace

RotationPoset build_rotation_poset(const Instance& inst) {
    RotationPoset poset;
    poset.men_opt = men_optimal(inst);

    Sweep sweep(inst);
    std::map<std::pair<int, int>, int> eliminated_by;  // (man, woman) -> rotation
    std::map<std::pair<int, int>, int> given_by;       // rotation that created pair

    while (true) {
        // Find one exposed rotation: a cycle of the next_man() map.
        std::vector<int> state(sweep.wife.size(), 0);  // 0 new, 1 on path, 2 dead
        std::vector<int> cycle_men;
        for (int u : inst.men()) {
            if (!sweep.in_core_man(u) || state[u] != 0) continue;
            std::vector<int> path;
            int x = u;
            while (x != -1 && state[x] == 0) {
                state[x] = 1;
                path.push_back(x);
                x = sweep.next_man(x);
            }
            if (x != -1 && state[x] == 1) {
                auto it = std::find(path.begin(), path.end(), x);
                cycle_men.assign(it, path.end());
            }
            for (int y : path) state[y] = 2;
            if (!cycle_men.empty()) break;
        }
        if (cycle_men.empty()) break;

        // Canonical form: smallest man first.
        auto smallest = std::min_element(cycle_men.begin(), cycle_men.end());
        std::rotate(cycle_men.begin(), smallest, cycle_men.end());

        Rotation rot;
        for (int u : cycle_men) rot.cycle.push_back({u, sweep.wife[u]});
        const int idx = static_cast<int>(poset.rotations.size());
        const std::size_t r = rot.cycle.size();

        // Eliminate: each u_i moves to w_{i+1}; w_{i+1}'s bound tightens to
        // u_i, and the pairs falling off her list are recorded.
        for (std::size_t i = 0; i < r; ++i) {
            int u = rot.cycle[i].man;
            int w_next = rot.cycle[(i + 1) % r].woman;
            int old_bound = sweep.bound[w_next];
            int new_bound = inst.woman_rank(w_next, u);
            assert(new_bound < old_bound);
            auto prefs = inst.pref_of_woman(w_next);
            for (int rk = new_bound + 1; rk <= old_bound; ++rk)
                eliminated_by[{prefs[rk], w_next}] = idx;
            given_by[{u, w_next}] = idx;
        }
        for (std::size_t i = 0; i < r; ++i) {
            int u = rot.cycle[i].man;
            int w_next = rot.cycle[(i + 1) % r].woman;
            sweep.wife[u] = w_next;
            sweep.husband[w_next] = u;
            sweep.bound[w_next] = inst.woman_rank(w_next, u);
        }

        // Direct predecessors: the rotation that gave u_i his current wife,
        // and the rotations that eliminated the pairs between w_i and
        // w_{i+1} on u_i's list (pairs dead since the proposal phase need
        // nothing).
        std::vector<int> preds;
        for (std::size_t i = 0; i < r; ++i) {
            const Pair& cur = rot.cycle[i];
            int w_next = rot.cycle[(i + 1) % r].woman;
            if (auto it = given_by.find({cur.man, cur.woman}); it != given_by.end())
                if (it->second != idx) preds.push_back(it->second);
            auto prefs = inst.pref_of_man(cur.man);
            for (int rk = inst.man_rank(cur.man, cur.woman) + 1;
                 rk < inst.man_rank(cur.man, w_next); ++rk) {
                if (auto it = eliminated_by.find({cur.man, prefs[rk]});
                    it != eliminated_by.end() && it->second != idx)
                    preds.push_back(it->second);
            }
        }
        std::sort(preds.begin(), preds.end());
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
        for (int p : preds) assert(p < idx);

        poset.rotations.push_back(std::move(rot));
        poset.preds.push_back(std::move(preds));
    }

    std::vector<Pair> final_pairs;
    for (int u : inst.men())
        if (sweep.wife[u] != -1) final_pairs.push_back({u, sweep.wife[u]});
    poset.women_opt = Matching(std::move(final_pairs));
    return poset;
}

Matching matching_from_closure(const RotationPoset& poset,
                               const std::vector<bool>& chosen) {
    if (chosen.size() != poset.rotations.size())
        throw StructuralError("closure size does not match rotation count");
    std::map<int, int> wife;
    for (const Pair& p : poset.men_opt.pairs()) wife[p.man] = p.woman;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (!chosen[i]) continue;
        for (int p : poset.preds[i])
            if (!chosen[p])
                throw StructuralError("rotation set is not down-closed");
        const auto& cycle = poset.rotations[i].cycle;
        for (std::size_t k = 0; k < cycle.size(); ++k)
            wife[cycle[k].man] = cycle[(k + 1) % cycle.size()].woman;
    }
    std::vector<Pair> pairs;
    for (auto [m, w] : wife) pairs.push_back({m, w});
    return Matching(std::move(pairs));
}

std::vector<std::vector<bool>> all_closures(const RotationPoset& poset,
                                            std::optional<long long> cap) {
    const int n = static_cast<int>(poset.rotations.size());
    std::vector<std::vector<bool>> out;
    std::vector<bool> cur(n, false);
    // Index order is topological, so every predecessor is decided before i.
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            if (cap && static_cast<long long>(out.size()) >= *cap)
                throw CapExceeded("closure enumeration exceeded cap",
                                  static_cast<long long>(out.size()));
            out.push_back(cur);
            return;
        }
        cur[i] = false;
        self(self, i + 1);
        bool allowed = true;
        for (int p : poset.preds[i]) allowed = allowed && cur[p];
        if (allowed) {
            cur[i] = true;
            self(self, i + 1);
            cur[i] = false;
        }
    };
    rec(rec, 0);
    return out;
}

namespace {

std::vector<Matching> enumerate_brute_force(const Instance& inst,
                                            std::optional<long long> cap) {
    std::span<const int> men = inst.men();
    std::span<const int> women = inst.women();
    const int nm = static_cast<int>(men.size());
    const int nw = static_cast<int>(women.size());
    // With complete lists an unmatched man and an unmatched woman always
    // block, so stable matchings have maximum size.
    const int required = std::min(nm, nw);

    std::vector<Matching> out;
    std::vector<int> partner(nm, -1);
    std::vector<bool> used(nw, false);
    auto rec = [&](auto&& self, int i, int matched) -> void {
        if (matched + (nm - i) < required) return;
        if (i == nm) {
            if (matched != required) return;
            std::vector<Pair> pairs;
            for (int k = 0; k < nm; ++k)
                if (partner[k] != -1) pairs.push_back({men[k], women[partner[k]]});
            Matching m(std::move(pairs));
            if (is_stable(inst, m)) {
                if (cap && static_cast<long long>(out.size()) >= *cap)
                    throw CapExceeded("stable-matching enumeration exceeded cap",
                                      static_cast<long long>(out.size()));
                out.push_back(std::move(m));
            }
            return;
        }
        self(self, i + 1, matched);  // leave men[i] unmatched
        for (int j = 0; j < nw; ++j) {
            if (used[j]) continue;
            used[j] = true;
            partner[i] = j;
            self(self, i + 1, matched + 1);
            partner[i] = -1;
            used[j] = false;
        }
    };
    rec(rec, 0, 0);
    return out;
}

}  // namespace

std::vector<Matching> enumerate_stable(const Instance& inst,
                                       std::optional<long long> cap,
                                       EnumBackend backend) {
    std::vector<Matching> out;
    if (backend == EnumBackend::BruteForce) {
        out = enumerate_brute_force(inst, cap);
    } else {
        RotationPoset poset = build_rotation_poset(inst);
        for (const auto& closure : all_closures(poset, cap))
            out.push_back(matching_from_closure(poset, closure));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Dinic max-flow on exact integer capacities.
class MaxFlow {
public:
    explicit MaxFlow(int n) : graph_(n) {}

    void add_edge(int from, int to, std::int64_t cap) {
        graph_[from].push_back({to, cap, static_cast<int>(graph_[to].size())});
        graph_[to].push_back({from, 0, static_cast<int>(graph_[from].size()) - 1});
    }

    std::int64_t solve(int s, int t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            iter_.assign(graph_.size(), 0);
            while (std::int64_t f = dfs(s, t, INT64_MAX)) flow += f;
        }
        return flow;
    }

    // After solve(): vertices reachable from s in the residual graph. This is
    // the unique minimal source side over all minimum cuts.
    std::vector<bool> source_side(int s) const {
        std::vector<bool> seen(graph_.size(), false);
        std::queue<int> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Edge& e : graph_[v])
                if (e.cap > 0 && !seen[e.to]) {
                    seen[e.to] = true;
                    q.push(e.to);
                }
        }
        return seen;
    }

private:
    struct Edge {
        int to;
        std::int64_t cap;
        int rev;
    };

    bool bfs(int s, int t) {
        level_.assign(graph_.size(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Edge& e : graph_[v])
                if (e.cap > 0 && level_[e.to] < 0) {
                    level_[e.to] = level_[v] + 1;
                    q.push(e.to);
                }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int v, int t, std::int64_t pushed) {
        if (v == t) return pushed;
        for (int& i = iter_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
            Edge& e = graph_[v][i];
            if (e.cap <= 0 || level_[v] + 1 != level_[e.to]) continue;
            std::int64_t d = dfs(e.to, t, std::min(pushed, e.cap));
            if (d > 0) {
                e.cap -= d;
                graph_[e.to][e.rev].cap += d;
                return d;
            }
        }
        return 0;
    }

    std::vector<std::vector<Edge>> graph_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace

Matching max_weight_stable(const Instance& inst, const WeightFn& f) {
    RotationPoset poset = build_rotation_poset(inst);
    const int n = static_cast<int>(poset.rotations.size());
    if (n == 0) return poset.men_opt;

    std::vector<std::int64_t> delta(n);
    std::int64_t positive_sum = 0;
    for (int i = 0; i < n; ++i) {
        delta[i] = poset.weight_delta(i, f);
        if (delta[i] > 0) positive_sum += delta[i];
    }
    const std::int64_t inf = positive_sum + 1;

    // Project selection: source 0, rotations 1..n, sink n+1. Choosing a
    // rotation requires its predecessors, enforced by infinite edges.
    MaxFlow mf(n + 2);
    const int source = 0, sink = n + 1;
    for (int i = 0; i < n; ++i) {
        if (delta[i] > 0) mf.add_edge(source, i + 1, delta[i]);
        if (delta[i] < 0) mf.add_edge(i + 1, sink, -delta[i]);
        for (int p : poset.preds[i]) mf.add_edge(i + 1, p + 1, inf);
    }
    mf.solve(source, sink);
    std::vector<bool> side = mf.source_side(source);
    std::vector<bool> chosen(n, false);
    for (int i = 0; i < n; ++i) chosen[i] = side[i + 1];
    return matching_from_closure(poset, chosen);
}

}  // namespace smp
