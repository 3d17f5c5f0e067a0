#include "smp/core.hpp"

#include <algorithm>
#include <map>

namespace smp {

std::string person_label(PersonId p) {
    return (p.side == Side::Man ? "m" : "w") + std::to_string(p.index);
}

Matching::Matching(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    for (std::size_t i = 0; i + 1 < pairs_.size(); ++i) {
        if (pairs_[i].man == pairs_[i + 1].man)
            throw StructuralError("man m" + std::to_string(pairs_[i].man) +
                                  " appears in two pairs");
    }
    std::vector<int> women;
    women.reserve(pairs_.size());
    for (const Pair& p : pairs_) women.push_back(p.woman);
    std::sort(women.begin(), women.end());
    if (std::adjacent_find(women.begin(), women.end()) != women.end())
        throw StructuralError("a woman appears in two pairs");
}

bool Matching::contains(const Pair& p) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

std::optional<int> Matching::woman_of(int man) const {
    for (const Pair& p : pairs_)
        if (p.man == man) return p.woman;
    return std::nullopt;
}

std::optional<int> Matching::man_of(int woman) const {
    for (const Pair& p : pairs_)
        if (p.woman == woman) return p.man;
    return std::nullopt;
}

std::string to_string(const Matching& m) {
    std::string out;
    for (const Pair& p : m.pairs()) {
        if (!out.empty()) out += ' ';
        out += "(m" + std::to_string(p.man) + ",w" + std::to_string(p.woman) + ")";
    }
    return out.empty() ? "(empty)" : out;
}

namespace {

std::vector<int> build_slot_map(const std::vector<int>& ids, const char* side) {
    int max_id = -1;
    for (int id : ids) {
        if (id < 0) throw StructuralError(std::string(side) + " index is negative");
        max_id = std::max(max_id, id);
    }
    std::vector<int> slot(max_id + 1, -1);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (slot[ids[i]] != -1)
            throw StructuralError(std::string(side) + " " + std::to_string(ids[i]) +
                                  " listed twice");
        slot[ids[i]] = static_cast<int>(i);
    }
    return slot;
}

// Checks prefs[i] is a permutation of `others` and builds id-indexed ranks.
std::vector<std::vector<int>> build_ranks(const std::vector<int>& owners,
                                          const std::vector<std::vector<int>>& prefs,
                                          const std::vector<int>& other_slot,
                                          std::size_t n_others, const char* owner_side) {
    if (prefs.size() != owners.size())
        throw StructuralError(std::string("need one preference list per ") + owner_side);
    std::vector<std::vector<int>> ranks(owners.size());
    for (std::size_t i = 0; i < owners.size(); ++i) {
        const auto& list = prefs[i];
        std::string who = std::string(owner_side) + std::to_string(owners[i]);
        if (list.size() != n_others)
            throw StructuralError("incomplete preference list for " + who);
        std::vector<int>& rank = ranks[i];
        rank.assign(other_slot.size(), -1);
        for (std::size_t r = 0; r < list.size(); ++r) {
            int id = list[r];
            if (id < 0 || id >= static_cast<int>(other_slot.size()) || other_slot[id] == -1)
                throw StructuralError("preference list of " + who +
                                      " names unknown person " + std::to_string(id));
            if (rank[id] != -1)
                throw StructuralError("duplicate rank in preference list of " + who);
            rank[id] = static_cast<int>(r);
        }
    }
    return ranks;
}

}  // namespace

Instance::Instance(std::vector<int> men, std::vector<int> women,
                   std::vector<std::vector<int>> men_prefs,
                   std::vector<std::vector<int>> women_prefs)
    : men_(std::move(men)),
      women_(std::move(women)),
      man_pref_(std::move(men_prefs)),
      woman_pref_(std::move(women_prefs)) {
    man_slot_ = build_slot_map(men_, "man");
    woman_slot_ = build_slot_map(women_, "woman");
    man_rank_ = build_ranks(men_, man_pref_, woman_slot_, women_.size(), "m");
    woman_rank_ = build_ranks(women_, woman_pref_, man_slot_, men_.size(), "w");
}

bool Instance::has_man(int id) const {
    return id >= 0 && id < static_cast<int>(man_slot_.size()) && man_slot_[id] != -1;
}

bool Instance::has_woman(int id) const {
    return id >= 0 && id < static_cast<int>(woman_slot_.size()) && woman_slot_[id] != -1;
}

int Instance::man_slot(int id) const {
    if (!has_man(id))
        throw StructuralError("unknown man m" + std::to_string(id));
    return man_slot_[id];
}

int Instance::woman_slot(int id) const {
    if (!has_woman(id))
        throw StructuralError("unknown woman w" + std::to_string(id));
    return woman_slot_[id];
}

std::span<const int> Instance::pref_of_man(int man) const {
    return man_pref_[man_slot(man)];
}

std::span<const int> Instance::pref_of_woman(int woman) const {
    return woman_pref_[woman_slot(woman)];
}

int Instance::man_rank(int man, int woman) const {
    int ms = man_slot(man);
    woman_slot(woman);  // validate; rank arrays are id-indexed
    return man_rank_[ms][woman];
}

int Instance::woman_rank(int woman, int man) const {
    int ws = woman_slot(woman);
    man_slot(man);
    return woman_rank_[ws][man];
}

bool Instance::man_prefers(int man, int woman_a, int woman_b) const {
    return man_rank(man, woman_a) < man_rank(man, woman_b);
}

bool Instance::woman_prefers(int woman, int man_a, int man_b) const {
    return woman_rank(woman, man_a) < woman_rank(woman, man_b);
}

Instance Instance::restricted_to(std::span<const int> men_subset,
                                 std::span<const int> women_subset) const {
    std::vector<int> new_men(men_subset.begin(), men_subset.end());
    std::vector<int> new_women(women_subset.begin(), women_subset.end());
    std::vector<bool> keep_w(woman_slot_.size(), false);
    std::vector<bool> keep_m(man_slot_.size(), false);
    for (int w : new_women) {
        woman_slot(w);
        keep_w[w] = true;
    }
    for (int m : new_men) {
        man_slot(m);
        keep_m[m] = true;
    }
    std::vector<std::vector<int>> mp, wp;
    for (int m : new_men) {
        std::vector<int> list;
        for (int w : pref_of_man(m))
            if (keep_w[w]) list.push_back(w);
        mp.push_back(std::move(list));
    }
    for (int w : new_women) {
        std::vector<int> list;
        for (int m : pref_of_woman(w))
            if (keep_m[m]) list.push_back(m);
        wp.push_back(std::move(list));
    }
    return Instance(std::move(new_men), std::move(new_women), std::move(mp),
                    std::move(wp));
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::WomenArrive: return "arrive";
        case Variant::MenLeave: return "leave";
        case Variant::LeaveAndArrive: return "leave-arrive";
    }
    return "?";
}

namespace {

bool subset_of(std::span<const int> a, const Instance& b, Side side) {
    for (int id : a)
        if (!(side == Side::Man ? b.has_man(id) : b.has_woman(id))) return false;
    return true;
}

// Shared persons must rank shared persons identically in both stages.
void check_pref_consistency(const Instance& a, const Instance& b) {
    auto filter = [](std::span<const int> list, auto present) {
        std::vector<int> out;
        for (int id : list)
            if (present(id)) out.push_back(id);
        return out;
    };
    for (int m : a.men()) {
        if (!b.has_man(m)) continue;
        auto fa = filter(a.pref_of_man(m), [&](int w) { return b.has_woman(w); });
        auto fb = filter(b.pref_of_man(m), [&](int w) { return a.has_woman(w); });
        if (fa != fb)
            throw StructuralError("preference drift for m" + std::to_string(m) +
                                  " between stages");
    }
    for (int w : a.women()) {
        if (!b.has_woman(w)) continue;
        auto fa = filter(a.pref_of_woman(w), [&](int m) { return b.has_man(m); });
        auto fb = filter(b.pref_of_woman(w), [&](int m) { return a.has_man(m); });
        if (fa != fb)
            throw StructuralError("preference drift for w" + std::to_string(w) +
                                  " between stages");
    }
}

}  // namespace

TwoStageProblem::TwoStageProblem(Variant variant, Instance stage1, Instance stage2)
    : variant_(variant), stage1_(std::move(stage1)), stage2_(std::move(stage2)) {
    bool men_equal = stage1_.men().size() == stage2_.men().size() &&
                     subset_of(stage1_.men(), stage2_, Side::Man);
    bool men_shrink = subset_of(stage2_.men(), stage1_, Side::Man);
    bool women_equal = stage1_.women().size() == stage2_.women().size() &&
                       subset_of(stage1_.women(), stage2_, Side::Woman);
    bool women_grow = subset_of(stage1_.women(), stage2_, Side::Woman);
    switch (variant_) {
        case Variant::WomenArrive:
            if (!men_equal || !women_grow)
                throw StructuralError("rosters violate women-arrival nesting");
            break;
        case Variant::MenLeave:
            if (!women_equal || !men_shrink)
                throw StructuralError("rosters violate men-leaving nesting");
            break;
        case Variant::LeaveAndArrive:
            if (!men_shrink || !women_grow)
                throw StructuralError("rosters violate leave-and-arrive nesting");
            break;
    }
    check_pref_consistency(stage1_, stage2_);
}

bool TwoStageProblem::is_regular() const {
    return variant_ == Variant::WomenArrive &&
           stage1_.women().size() <= stage2_.women().size() &&
           stage2_.women().size() == stage2_.men().size();
}

void validate_matching(const Instance& inst, const Matching& m) {
    for (const Pair& p : m.pairs()) {
        if (!inst.has_man(p.man))
            throw StructuralError("matching references unknown man m" +
                                  std::to_string(p.man));
        if (!inst.has_woman(p.woman))
            throw StructuralError("matching references unknown woman w" +
                                  std::to_string(p.woman));
    }
}

std::vector<Pair> blocking_pairs(const Instance& inst, const Matching& m) {
    validate_matching(inst, m);
    std::vector<Pair> blocks;
    for (int u : inst.men()) {
        auto his = m.woman_of(u);
        for (int w : inst.pref_of_man(u)) {
            if (his && *his == w) continue;
            bool u_wants = !his || inst.man_prefers(u, w, *his);
            if (!u_wants) continue;
            auto hers = m.man_of(w);
            bool w_wants = !hers || inst.woman_prefers(w, u, *hers);
            if (w_wants) blocks.push_back({u, w});
        }
    }
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

bool is_stable(const Instance& inst, const Matching& m) {
    validate_matching(inst, m);
    for (int u : inst.men()) {
        auto his = m.woman_of(u);
        for (int w : inst.pref_of_man(u)) {
            if (his && *his == w) break;  // women below his partner can't tempt him
            auto hers = m.man_of(w);
            if (!hers || inst.woman_prefers(w, u, *hers)) return false;
        }
    }
    return true;
}

int divorces(const Matching& m1, const Matching& m2) {
    int n = 0;
    for (const Pair& p : m1.pairs())
        if (!m2.contains(p)) ++n;
    return n;
}

namespace {

struct HalfEdge {
    PersonId to;
    EdgeSource source;
};

using Adjacency = std::map<PersonId, std::vector<HalfEdge>>;

Component walk(const Adjacency& adj, PersonId start, bool cycle,
               std::optional<EdgeSource> first_source,
               std::map<PersonId, bool>& visited) {
    Component c;
    c.cycle = cycle;
    PersonId at = start;
    std::optional<EdgeSource> last;
    while (true) {
        visited[at] = true;
        c.vertices.push_back(at);
        // Each person has at most one edge per source, so "the edge whose
        // source differs from the one we came by" is the unique continuation.
        const HalfEdge* next = nullptr;
        for (const HalfEdge& e : adj.at(at)) {
            if (last && e.source == *last) continue;
            if (!last && first_source && e.source != *first_source) continue;
            next = &e;
            break;
        }
        if (!next) break;  // far endpoint of a path
        c.edges.push_back(next->source);
        last = next->source;
        if (cycle && next->to == start) break;  // closing edge recorded
        at = next->to;
    }
    return c;
}

}  // namespace

DiffGraph diff_graph(const Instance& inst_union, const Matching& m,
                     const Matching& m_prime) {
    validate_matching(inst_union, m);
    validate_matching(inst_union, m_prime);

    Adjacency adj;
    auto add_edge = [&adj](const Pair& p, EdgeSource s) {
        PersonId u{Side::Man, p.man}, w{Side::Woman, p.woman};
        adj[u].push_back({w, s});
        adj[w].push_back({u, s});
    };
    for (const Pair& p : m.pairs())
        if (!m_prime.contains(p)) add_edge(p, EdgeSource::M1);
    for (const Pair& p : m_prime.pairs())
        if (!m.contains(p)) add_edge(p, EdgeSource::M2);

    std::map<PersonId, bool> visited;
    for (const auto& [v, _] : adj) visited[v] = false;

    DiffGraph g;
    // Paths first, launched from their canonical (smallest) endpoint.
    for (const auto& [v, out] : adj) {
        if (visited[v] || out.size() != 1) continue;
        g.components.push_back(walk(adj, v, /*cycle=*/false, std::nullopt, visited));
    }
    // Remaining vertices lie on cycles; start each at its smallest man and
    // orient along that man's M1 edge.
    for (const auto& [v, out] : adj) {
        if (visited[v] || v.side != Side::Man) continue;
        g.components.push_back(
            walk(adj, v, /*cycle=*/true, EdgeSource::M1, visited));
    }
    std::sort(g.components.begin(), g.components.end(),
              [](const Component& a, const Component& b) {
                  return a.vertices.front() < b.vertices.front();
              });
    return g;
}

namespace {

// Partner of `person` in `m`, required to exist for internal vertices.
std::optional<int> partner(const Matching& m, PersonId person) {
    return person.side == Side::Man ? m.woman_of(person.index)
                                    : m.man_of(person.index);
}

// True when `person` strictly prefers their m2-partner to their m1-partner
// (both must exist).
bool prefers_m2(const Instance& inst, PersonId person, const Matching& m1,
                const Matching& m2) {
    auto p1 = partner(m1, person), p2 = partner(m2, person);
    if (!p1 || !p2)
        throw StructureViolation(person_label(person) +
                                 " is not matched in both matchings");
    if (person.side == Side::Man)
        return inst.man_prefers(person.index, *p2, *p1);
    return inst.woman_prefers(person.index, *p2, *p1);
}

}  // namespace

DiffGraph classify_components(const Instance& inst, const Matching& m1,
                              const Matching& m2) {
    DiffGraph g = diff_graph(inst, m1, m2);
    for (Component& c : g.components) {
        if (c.cycle) {
            std::optional<bool> men_prefer_m2;
            for (PersonId v : c.vertices) {
                bool p2 = prefers_m2(inst, v, m1, m2);
                bool man_side_p2 = (v.side == Side::Man) ? p2 : !p2;
                if (!men_prefer_m2)
                    men_prefer_m2 = man_side_p2;
                else if (*men_prefer_m2 != man_side_p2)
                    throw StructureViolation(
                        "difference-graph cycle mixes Type I and Type II "
                        "preference patterns");
            }
            c.kind = *men_prefer_m2 ? CycleKind::TypeI : CycleKind::TypeII;
        } else {
            if (c.edges.front() != EdgeSource::M2 || c.edges.back() != EdgeSource::M2)
                throw StructureViolation(
                    "path extremal edge does not belong to the stage-2 matching");
            for (std::size_t i = 1; i + 1 < c.vertices.size(); ++i) {
                PersonId v = c.vertices[i];
                bool p2 = prefers_m2(inst, v, m1, m2);
                bool ok = (v.side == Side::Man) ? p2 : !p2;
                if (!ok)
                    throw StructureViolation("internal path vertex " +
                                             person_label(v) +
                                             " breaks the Type-I pattern");
            }
        }
    }
    return g;
}

}  // namespace smp
