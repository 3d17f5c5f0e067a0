#pragma once

// Instances, matchings, stability predicates, divorce counting, and the
// difference graph of two matchings with its path/cycle classification.

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smp/errors.hpp"

namespace smp {

enum class Side { Man, Woman };

/// One person. Indices are stable across the stages of a problem: m3 at
/// stage 2 is the same man as m3 at stage 1.
struct PersonId {
    Side side{};
    int index{};
    auto operator<=>(const PersonId&) const = default;
};

/// "m3" / "w0".
std::string person_label(PersonId p);

struct Pair {
    int man{};
    int woman{};
    auto operator<=>(const Pair&) const = default;
};

/// A set of man-woman pairs, every person in at most one pair. Pairs are
/// kept sorted by (man, woman); comparisons are lexicographic on that
/// canonical form.
class Matching {
public:
    Matching() = default;
    /// Sorts and validates; throws StructuralError on a repeated person.
    explicit Matching(std::vector<Pair> pairs);

    std::span<const Pair> pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    bool contains(const Pair& p) const;
    std::optional<int> woman_of(int man) const;
    std::optional<int> man_of(int woman) const;

    bool operator==(const Matching&) const = default;
    auto operator<=>(const Matching&) const = default;

private:
    std::vector<Pair> pairs_;
};

std::string to_string(const Matching& m);

/// One stage: men, women, and complete strict preference lists on both
/// sides. Immutable after construction. Ranks are precomputed as inverse
/// permutations so preference queries are O(1).
class Instance {
public:
    Instance() = default;
    /// men_prefs[i] ranks all women (best first) for men[i]; women_prefs
    /// symmetric. Throws StructuralError if any list is not a permutation
    /// of the full opposite side.
    Instance(std::vector<int> men, std::vector<int> women,
             std::vector<std::vector<int>> men_prefs,
             std::vector<std::vector<int>> women_prefs);

    std::span<const int> men() const { return men_; }
    std::span<const int> women() const { return women_; }
    bool has_man(int id) const;
    bool has_woman(int id) const;

    std::span<const int> pref_of_man(int man) const;
    std::span<const int> pref_of_woman(int woman) const;

    /// 0 = most preferred. The queried person must be ranked.
    int man_rank(int man, int woman) const;
    int woman_rank(int woman, int man) const;

    /// Strict preference.
    bool man_prefers(int man, int woman_a, int woman_b) const;
    bool woman_prefers(int woman, int man_a, int man_b) const;

    /// Sub-instance on the given persons; preference lists are restricted.
    Instance restricted_to(std::span<const int> men_subset,
                           std::span<const int> women_subset) const;

private:
    int man_slot(int id) const;
    int woman_slot(int id) const;

    std::vector<int> men_, women_;
    std::vector<int> man_slot_, woman_slot_;  // id -> slot, -1 when absent
    std::vector<std::vector<int>> man_pref_, woman_pref_;
    std::vector<std::vector<int>> man_rank_, woman_rank_;  // id-indexed, -1 absent
};

enum class Variant { WomenArrive, MenLeave, LeaveAndArrive };

std::string to_string(Variant v);

/// Two instances sharing person identifiers. Construction validates the
/// roster nesting of the variant and that preferences restricted to shared
/// persons are identical in both stages.
class TwoStageProblem {
public:
    TwoStageProblem(Variant variant, Instance stage1, Instance stage2);

    Variant variant() const { return variant_; }
    const Instance& stage1() const { return stage1_; }
    const Instance& stage2() const { return stage2_; }

    /// WomenArrive with |W1| <= |W2| = |U|; stage-2 stable matchings are
    /// then perfect.
    bool is_regular() const;

private:
    Variant variant_;
    Instance stage1_, stage2_;
};

/// Throws StructuralError unless m only references persons of inst.
void validate_matching(const Instance& inst, const Matching& m);

/// Exactly the pairs (u,w) not in m where u is unmatched or prefers w to
/// his partner, and w is unmatched or prefers u to her partner. Sorted.
std::vector<Pair> blocking_pairs(const Instance& inst, const Matching& m);

/// True iff m has no blocking pair in inst.
bool is_stable(const Instance& inst, const Matching& m);

/// |m1 \ m2|: pairs present in m1 and absent from m2.
int divorces(const Matching& m1, const Matching& m2);

enum class EdgeSource { M1, M2 };
enum class CycleKind { TypeI, TypeII };

/// One path or cycle of the difference graph. edges[i] joins vertices[i]
/// and vertices[i+1]; for a cycle, edges.back() closes it back to
/// vertices.front(). Sources alternate.
struct Component {
    bool cycle = false;
    std::vector<PersonId> vertices;
    std::vector<EdgeSource> edges;
    std::optional<CycleKind> kind;  // cycles only, set by classify_components
};

/// Decomposition of M1 (triangle) M2 into vertex-disjoint alternating paths
/// and cycles. Persons unmatched in both matchings are omitted.
struct DiffGraph {
    std::vector<Component> components;
};

/// Components of the symmetric difference of m and m_prime, canonically
/// ordered: paths start at the endpoint with the smallest (side, index);
/// cycles start at their smallest man, oriented so the first edge comes
/// from m (the M1 role); components sorted by first vertex.
DiffGraph diff_graph(const Instance& inst_union, const Matching& m,
                     const Matching& m_prime);

/// diff_graph plus verification of the structure forced by stability
/// (m1 in the stage-1 role, m2 in the stage-2 role): each cycle is uniformly
/// Type I (men prefer their m2-partner, women their m1-partner) or Type II
/// (the reverse); each path's extremal edges lie in m2 and its internal
/// vertices follow the Type-I pattern. Throws StructureViolation otherwise —
/// these are theorems for stable inputs on regular problems, so a violation
/// signals a bad input or an upstream bug.
DiffGraph classify_components(const Instance& inst, const Matching& m1,
                              const Matching& m2);

}  // namespace smp
