#pragma once

// Deferred acceptance, enumeration of all stable matchings (brute force and
// rotation-poset backends), rotation poset construction, and maximum-weight
// stable matching via maximum-weight closure / min-cut.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "smp/core.hpp"

namespace smp {

enum class Proposers { Men, Women };

/// Proposer-optimal stable matching (Gale-Shapley). With Proposers::Men every
/// man receives his best valid partner and every woman her worst.
Matching deferred_acceptance(const Instance& inst, Proposers proposers);

Matching men_optimal(const Instance& inst);
Matching women_optimal(const Instance& inst);

/// Exact integer weights on pairs, default 0. Exact arithmetic keeps the
/// optimality tests meaningful.
class WeightFn {
public:
    WeightFn() = default;
    void set(int man, int woman, std::int64_t w);
    std::int64_t operator()(int man, int woman) const;
    std::int64_t total(const Matching& m) const;

    /// 1 on the pairs of m, 0 elsewhere.
    static WeightFn indicator(const Matching& m);

    const std::map<std::pair<int, int>, std::int64_t>& entries() const {
        return w_;
    }

private:
    std::map<std::pair<int, int>, std::int64_t> w_;
};

/// A minimal cyclic exchange ((u_0,w_0),...,(u_{r-1},w_{r-1})): eliminating
/// it moves each u_i from w_i to w_{i+1 mod r}. Each u_i strictly prefers
/// w_i to w_{i+1}; each w_{i+1} strictly prefers u_i to u_{i+1}.
struct Rotation {
    std::vector<Pair> cycle;
};

/// Rotations of an instance with their precedence DAG. Down-closed subsets of
/// the precedence order are in bijection with the stable matchings: start
/// from the men-optimal matching and eliminate the subset in topological
/// order. `rotations` is stored in a topological discovery order, so
/// preds[i] only names indices smaller than i.
struct RotationPoset {
    Matching men_opt;
    Matching women_opt;
    std::vector<Rotation> rotations;
    std::vector<std::vector<int>> preds;  // direct predecessors per rotation

    /// Sum of f over the pairs a rotation creates minus the pairs it removes.
    std::int64_t weight_delta(int rotation_index, const WeightFn& f) const;
};

/// Discovers every rotation by repeated elimination from the men-optimal
/// matching and derives the precedence DAG. Never-matched persons (rural
/// hospitals) are dropped after the proposal phase fixes the acceptance
/// bounds, so unequal sides are handled soundly.
RotationPoset build_rotation_poset(const Instance& inst);

/// Stable matching reached from men-optimal by eliminating the chosen
/// rotations (chosen[i] true) in topological order. Throws StructuralError
/// if the set is not down-closed.
Matching matching_from_closure(const RotationPoset& poset,
                               const std::vector<bool>& chosen);

/// All down-closed subsets of the precedence DAG.
std::vector<std::vector<bool>> all_closures(const RotationPoset& poset,
                                            std::optional<long long> cap = std::nullopt);

enum class EnumBackend { RotationPoset, BruteForce };

/// All stable matchings, deduplicated, ordered lexicographically by sorted
/// pair list. BruteForce filters every maximum-size matching through
/// is_stable and is the small-scale reference oracle; RotationPoset
/// enumerates closed subsets and scales further. Throws CapExceeded (with
/// the partial count) when more than `cap` matchings exist.
std::vector<Matching> enumerate_stable(const Instance& inst,
                                       std::optional<long long> cap = std::nullopt,
                                       EnumBackend backend = EnumBackend::RotationPoset);

/// A stable matching maximizing the total weight: men-optimal base plus a
/// maximum-weight closed subset of the rotation poset, found by min-cut
/// (project selection). Among optimal closures the unique minimal one is
/// taken, so ties resolve toward the men-optimal matching.
Matching max_weight_stable(const Instance& inst, const WeightFn& f);

}  // namespace smp
