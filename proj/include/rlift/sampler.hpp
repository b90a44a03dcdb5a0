#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlift/graph.hpp"
#include "rlift/rng.hpp"

namespace rlift {

// Each base edge gets an independent uniform permutation drawn from the
// stream rng.derive(edge index).
Lift sample_lift(const BaseGraph& base, int n, const SeededRng& rng);

// Every lift exactly once, lexicographic in (perm of edge 0, perm of edge 1, ...).
class LiftEnumerator {
public:
    LiftEnumerator(BaseGraph base, int n, double guard = 1e7);
    std::optional<Lift> next();
    double total() const { return total_; }

private:
    BaseGraph base_;
    int n_;
    double total_;
    std::vector<std::vector<int>> current_;
    bool done_ = false;
};

// Forces fibre index 0 of each listed fibre into a common clique by composing
// the relevant permutations with a transposition.
Lift plant_clique(const Lift& lift, const std::vector<int>& fibres);

}  // namespace rlift
