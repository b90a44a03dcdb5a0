#include "rlift/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rlift/error.hpp"

namespace rlift {

Lift sample_lift(const BaseGraph& base, int n, const SeededRng& rng) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "fibre size must be positive");
    std::vector<std::vector<int>> perms(base.edges().size(), std::vector<int>(n));
    for (std::size_t e = 0; e < perms.size(); ++e) {
        std::iota(perms[e].begin(), perms[e].end(), 0);
        auto eng = rng.derive(e).engine();
        std::shuffle(perms[e].begin(), perms[e].end(), eng);
    }
    return Lift(base, n, std::move(perms));
}

LiftEnumerator::LiftEnumerator(BaseGraph base, int n, double guard) : base_(std::move(base)), n_(n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "fibre size must be positive");
    double m = static_cast<double>(base_.edges().size());
    double log_total = m * std::lgamma(n + 1.0);
    if (log_total > std::log(guard) + 1e-9)
        throw Error(ErrorCode::TooLarge, "(n!)^m exceeds the enumeration guard");
    total_ = std::round(std::exp(log_total));
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    current_.assign(base_.edges().size(), id);
}

std::optional<Lift> LiftEnumerator::next() {
    if (done_) return std::nullopt;
    Lift out(base_, n_, current_);
    // odometer: the last edge's permutation varies fastest
    std::size_t k = current_.size();
    for (;;) {
        if (k == 0) {
            done_ = true;
            break;
        }
        --k;
        if (std::next_permutation(current_[k].begin(), current_[k].end())) break;
    }
    return out;
}

Lift plant_clique(const Lift& lift, const std::vector<int>& fibres) {
    const BaseGraph& base = lift.base();
    for (std::size_t a = 0; a < fibres.size(); ++a) {
        if (fibres[a] < 0 || fibres[a] >= base.h()) throw Error(ErrorCode::VertexOutOfRange, "fibre id");
        for (std::size_t b = a + 1; b < fibres.size(); ++b)
            if (!base.adjacent(fibres[a], fibres[b]))
                throw Error(ErrorCode::FibresNotPairwiseAdjacent,
                            std::to_string(fibres[a]) + " and " + std::to_string(fibres[b]));
    }
    std::vector<std::vector<int>> perms = lift.perms();
    for (std::size_t a = 0; a < fibres.size(); ++a)
        for (std::size_t b = a + 1; b < fibres.size(); ++b) {
            auto& p = perms[base.edge_index(fibres[a], fibres[b])];
            // p maps the lower fibre's index to the upper one's; need p(0) = 0
            auto it = std::find(p.begin(), p.end(), 0);
            std::iter_swap(p.begin(), it);
        }
    return Lift(base, lift.n(), std::move(perms));
}

}  // namespace rlift
