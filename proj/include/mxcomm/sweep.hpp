#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mxcomm/ppr.hpp"
#include "mxcomm/walks.hpp"

namespace mxcomm {

/// Stationary outflow from the side of the cut (`set` or its complement)
/// holding less volume, divided by that side's volume; volumes stand in for
/// the stationary distribution. On undirected networks this is
/// cut / min(vol(S), vol(complement)). Returns 0 when `set` covers every
/// state node. Throws std::domain_error if `set` has zero volume.
double conductance(const TransitionModel& model, std::span<const double> volumes, std::span<const StateId> set);

/// Prefix scan of state nodes ranked by score (descending, ties by id).
/// conductance[k - 1] belongs to the first k entries of `order`; prefixes
/// with zero volume are reported as +infinity.
struct SweepResult {
    std::vector<StateId> order;
    std::vector<double> conductance;
    std::size_t num_states = 0;

    bool empty() const noexcept { return order.empty(); }
    /// Size of the lowest-conductance proper prefix (smallest size on ties);
    /// the prefix covering every state node is never chosen. 0 if none.
    std::size_t best_size() const;
    std::vector<StateId> prefix(std::size_t k) const;
};

/// Reusable dense membership scratch for sweeps.
class SweepWorkspace {
public:
    explicit SweepWorkspace(std::size_t num_states = 0) : in_set_(num_states, 0) {}

private:
    friend SweepResult sweep_cut(const TransitionModel&, std::span<const double>, const SparseVector&,
                                 SweepWorkspace&);
    std::vector<char> in_set_;
};

/// Sweep over the entries listed in `score` (entries with score 0 are
/// still swept, after every positive one).
SweepResult sweep_cut(const TransitionModel& model, std::span<const double> volumes, const SparseVector& score,
                      SweepWorkspace& workspace);
SweepResult sweep_cut(const TransitionModel& model, std::span<const double> volumes, const SparseVector& score);

/// p / v over the support of p. Zero-volume entries score +infinity.
SparseVector degree_normalized(const SparseVector& p, std::span<const double> volumes);

} // namespace mxcomm
