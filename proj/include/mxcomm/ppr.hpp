#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mxcomm/multiplex.hpp"
#include "mxcomm/walks.hpp"

namespace mxcomm {

/// (state, value) pairs sorted by state id, no repeated states.
using SparseVector = std::vector<std::pair<StateId, double>>;

/// Restart distribution for personalized PageRank.
class SeedVector {
public:
    static SeedVector state(StateId u);
    /// Mass split equally over the state nodes of physical node i.
    static SeedVector physical(const MultiplexNetwork& net, NodeId i);
    /// Uniform over a non-empty set of state nodes (duplicates ignored).
    static SeedVector uniform(std::span<const StateId> states);
    /// Normalises arbitrary non-negative weights; throws if they have no mass.
    static SeedVector from_weights(SparseVector weights);

    const SparseVector& weights() const noexcept { return weights_; }

private:
    SparseVector weights_;
};

struct PprOptions {
    double tol = 1e-12;
    std::size_t max_iter = 10'000'000;
};

/// Fixed point of x = gamma * P^T x + (1 - gamma) * s, by iteration.
std::vector<double> exact_ppr(const TransitionModel& model, const SeedVector& seed, double gamma,
                              const PprOptions& options = {});

struct PprState {
    SparseVector p;
    SparseVector residual;
    std::size_t pushes = 0;
};

/// Called after each push with the dense p and residual.
using PushObserver = std::function<void(std::span<const double> p, std::span<const double> residual)>;

class ApprWorkspace;

PprState appr_push(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon, ApprWorkspace& workspace, const PushObserver& observer);

/// Dense scratch reused across push runs; cleared in O(touched).
class ApprWorkspace {
public:
    explicit ApprWorkspace(std::size_t num_states = 0) { reset(num_states); }
    void reset(std::size_t num_states);
    std::size_t size() const noexcept { return p_.size(); }

private:
    friend PprState appr_push(const TransitionModel&, std::span<const double>, const SeedVector&, double, double,
                              ApprWorkspace&, const PushObserver&);

    std::vector<double> p_;
    std::vector<double> e_;
    std::vector<char> queued_;
    std::vector<char> touched_flag_;
    std::vector<StateId> touched_;
    std::vector<StateId> queue_;
};

/// Approximate PageRank by residual pushes of the lazy walk with restart
/// (1 - gamma) / (1 + gamma). FIFO queue; stops once every residual is below
/// epsilon times the node volume.
PprState appr_push(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon, ApprWorkspace& workspace);
PprState appr_push(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon);

} // namespace mxcomm
