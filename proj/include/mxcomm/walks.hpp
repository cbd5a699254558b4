#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mxcomm/multiplex.hpp"

namespace mxcomm {

enum class WalkKind { classical, relaxed, physical, custom };

const char* to_string(WalkKind kind);

/// Per-state-node probability vector (p(t), p(inf), PPR vectors).
using Distribution = std::vector<double>;
/// Node volumes: |V_M| times a stationary or teleported distribution.
using VolumeVector = std::vector<double>;

struct Transition {
    StateId target;
    double prob;
};

/// Unrecorded teleportation: dangling state nodes restart according to
/// `seed`, and node volumes come from PageRank with restart rate `rate`.
struct Teleportation {
    double rate = 0.0;
    std::vector<double> seed;
};

/// Thrown when an operation needs a stochastic operator but the model has
/// dangling state nodes and no teleportation.
class DanglingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonErgodicError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Sparse row-stochastic operator over state nodes. row(u) lists the
/// probabilities of moving from u to each target. Immutable after
/// construction.
class TransitionModel {
public:
    TransitionModel() = default;

    WalkKind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    std::size_t num_states() const noexcept { return dangling_.size(); }

    /// Explicit transitions out of u, sorted by target. Empty when dangling.
    std::span<const Transition> row(StateId u) const {
        return {rows_.data() + row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]};
    }
    /// Explicit transitions into u; `Transition::target` holds the source.
    std::span<const Transition> column(StateId u) const {
        return {cols_.data() + col_offsets_[u], col_offsets_[u + 1] - col_offsets_[u]};
    }

    bool dangling(StateId u) const { return dangling_[u] != 0; }
    std::size_t num_dangling() const noexcept { return num_dangling_; }
    const std::optional<Teleportation>& teleportation() const noexcept { return teleport_; }
    /// Non-zero entries of the teleportation seed, sorted by state.
    std::span<const Transition> teleport_support() const noexcept { return teleport_support_; }

    /// Visits every (target, probability) leaving u, routing dangling nodes
    /// through the teleportation seed.
    template <class F>
    void for_each_out(StateId u, F&& f) const {
        if (dangling_[u]) {
            for (const auto& t : teleport_support_) f(t.target, t.prob);
        } else {
            for (const auto& t : row(u)) f(t.target, t.prob);
        }
    }

    double probability(StateId from, StateId to) const;

    /// Throws DanglingError if some state node has no outgoing mass.
    void require_stochastic() const;

    /// Copy of the model where dangling nodes restart through `seed`.
    TransitionModel with_teleportation(Teleportation teleport) const;

    /// Assembles a model from per-source rows. Rows with zero mass are
    /// marked dangling; others are normalised to sum to 1.
    static TransitionModel from_rows(WalkKind kind, double parameter,
                                     std::vector<std::vector<Transition>> rows);

private:
    WalkKind kind_ = WalkKind::custom;
    double parameter_ = 0.0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<Transition> rows_;
    std::vector<std::size_t> col_offsets_{0};
    std::vector<Transition> cols_;
    std::vector<char> dangling_;
    std::size_t num_dangling_ = 0;
    std::optional<Teleportation> teleport_;
    std::vector<Transition> teleport_support_;
};

/// Classical walk with uniform categorical coupling omega between all state
/// nodes of the same physical node.
TransitionModel classical_transition(const MultiplexNetwork& net, double omega);

/// Relaxed walk: stay in layer with probability 1 - r, otherwise pick any
/// intralayer edge of the physical node. A state node without intralayer
/// out-strength uses the relaxation term alone.
TransitionModel relaxed_transition(const MultiplexNetwork& net, double r);

/// Layer-switch weights A^{ia}_{ib} for each physical node i, stored as a
/// k x k row-major block over net.states_of(i) (k = number of states of i).
struct LayerSwitchWeights {
    std::vector<std::vector<double>> blocks;
};

LayerSwitchWeights identity_switch_weights(const MultiplexNetwork& net);
/// Switch weights under which the physical walk reproduces relaxed_transition(r):
/// (1 - r) * [a == b] * (strength of physical node i) + r * (out-strength of ib).
LayerSwitchWeights relaxed_switch_weights(const MultiplexNetwork& net, double r);

/// Two-stage walk: switch layer in proportion to the switch weights, then
/// take an ordinary intralayer step. Layers where the state node has no
/// intralayer out-strength are excluded from the switch stage.
TransitionModel physical_transition(const MultiplexNetwork& net, const LayerSwitchWeights& switches);

/// Walk kind plus its coupling parameter (omega for classical, r for
/// relaxed; physical walks built from a parameter use the relaxed-equivalent
/// switch weights).
struct WalkConfig {
    WalkKind kind = WalkKind::classical;
    double parameter = 1.0;
};

TransitionModel make_walk(const MultiplexNetwork& net, const WalkConfig& config);

struct WeightedArc {
    StateId source;
    StateId target;
    double weight;
};

/// Classical walk on an explicit supra-adjacency (intra- and interlayer arcs).
TransitionModel transition_from_arcs(std::size_t num_states, std::span<const WeightedArc> arcs,
                                     WalkKind kind = WalkKind::custom, double parameter = 0.0);

/// Supra-adjacency of the transformed network whose classical walk equals
/// the physical walk: arc ia -> jb carries A^{ia}_{ib} A^{ib}_{jb} / s_{ib}
/// with s_{ib} the intralayer out-strength of ib.
std::vector<WeightedArc> transformed_physical_arcs(const MultiplexNetwork& net, const LayerSwitchWeights& switches);

/// Normalised in-strength of each state node under the walk's adjacency
/// (intralayer in-strength, plus omega * (|i| - 1) for the classical walk).
std::vector<double> in_strength_seed(const MultiplexNetwork& net, WalkKind kind, double omega = 0.0);

/// Attaches unrecorded teleportation with seed = in_strength_seed.
TransitionModel enable_teleportation(const TransitionModel& model, const MultiplexNetwork& net, double rate);

/// out = P^T x: one step of the walk applied to a distribution, with
/// dangling mass restarted through the teleportation seed.
void propagate(const TransitionModel& model, std::span<const double> x, std::span<double> out);

struct StationaryOptions {
    double tol = 1e-12;
    std::size_t max_iter = 1'000'000;
};

/// Stationary distribution by lazy power iteration. Throws NonErgodicError
/// when the chain has more than one closed class, ConvergenceError when
/// max_iter is exhausted.
Distribution stationary_distribution(const TransitionModel& model, const StationaryOptions& options = {});

/// v = |V_M| * PPR(s, 1 - rate) with s the in-strength seed. rate == 0 on
/// an undirected network falls back to the stationary distribution.
VolumeVector teleported_volumes(const TransitionModel& model, const MultiplexNetwork& net, double rate);

/// Volumes for sampling: teleported volumes when the model carries
/// teleportation; the reversible measure (out-strength, plus coupling for
/// the classical walk) for undirected classical/relaxed walks; otherwise
/// the stationary distribution.
VolumeVector walk_volumes(const TransitionModel& model, const MultiplexNetwork& net);

} // namespace mxcomm
