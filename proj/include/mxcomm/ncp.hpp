#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mxcomm/multiplex.hpp"
#include "mxcomm/ppr.hpp"
#include "mxcomm/sweep.hpp"
#include "mxcomm/walks.hpp"

namespace mxcomm {

inline constexpr double kDefaultGamma = 0.998;
inline constexpr std::size_t kDefaultGridSize = 20;
inline constexpr std::size_t kDefaultMaxInclusions = 10;

enum class SeedMode { state, physical, set };

const char* to_string(SeedMode mode);

/// A seed for ACLcut: one state node, or all state nodes of a physical node
/// with equal mass.
struct SeedSpec {
    SeedMode mode = SeedMode::state;
    std::uint32_t id = 0;

    static SeedSpec state(StateId u) { return {SeedMode::state, u}; }
    static SeedSpec physical(NodeId i) { return {SeedMode::physical, i}; }

    SeedVector resolve(const MultiplexNetwork& net) const;
};

/// Where a sampled community came from. `seed` is -1 for seed sets.
struct Provenance {
    SeedMode seed_mode = SeedMode::state;
    std::int64_t seed = -1;
    double epsilon = 0.0;
};

struct Community {
    std::vector<StateId> members; // sorted
    double conductance = std::numeric_limits<double>::infinity();
    Provenance provenance;
    std::size_t sweep_index = 0;  // prefix length in the originating sweep
};

/// Scratch for repeated ACLcut runs on one model.
struct AclWorkspace {
    explicit AclWorkspace(std::size_t num_states = 0) : push(num_states), sweep(num_states) {}
    ApprWorkspace push;
    SweepWorkspace sweep;
};

/// Approximate PPR from `seed` followed by the sweep over p / v. State nodes
/// in `always_include` join the sweep even when p is zero there.
SweepResult aclcut(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon, AclWorkspace& workspace,
                   std::span<const StateId> always_include = {});
SweepResult aclcut(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon);

/// `count` log-spaced values from 1 / max(v) down to 1 / sum(v).
std::vector<double> epsilon_grid(std::span<const double> volumes, std::size_t count = kDefaultGridSize);

/// Lower envelope of conductance per community size (in state nodes).
class NcpCurve {
public:
    struct Point {
        double conductance = std::numeric_limits<double>::infinity();
        std::shared_ptr<const std::vector<StateId>> sweep_order;
        std::size_t size = 0;
        Provenance provenance;

        bool empty() const noexcept { return !sweep_order; }
    };

    struct Metadata {
        WalkKind walk = WalkKind::custom;
        double walk_parameter = 0.0;
        double gamma = kDefaultGamma;
        std::vector<double> epsilons;
        SeedMode seed_mode = SeedMode::state;
        std::uint64_t rng_seed = 0;
        std::size_t runs = 0;
    };

    explicit NcpCurve(std::size_t num_states = 0) : points_(num_states + 1) {}

    std::size_t max_size() const noexcept { return points_.empty() ? 0 : points_.size() - 1; }
    const Point& at(std::size_t k) const { return points_.at(k); }
    double conductance(std::size_t k) const { return points_.at(k).conductance; }
    bool has(std::size_t k) const { return k < points_.size() && !points_[k].empty(); }
    /// Sizes with a recorded community, ascending.
    std::vector<std::size_t> sizes() const;
    Community community(std::size_t k) const;

    /// Folds every prefix of `sweep` with size >= min_size into the envelope.
    /// Equal conductance at equal size keeps the lexicographically smaller set.
    void fold(const SweepResult& sweep, const Provenance& provenance, std::size_t min_size = 1);
    void merge(const NcpCurve& other);

    /// Lowest-conductance community short of the whole network; smaller
    /// size wins ties.
    Community best() const;

    Metadata metadata;

private:
    void offer(std::size_t k, double phi, const std::shared_ptr<const std::vector<StateId>>& order,
               const Provenance& provenance);

    std::vector<Point> points_;
};

struct SamplingOptions {
    SeedMode seed_mode = SeedMode::state;
    double gamma = kDefaultGamma;
    std::size_t grid_size = kDefaultGridSize;
    std::size_t max_inclusions = kDefaultMaxInclusions;
    std::uint64_t rng_seed = 0;
    std::size_t threads = 1;
};

/// NCP sampling: for each epsilon (largest first), seeds are drawn without
/// replacement from all state or physical nodes; a candidate is dropped
/// once it has been part of the best community of a run max_inclusions
/// times at that epsilon. Results do not depend on the thread count.
NcpCurve sample_ncp(const TransitionModel& model, std::span<const double> volumes, const MultiplexNetwork& net,
                    const SamplingOptions& options);

/// Local NCP of a seed set: epsilon varies over the grid, the seed vector is
/// uniform on `seed_set`, and only sweep sets containing the whole seed set
/// are kept.
NcpCurve local_ncp(const TransitionModel& model, std::span<const double> volumes, std::span<const StateId> seed_set,
                   double gamma = kDefaultGamma, std::size_t grid_size = kDefaultGridSize);

/// Minimum-conductance community containing `seed` found by its local NCP.
Community best_community(const TransitionModel& model, std::span<const double> volumes, StateId seed,
                         double gamma = kDefaultGamma, std::size_t grid_size = kDefaultGridSize);

} // namespace mxcomm
