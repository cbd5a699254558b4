#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mxcomm/multiplex.hpp"
#include "mxcomm/ncp.hpp"
#include "mxcomm/walks.hpp"

namespace mxcomm {

/// Multiplex block-model benchmark parameters. Every node exists in every
/// layer; lambda mixes the per-layer labels away from the background.
struct BenchmarkSpec {
    std::size_t n = 1000;
    std::size_t layers = 10;
    std::size_t communities = 10;
    double lambda = 0.0;
    double p_in = 0.1;
    double p_out = 0.0;
    std::uint64_t rng_seed = 0;

    /// Throws std::invalid_argument on out-of-range values. Returns a
    /// warning (empty if none) for p_out > p_in.
    std::string validate() const;
};

/// Community labels are 0-based internally.
struct PlantedPartition {
    std::vector<std::uint32_t> background; // per physical node
    std::vector<std::uint32_t> planted;    // per state node

    /// All state nodes sharing the planted label of `seed`, sorted.
    std::vector<StateId> planted_community(StateId seed) const;
};

struct BenchmarkInstance {
    MultiplexNetwork network;
    PlantedPartition partition;
};

/// Nodes are labelled "0".."n-1" and layers "1".."l", so NodeId i is node i,
/// LayerId a is layer a + 1 and StateId is i * l + a.
BenchmarkInstance generate_benchmark(const BenchmarkSpec& spec);

/// |A & B| / |A | B|. Throws std::invalid_argument if both are empty.
double jaccard(std::span<const StateId> a, std::span<const StateId> b);

/// Box-plot summary: quartiles by linear interpolation, whiskers at the most
/// extreme values within 1.5 IQR of the box.
struct DistributionSummary {
    std::size_t count = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> outliers;
};

DistributionSummary summarize(std::vector<double> values);

struct RecoveryOptions {
    std::size_t n_seeds = 100;
    double gamma = kDefaultGamma;
    std::size_t grid_size = kDefaultGridSize;
    std::size_t threads = 1;
};

struct RecoveryResult {
    std::vector<StateId> seeds;
    std::vector<double> jaccard;
    DistributionSummary summary;
};

/// Jaccard overlap between the best local community of uniformly sampled
/// state-node seeds and their planted communities.
RecoveryResult recovery_experiment(const BenchmarkInstance& instance, const WalkConfig& walk,
                                   const RecoveryOptions& options, std::uint64_t rng_seed);
RecoveryResult recovery_experiment(const BenchmarkSpec& spec, const WalkConfig& walk, const RecoveryOptions& options);

} // namespace mxcomm
