#include "mxcomm/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mxcomm/parallel.hpp"

namespace mxcomm {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Visits the successes of independent Bernoulli(p) trials over [0, count)
// by geometric skipping.
template <class Rng, class F>
void bernoulli_hits(Rng& rng, std::size_t count, double p, F&& on_hit) {
    if (count == 0 || p <= 0.0) return;
    if (p >= 1.0) {
        for (std::size_t k = 0; k < count; ++k) on_hit(k);
        return;
    }
    std::geometric_distribution<std::size_t> skip(p);
    for (std::size_t k = skip(rng); k < count; k += 1 + skip(rng)) on_hit(k);
}

} // namespace

std::string BenchmarkSpec::validate() const {
    if (n == 0 || layers == 0 || communities == 0) throw std::invalid_argument("n, layers and communities must be >= 1");
    if (!is_probability(lambda)) throw std::invalid_argument("lambda must lie in [0,1]");
    if (!is_probability(p_in) || !is_probability(p_out)) throw std::invalid_argument("p_in and p_out must lie in [0,1]");
    if (p_out > p_in) return "p_out > p_in: planted communities are anti-assortative";
    return {};
}

std::vector<StateId> PlantedPartition::planted_community(StateId seed) const {
    const auto label = planted.at(seed);
    std::vector<StateId> members;
    for (StateId u = 0; u < planted.size(); ++u) {
        if (planted[u] == label) members.push_back(u);
    }
    return members;
}

BenchmarkInstance generate_benchmark(const BenchmarkSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.rng_seed);
    std::uniform_int_distribution<std::uint32_t> label(0, static_cast<std::uint32_t>(spec.communities - 1));
    std::bernoulli_distribution resample(spec.lambda);

    PlantedPartition part;
    part.background.resize(spec.n);
    for (auto& b : part.background) b = label(rng);
    part.planted.resize(spec.n * spec.layers);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t a = 0; a < spec.layers; ++a) {
            part.planted[i * spec.layers + a] = resample(rng) ? label(rng) : part.background[i];
        }
    }

    MultiplexBuilder builder(false);
    for (std::size_t i = 0; i < spec.n; ++i) builder.intern_node(std::to_string(i));
    for (std::size_t a = 0; a < spec.layers; ++a) builder.intern_layer(std::to_string(a + 1));
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t a = 0; a < spec.layers; ++a) {
            builder.add_state(static_cast<NodeId>(i), static_cast<LayerId>(a));
        }
    }

    // Per layer: same-label pairs with p_in, different-label pairs with p_out.
    std::vector<std::vector<NodeId>> groups(spec.communities);
    for (std::size_t a = 0; a < spec.layers; ++a) {
        for (auto& g : groups) g.clear();
        for (std::size_t i = 0; i < spec.n; ++i) {
            groups[part.planted[i * spec.layers + a]].push_back(static_cast<NodeId>(i));
        }
        const auto layer = static_cast<LayerId>(a);
        for (const auto& g : groups) {
            for (std::size_t x = 0; x + 1 < g.size(); ++x) {
                bernoulli_hits(rng, g.size() - x - 1, spec.p_in,
                               [&](std::size_t k) { builder.add_edge(layer, g[x], g[x + 1 + k]); });
            }
        }
        if (spec.p_out > 0.0) {
            for (std::size_t i = 0; i + 1 < spec.n; ++i) {
                const auto li = part.planted[i * spec.layers + a];
                bernoulli_hits(rng, spec.n - i - 1, spec.p_out, [&](std::size_t k) {
                    const std::size_t j = i + 1 + k;
                    if (part.planted[j * spec.layers + a] != li) {
                        builder.add_edge(layer, static_cast<NodeId>(i), static_cast<NodeId>(j));
                    }
                });
            }
        }
    }
    return {std::move(builder).build(), std::move(part)};
}

double jaccard(std::span<const StateId> a, std::span<const StateId> b) {
    std::vector<StateId> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    std::sort(y.begin(), y.end());
    y.erase(std::unique(y.begin(), y.end()), y.end());
    if (x.empty() && y.empty()) throw std::invalid_argument("jaccard of two empty sets");
    std::size_t common = 0;
    for (std::size_t i = 0, j = 0; i < x.size() && j < y.size();) {
        if (x[i] < y[j]) {
            ++i;
        } else if (y[j] < x[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(x.size() + y.size() - common);
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

DistributionSummary summarize(std::vector<double> values) {
    DistributionSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.median = quantile(values, 0.5);
    s.q1 = quantile(values, 0.25);
    s.q3 = quantile(values, 0.75);
    const double iqr = s.q3 - s.q1;
    const double fence_lo = s.q1 - 1.5 * iqr;
    const double fence_hi = s.q3 + 1.5 * iqr;
    s.lo = s.q1;
    s.hi = s.q3;
    for (double v : values) {
        if (v < fence_lo || v > fence_hi) {
            s.outliers.push_back(v);
        } else {
            s.lo = std::min(s.lo, v);
            s.hi = std::max(s.hi, v);
        }
    }
    return s;
}

RecoveryResult recovery_experiment(const BenchmarkInstance& instance, const WalkConfig& walk,
                                   const RecoveryOptions& options, std::uint64_t rng_seed) {
    if (options.n_seeds == 0) throw std::invalid_argument("n_seeds must be >= 1");
    const auto& net = instance.network;
    const TransitionModel model = make_walk(net, walk);
    const VolumeVector volumes = walk_volumes(model, net);

    std::vector<StateId> all(net.num_states());
    for (StateId u = 0; u < all.size(); ++u) all[u] = u;
    std::mt19937_64 rng(rng_seed);
    std::shuffle(all.begin(), all.end(), rng);

    RecoveryResult result;
    result.seeds.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(options.n_seeds, all.size())));
    result.jaccard.assign(result.seeds.size(), 0.0);

    WorkerPool pool(options.threads);
    pool.run(result.seeds.size(), [&](std::size_t t, std::size_t) {
        const StateId seed = result.seeds[t];
        const Community found = best_community(model, volumes, seed, options.gamma, options.grid_size);
        const auto planted = instance.partition.planted_community(seed);
        result.jaccard[t] = found.members.empty() ? 0.0 : jaccard(planted, found.members);
    });
    result.summary = summarize(result.jaccard);
    return result;
}

RecoveryResult recovery_experiment(const BenchmarkSpec& spec, const WalkConfig& walk, const RecoveryOptions& options) {
    const auto instance = generate_benchmark(spec);
    // seed sampling draws from a stream separate from network generation
    return recovery_experiment(instance, walk, options, spec.rng_seed ^ 0x9e3779b97f4a7c15ULL);
}

} // namespace mxcomm
