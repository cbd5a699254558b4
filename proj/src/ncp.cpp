#include "mxcomm/ncp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mxcomm/parallel.hpp"

namespace mxcomm {

const char* to_string(SeedMode mode) {
    switch (mode) {
    case SeedMode::state: return "state";
    case SeedMode::physical: return "physical";
    case SeedMode::set: return "set";
    }
    return "unknown";
}

SeedVector SeedSpec::resolve(const MultiplexNetwork& net) const {
    switch (mode) {
    case SeedMode::state:
        if (id >= net.num_states()) throw std::out_of_range("seed state out of range");
        return SeedVector::state(id);
    case SeedMode::physical: return SeedVector::physical(net, id);
    case SeedMode::set: break;
    }
    throw std::invalid_argument("seed sets are resolved with SeedVector::uniform");
}

// ---------------------------------------------------------------------------
// ACLcut

SweepResult aclcut(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon, AclWorkspace& ws, std::span<const StateId> always_include) {
    const PprState state = appr_push(model, volumes, seed, gamma, epsilon, ws.push);
    SparseVector score = degree_normalized(state.p, volumes);
    if (!always_include.empty()) {
        // p is sorted by id; members of always_include missing from it get score 0
        for (StateId u : always_include) {
            auto it = std::lower_bound(state.p.begin(), state.p.end(), u,
                                       [](const auto& e, StateId s) { return e.first < s; });
            if (it == state.p.end() || it->first != u || it->second <= 0.0) score.emplace_back(u, 0.0);
        }
    }
    return sweep_cut(model, volumes, score, ws.sweep);
}

SweepResult aclcut(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon) {
    AclWorkspace ws(model.num_states());
    return aclcut(model, volumes, seed, gamma, epsilon, ws);
}

std::vector<double> epsilon_grid(std::span<const double> volumes, std::size_t count) {
    if (volumes.empty()) throw std::invalid_argument("empty volume vector");
    if (count == 0) return {};
    double max_v = 0.0, sum_v = 0.0;
    for (double x : volumes) {
        max_v = std::max(max_v, x);
        sum_v += x;
    }
    if (!(max_v > 0.0)) throw std::invalid_argument("volume vector has no mass");
    const double hi = 1.0 / max_v;
    const double lo = 1.0 / sum_v;
    std::vector<double> grid(count);
    for (std::size_t t = 0; t < count; ++t) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(count - 1);
        grid[t] = hi * std::pow(lo / hi, frac);
    }
    grid.back() = count == 1 ? hi : lo;
    return grid;
}

// ---------------------------------------------------------------------------
// NcpCurve

std::vector<std::size_t> NcpCurve::sizes() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k < points_.size(); ++k) {
        if (!points_[k].empty()) out.push_back(k);
    }
    return out;
}

Community NcpCurve::community(std::size_t k) const {
    const Point& pt = points_.at(k);
    if (pt.empty()) throw std::out_of_range("no community of size " + std::to_string(k));
    Community c;
    c.members.assign(pt.sweep_order->begin(), pt.sweep_order->begin() + static_cast<std::ptrdiff_t>(pt.size));
    std::sort(c.members.begin(), c.members.end());
    c.conductance = pt.conductance;
    c.provenance = pt.provenance;
    c.sweep_index = pt.size;
    return c;
}

namespace {

std::vector<StateId> sorted_prefix(const std::vector<StateId>& order, std::size_t k) {
    std::vector<StateId> s(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(s.begin(), s.end());
    return s;
}

} // namespace

void NcpCurve::offer(std::size_t k, double phi, const std::shared_ptr<const std::vector<StateId>>& order,
                     const Provenance& provenance) {
    Point& pt = points_[k];
    if (!pt.empty()) {
        if (phi > pt.conductance) return;
        if (phi == pt.conductance) {
            if (pt.sweep_order == order) return;
            if (!(sorted_prefix(*order, k) < sorted_prefix(*pt.sweep_order, pt.size))) return;
        }
    }
    pt.conductance = phi;
    pt.sweep_order = order;
    pt.size = k;
    pt.provenance = provenance;
}

void NcpCurve::fold(const SweepResult& sweep, const Provenance& provenance, std::size_t min_size) {
    std::shared_ptr<const std::vector<StateId>> order;
    const std::size_t n = std::min(sweep.conductance.size(), max_size());
    for (std::size_t k = std::max<std::size_t>(min_size, 1); k <= n; ++k) {
        const double phi = sweep.conductance[k - 1];
        if (!std::isfinite(phi)) continue;
        const Point& pt = points_[k];
        if (!pt.empty() && phi > pt.conductance) continue;
        if (!order) order = std::make_shared<const std::vector<StateId>>(sweep.order);
        offer(k, phi, order, provenance);
    }
}

void NcpCurve::merge(const NcpCurve& other) {
    if (other.points_.size() != points_.size()) throw std::invalid_argument("NCP curves over different networks");
    for (std::size_t k = 1; k < points_.size(); ++k) {
        const Point& pt = other.points_[k];
        if (!pt.empty()) offer(k, pt.conductance, pt.sweep_order, pt.provenance);
    }
}

Community NcpCurve::best() const {
    std::size_t best_k = 0;
    for (std::size_t k = 1; k + 1 < points_.size(); ++k) {
        if (points_[k].empty()) continue;
        if (best_k == 0 || points_[k].conductance < points_[best_k].conductance) best_k = k;
    }
    if (best_k == 0) return {};
    return community(best_k);
}

// ---------------------------------------------------------------------------
// Sampling

NcpCurve sample_ncp(const TransitionModel& model, std::span<const double> volumes, const MultiplexNetwork& net,
                    const SamplingOptions& options) {
    if (options.seed_mode == SeedMode::set) throw std::invalid_argument("sample_ncp seeds with state or physical nodes");
    if (model.num_states() != net.num_states() || volumes.size() != net.num_states()) {
        throw std::invalid_argument("model, volumes and network disagree in size");
    }
    const bool physical = options.seed_mode == SeedMode::physical;
    const std::size_t n_candidates = physical ? net.num_nodes() : net.num_states();

    NcpCurve curve(net.num_states());
    curve.metadata.walk = model.kind();
    curve.metadata.walk_parameter = model.parameter();
    curve.metadata.gamma = options.gamma;
    curve.metadata.epsilons = epsilon_grid(volumes, options.grid_size);
    curve.metadata.seed_mode = options.seed_mode;
    curve.metadata.rng_seed = options.rng_seed;

    WorkerPool pool(options.threads);
    std::vector<AclWorkspace> workspaces;
    workspaces.reserve(pool.size());
    for (std::size_t w = 0; w < pool.size(); ++w) workspaces.emplace_back(net.num_states());
    const std::size_t batch_size = pool.size() == 1 ? 1 : 4 * pool.size();

    std::mt19937_64 rng(options.rng_seed);
    std::vector<std::uint32_t> inclusions(n_candidates, 0);
    std::vector<char> mark(net.num_nodes(), 0);
    std::vector<std::uint32_t> batch;
    std::vector<SweepResult> results;

    auto seed_vector = [&](std::uint32_t c) {
        return physical ? SeedVector::physical(net, c) : SeedVector::state(c);
    };

    for (const double epsilon : curve.metadata.epsilons) {
        // every epsilon starts from the full candidate set
        std::fill(inclusions.begin(), inclusions.end(), 0);
        std::vector<std::uint32_t> candidates(n_candidates);
        for (std::uint32_t c = 0; c < n_candidates; ++c) candidates[c] = c;
        std::shuffle(candidates.begin(), candidates.end(), rng);

        std::size_t pos = 0;
        while (pos < candidates.size()) {
            // Speculative batch: commits below replay the sequential schedule,
            // discarding runs whose seed was excluded by an earlier commit.
            batch.clear();
            while (pos < candidates.size() && batch.size() < batch_size) {
                const auto c = candidates[pos++];
                if (inclusions[c] < options.max_inclusions) batch.push_back(c);
            }
            results.assign(batch.size(), SweepResult{});
            pool.run(batch.size(), [&](std::size_t t, std::size_t worker) {
                results[t] = aclcut(model, volumes, seed_vector(batch[t]), options.gamma, epsilon, workspaces[worker]);
            });

            for (std::size_t t = 0; t < batch.size(); ++t) {
                const auto c = batch[t];
                if (inclusions[c] >= options.max_inclusions) continue;
                const SweepResult& sweep = results[t];
                ++curve.metadata.runs;
                if (sweep.empty()) continue;
                curve.fold(sweep, {options.seed_mode, c, epsilon});

                const std::size_t k = sweep.best_size();
                if (k == 0) continue;
                if (physical) {
                    for (std::size_t q = 0; q < k; ++q) {
                        const NodeId i = net.node_of(sweep.order[q]);
                        if (!mark[i]) {
                            mark[i] = 1;
                            ++inclusions[i];
                        }
                    }
                    for (std::size_t q = 0; q < k; ++q) mark[net.node_of(sweep.order[q])] = 0;
                } else {
                    for (std::size_t q = 0; q < k; ++q) ++inclusions[sweep.order[q]];
                }
            }
        }
    }
    return curve;
}

NcpCurve local_ncp(const TransitionModel& model, std::span<const double> volumes, std::span<const StateId> seed_set,
                   double gamma, std::size_t grid_size) {
    const SeedVector seed = SeedVector::uniform(seed_set);
    std::vector<StateId> members;
    for (const auto& [u, w] : seed.weights()) members.push_back(u);

    NcpCurve curve(model.num_states());
    curve.metadata.walk = model.kind();
    curve.metadata.walk_parameter = model.parameter();
    curve.metadata.gamma = gamma;
    curve.metadata.epsilons = epsilon_grid(volumes, grid_size);
    curve.metadata.seed_mode = SeedMode::set;

    const std::int64_t seed_id = members.size() == 1 ? static_cast<std::int64_t>(members.front()) : -1;
    const SeedMode mode = members.size() == 1 ? SeedMode::state : SeedMode::set;
    std::vector<char> in_seed(model.num_states(), 0);
    for (StateId u : members) in_seed[u] = 1;

    AclWorkspace ws(model.num_states());
    for (const double epsilon : curve.metadata.epsilons) {
        const SweepResult sweep = aclcut(model, volumes, seed, gamma, epsilon, ws, members);
        ++curve.metadata.runs;
        // the seed set is complete from the prefix ending at its last member
        std::size_t seen = 0, first_valid = 0;
        for (std::size_t q = 0; q < sweep.order.size(); ++q) {
            if (in_seed[sweep.order[q]] && ++seen == members.size()) {
                first_valid = q + 1;
                break;
            }
        }
        if (first_valid == 0) continue;
        curve.fold(sweep, {mode, seed_id, epsilon}, first_valid);
    }
    return curve;
}

Community best_community(const TransitionModel& model, std::span<const double> volumes, StateId seed, double gamma,
                         std::size_t grid_size) {
    const StateId seeds[] = {seed};
    return local_ncp(model, volumes, seeds, gamma, grid_size).best();
}

} // namespace mxcomm
