#include "mxcomm/ppr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mxcomm {

SeedVector SeedVector::state(StateId u) {
    SeedVector s;
    s.weights_.emplace_back(u, 1.0);
    return s;
}

SeedVector SeedVector::physical(const MultiplexNetwork& net, NodeId i) {
    if (i >= net.num_nodes()) throw std::out_of_range("physical node id out of range");
    auto states = net.states_of(i);
    return uniform(states);
}

SeedVector SeedVector::uniform(std::span<const StateId> states) {
    std::vector<StateId> ids(states.begin(), states.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.empty()) throw std::invalid_argument("seed set is empty");
    SeedVector s;
    const double w = 1.0 / static_cast<double>(ids.size());
    for (StateId u : ids) s.weights_.emplace_back(u, w);
    return s;
}

SeedVector SeedVector::from_weights(SparseVector weights) {
    std::sort(weights.begin(), weights.end());
    SparseVector merged;
    double total = 0.0;
    for (const auto& [u, w] : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("seed weights must be finite and >= 0");
        if (w == 0.0) continue;
        if (!merged.empty() && merged.back().first == u) {
            merged.back().second += w;
        } else {
            merged.emplace_back(u, w);
        }
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("seed vector has no mass");
    for (auto& entry : merged) entry.second /= total;
    SeedVector s;
    s.weights_ = std::move(merged);
    return s;
}

std::vector<double> exact_ppr(const TransitionModel& model, const SeedVector& seed, double gamma,
                              const PprOptions& options) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
    model.require_stochastic();
    const std::size_t n = model.num_states();
    std::vector<double> s(n, 0.0);
    for (const auto& [u, w] : seed.weights()) {
        if (u >= n) throw std::out_of_range("seed state out of range");
        s[u] = w;
    }
    if (gamma == 0.0) return s;

    std::vector<double> x(s), next(n);
    double residual = 0.0;
    for (std::size_t it = 0; it < options.max_iter; ++it) {
        propagate(model, x, next);
        residual = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            next[u] = gamma * next[u] + (1.0 - gamma) * s[u];
            residual += std::abs(next[u] - x[u]);
        }
        x.swap(next);
        // the error after this step is at most gamma / (1 - gamma) * residual
        if (residual * gamma <= options.tol * (1.0 - gamma)) return x;
    }
    throw ConvergenceError("personalized PageRank did not converge", residual);
}

// ---------------------------------------------------------------------------
// Push procedure

void ApprWorkspace::reset(std::size_t num_states) {
    p_.assign(num_states, 0.0);
    e_.assign(num_states, 0.0);
    queued_.assign(num_states, 0);
    touched_flag_.assign(num_states, 0);
    touched_.clear();
    queue_.clear();
}

PprState appr_push(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon, ApprWorkspace& ws, const PushObserver& observer) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    const std::size_t n = model.num_states();
    if (volumes.size() != n) throw std::invalid_argument("volume vector does not match model");
    model.require_stochastic();
    if (ws.size() != n) ws.reset(n);

    const double lazy_restart = (1.0 - gamma) / (1.0 + gamma);
    const double spread = (1.0 - lazy_restart) / 2.0;

    auto touch = [&](StateId u) {
        if (!ws.touched_flag_[u]) {
            ws.touched_flag_[u] = 1;
            ws.touched_.push_back(u);
        }
    };
    auto needs_push = [&](StateId u) { return ws.e_[u] > 0.0 && ws.e_[u] >= epsilon * volumes[u]; };
    auto enqueue = [&](StateId u) {
        if (!ws.queued_[u] && needs_push(u)) {
            ws.queued_[u] = 1;
            ws.queue_.push_back(u);
        }
    };

    for (const auto& [u, w] : seed.weights()) {
        if (u >= n) throw std::out_of_range("seed state out of range");
        touch(u);
        ws.e_[u] = w;
    }
    for (const auto& [u, w] : seed.weights()) enqueue(u);

    PprState state;
    std::size_t head = 0;
    while (head < ws.queue_.size()) {
        const StateId u = ws.queue_[head++];
        ws.queued_[u] = 0;
        if (head > 4096 && head * 2 > ws.queue_.size()) {
            ws.queue_.erase(ws.queue_.begin(), ws.queue_.begin() + static_cast<std::ptrdiff_t>(head));
            head = 0;
        }

        const double mass = ws.e_[u];
        ws.p_[u] += lazy_restart * mass;
        ws.e_[u] = spread * mass;
        model.for_each_out(u, [&](StateId w, double prob) {
            touch(w);
            ws.e_[w] += spread * prob * mass;
        });
        ++state.pushes;

        enqueue(u);
        model.for_each_out(u, [&](StateId w, double) { enqueue(w); });

        if (observer) observer(ws.p_, ws.e_);
    }
    ws.queue_.clear();

    std::sort(ws.touched_.begin(), ws.touched_.end());
    for (StateId u : ws.touched_) {
        if (ws.p_[u] > 0.0) state.p.emplace_back(u, ws.p_[u]);
        if (ws.e_[u] > 0.0) state.residual.emplace_back(u, ws.e_[u]);
        ws.p_[u] = 0.0;
        ws.e_[u] = 0.0;
        ws.touched_flag_[u] = 0;
    }
    ws.touched_.clear();
    return state;
}

PprState appr_push(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon, ApprWorkspace& workspace) {
    return appr_push(model, volumes, seed, gamma, epsilon, workspace, PushObserver{});
}

PprState appr_push(const TransitionModel& model, std::span<const double> volumes, const SeedVector& seed,
                   double gamma, double epsilon) {
    ApprWorkspace workspace(model.num_states());
    return appr_push(model, volumes, seed, gamma, epsilon, workspace, PushObserver{});
}

} // namespace mxcomm
