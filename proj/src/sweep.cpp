#include "mxcomm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mxcomm {

namespace {

// complement volume below this fraction of the total counts as empty
constexpr double kNegligibleVolume = 1e-12;

} // namespace

double conductance(const TransitionModel& model, std::span<const double> volumes, std::span<const StateId> set) {
    if (set.empty()) throw std::invalid_argument("conductance of an empty set");
    if (volumes.size() != model.num_states()) throw std::invalid_argument("volume vector does not match model");
    model.require_stochastic();
    std::vector<char> member(model.num_states(), 0);
    for (StateId u : set) {
        if (u >= model.num_states()) throw std::out_of_range("state id out of range");
        member[u] = 1;
    }
    double volume[2] = {0.0, 0.0};
    double flow[2] = {0.0, 0.0}; // out of the complement, out of the set
    for (StateId u = 0; u < model.num_states(); ++u) {
        const int side = member[u];
        volume[side] += volumes[u];
        double leaving = 0.0;
        model.for_each_out(u, [&](StateId w, double prob) {
            if (member[w] != side) leaving += prob;
        });
        flow[side] += leaving * volumes[u];
    }
    if (!(volume[1] > 0.0)) throw std::domain_error("conductance undefined: set has zero volume");
    // measured on the side holding less stationary mass
    if (volume[0] <= kNegligibleVolume * (volume[0] + volume[1])) return 0.0;
    const int side = volume[1] <= volume[0] ? 1 : 0;
    return flow[side] / volume[side];
}

std::size_t SweepResult::best_size() const {
    std::size_t best = 0;
    double best_phi = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < conductance.size(); ++k) {
        if (k + 1 == num_states) break;
        if (conductance[k] < best_phi) {
            best_phi = conductance[k];
            best = k + 1;
        }
    }
    return best;
}

std::vector<StateId> SweepResult::prefix(std::size_t k) const {
    k = std::min(k, order.size());
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)};
}

SparseVector degree_normalized(const SparseVector& p, std::span<const double> volumes) {
    SparseVector out;
    out.reserve(p.size());
    for (const auto& [u, value] : p) {
        if (value <= 0.0) continue;
        out.emplace_back(u, volumes[u] > 0.0 ? value / volumes[u] : std::numeric_limits<double>::infinity());
    }
    return out;
}

SweepResult sweep_cut(const TransitionModel& model, std::span<const double> volumes, const SparseVector& score,
                      SweepWorkspace& ws) {
    if (volumes.size() != model.num_states()) throw std::invalid_argument("volume vector does not match model");
    model.require_stochastic();
    if (ws.in_set_.size() != model.num_states()) ws.in_set_.assign(model.num_states(), 0);

    SparseVector ranked(score);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    SweepResult result;
    result.num_states = model.num_states();
    result.order.reserve(ranked.size());
    result.conductance.reserve(ranked.size());

    // Dangling rows restart through the teleportation seed: track the
    // volume of dangling members and the seed mass inside the set.
    const std::vector<double>* seed_mass = model.teleportation() ? &model.teleportation()->seed : nullptr;
    double total_volume = 0.0;
    double total_dangling = 0.0;
    for (StateId u = 0; u < model.num_states(); ++u) {
        total_volume += volumes[u];
        if (model.num_dangling() > 0 && model.dangling(u)) total_dangling += volumes[u];
    }
    double dangling_volume = 0.0;
    double seed_in_set = 0.0;

    double cut = 0.0;    // flow out of the set
    double cut_in = 0.0; // flow into the set
    double volume = 0.0;
    for (const auto& entry : ranked) {
        const StateId u = entry.first;
        if (ws.in_set_[u]) continue;
        const double vu = volumes[u];
        const bool dangling = model.dangling(u);
        const double s_u = seed_mass ? (*seed_mass)[u] : 0.0;

        double from_set = 0.0, from_rest = 0.0;
        for (const auto& t : model.column(u)) {
            if (t.target == u) continue;
            (ws.in_set_[t.target] ? from_set : from_rest) += t.prob * volumes[t.target];
        }
        from_set += s_u * dangling_volume;
        from_rest += s_u * (total_dangling - dangling_volume - (dangling ? vu : 0.0));

        double to_rest = 0.0, to_set = 0.0;
        if (dangling) {
            to_set = seed_in_set;
            to_rest = 1.0 - seed_in_set - s_u;
        } else {
            for (const auto& t : model.row(u)) {
                if (t.target == u) continue;
                (ws.in_set_[t.target] ? to_set : to_rest) += t.prob;
            }
        }
        cut += to_rest * vu - from_set;
        cut_in += from_rest - to_set * vu;
        volume += vu;
        ws.in_set_[u] = 1;
        seed_in_set += s_u;
        if (dangling) dangling_volume += vu;

        double phi;
        if (!(volume > 0.0)) {
            phi = std::numeric_limits<double>::infinity();
        } else if (volume <= total_volume - volume) {
            phi = cut / volume;
        } else {
            const double rest = total_volume - volume;
            phi = rest > kNegligibleVolume * total_volume ? cut_in / rest : 0.0;
        }
        result.order.push_back(u);
        result.conductance.push_back(std::isinf(phi) ? phi : std::clamp(phi, 0.0, 1.0));
    }
    for (StateId u : result.order) ws.in_set_[u] = 0;
    return result;
}

SweepResult sweep_cut(const TransitionModel& model, std::span<const double> volumes, const SparseVector& score) {
    SweepWorkspace ws(model.num_states());
    return sweep_cut(model, volumes, score, ws);
}

} // namespace mxcomm
