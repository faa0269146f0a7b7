// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "authentree/topology.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace authentree {

namespace {
constexpr std::size_t kMaxPayloadBytes = 4096;
}

void Topology::add_node(NodeId id, Role role) {
    if (roles_.contains(id)) {
        throw std::invalid_argument("duplicate chiplet id: " + std::to_string(id));
    }
    roles_[id] = role;
    adjacency_[id];
}

void Topology::add_link(NodeId a, NodeId b) {
    if (a == b) {
        throw std::invalid_argument("self-loop link");
    }
    if (!has_node(a) || !has_node(b)) {
        throw std::invalid_argument("link endpoint not a node");
    }
    const Link link(a, b);
    if (links_.contains(link)) {
        return;
    }
    links_[link] = LinkRecord{};
    auto insert_sorted = [this](NodeId from, NodeId to) {
        auto& nbrs = adjacency_[from];
        nbrs.insert(std::lower_bound(nbrs.begin(), nbrs.end(), to), to);
    };
    insert_sorted(a, b);
    insert_sorted(b, a);
    route_cache_.clear();
}

std::vector<NodeId> Topology::ids_with_role(Role role) const {
    std::vector<NodeId> out;
    for (const auto& [id, r] : roles_) {
        if (r == role) out.push_back(id);
    }
    return out;
}

std::vector<Path> Topology::compute_disjoint_paths(NodeId src,
                                                   NodeId dst) const {
    // Greedy extraction: repeatedly take the BFS-shortest path (neighbors
    // explored in ascending id), then retire its links.
    std::set<Link> used;
    std::vector<Path> paths;
    for (;;) {
        std::map<NodeId, NodeId> parent;
        std::deque<NodeId> queue{src};
        std::set<NodeId> visited{src};
        bool found = false;
        while (!queue.empty() && !found) {
            const NodeId node = queue.front();
            queue.pop_front();
            for (NodeId next : adjacency_.at(node)) {
                if (used.contains(Link(node, next)) || visited.contains(next)) {
                    continue;
                }
                visited.insert(next);
                parent[next] = node;
                if (next == dst) {
                    found = true;
                    break;
                }
                queue.push_back(next);
            }
        }
        if (!found) break;
        Path path{dst};
        while (path.back() != src) {
            path.push_back(parent.at(path.back()));
        }
        std::reverse(path.begin(), path.end());
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            used.insert(Link(path[i], path[i + 1]));
        }
        paths.push_back(std::move(path));
    }
    std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return paths;
}

const std::vector<Path>& Topology::routes(NodeId src, NodeId dst) const {
    if (src == dst) {
        throw std::invalid_argument("route endpoints must differ");
    }
    if (!has_node(src) || !has_node(dst)) {
        throw std::invalid_argument("route endpoint not a node");
    }
    const auto key = std::make_pair(src, dst);
    auto it = route_cache_.find(key);
    if (it == route_cache_.end()) {
        it = route_cache_.emplace(key, compute_disjoint_paths(src, dst)).first;
    }
    if (it->second.empty()) {
        throw std::runtime_error("unreachable");
    }
    return it->second;
}

const LinkState& Topology::state_at(const Link& link,
                                    std::uint64_t cycle) const {
    const auto it = links_.find(link);
    if (it == links_.end()) {
        throw std::out_of_range("unknown link");
    }
    const LinkRecord& record = it->second;
    for (auto w = record.schedule.rbegin(); w != record.schedule.rend(); ++w) {
        if (cycle >= w->from_cycle && cycle < w->to_cycle) {
            return w->state;
        }
    }
    return record.base;
}

DeliveryOutcome Topology::transmit(const Message& msg,
                                   std::size_t path_index) const {
    const std::vector<Path>& available = routes(msg.src, msg.dst);
    if (path_index >= available.size()) {
        throw std::out_of_range("no such route");
    }
    return transmit_over(msg, available[path_index]);
}

DeliveryOutcome Topology::transmit_over(const Message& msg,
                                        const Path& path) const {
    if (msg.payload.size() > kMaxPayloadBytes) {
        throw std::invalid_argument("payload exceeds 4 KiB bound");
    }
    if (path.size() < 2 || path.front() != msg.src || path.back() != msg.dst) {
        throw std::invalid_argument("path does not connect src to dst");
    }

    DeliveryOutcome outcome;
    outcome.payload = msg.payload;
    std::uint64_t cycle = msg.emit_cycle;
    bool corrupted = false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Link link(path[i], path[i + 1]);
        const LinkState& state = state_at(link, cycle);
        switch (state.kind) {
            case LinkStateKind::Dropping:
                outcome.kind = DeliveryOutcome::Kind::Dropped;
                outcome.payload.clear();
                return outcome;
            case LinkStateKind::Corrupting: {
                std::vector<std::size_t> in_range;
                for (std::size_t bit : state.corrupt_bits) {
                    if (bit < outcome.payload.size() * 8) in_range.push_back(bit);
                }
                if (!in_range.empty()) {
                    outcome.payload = flip_bits(outcome.payload, in_range);
                    corrupted = true;
                }
                cycle += base_latency_;
                break;
            }
            case LinkStateKind::Delaying:
                cycle += base_latency_ + state.delay_cycles;
                break;
            case LinkStateKind::Healthy:
                cycle += base_latency_;
                break;
        }
    }
    outcome.kind = corrupted ? DeliveryOutcome::Kind::Corrupted
                             : DeliveryOutcome::Kind::Delivered;
    outcome.arrival_cycle = cycle;
    return outcome;
}

LinkState Topology::inject_link_fault(const Link& link, LinkState state) {
    const auto it = links_.find(link);
    if (it == links_.end()) {
        throw std::out_of_range("unknown link");
    }
    LinkState prior = it->second.base;
    it->second.base = std::move(state);
    return prior;
}

void Topology::schedule_fault(const Link& link, LinkState state,
                              std::uint64_t from_cycle,
                              std::uint64_t to_cycle) {
    const auto it = links_.find(link);
    if (it == links_.end()) {
        throw std::out_of_range("unknown link");
    }
    it->second.schedule.push_back(FaultWindow{std::move(state), from_cycle, to_cycle});
}

bool Topology::connected_over_healthy() const {
    if (roles_.empty()) return true;
    std::set<NodeId> visited{roles_.begin()->first};
    std::deque<NodeId> queue{roles_.begin()->first};
    while (!queue.empty()) {
        const NodeId node = queue.front();
        queue.pop_front();
        for (NodeId next : adjacency_.at(node)) {
            if (visited.contains(next)) continue;
            const auto it = links_.find(Link(node, next));
            if (it->second.base.kind != LinkStateKind::Healthy) continue;
            visited.insert(next);
            queue.push_back(next);
        }
    }
    return visited.size() == roles_.size();
}

Topology make_star(const std::vector<NodeId>& integrators,
                   const std::vector<NodeId>& third_parties) {
    Topology topo;
    for (NodeId id : integrators) topo.add_node(id, Role::Integrator);
    for (NodeId id : third_parties) topo.add_node(id, Role::ThirdParty);
    for (NodeId i : integrators) {
        for (NodeId j : integrators) {
            if (i < j) topo.add_link(i, j);
        }
        for (NodeId t : third_parties) topo.add_link(i, t);
    }
    return topo;
}

Topology make_mesh(const std::vector<NodeId>& integrators,
                   const std::vector<NodeId>& third_parties) {
    Topology topo;
    std::vector<NodeId> all;
    for (NodeId id : integrators) {
        topo.add_node(id, Role::Integrator);
        all.push_back(id);
    }
    for (NodeId id : third_parties) {
        topo.add_node(id, Role::ThirdParty);
        all.push_back(id);
    }
    // Near-square 2D grid in id order, wrapped into a torus when a row or
    // column would otherwise leave corner pairs with a single route.
    std::size_t cols = 1;
    while (cols * cols < all.size()) ++cols;
    const std::size_t rows = (all.size() + cols - 1) / cols;
    auto at = [&](std::size_t r, std::size_t c) -> std::optional<NodeId> {
        const std::size_t idx = r * cols + c;
        if (r >= rows || c >= cols || idx >= all.size()) return std::nullopt;
        return all[idx];
    };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto node = at(r, c);
            if (!node) continue;
            if (const auto right = at(r, c + 1)) topo.add_link(*node, *right);
            if (const auto down = at(r + 1, c)) topo.add_link(*node, *down);
        }
    }
    // Wrap each full row and column so every node has degree >= 2.
    for (std::size_t r = 0; r < rows; ++r) {
        const auto first = at(r, 0);
        std::optional<NodeId> last;
        for (std::size_t c = 0; c < cols; ++c) {
            if (const auto n = at(r, c)) last = n;
        }
        if (first && last && *first != *last) topo.add_link(*first, *last);
    }
    for (std::size_t c = 0; c < cols; ++c) {
        const auto first = at(0, c);
        std::optional<NodeId> last;
        for (std::size_t r = 0; r < rows; ++r) {
            if (const auto n = at(r, c)) last = n;
        }
        if (first && last && *first != *last) topo.add_link(*first, *last);
    }
    return topo;
}

Topology make_clique_spokes(const std::vector<NodeId>& integrators,
                            const std::vector<NodeId>& third_parties) {
    Topology topo;
    for (NodeId id : integrators) topo.add_node(id, Role::Integrator);
    for (NodeId id : third_parties) topo.add_node(id, Role::ThirdParty);
    for (std::size_t i = 0; i < integrators.size(); ++i) {
        for (std::size_t j = i + 1; j < integrators.size(); ++j) {
            topo.add_link(integrators[i], integrators[j]);
        }
    }
    // Two spokes per third-party chiplet, rotating over the integrator set so
    // every pair has two link-disjoint routes.
    for (std::size_t k = 0; k < third_parties.size(); ++k) {
        const NodeId a = integrators[k % integrators.size()];
        const NodeId b = integrators[(k + 1) % integrators.size()];
        topo.add_link(third_parties[k], a);
        topo.add_link(third_parties[k], b);
    }
    return topo;
}

}  // namespace authentree
