// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "authentree/chiplet.hpp"

namespace authentree {

enum class LinkStateKind { Healthy, Dropping, Corrupting, Delaying };

/// Per-link fault state. Corrupting flips the listed payload bit positions
/// (positions beyond the payload are inert wires); Delaying adds cycles on
/// top of the base per-link latency.
struct LinkState {
    LinkStateKind kind = LinkStateKind::Healthy;
    std::vector<std::size_t> corrupt_bits;
    std::uint32_t delay_cycles = 0;

    static LinkState healthy() { return {}; }
    static LinkState dropping() { return {LinkStateKind::Dropping, {}, 0}; }
    static LinkState corrupting(std::vector<std::size_t> bits) {
        return {LinkStateKind::Corrupting, std::move(bits), 0};
    }
    static LinkState delaying(std::uint32_t cycles) {
        return {LinkStateKind::Delaying, {}, cycles};
    }
};

/// Undirected edge, stored with endpoints ordered ascending.
struct Link {
    NodeId a = 0;
    NodeId b = 0;

    Link() = default;
    Link(NodeId x, NodeId y) : a(x < y ? x : y), b(x < y ? y : x) {}
    auto operator<=>(const Link&) const = default;
};

/// A fault active in [from_cycle, to_cycle); used for transient windows.
struct FaultWindow {
    LinkState state;
    std::uint64_t from_cycle = 0;
    std::uint64_t to_cycle = 0;
};

enum class MessageKind { Challenge, Response, Share, Verdict, Replayed };

struct Message {
    NodeId src = 0;
    NodeId dst = 0;
    MessageKind kind = MessageKind::Challenge;
    Bytes payload;
    std::uint64_t session_id = 0;
    std::uint64_t emit_cycle = 0;
};

struct DeliveryOutcome {
    enum class Kind { Delivered, Dropped, Corrupted };
    Kind kind = Kind::Delivered;
    Bytes payload;                    // as received (empty when Dropped)
    std::uint64_t arrival_cycle = 0;  // undefined when Dropped

    bool delivered() const { return kind != Kind::Dropped; }
};

using Path = std::vector<NodeId>;

/// Interposer graph: chiplet nodes, undirected links with per-link fault
/// state and schedule, and a deterministic table of link-disjoint routes.
/// All state is owned by the single simulation thread.
class Topology {
public:
    void add_node(NodeId id, Role role);
    void add_link(NodeId a, NodeId b);

    bool has_node(NodeId id) const { return roles_.contains(id); }
    bool has_link(const Link& link) const { return links_.contains(link); }
    Role role_of(NodeId id) const { return roles_.at(id); }
    const std::map<NodeId, Role>& nodes() const { return roles_; }
    std::vector<NodeId> ids_with_role(Role role) const;

    /// All stored link-disjoint paths src -> dst, shortest first, ties broken
    /// lexicographically by node sequence. Throws std::invalid_argument when
    /// src == dst and std::runtime_error("unreachable") when no path exists
    /// over the physical graph.
    const std::vector<Path>& routes(NodeId src, NodeId dst) const;

    /// Walks the chosen route applying per-link state at the cycle each link
    /// is traversed. Deterministic. Throws std::out_of_range("no such route").
    DeliveryOutcome transmit(const Message& msg, std::size_t path_index) const;

    /// Same walk over an explicit node sequence (e.g. the reverse of a
    /// forward route). Endpoints must be msg.src and msg.dst.
    DeliveryOutcome transmit_over(const Message& msg, const Path& path) const;

    /// Replaces a link's permanent state; returns the prior state so callers
    /// can restore it. Throws std::out_of_range("unknown link").
    LinkState inject_link_fault(const Link& link, LinkState state);

    /// Registers a transient fault active in [from_cycle, to_cycle).
    void schedule_fault(const Link& link, LinkState state,
                        std::uint64_t from_cycle, std::uint64_t to_cycle);

    /// Effective state of a link at a cycle (latest matching window wins,
    /// else the permanent state).
    const LinkState& state_at(const Link& link, std::uint64_t cycle) const;

    /// True if the graph restricted to currently-Healthy permanent links is
    /// connected over all nodes.
    bool connected_over_healthy() const;

    void set_base_link_latency(std::uint32_t cycles) { base_latency_ = cycles; }
    std::uint32_t base_link_latency() const { return base_latency_; }

private:
    struct LinkRecord {
        LinkState base;
        std::vector<FaultWindow> schedule;
    };

    std::vector<Path> compute_disjoint_paths(NodeId src, NodeId dst) const;

    std::map<NodeId, Role> roles_;
    std::map<NodeId, std::vector<NodeId>> adjacency_;  // neighbors, ascending
    std::map<Link, LinkRecord> links_;
    std::uint32_t base_latency_ = 1;
    mutable std::map<std::pair<NodeId, NodeId>, std::vector<Path>> route_cache_;
};

/// Canonical scenario topologies. Star wires every chiplet to every
/// integrator; mesh places all nodes on a 2D grid; clique_spokes fully
/// connects the integrators and gives each third-party chiplet spokes to two
/// of them.
Topology make_star(const std::vector<NodeId>& integrators,
                   const std::vector<NodeId>& third_parties);
Topology make_mesh(const std::vector<NodeId>& integrators,
                   const std::vector<NodeId>& third_parties);
Topology make_clique_spokes(const std::vector<NodeId>& integrators,
                            const std::vector<NodeId>& third_parties);

}  // namespace authentree
