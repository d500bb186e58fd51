#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mps/fault_tolerant.hpp"
#include "mps/graph.hpp"
#include "mps/hop_spanner.hpp"

// Round-synchronous LOCAL-model simulator. Nodes wake up simultaneously,
// exchange messages of unbounded size with their neighbors once per round,
// and may compute arbitrarily between rounds. A node sees nothing beyond the
// NodeContext handed to it: its id, its incident edges, the universe size,
// and the public run seed. Locality is enforced by the harness interface,
// not by convention.

namespace mps {

struct Message {
    std::vector<long long> payload;
    long long units() const { return static_cast<long long>(payload.size()); }
};

struct NodeContext {
    Vertex id = 0;
    int n = 0;                // vertex-id universe size (assumed known)
    std::uint64_t seed = 0;   // public run seed
    std::vector<std::pair<Vertex, Weight>> incident;
};

class NodeProgram {
public:
    virtual ~NodeProgram() = default;
    virtual void init(const NodeContext& ctx) = 0;
    /// Called once per round: inbox holds the messages delivered at the end
    /// of the previous round, outbox may only address incident neighbors.
    virtual void step(const NodeContext& ctx, int round,
                      const std::vector<std::pair<Vertex, Message>>& inbox,
                      std::map<Vertex, Message>& outbox) = 0;
    virtual bool finished() const = 0;
    virtual std::vector<EdgeKey> output_edges() const = 0;
};

struct Protocol {
    std::string id;
    std::function<std::unique_ptr<NodeProgram>()> make_node;
};

struct RoundStats {
    long long messages = 0;
    long long payload_units = 0;
};

struct RoundTrace {
    int rounds_used = 0;  // rounds in which at least one message was sent
    std::vector<RoundStats> per_round;
    bool budget_exceeded = false;

    void write_csv(std::ostream& os) const {
        os << "round,messages,total_payload_units\n";
        for (size_t i = 0; i < per_round.size(); ++i)
            os << (i + 1) << "," << per_round[i].messages << "," << per_round[i].payload_units
               << "\n";
    }
};

struct SimResult {
    Subgraph spanner;
    RoundTrace trace;
};

/// Runs a protocol to quiescence. All node steps of one round observe the
/// same delivered state; delivery is barrier-synchronized. Exceeding
/// max_rounds aborts with the partial trace flagged.
inline SimResult run_protocol(const WeightedGraph& g, const Protocol& proto, int max_rounds,
                              std::uint64_t seed) {
    if (max_rounds < 0) throw std::invalid_argument("max_rounds must be >= 0");
    auto verts = g.vertices();
    std::vector<std::unique_ptr<NodeProgram>> programs(g.vertex_count());
    std::vector<NodeContext> ctx(g.vertex_count());
    for (Vertex v : verts) {
        ctx[v] = NodeContext{v, g.vertex_count(), seed, g.neighbors(v)};
        programs[v] = proto.make_node();
        programs[v]->init(ctx[v]);
    }

    std::vector<std::vector<std::pair<Vertex, Message>>> inbox(g.vertex_count());
    SimResult result{Subgraph(g), {}};

    for (int round = 1;; ++round) {
        std::vector<std::vector<std::pair<Vertex, Message>>> next_inbox(g.vertex_count());
        long long messages = 0, units = 0;
        for (Vertex v : verts) {
            std::map<Vertex, Message> outbox;
            programs[v]->step(ctx[v], round, inbox[v], outbox);
            for (auto& [to, msg] : outbox) {
                if (!g.has_edge(v, to))
                    throw std::logic_error("protocol sent a message to a non-neighbor");
                ++messages;
                units += msg.units();
                next_inbox[to].push_back({v, std::move(msg)});
            }
        }
        if (messages == 0) {
            bool all_done = true;
            for (Vertex v : verts) all_done &= programs[v]->finished();
            if (all_done) break;
        }
        if (round > max_rounds) {
            result.trace.budget_exceeded = true;
            break;
        }
        result.trace.per_round.push_back({messages, units});
        if (messages > 0) result.trace.rounds_used = round;
        inbox = std::move(next_inbox);
    }

    for (Vertex v : verts)
        for (const auto& [a, b] : programs[v]->output_edges()) result.spanner.add_edge(a, b);
    return result;
}

// ---------------------------------------------------------------------------
// Basic protocols

inline Protocol protocol_null() {
    class Node : public NodeProgram {
    public:
        void init(const NodeContext&) override {}
        void step(const NodeContext&, int, const std::vector<std::pair<Vertex, Message>>&,
                  std::map<Vertex, Message>&) override {}
        bool finished() const override { return true; }
        std::vector<EdgeKey> output_edges() const override { return {}; }
    };
    return {"null", [] { return std::make_unique<Node>(); }};
}

/// Synchronous flooding from vertex 0 to the given hop depth; rounds_used
/// equals the depth on any graph that deep.
inline Protocol protocol_flood(int depth) {
    class Node : public NodeProgram {
    public:
        explicit Node(int depth) : depth_(depth) {}
        void init(const NodeContext& ctx) override {
            if (ctx.id == 0 && depth_ > 0) pending_ = depth_ - 1;
        }
        void step(const NodeContext& ctx, int, const std::vector<std::pair<Vertex, Message>>& inbox,
                  std::map<Vertex, Message>& outbox) override {
            for (const auto& [from, msg] : inbox) {
                if (!seen_ && ctx.id != 0) {
                    seen_ = true;
                    if (msg.payload[0] > 0) pending_ = msg.payload[0] - 1;
                }
            }
            if (pending_ >= 0) {
                for (auto [y, w] : ctx.incident) outbox[y] = Message{{pending_}};
                pending_ = -1;
            }
        }
        bool finished() const override { return pending_ < 0; }
        std::vector<EdgeKey> output_edges() const override { return {}; }

    private:
        int depth_;
        long long pending_ = -1;
        bool seen_ = false;
    };
    return {"flood", [depth] { return std::make_unique<Node>(depth); }};
}

// ---------------------------------------------------------------------------
// Distributed cluster spanner: the level sampling costs no communication,
// clusters then grow one hop per round. Messages carry (center, center level,
// hop, settled, edge-discard flag); k message rounds total. The output equals
// the sequential cluster_hop_spanner edge for edge under a matched seed
// because both run the same per-round decision rule on the same views.

namespace detail {

class ClusterNode : public NodeProgram {
public:
    ClusterNode(int k, double c) : k_(k), c_(c) {}

    void init(const NodeContext& ctx) override {
        id_ = ctx.id;
        const double q = cluster::promotion_probability(ctx.n, k_, c_);
        st_ = cluster::NodeState{ctx.id, cluster::draw_level(ctx.seed, ctx.id, k_, q), 0, false};
        for (auto [y, w] : ctx.incident) cache_[y] = cluster::NeighborView{y, w, {}, false};
    }

    void step(const NodeContext& ctx, int round,
              const std::vector<std::pair<Vertex, Message>>& inbox,
              std::map<Vertex, Message>& outbox) override {
        for (const auto& [from, msg] : inbox) {
            auto& nb = cache_[from];
            nb.st.center = static_cast<Vertex>(msg.payload[0]);
            nb.st.center_level = static_cast<int>(msg.payload[1]);
            nb.st.hop = static_cast<int>(msg.payload[2]);
            nb.st.settled = msg.payload[3] != 0;
            if (msg.payload[4] != 0) nb.dead = true;
        }
        if (round >= 2 && round <= k_) {
            apply(cluster::growth_round(round - 1, st_, views()));
        } else if (round == k_ + 1) {
            apply(cluster::final_round(st_, views()));
            done_ = true;
            return;
        }
        if (round <= k_) {
            for (auto [y, w] : ctx.incident)
                outbox[y] = Message{{st_.center, st_.center_level, st_.hop, st_.settled ? 1 : 0,
                                     killed_.count(y) ? 1 : 0}};
        }
    }

    bool finished() const override { return done_; }

    std::vector<EdgeKey> output_edges() const override { return {edges_.begin(), edges_.end()}; }

private:
    std::vector<cluster::NeighborView> views() const {
        std::vector<cluster::NeighborView> out;
        out.reserve(cache_.size());
        for (const auto& [y, nb] : cache_) {
            auto view = nb;
            view.dead = nb.dead || killed_.count(y) > 0;
            out.push_back(view);
        }
        return out;
    }

    void apply(const cluster::Decision& d) {
        if (d.new_state) st_ = *d.new_state;
        for (Vertex y : d.spanner_edges) edges_.insert(edge_key(id_, y));
        for (Vertex y : d.kill_edges) killed_.insert(y);
    }

    int k_;
    double c_;
    Vertex id_ = -1;
    cluster::NodeState st_;
    std::map<Vertex, cluster::NeighborView> cache_;
    std::set<Vertex> killed_;
    EdgeSet edges_;
    bool done_ = false;
};

}  // namespace detail

inline Protocol protocol_cluster_spanner(int k, double c) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    return {"cluster", [k, c]() -> std::unique_ptr<NodeProgram> {
                return std::make_unique<detail::ClusterNode>(k, c);
            }};
}

// ---------------------------------------------------------------------------
// Fault-tolerant wrapper protocol: q logical instances of the inner protocol
// advance in lock-step; each round every node sends one physical message per
// neighbor carrying the concatenation of its instances' sub-messages, so the
// round count equals the inner protocol's.

inline Protocol protocol_ft_wrapper(const Protocol& inner, int r, double c) {
    class Node : public NodeProgram {
    public:
        Node(Protocol inner, int r, double c) : inner_(std::move(inner)), r_(r), c_(c) {}

        void init(const NodeContext& ctx) override {
            const int q = ft_iteration_count(ctx.n, r_, c_);
            for (int j = 0; j < q; ++j) {
                if (ft_in_sample(ctx.seed, ctx.id, j, r_)) continue;  // I am removed in run j
                NodeContext sub = ctx;
                sub.seed = ft_inner_seed(ctx.seed, j);
                sub.incident.clear();
                for (auto [y, w] : ctx.incident)
                    if (!ft_in_sample(ctx.seed, y, j, r_)) sub.incident.push_back({y, w});
                instances_.push_back({j, sub, inner_.make_node()});
                instances_.back().program->init(sub);
            }
        }

        void step(const NodeContext& ctx, int round,
                  const std::vector<std::pair<Vertex, Message>>& inbox,
                  std::map<Vertex, Message>& outbox) override {
            // Split each physical message into per-instance frames [j, len, ...].
            std::map<int, std::vector<std::pair<Vertex, Message>>> sub_inbox;
            for (const auto& [from, msg] : inbox) {
                size_t at = 0;
                while (at < msg.payload.size()) {
                    int j = static_cast<int>(msg.payload[at]);
                    long long len = msg.payload[at + 1];
                    Message sub;
                    sub.payload.assign(msg.payload.begin() + at + 2,
                                       msg.payload.begin() + at + 2 + len);
                    sub_inbox[j].push_back({from, std::move(sub)});
                    at += 2 + static_cast<size_t>(len);
                }
            }
            std::map<Vertex, Message> merged;
            for (auto& inst : instances_) {
                std::map<Vertex, Message> sub_out;
                inst.program->step(inst.ctx, round, sub_inbox[inst.index], sub_out);
                for (auto& [to, msg] : sub_out) {
                    auto& m = merged[to];
                    m.payload.push_back(inst.index);
                    m.payload.push_back(msg.units());
                    m.payload.insert(m.payload.end(), msg.payload.begin(), msg.payload.end());
                }
            }
            // One physical message per neighbor per active round, even when a
            // neighbor shares no instance: the concatenation is just empty.
            if (!merged.empty()) {
                for (auto [y, w] : ctx.incident)
                    if (!merged.count(y)) merged[y] = Message{};
            }
            outbox = std::move(merged);
        }

        bool finished() const override {
            for (const auto& inst : instances_)
                if (!inst.program->finished()) return false;
            return true;
        }

        std::vector<EdgeKey> output_edges() const override {
            EdgeSet all;
            for (const auto& inst : instances_)
                for (const auto& e : inst.program->output_edges()) all.insert(e);
            return {all.begin(), all.end()};
        }

    private:
        struct Instance {
            int index;
            NodeContext ctx;
            std::unique_ptr<NodeProgram> program;
        };
        Protocol inner_;
        int r_;
        double c_;
        std::vector<Instance> instances_;
    };

    Protocol p;
    p.id = "ft-" + inner.id;
    p.make_node = [inner, r, c] { return std::make_unique<Node>(inner, r, c); };
    return p;
}

}  // namespace mps
