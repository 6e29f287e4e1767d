#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "flitsim/common.hpp"
#include "flitsim/config.hpp"
#include "flitsim/framing.hpp"
#include "flitsim/packet.hpp"
#include "flitsim/particle_cache.hpp"
#include "flitsim/routing.hpp"
#include "flitsim/rng.hpp"
#include "flitsim/sync_memory.hpp"

namespace flitsim {

using PacketId = std::uint32_t;
inline constexpr PacketId kNoPacket = 0xFFFFFFFFu;

enum class CompKind : std::uint8_t { CoreRouter, EdgeRouter, RowAdapter, ChanAdapter, Gc, Icb };

struct CompPort {
    CompKind kind{};
    std::uint32_t comp = 0;
    std::uint8_t port = 0;
    bool operator==(const CompPort&) const = default;
};

// Core router ports. In-port i receives from the neighbor out-port i points to.
namespace core_port {
inline constexpr std::uint8_t West = 0, East = 1, North = 2, South = 3, Term = 4, Ra = 5;
inline constexpr int kCount = 6;
}  // namespace core_port

// Edge router ports. Inner moves toward column 0 (row adapters), Outer toward
// column 2 (channel adapters).
namespace edge_port {
inline constexpr std::uint8_t Down = 0, Up = 1, Inner = 2, Outer = 3, Attach0 = 4, Attach1 = 5;
inline constexpr int kCount = 6;
}  // namespace edge_port

namespace ra_port {
inline constexpr std::uint8_t Core = 0, Col0 = 1, Col1 = 2, IcbIn = 3;
inline constexpr int kCount = 4;
}  // namespace ra_port

// What a packet is doing inside the local edge network.
enum class EdgeGoal : std::uint8_t { None = 0, ToChannel, ToCoreRa, ToIcbRa };

struct Packet {
    PacketHeader hdr;
    Quad payload[2];
    std::uint8_t flits = 1;

    std::uint32_t id = 0;
    std::uint32_t src_node = 0;
    std::uint32_t src_gc = 0xFFFFFFFFu;  // global GC index, for ordering audits
    SimTime injected_at = 0;
    std::uint32_t wk_tag = 0;  // workload cookie

    // Oblivious route state, drawn once at injection.
    std::uint8_t dim_order = 0;
    std::uint8_t slice = 0;       // edge network side used for the whole route
    std::uint8_t balance = 0;     // load-balance VC bit
    std::uint8_t tie_signs = 0;   // per-dimension half-ring tie break
    bool dateline = false;
    std::uint8_t hops = 0;        // channel crossings so far
    std::uint8_t route_hops = 0;  // expected crossings (minimality check)

    // Current edge-network leg.
    EdgeGoal edge_goal = EdgeGoal::None;
    std::uint8_t edge_target_row = 0;
    std::uint8_t edge_climb_col = 0;
    std::uint8_t edge_ca = 0;  // node-local target channel adapter (ToChannel)

    std::uint16_t fence_plane = 0;

    std::uint64_t rng_state = 0;  // per-packet stream for column draws

    std::uint32_t next_free = kNoPacket;
    bool in_use = false;
};

// Per-(port, VC) FIFO. Capacity is in flits; `reserved` includes packets
// committed upstream but not yet arrived (virtual cut-through accounting).
struct PktQueue {
    std::deque<PacketId> q;
    std::uint16_t reserved = 0;  // flits: queued + in flight toward this queue
    std::uint16_t cap = 8;
    bool unbounded = false;

    int free_flits() const { return unbounded ? 0x7FFF : cap - reserved; }
};

struct OutPort {
    CompPort dest;
    std::uint32_t latency = 0;
    SimTime busy_until = 0;
    std::uint8_t rr = 0;
    bool retry_scheduled = false;
};

// Shared state machine for core routers, edge routers, and row adapters.
struct Router {
    std::vector<PktQueue> in_q;  // [port * n_vcs + vc]
    std::vector<OutPort> out;
    std::vector<CompPort> waiters;  // upstream out-ports blocked on space here
    std::uint8_t n_ports = 0;
    std::uint8_t n_vcs = 0;

    PktQueue& queue(int port, int vc) { return in_q[static_cast<std::size_t>(port) * n_vcs + static_cast<std::size_t>(vc)]; }
};

struct InFlightRecord {
    WireRecord rec;
    PacketId pkt = kNoPacket;  // kNoPacket for cache-internal records (markers)
    SimTime arrive = 0;
};

// Full-duplex channel adapter: the egress half packs this node's outbound
// records onto the wire; the ingress half rebuilds packets arriving from the
// peer node and owns the receive-side particle cache for that direction.
struct ChanAdapter {
    std::uint32_t node = 0;
    Dir dir = Dir::XPlus;
    std::uint8_t slice = 0;
    std::uint8_t row = 0;
    bool egress_wraps = false;  // outgoing link is its ring's dateline
    std::uint32_t peer = 0;     // global CA index of the far end

    // Egress half.
    std::vector<PktQueue> stag;  // per-VC staging fed by the edge router attach
    std::vector<CompPort> waiters;
    std::uint8_t rr = 0;
    std::uint64_t wire_busy_ticks = 0;  // 1/channel_bytes_num cycle units
    bool pump_scheduled = false;
    RecordPacker packer;
    std::unique_ptr<ParticleCache> send_cache;

    // Ingress half (receives the peer's egress stream).
    std::vector<PktQueue> ingress;  // per-VC staging into the edge router
    std::deque<InFlightRecord> wire_q;
    std::uint8_t ingress_rr = 0;
    std::unique_ptr<ParticleCache> recv_cache;
    PacketId pending_head = kNoPacket;  // two-flit packet assembly

    // Byte accounting for this egress link.
    std::uint64_t bytes_by_kind[8] = {0};
    std::uint64_t records = 0;
    std::uint64_t position_bytes = 0;  // position-class record bytes
    std::uint64_t marker_count = 0;

    ChanAdapter() : packer(kDefaultFrameBytes) {}
};

struct Gc {
    std::unique_ptr<SyncMemory> mem;
    std::uint64_t trailer = 0;  // workload scratch
};

struct Icb {
    std::uint64_t positions_received = 0;
    std::uint64_t stream_completes = 0;
};

enum class EvKind : std::uint8_t {
    Arrive,        // packet arrives at (comp, port, vc)
    TrySend,       // pump an output port
    CaPump,        // pump a channel adapter egress
    WireArrive,    // next record on a channel reaches the ingress
    CreditReturn,  // ingress staging space freed, egress may resume
    Deliver,       // endpoint consumes a packet
    FenceEndpoint, // merged fence delivery takes effect at an endpoint
    Timer,         // workload callback
};

struct Event {
    SimTime time = 0;
    std::uint64_t seq = 0;
    EvKind kind = EvKind::Timer;
    CompKind ck = CompKind::CoreRouter;
    std::uint32_t comp = 0;
    std::uint8_t port = 0;
    std::uint8_t vc = 0;
    PacketId pkt = kNoPacket;
    std::uint64_t aux = 0;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

class Machine;

// Workload callbacks, invoked from endpoint events.
struct WorkloadHooks {
    virtual ~WorkloadHooks() = default;
    virtual void on_write_applied(Machine&, std::uint32_t /*gc*/, std::uint32_t /*addr*/,
                                  const Quad&, SimTime) {}
    virtual void on_release(Machine&, std::uint32_t /*gc*/, const BlockedReader&, const Quad&,
                            SimTime) {}
    virtual void on_response(Machine&, std::uint32_t /*gc*/, const Packet&, SimTime) {}
    virtual void on_icb_position(Machine&, std::uint32_t /*icb*/, const Packet&, SimTime) {}
    virtual void on_fence_delivered_gc(Machine&, std::uint32_t /*gc*/, std::uint8_t /*fence_id*/,
                                       SimTime) {}
    virtual void on_fence_delivered_icb(Machine&, std::uint32_t /*icb*/, std::uint8_t /*fence_id*/,
                                        SimTime) {}
    virtual void on_timer(Machine&, std::uint64_t /*aux*/, SimTime) {}
};

enum class FencePattern : std::uint8_t { GcToGc = 0, GcToIcb = 1 };

struct FenceTable;  // fence.hpp

struct FenceInstance {
    bool active = false;
    FencePattern pattern = FencePattern::GcToGc;
    int hops = 0;
    const FenceTable* table = nullptr;
    std::uint64_t issued = 0;
    std::uint64_t expected_issuers = 0;
    std::uint64_t delivered = 0;
    std::uint64_t expected_deliveries = 0;
    std::uint64_t packets_in_flight = 0;
    std::uint64_t counters_active = 0;
    SimTime issue_time = 0;
    SimTime complete_time = 0;
    // Per-node sparse fence counters: key = table entry index.
    std::vector<std::unordered_map<std::uint32_t, std::uint16_t>> counters;
};

struct FenceTraceEvent {
    SimTime time = 0;
    std::uint64_t seq = 0;
    std::uint8_t fence_id = 0;
    std::uint8_t kind = 0;  // 0 issue, 1 deliver-gc, 2 deliver-icb
    std::uint32_t endpoint = 0;
};

// Packet delivery order records for the fence/ordering auditors.
struct DeliveryRecord {
    std::uint64_t seq = 0;   // global delivery sequence
    std::uint32_t pkt_id = 0;
    std::uint32_t src_gc = 0;
    std::uint32_t dest = 0;  // global GC or ICB index
    std::uint8_t dest_is_icb = 0;
    SimTime time = 0;
};

struct ActivityStats {
    // Machine-wide flit/byte counts per class per time bucket.
    enum Class { CoreFlits = 0, EdgeFlits, ChannelBytes, PositionBytes, ForceBytes, FenceBytes, NumClasses };
    std::vector<std::array<std::uint64_t, NumClasses>> buckets;
    std::uint32_t bucket_cycles = 256;

    void bump(Class c, SimTime t, std::uint64_t amount);
};

class Machine {
public:
    explicit Machine(const SimConfig& cfg);
    ~Machine();

    const SimConfig& cfg() const { return cfg_; }
    const TorusShape& torus() const { return torus_; }
    const MachineShape& shape() const { return shape_; }
    SimTime now() const { return now_; }

    // Topology arithmetic.
    int num_nodes() const { return torus_.size(); }
    int tiles_per_node() const { return cfg_.core_u * cfg_.core_v; }
    int gcs_per_node() const { return tiles_per_node() * 2; }
    int icbs_per_node() const { return 4 * cfg_.core_v; }
    int cas_per_node() const { return static_cast<int>(ca_rows_.size()); }
    std::uint32_t node_id(const NodeCoord& n) const {
        return static_cast<std::uint32_t>((n.x * cfg_.dim_y + n.y) * cfg_.dim_z + n.z);
    }
    NodeCoord node_coord(std::uint32_t id) const;
    std::uint32_t gc_index(std::uint32_t node, int u, int v, int which) const {
        return node * static_cast<std::uint32_t>(gcs_per_node()) +
               static_cast<std::uint32_t>((v * cfg_.core_u + u) * 2 + which);
    }
    std::uint32_t icb_index(std::uint32_t node, int side, int row, int which) const {
        return node * static_cast<std::uint32_t>(icbs_per_node()) +
               static_cast<std::uint32_t>(((side * cfg_.core_v) + row) * 2 + which);
    }
    struct GcPlace { std::uint32_t node; int u, v, which; };
    GcPlace gc_place(std::uint32_t gc) const;
    struct IcbPlace { std::uint32_t node; int side, row, which; };
    IcbPlace icb_place(std::uint32_t icb) const;

    // Node-local channel adapters: index of CA (dir, slice) or -1 when that
    // dimension has extent 1. `row` is its edge-network attach row.
    int ca_local(Dir d, int slice) const { return ca_local_[static_cast<int>(d)][slice]; }
    int ca_row(int ca_local_idx) const { return ca_rows_[static_cast<std::size_t>(ca_local_idx)].row; }
    Dir ca_dir(int ca_local_idx) const { return ca_rows_[static_cast<std::size_t>(ca_local_idx)].dir; }
    int ca_slice(int ca_local_idx) const { return ca_rows_[static_cast<std::size_t>(ca_local_idx)].slice; }

    // Workload surface.
    void set_hooks(WorkloadHooks* hooks) { hooks_ = hooks; }
    std::uint32_t send_counted_write(std::uint32_t src_gc, std::uint32_t dst_gc, std::uint32_t addr,
                                     const Quad& data, WriteMode mode, PacketType ptype,
                                     std::uint32_t wk_tag = 0);
    std::uint32_t send_response(std::uint32_t src_gc, std::uint32_t dst_gc, std::uint32_t wk_tag = 0);
    std::uint32_t send_position(std::uint32_t src_gc, std::uint32_t dst_icb, const PositionPacket& p,
                                std::uint32_t wk_tag = 0);
    // Force packets are counted writes from an ICB back to a GC.
    std::uint32_t send_force(std::uint32_t src_icb, std::uint32_t dst_gc, std::uint32_t addr,
                             const Quad& data, std::uint32_t wk_tag = 0);
    void schedule_timer(SimTime when, std::uint64_t aux);
    void tick_timestep();  // end-of-step marker on every channel

    // Fences.
    int fence_begin(FencePattern pattern, int hops);  // -1 when no id available
    void fence_issue(std::uint32_t gc, int fence_id);
    bool fence_complete(int fence_id) const;
    const FenceInstance& fence(int fence_id) const { return fences_[static_cast<std::size_t>(fence_id)]; }
    std::uint64_t fence_expected_deliveries(FencePattern pattern) const;

    Gc& gc(std::uint32_t idx) { return gcs_[idx]; }
    Icb& icb(std::uint32_t idx) { return icbs_[idx]; }
    ChanAdapter& ca(std::uint32_t idx) { return cas_[idx]; }
    const std::vector<ChanAdapter>& cas() const { return cas_; }

    // Event loop. Returns false if the watchdog tripped.
    void run_until_idle();
    void run_until(SimTime t);
    bool idle() const { return events_.empty(); }

    std::uint64_t packets_injected() const { return injected_; }
    std::uint64_t packets_delivered() const { return delivered_; }
    std::uint64_t live_packets() const { return live_packets_; }

    // Diagnostics and auditing.
    std::uint64_t trace_hash() const { return trace_hash_; }
    const std::vector<DeliveryRecord>& deliveries() const { return deliveries_; }
    const std::vector<FenceTraceEvent>& fence_trace() const { return fence_trace_; }
    void enable_delivery_log(bool on) { log_deliveries_ = on; }
    ActivityStats& activity() { return activity_; }
    std::uint64_t max_active_fence_counters_per_port() const { return max_active_entries_per_port_; }
    std::string deadlock_report() const;

    // Used by tests to inspect routing decisions.
    std::uint8_t draw_dim_order(TrafficClass t) { return select_dimension_order(t, route_rng_); }

private:
    friend struct FenceTableBuilder;
    friend class FenceOracle;

    struct CaPlace { Dir dir; std::uint8_t slice; std::uint8_t row; };

    // Construction.
    void build();
    void connect(CompPort from, CompPort to, std::uint32_t latency);
    Router& router(CompKind k, std::uint32_t idx);
    OutPort& out_port(CompKind k, std::uint32_t idx, std::uint8_t port);

    // Indexing.
    std::uint32_t core_index(std::uint32_t node, int u, int v) const {
        return node * static_cast<std::uint32_t>(tiles_per_node()) +
               static_cast<std::uint32_t>(v * cfg_.core_u + u);
    }
    std::uint32_t edge_index(std::uint32_t node, int side, int col, int row) const {
        return node * static_cast<std::uint32_t>(6 * cfg_.core_v) +
               static_cast<std::uint32_t>((side * 3 + col) * cfg_.core_v + row);
    }
    std::uint32_t ra_index(std::uint32_t node, int side, int row) const {
        return node * static_cast<std::uint32_t>(2 * cfg_.core_v) +
               static_cast<std::uint32_t>(side * cfg_.core_v + row);
    }
    std::uint32_t ca_index(std::uint32_t node, int local) const {
        return node * static_cast<std::uint32_t>(cas_per_node()) + static_cast<std::uint32_t>(local);
    }

    // Packets.
    PacketId alloc_packet();
    void free_packet(PacketId id);
    Packet& pkt(PacketId id) { return pool_[id]; }

    // Event machinery.
    void post(SimTime t, EvKind kind, CompKind ck, std::uint32_t comp, std::uint8_t port,
              std::uint8_t vc, PacketId p, std::uint64_t aux = 0);
    void dispatch(const Event& e);

    // Router pipeline.
    void router_arrive(CompKind ck, std::uint32_t idx, std::uint8_t port, std::uint8_t vc, PacketId p);
    void process_head(CompKind ck, std::uint32_t idx, std::uint8_t port, std::uint8_t vc);
    void try_send(CompKind ck, std::uint32_t idx, std::uint8_t port);
    void wake_waiters(std::vector<CompPort>& waiters);
    int route_out_port(CompKind ck, std::uint32_t idx, Packet& p);
    int queue_vc(CompKind ck, const Packet& p) const;
    bool dest_has_space(const CompPort& dest, const Packet& p, bool register_waiter, CompPort waiter);
    void reserve_dest(const CompPort& dest, const Packet& p);
    void transmit(CompKind ck, std::uint32_t idx, std::uint8_t port, std::uint8_t vc);

    // Edge-leg planning.
    void plan_edge_leg(Packet& p, std::uint32_t node, int side, int entry_row, int from_channel_dir);
    int edge_route(std::uint32_t edge_idx, Packet& p);

    // Channel machinery.
    void ca_pump(std::uint32_t ca_idx);
    void ca_wire_arrive(std::uint32_t ca_idx);
    void ca_handle_record(ChanAdapter& in, const WireRecord& rec, PacketId shipped, SimTime t);
    void pack_and_ship(ChanAdapter& eg, std::uint32_t eg_idx, const WireRecord& rec, PacketId shipped,
                       std::uint32_t extra_lat);

    // Endpoints.
    void deliver(const Event& e);
    void deliver_to_gc(std::uint32_t gc_idx, Packet& p);
    void apply_gc_releases(std::uint32_t gc_idx, const std::vector<SyncMemory::Release>& rel);

    // Fences (implemented in fence.cpp).
    void fence_count(CompKind ck, std::uint32_t comp_global, std::uint8_t in_port, std::uint8_t vc,
                     PacketId p);
    void fence_count_entry(std::uint32_t node, int fence_id, std::uint64_t key, std::uint8_t level);
    void fence_fire(std::uint32_t node, int fence_id, std::uint32_t entry_idx, std::uint8_t level);
    void fence_endpoint_fire(std::uint32_t node, int fence_id, bool is_icb, std::uint32_t local_idx);
    void fence_endpoint_event(const Event& e);
    void fence_wire_emit(std::uint32_t ca_global, int fence_id, std::uint8_t vc, std::uint8_t budget);
    void fence_try_retire(int fence_id);
    const FenceTable* fence_table_for(FencePattern pattern, int hops);
    PacketId make_fence_packet(std::uint32_t node, int fence_id, std::uint8_t vc, std::uint16_t plane,
                               std::uint8_t budget);

    void note_trace(std::uint64_t a, std::uint64_t b, std::uint64_t c);

    SimConfig cfg_;
    TorusShape torus_;
    MachineShape shape_;

    std::vector<Router> core_;
    std::vector<Router> edge_;
    std::vector<Router> ras_;
    std::vector<ChanAdapter> cas_;
    std::vector<Gc> gcs_;
    std::vector<Icb> icbs_;
    std::vector<CaPlace> ca_rows_;   // node-local CA layout (shared by all nodes)
    int ca_local_[kNumDirs][2];

    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::uint64_t event_seq_ = 0;
    SimTime now_ = 0;

    std::vector<Packet> pool_;
    PacketId free_head_ = kNoPacket;
    std::uint64_t live_packets_ = 0;

    Rng route_rng_;
    Rng pkt_seed_rng_;

    WorkloadHooks* hooks_ = nullptr;

    std::uint64_t injected_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t trace_hash_ = 1469598103934665603ull;  // FNV-1a basis
    bool log_deliveries_ = false;
    std::vector<DeliveryRecord> deliveries_;
    std::uint64_t delivery_seq_ = 0;
    ActivityStats activity_;

    // Fence state.
    std::vector<FenceInstance> fences_;
    std::unordered_map<std::uint64_t, std::unique_ptr<FenceTable>> fence_tables_;
    std::vector<FenceTraceEvent> fence_trace_;
    std::uint64_t max_active_entries_per_port_ = 0;
    std::unordered_map<std::uint64_t, std::uint32_t> active_entries_per_port_;
    std::uint32_t pkt_id_next_ = 1;
};

}  // namespace flitsim
