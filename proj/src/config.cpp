#include "flitsim/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace flitsim {

using nlohmann::json;

void SimConfig::validate() const {
    auto fail = [](const std::string& path, const std::string& why) {
        throw ConfigError("config " + path + ": " + why);
    };
    if (dim_x < 1 || dim_x > 32) fail("torus.x", "must be in [1, 32]");
    if (dim_y < 1 || dim_y > 32) fail("torus.y", "must be in [1, 32]");
    if (dim_z < 1 || dim_z > 32) fail("torus.z", "must be in [1, 32]");
    if (core_u < 2 || core_u > 32) fail("core.u", "must be in [2, 32]");
    if (core_v < 1 || core_v > 16) fail("core.v", "must be in [1, 16]");
    if (clock_ghz <= 0) fail("clock_ghz", "must be positive");
    if (channel_bytes_num == 0 || channel_bytes_den == 0)
        fail("channel.bytes_per_cycle", "numerator and denominator must be positive");
    if (frame_bytes < 16 || frame_bytes > 4096) fail("channel.frame_bytes", "must be in [16, 4096]");
    if (router_queue_flits < 2) fail("router_queue_flits", "must be at least 2");
    if (ca_staging_flits < 4) fail("ca_staging_flits", "must be at least 4");
    if (max_fences_in_flight < 1 || max_fences_in_flight > 14)
        fail("fence.max_in_flight", "must be in [1, 14]");
    if (edge_fence_window < 1) fail("fence.edge_window", "must be at least 1");
    if (sram_quads < 16) fail("sram_quads", "must be at least 16");
    if (max_blocked_reads < 1) fail("max_blocked_reads", "must be at least 1");
}

namespace {

template <typename T>
void load(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

SimConfig SimConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (j.value("version", 1) != 1) throw ConfigError("config version: unsupported");

    SimConfig c;
    if (j.contains("torus")) {
        const auto& t = j["torus"];
        load(t, "x", c.dim_x);
        load(t, "y", c.dim_y);
        load(t, "z", c.dim_z);
    }
    if (j.contains("core")) {
        const auto& t = j["core"];
        load(t, "u", c.core_u);
        load(t, "v", c.core_v);
    }
    load(j, "clock_ghz", c.clock_ghz);
    if (j.contains("latency")) {
        const auto& t = j["latency"];
        load(t, "sender_overhead", c.sender_overhead);
        load(t, "receiver_overhead", c.receiver_overhead);
        load(t, "core_hop_u", c.core_hop_u);
        load(t, "core_hop_v", c.core_hop_v);
        load(t, "edge_hop", c.edge_hop);
        load(t, "row_adapter", c.row_adapter);
        load(t, "ca_egress", c.ca_egress);
        load(t, "ca_ingress", c.ca_ingress);
        load(t, "wire", c.wire);
    }
    if (j.contains("channel")) {
        const auto& t = j["channel"];
        load(t, "bytes_per_cycle_num", c.channel_bytes_num);
        load(t, "bytes_per_cycle_den", c.channel_bytes_den);
        load(t, "frame_bytes", c.frame_bytes);
        load(t, "staging_flits", c.ca_staging_flits);
    }
    load(j, "router_queue_flits", c.router_queue_flits);
    if (j.contains("compression")) {
        const auto& t = j["compression"];
        load(t, "inz", c.inz_enabled);
        load(t, "pcache", c.pcache_enabled);
        load(t, "pcache_threshold", c.pcache_threshold);
    }
    if (j.contains("fence")) {
        const auto& t = j["fence"];
        load(t, "issue", c.fence_issue);
        load(t, "deliver", c.fence_deliver);
        load(t, "adapter", c.fence_adapter);
        load(t, "max_in_flight", c.max_fences_in_flight);
        load(t, "edge_window", c.edge_fence_window);
    }
    load(j, "sram_quads", c.sram_quads);
    load(j, "max_blocked_reads", c.max_blocked_reads);
    load(j, "seed", c.seed);
    load(j, "watchdog_cycles", c.watchdog_cycles);
    if (j.contains("stats")) {
        const auto& t = j["stats"];
        load(t, "activity_bucket_cycles", c.activity_bucket_cycles);
        load(t, "trace_fences", c.trace_fences);
    }
    c.validate();
    return c;
}

SimConfig SimConfig::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_json_text(ss.str());
}

std::string SimConfig::to_json_text() const {
    json j;
    j["version"] = 1;
    j["torus"] = {{"x", dim_x}, {"y", dim_y}, {"z", dim_z}};
    j["core"] = {{"u", core_u}, {"v", core_v}};
    j["clock_ghz"] = clock_ghz;
    j["latency"] = {{"sender_overhead", sender_overhead},
                    {"receiver_overhead", receiver_overhead},
                    {"core_hop_u", core_hop_u},
                    {"core_hop_v", core_hop_v},
                    {"edge_hop", edge_hop},
                    {"row_adapter", row_adapter},
                    {"ca_egress", ca_egress},
                    {"ca_ingress", ca_ingress},
                    {"wire", wire}};
    j["channel"] = {{"bytes_per_cycle_num", channel_bytes_num},
                    {"bytes_per_cycle_den", channel_bytes_den},
                    {"frame_bytes", frame_bytes},
                    {"staging_flits", ca_staging_flits}};
    j["router_queue_flits"] = router_queue_flits;
    j["compression"] = {
        {"inz", inz_enabled}, {"pcache", pcache_enabled}, {"pcache_threshold", pcache_threshold}};
    j["fence"] = {{"issue", fence_issue},
                  {"deliver", fence_deliver},
                  {"adapter", fence_adapter},
                  {"max_in_flight", max_fences_in_flight},
                  {"edge_window", edge_fence_window}};
    j["sram_quads"] = sram_quads;
    j["max_blocked_reads"] = max_blocked_reads;
    j["seed"] = seed;
    j["watchdog_cycles"] = watchdog_cycles;
    j["stats"] = {{"activity_bucket_cycles", activity_bucket_cycles}, {"trace_fences", trace_fences}};
    return j.dump(2) + "\n";
}

}  // namespace flitsim
