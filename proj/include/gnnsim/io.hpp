#pragma once

#include <string>

#include <json.hpp>

#include "gnnsim/engine.hpp"
#include "gnnsim/graph.hpp"
#include "gnnsim/memplan.hpp"
#include "gnnsim/renumber.hpp"
#include "gnnsim/schedule.hpp"

namespace gnnsim {

// Insertion-ordered JSON so emitted documents keep a stable field order.
using Json = nlohmann::ordered_json;

Json csr_to_json(const CsrGraph& g);
CsrGraph csr_from_json(const Json& j);

Json mapping_to_json(const NodeMapping& m);
NodeMapping mapping_from_json(const Json& j);

Json params_to_json(const KernelParams& p);
KernelParams params_from_json(const Json& j);

Json schedule_to_json(const WarpSchedule& s);
Json plan_to_json(const MemPlan& p);

Json features_to_json(const FeatureMatrix& x);

/// Report fields in the documented CSV column order.
Json report_to_json(const CostReport& r);

/// Two CSV lines (header + values) with the fixed column order
/// atomic_ops, global_reads, global_writes, global_transactions,
/// shared_bytes_per_block, cache_hits, cache_accesses, cache_hit_rate.
std::string report_to_csv(const CostReport& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace gnnsim
