#include "gnnsim/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "gnnsim/error.hpp"

namespace gnnsim {
namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

Json csr_to_json(const CsrGraph& g) {
    return Json{{"num_nodes", g.num_nodes},
                {"row_ptr", g.row_ptr},
                {"col_idx", g.col_idx}};
}

CsrGraph csr_from_json(const Json& j) {
    CsrGraph g;
    g.num_nodes = get_field<NodeId>(j, "num_nodes");
    g.row_ptr = get_field<std::vector<std::uint64_t>>(j, "row_ptr");
    g.col_idx = get_field<std::vector<NodeId>>(j, "col_idx");
    if (g.row_ptr.size() != static_cast<std::size_t>(g.num_nodes) + 1)
        throw ParseError("row_ptr must have num_nodes + 1 entries");
    if (g.row_ptr.front() != 0 || g.row_ptr.back() != g.col_idx.size())
        throw ParseError("row_ptr does not span col_idx");
    for (std::size_t i = 1; i < g.row_ptr.size(); ++i)
        if (g.row_ptr[i] < g.row_ptr[i - 1])
            throw ParseError("row_ptr must be non-decreasing");
    for (NodeId c : g.col_idx)
        if (c >= g.num_nodes) throw ParseError("col_idx entry out of range");
    return g;
}

Json mapping_to_json(const NodeMapping& m) {
    return Json{{"old_to_new", m.old_to_new}};
}

NodeMapping mapping_from_json(const Json& j) {
    return mapping_from_vector(get_field<std::vector<NodeId>>(j, "old_to_new"));
}

Json params_to_json(const KernelParams& p) {
    return Json{{"ngs", p.ngs},
                {"dw", p.dw},
                {"tpb", p.tpb},
                {"tpw", p.tpw},
                {"dim", p.dim}};
}

KernelParams params_from_json(const Json& j) {
    KernelParams p;
    p.ngs = get_field<std::uint32_t>(j, "ngs");
    p.dw = get_field<std::uint32_t>(j, "dw");
    p.tpb = get_field<std::uint32_t>(j, "tpb");
    if (j.contains("tpw")) p.tpw = get_field<std::uint32_t>(j, "tpw");
    if (j.contains("dim")) p.dim = get_field<std::uint32_t>(j, "dim");
    p.validate();
    return p;
}

Json schedule_to_json(const WarpSchedule& s) {
    Json groups = Json::array();
    for (const NeighborGroup& g : s.warps)
        groups.push_back(Json{{"id", g.id},
                              {"target", g.target},
                              {"begin", g.begin},
                              {"end", g.end}});
    return Json{{"warp_per_block", s.warp_per_block},
                {"num_warps", s.num_warps()},
                {"num_blocks", s.num_blocks()},
                {"groups", std::move(groups)}};
}

Json plan_to_json(const MemPlan& p) {
    Json entries = Json::array();
    for (const WarpPlanEntry& e : p.entries)
        entries.push_back(
            Json{{"slot", e.slot}, {"node", e.node}, {"leader", e.leader}});
    return entries;
}

Json features_to_json(const FeatureMatrix& x) {
    return Json{{"num_nodes", x.num_nodes}, {"dim", x.dim}, {"values", x.values}};
}

Json report_to_json(const CostReport& r) {
    return Json{{"atomic_ops", r.atomic_ops},
                {"global_reads", r.global_reads},
                {"global_writes", r.global_writes},
                {"global_transactions", r.global_transactions},
                {"shared_bytes_per_block", r.shared_bytes_per_block},
                {"cache_hits", r.cache_hits},
                {"cache_accesses", r.cache_accesses},
                {"cache_hit_rate", r.cache_hit_rate()}};
}

std::string report_to_csv(const CostReport& r) {
    std::ostringstream out;
    out << "atomic_ops,global_reads,global_writes,global_transactions,"
           "shared_bytes_per_block,cache_hits,cache_accesses,cache_hit_rate\n"
        << r.atomic_ops << ',' << r.global_reads << ',' << r.global_writes << ','
        << r.global_transactions << ',' << r.shared_bytes_per_block << ','
        << r.cache_hits << ',' << r.cache_accesses << ','
        << std::fixed << std::setprecision(6) << r.cache_hit_rate() << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

Json read_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace gnnsim
