#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gnnsim/decider.hpp"
#include "gnnsim/engine.hpp"
#include "gnnsim/error.hpp"
#include "gnnsim/graph.hpp"
#include "gnnsim/io.hpp"
#include "gnnsim/memplan.hpp"
#include "gnnsim/pipeline.hpp"
#include "gnnsim/renumber.hpp"
#include "gnnsim/schedule.hpp"

namespace {

using gnnsim::Json;

gnnsim::Strategy parse_strategy(const std::string& s) {
    if (s == "naive") return gnnsim::Strategy::NaiveAtomic;
    if (s == "unit") return gnnsim::Strategy::UnitSync;
    return gnnsim::Strategy::WarpShared;
}

gnnsim::DimMode parse_dim_mode(const std::string& s) {
    return s == "seq" ? gnnsim::DimMode::Sequential : gnnsim::DimMode::Cyclic;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        gnnsim::write_text_file(out_path, text);
}

void emit_json(const std::string& out_path, const Json& j) {
    emit(out_path, j.dump(2) + "\n");
}

// Common per-subcommand option bundle.
struct CommonOpts {
    std::string input;
    std::string out;
    bool json = false;
    std::uint32_t dim = 16;
    std::optional<std::uint32_t> ngs;
    std::optional<std::uint32_t> dw;
    std::optional<std::uint32_t> tpb;
    std::string strategy = "warpshared";
    std::string dim_mode = "cyclic";
    std::uint64_t cache_kb = 64;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

void add_input_flag(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input", o.input, "edge-list file")->required();
}

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--dim", o.dim, "embedding dimension")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--ngs", o.ngs, "neighbor-group size")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dw", o.dw, "dimension workers per warp")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tpb", o.tpb, "threads per block");
}

// Explicit kernel parameters when any of --ngs/--dw/--tpb was given;
// unset fields keep their defaults.
std::optional<gnnsim::KernelParams> explicit_params(const CommonOpts& o) {
    if (!o.ngs && !o.dw && !o.tpb) return std::nullopt;
    gnnsim::KernelParams p;
    p.dim = o.dim;
    if (o.ngs) p.ngs = *o.ngs;
    if (o.dw) p.dw = *o.dw;
    if (o.tpb) p.tpb = *o.tpb;
    p.validate();
    return p;
}

gnnsim::KernelParams params_or_defaults(const CommonOpts& o) {
    if (auto p = explicit_params(o)) return *p;
    gnnsim::KernelParams p;
    p.dim = o.dim;
    p.validate();
    return p;
}

Json stats_json(const gnnsim::StatsReport& r) {
    return Json{{"num_nodes", r.num_nodes},
                {"num_edges", r.num_edges},
                {"avg_degree", r.degrees.avg_degree},
                {"max_degree", r.degrees.max_degree},
                {"stddev_degree", r.degrees.stddev_degree},
                {"aes", r.aes},
                {"sqrt_aes", r.sqrt_aes},
                {"threshold", r.threshold},
                {"reorder", r.reorder}};
}

std::string stats_text(const gnnsim::StatsReport& r) {
    std::ostringstream out;
    out << "num_nodes " << r.num_nodes << '\n'
        << "num_edges " << r.num_edges << '\n'
        << "avg_degree " << r.degrees.avg_degree << '\n'
        << "max_degree " << r.degrees.max_degree << '\n'
        << "stddev_degree " << r.degrees.stddev_degree << '\n'
        << "aes " << r.aes << '\n'
        << "sqrt_aes " << r.sqrt_aes << '\n'
        << "threshold " << r.threshold << '\n'
        << "reorder " << (r.reorder ? "yes" : "no") << '\n';
    return out.str();
}

void cmd_stats(const CommonOpts& o) {
    const gnnsim::StatsReport r =
        gnnsim::analyze(gnnsim::load_edge_list_file(o.input));
    if (o.json)
        emit_json(o.out, stats_json(r));
    else
        emit(o.out, stats_text(r));
}

struct GenerateOpts {
    std::uint32_t communities = 2;
    std::uint32_t size = 64;
    double p_in = 0.3;
    double p_out = 0.05;
    bool shuffle = false;
    std::uint64_t seed = 1;
    std::string out;
};

void cmd_generate(const GenerateOpts& o) {
    const gnnsim::EdgeList el = gnnsim::planted_partition(
        o.communities, o.size, o.p_in, o.p_out, o.shuffle, o.seed);
    emit(o.out, gnnsim::edge_list_text(el));
}

void cmd_reorder(const CommonOpts& o) {
    const gnnsim::EdgeList el = gnnsim::load_edge_list_file(o.input);
    const gnnsim::ReorderResult r = gnnsim::reorder_edges(el);
    Json summary{{"num_communities", r.num_communities},
                 {"modularity", r.modularity},
                 {"aes_before", r.aes_before},
                 {"aes_after", r.aes_after}};
    if (!o.out.empty()) {
        gnnsim::write_json_file(o.out, gnnsim::mapping_to_json(r.mapping));
    } else {
        summary["mapping"] = gnnsim::mapping_to_json(r.mapping);
    }
    if (o.json) {
        std::cout << summary.dump(2) << '\n';
    } else {
        std::cout << "num_communities " << r.num_communities << '\n'
                  << "modularity " << r.modularity << '\n'
                  << "aes_before " << r.aes_before << '\n'
                  << "aes_after " << r.aes_after << '\n';
        if (o.out.empty())
            std::cout << "mapping " << gnnsim::mapping_to_json(r.mapping).dump()
                      << '\n';
    }
}

void cmd_schedule(const CommonOpts& o) {
    const gnnsim::CsrGraph g =
        gnnsim::to_csr(gnnsim::load_edge_list_file(o.input), true);
    const gnnsim::KernelParams p = params_or_defaults(o);
    const gnnsim::WarpSchedule sched =
        gnnsim::map_warps(gnnsim::partition_neighbors(g, p.ngs), p);
    Json j = gnnsim::schedule_to_json(sched);
    j["params"] = gnnsim::params_to_json(p);
    emit_json(o.out, j);
}

void cmd_plan(const CommonOpts& o) {
    const gnnsim::CsrGraph g =
        gnnsim::to_csr(gnnsim::load_edge_list_file(o.input), true);
    const gnnsim::KernelParams p = params_or_defaults(o);
    const gnnsim::WarpSchedule sched =
        gnnsim::map_warps(gnnsim::partition_neighbors(g, p.ngs), p);
    emit_json(o.out, gnnsim::plan_to_json(gnnsim::build_mem_plan(sched, p)));
}

void cmd_simulate(const CommonOpts& o) {
    const gnnsim::CsrGraph g =
        gnnsim::to_csr(gnnsim::load_edge_list_file(o.input), true);
    const gnnsim::KernelParams p = params_or_defaults(o);
    const gnnsim::WarpSchedule sched =
        gnnsim::map_warps(gnnsim::partition_neighbors(g, p.ngs), p);
    gnnsim::CacheConfig cache;
    cache.capacity = o.cache_kb * 1024;
    const auto [hits, accesses] =
        gnnsim::simulate_cache(g, sched, cache, p.dim);
    const double rate = accesses ? static_cast<double>(hits) / accesses : 0.0;
    if (o.json) {
        emit_json(o.out, Json{{"cache_hits", hits},
                              {"cache_accesses", accesses},
                              {"cache_hit_rate", rate}});
    } else {
        std::ostringstream out;
        out << "cache_hits " << hits << '\n'
            << "cache_accesses " << accesses << '\n'
            << "cache_hit_rate " << rate << '\n';
        emit(o.out, out.str());
    }
}

void cmd_decide(const CommonOpts& o) {
    const gnnsim::CsrGraph g =
        gnnsim::to_csr(gnnsim::load_edge_list_file(o.input), true);
    const gnnsim::ModelInputs inputs = gnnsim::ModelInputs::from_graph(g, o.dim);
    const gnnsim::KernelParams p = gnnsim::auto_params(inputs);
    Json j = gnnsim::params_to_json(p);
    j["wpt"] = gnnsim::wpt(p);
    j["smem_bytes"] = gnnsim::smem(p);
    j["feasible"] = gnnsim::candidate_feasible(p, inputs);
    emit_json(o.out, j);
}

struct SearchOpts {
    std::uint32_t iterations = 15;
    std::uint32_t population = 32;
};

void cmd_search(const CommonOpts& o, const SearchOpts& so) {
    const gnnsim::CsrGraph g =
        gnnsim::to_csr(gnnsim::load_edge_list_file(o.input), true);
    const gnnsim::ModelInputs inputs = gnnsim::ModelInputs::from_graph(g, o.dim);
    gnnsim::SearchTrace trace;
    const gnnsim::ParamCandidate best = gnnsim::search_params(
        inputs, so.iterations, so.population, o.seed, {}, &trace);
    if (o.json) {
        Json j{{"params", gnnsim::params_to_json(best.params)},
               {"estimated_latency", best.estimated_latency},
               {"feasible", best.feasible},
               {"trace", trace.best_per_iteration}};
        emit_json(o.out, j);
        return;
    }
    std::ostringstream csv;
    csv << "iteration,best_latency\n";
    for (std::size_t i = 0; i < trace.best_per_iteration.size(); ++i)
        csv << i << ',' << trace.best_per_iteration[i] << '\n';
    emit(o.out, csv.str());
    std::cerr << "best ngs=" << best.params.ngs << " dw=" << best.params.dw
              << " tpb=" << best.params.tpb
              << " latency=" << best.estimated_latency << '\n';
}

struct RunOpts {
    bool force_reorder = false;
    bool force_no_reorder = false;
    std::string features_out;
};

void cmd_run(const CommonOpts& o, const RunOpts& ro) {
    gnnsim::RunConfig cfg;
    cfg.input = o.input;
    cfg.dim = o.dim;
    cfg.params = explicit_params(o);
    cfg.strategy = parse_strategy(o.strategy);
    cfg.dim_mode = parse_dim_mode(o.dim_mode);
    if (o.cache_kb == 0)
        cfg.cache.reset();
    else
        cfg.cache = gnnsim::CacheConfig{o.cache_kb * 1024, 128};
    if (ro.force_reorder) cfg.force_reorder = true;
    if (ro.force_no_reorder) cfg.force_reorder = false;
    cfg.seed = o.seed;
    cfg.workers = o.workers;

    const gnnsim::EdgeList el = gnnsim::load_edge_list_file(o.input);
    const gnnsim::RunResult r = gnnsim::run_pipeline(el, cfg);

    std::cerr << "params ngs=" << r.params.ngs << " dw=" << r.params.dw
              << " tpb=" << r.params.tpb << " dim=" << r.params.dim
              << " reordered=" << (r.reordered ? "yes" : "no") << '\n';
    if (!ro.features_out.empty())
        gnnsim::write_json_file(ro.features_out,
                                gnnsim::features_to_json(r.output));
    if (o.json) {
        Json j{{"stats", stats_json(r.stats)},
               {"reordered", r.reordered},
               {"params", gnnsim::params_to_json(r.params)},
               {"report", gnnsim::report_to_json(r.report)}};
        if (r.reorder)
            j["reorder"] = Json{{"num_communities", r.reorder->num_communities},
                                {"modularity", r.reorder->modularity},
                                {"aes_before", r.reorder->aes_before},
                                {"aes_after", r.reorder->aes_after}};
        emit_json(o.out, j);
    } else {
        emit(o.out, gnnsim::report_to_csv(r.report));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"input-adaptive GNN aggregation scheduler and cost simulator"};
    app.require_subcommand(1);

    CommonOpts stats_o, reorder_o, schedule_o, plan_o, simulate_o, decide_o,
        search_o, run_o;
    GenerateOpts gen_o;
    SearchOpts search_extra;
    RunOpts run_extra;

    CLI::App* c_stats = app.add_subcommand("stats", "analyze an edge list");
    add_input_flag(c_stats, stats_o);
    c_stats->add_option("--out", stats_o.out, "output path (default stdout)");
    c_stats->add_flag("--json", stats_o.json, "emit JSON");

    CLI::App* c_gen =
        app.add_subcommand("generate", "write a planted-partition graph");
    c_gen->add_option("--communities", gen_o.communities)->check(CLI::PositiveNumber);
    c_gen->add_option("--size", gen_o.size, "nodes per community")
        ->check(CLI::PositiveNumber);
    c_gen->add_option("--p-in", gen_o.p_in, "intra-community edge probability")
        ->check(CLI::Range(0.0, 1.0));
    c_gen->add_option("--p-out", gen_o.p_out, "cross-community edge probability")
        ->check(CLI::Range(0.0, 1.0));
    c_gen->add_flag("--shuffle", gen_o.shuffle, "randomly permute node ids");
    c_gen->add_option("--seed", gen_o.seed);
    c_gen->add_option("--out", gen_o.out, "output path (default stdout)");

    CLI::App* c_reorder =
        app.add_subcommand("reorder", "community renumbering; exports the mapping");
    add_input_flag(c_reorder, reorder_o);
    c_reorder->add_option("--out", reorder_o.out, "mapping JSON path");
    c_reorder->add_flag("--json", reorder_o.json, "emit JSON summary");

    CLI::App* c_schedule =
        app.add_subcommand("schedule", "neighbor groups and block layout as JSON");
    add_input_flag(c_schedule, schedule_o);
    add_param_flags(c_schedule, schedule_o);
    c_schedule->add_option("--out", schedule_o.out, "output path (default stdout)");

    CLI::App* c_plan =
        app.add_subcommand("plan", "shared-memory slot plan as JSON");
    add_input_flag(c_plan, plan_o);
    add_param_flags(c_plan, plan_o);
    c_plan->add_option("--out", plan_o.out, "output path (default stdout)");

    CLI::App* c_sim =
        app.add_subcommand("simulate", "per-block LRU cache replay");
    add_input_flag(c_sim, simulate_o);
    add_param_flags(c_sim, simulate_o);
    c_sim->add_option("--cache-kb", simulate_o.cache_kb, "cache capacity in KiB")
        ->check(CLI::PositiveNumber);
    c_sim->add_option("--out", simulate_o.out, "output path (default stdout)");
    c_sim->add_flag("--json", simulate_o.json, "emit JSON");

    CLI::App* c_decide =
        app.add_subcommand("decide", "auto-select kernel parameters");
    add_input_flag(c_decide, decide_o);
    c_decide->add_option("--dim", decide_o.dim)->check(CLI::PositiveNumber);
    c_decide->add_option("--out", decide_o.out, "output path (default stdout)");

    CLI::App* c_search =
        app.add_subcommand("search", "crossover parameter search");
    add_input_flag(c_search, search_o);
    c_search->add_option("--dim", search_o.dim)->check(CLI::PositiveNumber);
    c_search->add_option("--seed", search_o.seed);
    c_search->add_option("--iterations", search_extra.iterations)
        ->check(CLI::Range(1u, 1000u));
    c_search->add_option("--population", search_extra.population)
        ->check(CLI::Range(2u, 4096u));
    c_search->add_option("--out", search_o.out, "trace CSV path (default stdout)");
    c_search->add_flag("--json", search_o.json, "emit JSON instead of CSV");

    CLI::App* c_run = app.add_subcommand("run", "full pipeline with cost report");
    add_input_flag(c_run, run_o);
    add_param_flags(c_run, run_o);
    c_run->add_option("--strategy", run_o.strategy)
        ->check(CLI::IsMember({"naive", "unit", "warpshared"}));
    c_run->add_option("--dim-mode", run_o.dim_mode)
        ->check(CLI::IsMember({"seq", "cyclic"}));
    c_run->add_option("--cache-kb", run_o.cache_kb,
                      "cache capacity in KiB (0 disables the replay)");
    c_run->add_option("--seed", run_o.seed, "feature seed");
    c_run->add_option("--workers", run_o.workers, "parallel block workers");
    c_run->add_flag("--reorder", run_extra.force_reorder, "force renumbering");
    c_run->add_flag("--no-reorder", run_extra.force_no_reorder,
                    "skip renumbering");
    c_run->add_option("--out", run_o.out, "report path (default stdout)");
    c_run->add_flag("--json", run_o.json, "emit JSON instead of CSV");
    c_run->add_option("--features-out", run_extra.features_out,
                      "write aggregated features as JSON");

    try {
        app.parse(argc, argv);
        if (c_run->count("--reorder") && c_run->count("--no-reorder"))
            throw gnnsim::DomainError("--reorder and --no-reorder conflict");
        if (c_stats->parsed()) cmd_stats(stats_o);
        if (c_gen->parsed()) cmd_generate(gen_o);
        if (c_reorder->parsed()) cmd_reorder(reorder_o);
        if (c_schedule->parsed()) cmd_schedule(schedule_o);
        if (c_plan->parsed()) cmd_plan(plan_o);
        if (c_sim->parsed()) cmd_simulate(simulate_o);
        if (c_decide->parsed()) cmd_decide(decide_o);
        if (c_search->parsed()) cmd_search(search_o, search_extra);
        if (c_run->parsed()) cmd_run(run_o, run_extra);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const gnnsim::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const gnnsim::DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const gnnsim::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const gnnsim::InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
