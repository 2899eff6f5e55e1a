#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef GNNSIM_CLI_PATH
#error "GNNSIM_CLI_PATH must point at the command-line binary"
#endif

namespace {

using Json = nlohmann::json;

struct CliResult {
    int exit_code = -1;
    std::string output;
};

// Runs the binary with the given argument string and captures stdout
// (stderr optionally folded in). The exit code is the process status.
CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string("\"") + GNNSIM_CLI_PATH + "\" " + args +
                            (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

std::size_t line_count(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("stats reports the edge-list summary") {
    FileGuard f{temp_path("gnnsim_cli_path.txt")};
    write_file(f.path, "0 1\n1 2\n");

    const CliResult text = run_cli("stats --input " + f.path);
    CHECK(text.exit_code == 0);
    CHECK(text.output.find("num_nodes 3") != std::string::npos);
    CHECK(text.output.find("num_edges 2") != std::string::npos);
    CHECK(text.output.find("aes 1") != std::string::npos);

    const CliResult json = run_cli("stats --json --input " + f.path);
    CHECK(json.exit_code == 0);
    const Json j = Json::parse(json.output);
    CHECK(j["num_nodes"] == 3);
    CHECK(j["num_edges"] == 2);
    CHECK(j["aes"] == doctest::Approx(1.0));
    CHECK(j.contains("reorder"));
}

TEST_CASE("usage problems exit with code one") {
    CHECK(run_cli("").exit_code == 1);               // missing subcommand
    CHECK(run_cli("bogus").exit_code == 1);          // unknown subcommand
    CHECK(run_cli("stats").exit_code == 1);          // missing --input
    FileGuard f{temp_path("gnnsim_cli_usage.txt")};
    write_file(f.path, "0 1\n");
    CHECK(run_cli("run --input " + f.path + " --strategy bogus").exit_code == 1);
    CHECK(run_cli("generate --p-in 1.5").exit_code == 1);
}

TEST_CASE("input problems exit with code two") {
    const CliResult missing =
        run_cli("stats --input " + temp_path("gnnsim_cli_absent.txt"), true);
    CHECK(missing.exit_code == 2);

    FileGuard empty{temp_path("gnnsim_cli_empty.txt")};
    write_file(empty.path, "# only a comment\n");
    const CliResult no_edges = run_cli("stats --input " + empty.path, true);
    CHECK(no_edges.exit_code == 2);
    CHECK(no_edges.output.find("no edges") != std::string::npos);

    FileGuard bad{temp_path("gnnsim_cli_bad.txt")};
    write_file(bad.path, "0 one\n");
    CHECK(run_cli("stats --input " + bad.path, true).exit_code == 2);

    FileGuard conflict{temp_path("gnnsim_cli_conflict.txt")};
    write_file(conflict.path, "0 1\n");
    CHECK(run_cli("run --input " + conflict.path + " --reorder --no-reorder")
              .exit_code == 2);
}

TEST_CASE("generate writes a deterministic planted graph") {
    const std::string args =
        "generate --communities 2 --size 16 --p-in 0.5 --p-out 0.1 --seed 7";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.rfind("nodes 32\n", 0) == 0);

    FileGuard f{temp_path("gnnsim_cli_gen.txt")};
    CHECK(run_cli(args + " --out " + f.path).exit_code == 0);
    std::ifstream in(f.path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "nodes 32");
}

TEST_CASE("run emits the cost report as CSV or JSON") {
    FileGuard f{temp_path("gnnsim_cli_run.txt")};
    REQUIRE(run_cli("generate --communities 2 --size 16 --p-in 0.5 --p-out 0.1 "
                    "--seed 9 --out " + f.path).exit_code == 0);

    const std::string base = "run --input " + f.path +
                             " --ngs 4 --dw 8 --tpb 64 --dim 8 --no-reorder";
    const CliResult csv = run_cli(base);
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.rfind("atomic_ops,global_reads,global_writes,"
                           "global_transactions,shared_bytes_per_block,"
                           "cache_hits,cache_accesses,cache_hit_rate\n", 0) == 0);
    CHECK(line_count(csv.output) == 2);

    const CliResult json = run_cli(base + " --json");
    CHECK(json.exit_code == 0);
    const Json j = Json::parse(json.output);
    CHECK(j["params"]["ngs"] == 4);
    CHECK(j["params"]["dw"] == 8);
    CHECK(j["params"]["tpb"] == 64);
    CHECK(j["params"]["dim"] == 8);
    CHECK(j["reordered"] == false);
    CHECK(j["report"]["global_reads"].get<std::uint64_t>() > 0);
    CHECK(j["stats"]["num_nodes"] == 32);

    // Cache replay off: the cache counters stay zero.
    const CliResult no_cache = run_cli(base + " --cache-kb 0 --json");
    CHECK(no_cache.exit_code == 0);
    const Json nc = Json::parse(no_cache.output);
    CHECK(nc["report"]["cache_accesses"] == 0);
    CHECK(nc["report"]["cache_hits"] == 0);
}

TEST_CASE("run exports aggregated features") {
    FileGuard f{temp_path("gnnsim_cli_feat_in.txt")};
    write_file(f.path, "0 1\n1 2\n2 3\n");
    FileGuard out{temp_path("gnnsim_cli_feat_out.json")};
    const CliResult r = run_cli("run --input " + f.path +
                                " --dim 4 --no-reorder --features-out " + out.path);
    CHECK(r.exit_code == 0);
    std::ifstream in(out.path);
    REQUIRE(in.good());
    const Json j = Json::parse(in);
    CHECK(j["num_nodes"] == 4);
    CHECK(j["dim"] == 4);
    CHECK(j["values"].size() == 16);
}

TEST_CASE("scheduling and planning subcommands emit JSON") {
    FileGuard f{temp_path("gnnsim_cli_sched.txt")};
    write_file(f.path, "0 1\n0 2\n0 3\n1 2\n");

    const CliResult sched =
        run_cli("schedule --input " + f.path + " --ngs 2 --tpb 64");
    CHECK(sched.exit_code == 0);
    const Json js = Json::parse(sched.output);
    CHECK(js["warp_per_block"] == 2);
    CHECK(js["groups"].is_array());
    CHECK(js["params"]["ngs"] == 2);

    const CliResult plan = run_cli("plan --input " + f.path + " --ngs 2 --tpb 64");
    CHECK(plan.exit_code == 0);
    const Json jp = Json::parse(plan.output);
    REQUIRE(jp.is_array());
    CHECK(jp.size() == js["groups"].size());
    CHECK(jp[0].contains("slot"));
    CHECK(jp[0].contains("leader"));
}

TEST_CASE("cache simulation subcommand reports hit counts") {
    FileGuard f{temp_path("gnnsim_cli_sim.txt")};
    write_file(f.path, "0 1\n0 2\n1 2\n");
    const CliResult text =
        run_cli("simulate --input " + f.path + " --ngs 1 --dim 16 --cache-kb 16");
    CHECK(text.exit_code == 0);
    CHECK(text.output.find("cache_hits") != std::string::npos);
    CHECK(text.output.find("cache_accesses") != std::string::npos);

    const CliResult json = run_cli("simulate --json --input " + f.path);
    CHECK(json.exit_code == 0);
    const Json j = Json::parse(json.output);
    CHECK(j["cache_accesses"].get<std::uint64_t>() > 0);
}

TEST_CASE("decide picks feasible parameters") {
    FileGuard f{temp_path("gnnsim_cli_decide.txt")};
    REQUIRE(run_cli("generate --communities 2 --size 32 --p-in 0.4 --p-out 0.05 "
                    "--seed 4 --out " + f.path).exit_code == 0);
    const CliResult r = run_cli("decide --input " + f.path + " --dim 16");
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.output);
    CHECK(j["dw"] == 16);
    CHECK(j["ngs"].get<std::uint32_t>() >= 1);
    CHECK(j["feasible"] == true);
    CHECK(j.contains("wpt"));
    CHECK(j.contains("smem_bytes"));
}

TEST_CASE("search emits a trace and a best point") {
    FileGuard f{temp_path("gnnsim_cli_search.txt")};
    REQUIRE(run_cli("generate --communities 2 --size 32 --p-in 0.4 --p-out 0.05 "
                    "--seed 4 --out " + f.path).exit_code == 0);

    const CliResult csv = run_cli("search --input " + f.path +
                                  " --dim 32 --iterations 5 --population 8 --seed 3");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.rfind("iteration,best_latency\n", 0) == 0);
    CHECK(line_count(csv.output) == 7);  // header + iterations + 1

    const CliResult json = run_cli("search --json --input " + f.path +
                                   " --dim 32 --iterations 5 --population 8 --seed 3");
    CHECK(json.exit_code == 0);
    const Json j = Json::parse(json.output);
    CHECK(j["feasible"] == true);
    CHECK(j["trace"].size() == 6);
    CHECK(j["params"].contains("ngs"));
    CHECK(j["estimated_latency"].get<double>() > 0.0);
}

TEST_CASE("reorder exports the mapping") {
    FileGuard f{temp_path("gnnsim_cli_reorder.txt")};
    write_file(f.path, "0 2\n2 4\n0 4\n1 3\n3 5\n1 5\n");

    const CliResult json = run_cli("reorder --json --input " + f.path);
    CHECK(json.exit_code == 0);
    const Json j = Json::parse(json.output);
    CHECK(j["num_communities"] == 2);
    CHECK(j["aes_after"].get<double>() < j["aes_before"].get<double>());
    CHECK(j["mapping"]["old_to_new"].size() == 6);

    FileGuard map{temp_path("gnnsim_cli_mapping.json")};
    CHECK(run_cli("reorder --input " + f.path + " --out " + map.path).exit_code == 0);
    std::ifstream in(map.path);
    REQUIRE(in.good());
    const Json jm = Json::parse(in);
    CHECK(jm["old_to_new"].size() == 6);
}

}  // TEST_SUITE
