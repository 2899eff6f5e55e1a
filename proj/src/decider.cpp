#include "gnnsim/decider.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gnnsim/error.hpp"
#include "gnnsim/rand.hpp"

namespace gnnsim {
namespace {

constexpr double kEps = 1e-6;

double floored_abs(double v) { return std::max(std::fabs(v), kEps); }

}  // namespace

double alpha_from_degrees(double avg_degree, double stddev_degree) {
    if (avg_degree <= 0.0) return 0.15;
    const double t = stddev_degree / (2.0 * avg_degree);
    return 0.15 + 0.15 * std::clamp(t, 0.0, 1.0);
}

ModelInputs ModelInputs::from_graph(const CsrGraph& g, std::uint32_t dim) {
    if (dim == 0) throw DomainError("dim must be positive");
    const DegreeStats stats = degree_stats(g);
    ModelInputs in;
    in.num_nodes = g.num_nodes;
    in.num_edges = g.num_edges();
    in.dim = dim;
    in.avg_degree = stats.avg_degree;
    in.stddev_degree = stats.stddev_degree;
    in.alpha = alpha_from_degrees(stats.avg_degree, stats.stddev_degree);
    return in;
}

double wpt(const KernelParams& p) {
    return static_cast<double>(p.ngs) * p.dim / p.dw;
}

std::uint64_t smem(const KernelParams& p) {
    return static_cast<std::uint64_t>(p.tpb / p.tpw) * p.dim * 4;
}

std::uint32_t select_dw(std::uint32_t dim, std::uint32_t tpw) {
    if (tpw == 0 || tpw % 2 != 0)
        throw DomainError("warp width must be a positive even count");
    return dim >= tpw ? tpw : tpw / 2;
}

std::uint32_t select_ngs(std::uint32_t dw, std::uint32_t /*tpb*/,
                         const ModelInputs& inputs) {
    if (dw == 0 || inputs.dim == 0)
        throw DomainError("dw and dim must be positive");
    const std::uint64_t target = static_cast<std::uint64_t>(
        std::llround(1024.0 * dw / inputs.dim));
    const std::uint64_t cap = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(inputs.avg_degree)) * 32);
    return static_cast<std::uint32_t>(std::clamp<std::uint64_t>(target, 1, cap));
}

double dp_size(std::uint64_t smem_bytes, double avg_degree) {
    if (avg_degree <= 0.0)
        throw DomainError("dp_size requires a positive average degree");
    return static_cast<double>(smem_bytes) / (avg_degree * 4.0 * 1024.0);
}

double estimate_latency(const KernelParams& p, const ModelInputs& inputs) {
    if (inputs.num_edges == 0 || inputs.num_nodes == 0)
        throw DomainError("latency model requires a non-empty graph");
    const double e = static_cast<double>(inputs.num_edges);
    const double n = static_cast<double>(inputs.num_nodes);
    const double d = static_cast<double>(inputs.dim);
    const double gs = static_cast<double>(p.ngs);
    const double denom = gs * floored_abs(p.dw - d / 3.0) *
                         floored_abs(p.tpb - std::sqrt(static_cast<double>(inputs.max_tpb)));
    const double penalty = 1.0 + std::fabs(gs - inputs.alpha * n / e);
    return e * d / denom * penalty;
}

bool candidate_feasible(const KernelParams& p, const ModelInputs& inputs) {
    return smem(p) <= inputs.smem_per_block && p.tpb <= inputs.max_tpb &&
           p.dw >= 1 && p.dw <= p.tpw;
}

bool feasibility(const KernelParams& p, const ModelInputs& inputs) {
    const double d = static_cast<double>(inputs.dim);
    const double work = static_cast<double>(p.ngs) * d / p.dw;
    if (!(work > 0.0) || work > static_cast<double>(inputs.capability))
        return false;
    if (inputs.avg_degree <= 0.0) return false;
    const double shared = static_cast<double>(p.tpb) * p.ngs /
                          (inputs.avg_degree * p.dw) * d * 4.0;
    return shared > 0.0 && shared <= static_cast<double>(inputs.smem_per_block);
}

KernelParams auto_params(const ModelInputs& inputs) {
    if (inputs.dim == 0) throw DomainError("dim must be positive");
    KernelParams p;
    p.dim = inputs.dim;
    p.dw = select_dw(inputs.dim, p.tpw);
    p.tpb = 128;
    while (p.tpb > 32 && smem(p) > inputs.smem_per_block) p.tpb /= 2;
    p.ngs = select_ngs(p.dw, p.tpb, inputs);
    p.validate();
    return p;
}

namespace {

struct Combo {
    std::uint32_t gs;
    std::uint32_t dw;
    std::uint32_t tpb;
};

KernelParams to_params(const Combo& c, std::uint32_t dim) {
    KernelParams p;
    p.ngs = c.gs;
    p.dw = c.dw;
    p.tpb = c.tpb;
    p.dim = dim;
    return p;
}

bool combo_ok(const Combo& c, const ModelInputs& inputs) {
    const KernelParams p = to_params(c, inputs.dim);
    if (c.gs == 0 || c.dw == 0 || c.dw > p.tpw || c.tpb == 0 ||
        c.tpb % p.tpw != 0 || c.tpb > 1024)
        return false;
    return candidate_feasible(p, inputs) && feasibility(p, inputs);
}

}  // namespace

ParamCandidate search_params(const ModelInputs& inputs, std::uint32_t iterations,
                             std::uint32_t population, std::uint64_t seed,
                             const SearchGrid& grid, SearchTrace* trace) {
    if (iterations == 0 || population < 2)
        throw DomainError("search needs at least one iteration and a population of two");
    if (grid.gs_values.empty() || grid.dw_values.empty() || grid.tpb_values.empty())
        throw DomainError("search grid must not be empty");

    std::vector<Combo> feasible;
    for (std::uint32_t gs : grid.gs_values)
        for (std::uint32_t dw : grid.dw_values)
            for (std::uint32_t tpb : grid.tpb_values) {
                const Combo c{gs, dw, tpb};
                if (combo_ok(c, inputs)) feasible.push_back(c);
            }
    if (feasible.empty())
        throw DomainError(
            "no feasible parameter combination in the search grid; relax the "
            "grid or raise the shared-memory / capability budgets");

    std::mt19937_64 rng(seed);
    auto score = [&](const Combo& c) {
        return estimate_latency(to_params(c, inputs.dim), inputs);
    };
    auto rank_less = [&](const std::pair<Combo, double>& a,
                         const std::pair<Combo, double>& b) {
        if (a.second != b.second) return a.second < b.second;
        if (a.first.gs != b.first.gs) return a.first.gs < b.first.gs;
        if (a.first.dw != b.first.dw) return a.first.dw < b.first.dw;
        return a.first.tpb < b.first.tpb;
    };

    std::vector<std::pair<Combo, double>> pop;
    pop.reserve(population);
    for (std::uint32_t i = 0; i < population; ++i) {
        const Combo c = feasible[draw_index(rng, feasible.size())];
        pop.emplace_back(c, score(c));
    }

    if (trace) trace->best_per_iteration.clear();
    for (std::uint32_t it = 0; it < iterations; ++it) {
        std::sort(pop.begin(), pop.end(), rank_less);
        if (trace) trace->best_per_iteration.push_back(pop.front().second);
        const std::size_t keep = std::max<std::size_t>(1, pop.size() / 2);
        pop.resize(keep);
        while (pop.size() < population) {
            const Combo& a = pop[draw_index(rng, keep)].first;
            const Combo& b = pop[draw_index(rng, keep)].first;
            Combo child{rng() & 1 ? a.gs : b.gs, rng() & 1 ? a.dw : b.dw,
                        rng() & 1 ? a.tpb : b.tpb};
            if (draw_unit(rng) < 0.2) {
                switch (draw_index(rng, 3)) {
                    case 0:
                        child.gs = grid.gs_values[draw_index(rng, grid.gs_values.size())];
                        break;
                    case 1:
                        child.dw = grid.dw_values[draw_index(rng, grid.dw_values.size())];
                        break;
                    default:
                        child.tpb = grid.tpb_values[draw_index(rng, grid.tpb_values.size())];
                }
            }
            if (!combo_ok(child, inputs))
                child = feasible[draw_index(rng, feasible.size())];
            pop.emplace_back(child, score(child));
        }
    }
    std::sort(pop.begin(), pop.end(), rank_less);
    if (trace) trace->best_per_iteration.push_back(pop.front().second);

    ParamCandidate best;
    best.params = to_params(pop.front().first, inputs.dim);
    best.estimated_latency = pop.front().second;
    best.feasible = candidate_feasible(best.params, inputs);
    return best;
}

}  // namespace gnnsim
