#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "convote/ballots.hpp"
#include "convote/common.hpp"
#include "convote/rational.hpp"

#include "json.hpp"

namespace convote {

/// Weighted directed graph over the roster. weights[x][y] is the weight on
/// the edge x -> y; the diagonal holds loop weights. Condorcet graphs have a
/// zero diagonal and no normalizer; complemented graphs carry the normalizer
/// N their rows sum to.
struct PCGraph {
    CandidateRoster roster;
    WeightMatrix weights;
    std::optional<std::uint64_t> normalizer;

    std::uint64_t row_sum(std::size_t x) const {
        std::uint64_t s = 0;
        for (std::uint64_t w : weights[x])
            s = detail::checked_add(s, w, "graph row sum");
        return s;
    }
};

/// E(x,y) = number of voters preferring y over x; no loops.
inline PCGraph condorcet_graph(const PairwiseCounts& counts) {
    return {counts.roster, counts.n, std::nullopt};
}

/// Pad every row of a Condorcet graph with a loop up to the normalizer
/// N = |V|*(|K|-1), or to `normalizer_override` when given (which must cover
/// every row's off-diagonal sum).
inline PCGraph complement(const PCGraph& graph, std::uint64_t voters,
                          std::optional<std::uint64_t> normalizer_override = std::nullopt) {
    const std::size_t k = graph.roster.size();
    if (graph.normalizer)
        throw InputError("complement expects a plain Condorcet graph");
    for (std::size_t x = 0; x < k; ++x)
        if (graph.weights[x][x] != 0)
            throw InputError("complement expects a graph without loops");

    const std::uint64_t n = normalizer_override
        ? *normalizer_override
        : detail::checked_mul(voters, k > 0 ? k - 1 : 0, "normalizer");

    PCGraph out{graph.roster, graph.weights, n};
    for (std::size_t x = 0; x < k; ++x) {
        const std::uint64_t row = graph.row_sum(x);
        if (row > n)
            throw InputError("normalizer " + std::to_string(n) + " is smaller than the out-weight " +
                             std::to_string(row) + " of '" + graph.roster.name(x) + "'");
        out.weights[x][x] = n - row;
    }
    return out;
}

/// The two-vertex building block G_ab carried on the full roster: one edge
/// a -> b weighted by the voters preferring b over a, and a loop on a for the
/// remaining voters. The complemented graph is the union of these.
inline PCGraph atomic_graph(const PairwiseCounts& counts, std::uint64_t voters,
                            std::size_t a, std::size_t b) {
    const std::size_t k = counts.roster.size();
    if (a == b)
        throw InputError("atomic graph requires two distinct candidates");
    if (a >= k || b >= k)
        throw InputError("candidate index out of range");
    if (counts.n[a][b] > voters)
        throw InputError("pairwise count exceeds the electorate");
    PCGraph out{counts.roster, WeightMatrix(k, std::vector<std::uint64_t>(k, 0)), std::nullopt};
    out.weights[a][b] = counts.n[a][b];
    out.weights[a][a] = voters - counts.n[a][b];
    return out;
}

/// Entrywise sum; rosters may differ, the result roster is the ordered union.
inline PCGraph graph_union(const PCGraph& g1, const PCGraph& g2) {
    std::vector<std::string> names = g1.roster.names();
    for (const auto& name : g2.roster.names())
        if (!g1.roster.find(name))
            names.push_back(name);
    CandidateRoster roster(std::move(names));

    const std::size_t k = roster.size();
    PCGraph out{roster, WeightMatrix(k, std::vector<std::uint64_t>(k, 0)), std::nullopt};
    for (const PCGraph* g : {&g1, &g2}) {
        for (std::size_t x = 0; x < g->roster.size(); ++x) {
            const std::size_t gx = *roster.find(g->roster.name(x));
            for (std::size_t y = 0; y < g->roster.size(); ++y) {
                const std::size_t gy = *roster.find(g->roster.name(y));
                out.weights[gx][gy] =
                    detail::checked_add(out.weights[gx][gy], g->weights[x][y], "graph union");
            }
        }
    }
    return out;
}

enum class GraphFormat { dot, json };

/// Deterministic export, candidates in roster order. DOT omits zero-weight
/// edges; JSON mirrors the full weight matrix.
inline std::string export_graph(const PCGraph& graph, GraphFormat format) {
    const std::size_t k = graph.roster.size();
    if (format == GraphFormat::dot) {
        std::ostringstream out;
        out << "digraph pcgraph {\n";
        for (std::size_t x = 0; x < k; ++x)
            out << "  \"" << graph.roster.name(x) << "\";\n";
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = 0; y < k; ++y)
                if (graph.weights[x][y] != 0)
                    out << "  \"" << graph.roster.name(x) << "\" -> \"" << graph.roster.name(y)
                        << "\" [label=\"" << graph.weights[x][y] << "\"];\n";
        out << "}\n";
        return out.str();
    }
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["candidates"] = graph.roster.names();
    if (graph.normalizer)
        j["N"] = *graph.normalizer;
    else
        j["N"] = nullptr;
    j["weights"] = graph.weights;
    return j.dump(2) + "\n";
}

} // namespace convote
