#include "mograph/prune.hpp"

#include "mograph/error.hpp"
#include "mograph/rng.hpp"

#include <algorithm>
#include <limits>

namespace mograph {

SccDecomposition scc_decompose(const GestureGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());
    if (n == 0) {
        throw ValidationError("scc_decompose: empty graph");
    }
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : graph.edges) {
        adj[e.src].push_back(e.dst);
    }

    SccDecomposition out;
    out.component_of.assign(n, -1);

    std::vector<int> index(n, -1), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;

    // Explicit DFS stack: (node, next child position).
    struct Frame {
        int node;
        std::size_t child;
    };
    std::vector<Frame> dfs;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) {
            continue;
        }
        dfs.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!dfs.empty()) {
            Frame& frame = dfs.back();
            const int v = frame.node;
            if (frame.child < adj[v].size()) {
                const int w = adj[v][frame.child++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    dfs.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                dfs.pop_back();
                if (!dfs.empty()) {
                    lowlink[dfs.back().node] = std::min(lowlink[dfs.back().node], lowlink[v]);
                }
                if (lowlink[v] == index[v]) {
                    std::vector<int> component;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        component.push_back(w);
                    } while (w != v);
                    std::sort(component.begin(), component.end());
                    const int ci = static_cast<int>(out.components.size());
                    for (int node : component) {
                        out.component_of[node] = ci;
                    }
                    out.components.push_back(std::move(component));
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < out.components.size(); ++c) {
        if (out.components[c].size() > out.components[best].size()) {
            best = c;
        }
    }
    out.largest_index = static_cast<int>(best);
    return out;
}

PruneResult prune_graph(const GestureGraph& graph) {
    const SccDecomposition scc = scc_decompose(graph);

    PruneResult result;
    result.graph = graph;
    result.components_before = static_cast<int>(scc.components.size());

    const std::vector<int>& main_nodes = scc.components[scc.largest_index];
    for (int ci = 0; ci < static_cast<int>(scc.components.size()); ++ci) {
        if (ci == scc.largest_index) {
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        int best_u = -1, best_v = -1;
        for (int u : main_nodes) {
            for (int v : scc.components[ci]) {
                const double d =
                    node_distance(graph.nodes[u], graph.nodes[v], graph.config);
                if (d < best || (d == best && (u < best_u || (u == best_u && v < best_v)))) {
                    best = d;
                    best_u = u;
                    best_v = v;
                }
            }
        }
        result.graph.edges.push_back({best_u, best_v, best, EdgeKind::bridge});
        result.graph.edges.push_back({best_v, best_u, best, EdgeKind::bridge});
        ++result.bridge_pairs_added;
    }
    return result;
}

double dead_end_probability(const GestureGraph& graph, int path_length, int trials,
                            std::uint64_t seed) {
    if (path_length < 1 || trials < 1) {
        throw ValidationError("dead_end_probability needs path_length >= 1 and trials >= 1");
    }
    const int n = static_cast<int>(graph.nodes.size());
    if (n == 0) {
        throw ValidationError("dead_end_probability: empty graph");
    }
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : graph.edges) {
        adj[e.src].push_back(e.dst);
    }

    int hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(trial));
        int node = static_cast<int>(rng.next_below(n));
        for (int step = 0; step < path_length; ++step) {
            const auto& next = adj[node];
            if (next.empty()) {
                ++hits;
                break;
            }
            node = next[rng.next_below(next.size())];
        }
    }
    return static_cast<double>(hits) / trials;
}

}  // namespace mograph
