#pragma once

#include <algorithm>
#include <limits>
#include <tuple>
#include <vector>

#include "selgrade/chain_graph.hpp"
#include "selgrade/error.hpp"

namespace selgrade {

struct SccResult {
    std::vector<int> comp_of;  // node -> component id
    int comp_count = 0;
};

// iterative Tarjan; component ids in reverse topological discovery order
template <class NeighborFn>
SccResult tarjan_scc(int n, NeighborFn&& out) {
    SccResult res;
    res.comp_of.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack, call_node, call_pos;
    std::vector<char> on_stack(n, 0);
    int next_index = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call_node.assign(1, root);
        call_pos.assign(1, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call_node.empty()) {
            int v = call_node.back();
            auto&& nbrs = out(v);
            if (call_pos.back() < static_cast<int>(nbrs.size())) {
                int w = nbrs[call_pos.back()++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call_node.push_back(w);
                    call_pos.push_back(0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        res.comp_of[w] = res.comp_count;
                    } while (w != v);
                    ++res.comp_count;
                }
                call_node.pop_back();
                call_pos.pop_back();
                if (!call_node.empty()) {
                    int parent = call_node.back();
                    low[parent] = std::min(low[parent], low[v]);
                }
            }
        }
    }
    return res;
}

namespace detail {

struct AdjView {
    const std::vector<std::vector<int>>* adj;
    const std::vector<int>& operator()(int v) const { return (*adj)[v]; }
};

inline SccResult graph_scc(const ChainGraph& g) {
    std::vector<std::vector<int>> adj(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) {
        auto [b, e] = g.out_edges(v);
        adj[v].reserve(e - b);
        for (const auto* p = b; p != e; ++p) adj[v].push_back(p->to);
    }
    return tarjan_scc(g.node_count(), AdjView{&adj});
}

}  // namespace detail

// chain-recurrent components: strongly connected components that contain a cycle,
// ordered by their smallest cell id; transient singletons are dropped
inline std::vector<std::vector<int>> strongly_connected_components(const ChainGraph& g) {
    SccResult scc = detail::graph_scc(g);
    std::vector<std::vector<int>> comps(scc.comp_count);
    for (int v = 0; v < g.node_count(); ++v) comps[scc.comp_of[v]].push_back(v);

    std::vector<std::vector<int>> recurrent;
    for (auto& comp : comps) {
        bool cycle = comp.size() > 1;
        if (!cycle) cycle = g.find_edge(comp[0], comp[0]) != nullptr;
        if (cycle) recurrent.push_back(std::move(comp));  // members already ascending
    }
    std::sort(recurrent.begin(), recurrent.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return recurrent;
}

struct ComponentOrder {
    // reach[i][j]: a chain leads from component i to component j
    std::vector<std::vector<char>> reach;
    std::vector<int> linear_order;  // component indices, sources first
    bool non_linear = false;        // some pair is incomparable (discretization artifact)
};

// reachability order on the condensation, connecting orbits may pass through
// transient cells; linearized topologically
inline ComponentOrder component_order(const ChainGraph& g, const std::vector<std::vector<int>>& comps) {
    const int n = g.node_count();
    SccResult scc = detail::graph_scc(g);

    // condensation adjacency over all sccs
    std::vector<std::vector<int>> cadj(scc.comp_count);
    for (int v = 0; v < n; ++v) {
        auto [b, e] = g.out_edges(v);
        for (const auto* p = b; p != e; ++p)
            if (scc.comp_of[v] != scc.comp_of[p->to]) cadj[scc.comp_of[v]].push_back(scc.comp_of[p->to]);
    }
    for (auto& v : cadj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    const int k = static_cast<int>(comps.size());
    std::vector<int> scc_of_comp(k);
    for (int i = 0; i < k; ++i) scc_of_comp[i] = scc.comp_of[comps[i].front()];

    ComponentOrder out;
    out.reach.assign(k, std::vector<char>(k, 0));
    std::vector<char> seen(scc.comp_count);
    std::vector<int> queue;
    for (int i = 0; i < k; ++i) {
        std::fill(seen.begin(), seen.end(), 0);
        queue.assign(1, scc_of_comp[i]);
        seen[scc_of_comp[i]] = 1;
        for (size_t qi = 0; qi < queue.size(); ++qi)
            for (int next : cadj[queue[qi]])
                if (!seen[next]) {
                    seen[next] = 1;
                    queue.push_back(next);
                }
        for (int j = 0; j < k; ++j)
            if (j != i && seen[scc_of_comp[j]]) out.reach[i][j] = 1;
    }

    // Kahn linearization over the reachability relation, smallest cell id breaks ties
    std::vector<int> indeg(k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (out.reach[i][j]) ++indeg[j];
    std::vector<char> used(k, 0);
    for (int step = 0; step < k; ++step) {
        int pick = -1;
        for (int i = 0; i < k; ++i)
            if (!used[i] && indeg[i] == 0 && (pick == -1 || comps[i].front() < comps[pick].front()))
                pick = i;
        if (pick == -1) break;  // cannot happen in a DAG
        used[pick] = 1;
        out.linear_order.push_back(pick);
        for (int j = 0; j < k; ++j)
            if (out.reach[pick][j]) --indeg[j];
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (!out.reach[i][j] && !out.reach[j][i]) out.non_linear = true;
    return out;
}

// ---- mean cycles (Karp) -----------------------------------------------------

struct WeightedEdge {
    int from, to;
    double w;
};

// maximum cycle mean by Karp's theorem; the graph must be strongly connected
// with at least one edge. Levels are recomputed in a second pass so memory
// stays linear in the node count.
inline double karp_max_mean(int n, const std::vector<WeightedEdge>& edges) {
    if (edges.empty()) throw no_cycle_error("karp_max_mean: no edges");
    const double NEG = -std::numeric_limits<double>::infinity();

    std::vector<double> cur(n, NEG), next(n, NEG);
    cur[0] = 0.0;
    for (int k = 1; k <= n; ++k) {
        std::fill(next.begin(), next.end(), NEG);
        for (const auto& e : edges)
            if (cur[e.from] != NEG) next[e.to] = std::max(next[e.to], cur[e.from] + e.w);
        std::swap(cur, next);
    }
    std::vector<double> dn = cur;

    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::fill(cur.begin(), cur.end(), NEG);
    cur[0] = 0.0;
    for (int k = 0; k < n; ++k) {
        for (int v = 0; v < n; ++v)
            if (cur[v] != NEG && dn[v] != NEG)
                best[v] = std::min(best[v], (dn[v] - cur[v]) / (n - k));
        std::fill(next.begin(), next.end(), NEG);
        for (const auto& e : edges)
            if (cur[e.from] != NEG) next[e.to] = std::max(next[e.to], cur[e.from] + e.w);
        std::swap(cur, next);
    }

    double result = NEG;
    for (int v = 0; v < n; ++v)
        if (dn[v] != NEG) result = std::max(result, best[v]);
    if (result == NEG) throw no_cycle_error("karp_max_mean: no closed walk found");
    return result;
}

struct SpectrumInterval {
    double lo = 0.0, hi = 0.0;
};

// Morse-spectrum estimate of one component: extremal mean cycles over the
// component subgraph; weights are per-unit-time rates already
inline SpectrumInterval spectrum_interval(const ChainGraph& g, const std::vector<int>& comp) {
    std::vector<int> local(g.node_count(), -1);
    for (size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);

    std::vector<WeightedEdge> emax, emin;
    for (int v : comp) {
        auto [b, e] = g.out_edges(v);
        for (const auto* p = b; p != e; ++p) {
            if (local[p->to] < 0) continue;
            emax.push_back({local[v], local[p->to], p->wmax});
            emin.push_back({local[v], local[p->to], -p->wmin});
        }
    }
    if (emax.empty()) throw no_cycle_error("spectrum_interval: component has no internal edge");
    SpectrumInterval s;
    s.hi = karp_max_mean(static_cast<int>(comp.size()), emax);
    s.lo = -karp_max_mean(static_cast<int>(comp.size()), emin);
    return s;
}

}  // namespace selgrade
