#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selgrade/cell_grid.hpp"
#include "selgrade/error.hpp"
#include "selgrade/system.hpp"
#include "selgrade/util.hpp"

namespace selgrade {

struct GraphParams {
    double hop_time = 1.0;
    double eps = -1.0;  // negative requests the default 1.5 x max cell diameter
    int resolution = 24;
    int samples_per_cell = 16;
    std::vector<Vec> control_samples;
    int switches_per_hop = 0;
    uint64_t rng_seed = 1;

    void validate(const ControlBox& omega) const {
        if (!(hop_time > 0.0)) throw config_error("GraphParams: hop time must be positive");
        if (resolution < 2) throw config_error("GraphParams: resolution too small");
        if (samples_per_cell < 1) throw config_error("GraphParams: need at least one sample per cell");
        if (switches_per_hop < 0) throw config_error("GraphParams: negative switch count");
        if (control_samples.empty()) throw config_error("GraphParams: no control samples");
        bool has_zero = false;
        for (const Vec& u : control_samples) {
            if (!omega.contains(u, 1e-12)) throw control_range_error("GraphParams: sample outside the box");
            has_zero |= u == Vec(omega.dim());
        }
        if (!has_zero) throw config_error("GraphParams: samples must include the zero control");
    }
};

// cell center first, then low-discrepancy points inside the cell
inline std::vector<ProjectivePoint> sample_cell_points(const CellGrid& grid, const CellId& cell, int k,
                                                       uint64_t seed) {
    if (k < 1) throw config_error("sample_cell_points: need at least one point");
    std::vector<ProjectivePoint> pts;
    pts.reserve(k);
    pts.push_back(grid.center(cell));

    static const uint32_t bases[kMaxDim - 1] = {2, 3, 5, 7, 11, 13, 17};
    const int noff = grid.ambient_dim() - 1;
    std::array<double, kMaxDim - 1> lo{}, hi{}, shift{};
    grid.cell_bounds(cell, lo, hi);
    RandomStream rng(mix_seed(seed, static_cast<uint64_t>(grid.linear(cell))));
    for (int j = 0; j < noff; ++j) shift[j] = rng.next_double();

    for (int i = 1; i < k; ++i) {
        bool accepted = false;
        std::array<double, kMaxDim - 1> w{};
        for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
            for (int j = 0; j < noff; ++j) {
                double u = attempt == 0
                               ? radical_inverse(static_cast<uint32_t>(i), bases[j]) + shift[j]
                               : rng.next_double();
                u -= std::floor(u);
                w[j] = lo[j] + u * (hi[j] - lo[j]);
            }
            ProjectivePoint p(grid.point_from_face(cell.face, w));
            if (grid.locate(p) == cell) {
                pts.push_back(p);
                accepted = true;
            }
        }
        if (!accepted) pts.push_back(grid.center(cell));  // boundary rounding, keep the count
    }
    return pts;
}

// nodes are grid cells; edges carry the extremal per-unit-time exponential
// growth rates observed across sampled points and control signals
class ChainGraph {
  public:
    struct Edge {
        int32_t to;
        double wmin, wmax;
    };

    ChainGraph(std::shared_ptr<const CellGrid> grid, GraphParams params, double eps,
               std::vector<int64_t> offsets, std::vector<Edge> edges)
        : grid_(std::move(grid)), params_(std::move(params)), eps_(eps), offsets_(std::move(offsets)),
          edges_(std::move(edges)) {}

    const CellGrid& grid() const { return *grid_; }
    std::shared_ptr<const CellGrid> grid_ptr() const { return grid_; }
    const GraphParams& params() const { return params_; }
    double eps() const { return eps_; }
    int node_count() const { return static_cast<int>(offsets_.size()) - 1; }
    int64_t edge_count() const { return static_cast<int64_t>(edges_.size()); }

    std::pair<const Edge*, const Edge*> out_edges(int node) const {
        return {edges_.data() + offsets_[node], edges_.data() + offsets_[node + 1]};
    }

    int out_degree(int node) const { return static_cast<int>(offsets_[node + 1] - offsets_[node]); }

    const Edge* find_edge(int from, int to) const {
        auto [b, e] = out_edges(from);
        for (const Edge* p = b; p != e; ++p)
            if (p->to == to) return p;
        return nullptr;
    }

    const std::vector<int64_t>& offsets() const { return offsets_; }
    const std::vector<Edge>& edges() const { return edges_; }

  private:
    std::shared_ptr<const CellGrid> grid_;
    GraphParams params_;
    double eps_;
    std::vector<int64_t> offsets_;
    std::vector<Edge> edges_;
};

inline std::string graph_hash(const BilinearSystem& sys, const GraphParams& p) {
    Fnv1a h;
    h.str("selgrade-chain-graph-v1");
    h.i64(sys.dim);
    h.i64(static_cast<int64_t>(sys.M.size()));
    for (const Mat& m : sys.M)
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) h.f64(m(i, j));
    h.i64(sys.omega.dim());
    for (int i = 0; i < sys.omega.dim(); ++i) {
        h.f64(sys.omega.lower[i]);
        h.f64(sys.omega.upper[i]);
    }
    h.f64(p.hop_time);
    h.f64(p.eps);
    h.i64(p.resolution);
    h.i64(p.samples_per_cell);
    h.i64(static_cast<int64_t>(p.control_samples.size()));
    for (const Vec& u : p.control_samples)
        for (int i = 0; i < u.dim(); ++i) h.f64(u[i]);
    h.i64(p.switches_per_hop);
    h.u64(p.rng_seed);
    return h.hex();
}

namespace detail {

inline ControlSignal random_switching_signal(RandomStream& rng, const std::vector<Vec>& samples,
                                             int switches, double total) {
    // switch times from sorted uniform draws, values drawn from the sample set
    std::vector<double> cuts{0.0, total};
    for (int s = 0; s < switches; ++s) cuts.push_back(rng.next_double() * total);
    std::sort(cuts.begin(), cuts.end());
    ControlSignal sig;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double len = cuts[i + 1] - cuts[i];
        if (len <= 0.0) continue;
        sig.pieces.push_back({len, samples[rng.next_index(static_cast<int>(samples.size()))]});
    }
    return sig;
}

}  // namespace detail

inline ChainGraph build_graph(const BilinearSystem& sys, std::shared_ptr<const CellGrid> grid,
                              const GraphParams& params) {
    if (sys.dim != grid->ambient_dim()) throw dimension_error("build_graph: grid/system dimension mismatch");
    if (grid->resolution() != params.resolution)
        throw config_error("build_graph: params resolution does not match the grid");
    params.validate(sys.omega);
    const double eps = params.eps >= 0.0 ? params.eps : 1.5 * grid->max_diameter();
    const double T = params.hop_time;
    const int n = grid->cell_count();

    // one propagator per constant control sample, shared by every cell
    std::vector<Mat> propagators;
    propagators.reserve(params.control_samples.size());
    for (const Vec& u : params.control_samples) propagators.push_back(expm(sys.coefficient(u), T));

    std::vector<int64_t> offsets(1, 0);
    std::vector<ChainGraph::Edge> edges;
    std::vector<std::pair<int32_t, double>> raw;
    std::vector<int> targets;
    CellGrid::WithinScratch scratch;

    for (int cell = 0; cell < n; ++cell) {
        raw.clear();
        const auto pts = sample_cell_points(*grid, grid->cell(cell), params.samples_per_cell,
                                            params.rng_seed);
        std::vector<ControlSignal> extra_signals;
        if (params.switches_per_hop > 0) {
            RandomStream rng(mix_seed(params.rng_seed ^ 0x5157ull, static_cast<uint64_t>(cell)));
            for (size_t s = 0; s < params.control_samples.size(); ++s)
                extra_signals.push_back(detail::random_switching_signal(
                    rng, params.control_samples, params.switches_per_hop, T));
        }
        for (const ProjectivePoint& pt : pts) {
            for (const Mat& prop : propagators) {
                Vec z = prop * pt.rep();
                const double rate = std::log(z.norm()) / T;  // unit start vector
                ProjectivePoint q(z);
                grid->cells_within(q, eps, targets, scratch);
                for (int t : targets) raw.emplace_back(t, rate);
            }
            for (const ControlSignal& sig : extra_signals) {
                FlowResult fr = flow_signal(sys, pt.rep(), sig);
                const double rate = fr.log_growth / T;
                ProjectivePoint q(fr.z);
                grid->cells_within(q, eps, targets, scratch);
                for (int t : targets) raw.emplace_back(t, rate);
            }
        }
        std::sort(raw.begin(), raw.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t i = 0; i < raw.size();) {
            size_t j = i;
            double wmin = raw[i].second, wmax = raw[i].second;
            while (j < raw.size() && raw[j].first == raw[i].first) {
                wmin = std::min(wmin, raw[j].second);
                wmax = std::max(wmax, raw[j].second);
                ++j;
            }
            edges.push_back({raw[i].first, wmin, wmax});
            i = j;
        }
        offsets.push_back(static_cast<int64_t>(edges.size()));
    }
    return ChainGraph(std::move(grid), params, eps, std::move(offsets), std::move(edges));
}

// ---- graph cache ----------------------------------------------------------

inline void save_graph(const ChainGraph& g, const std::string& hash, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("save_graph: cannot open " + path);
    const char magic[4] = {'S', 'G', 'C', '1'};
    f.write(magic, 4);
    auto w64 = [&](uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); };
    f.write(hash.data(), 16);
    w64(static_cast<uint64_t>(g.node_count()));
    w64(static_cast<uint64_t>(g.edge_count()));
    for (int64_t o : g.offsets()) w64(static_cast<uint64_t>(o));
    for (const auto& e : g.edges()) {
        uint64_t to = static_cast<uint64_t>(e.to);
        w64(to);
        f.write(reinterpret_cast<const char*>(&e.wmin), 8);
        f.write(reinterpret_cast<const char*>(&e.wmax), 8);
    }
    if (!f) throw io_error("save_graph: write failed on " + path);
}

inline std::optional<ChainGraph> try_load_graph(const std::string& path,
                                                std::shared_ptr<const CellGrid> grid,
                                                const GraphParams& params, const std::string& hash) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    char magic[4];
    f.read(magic, 4);
    if (!f || magic[0] != 'S' || magic[1] != 'G' || magic[2] != 'C' || magic[3] != '1')
        return std::nullopt;
    char stored[17] = {};
    f.read(stored, 16);
    if (!f || hash != std::string(stored, 16)) return std::nullopt;
    auto r64 = [&]() {
        uint64_t v = 0;
        f.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const uint64_t nodes = r64();
    const uint64_t nedges = r64();
    if (nodes != static_cast<uint64_t>(grid->cell_count())) return std::nullopt;
    std::vector<int64_t> offsets(nodes + 1);
    for (auto& o : offsets) o = static_cast<int64_t>(r64());
    std::vector<ChainGraph::Edge> edges(nedges);
    for (auto& e : edges) {
        e.to = static_cast<int32_t>(r64());
        f.read(reinterpret_cast<char*>(&e.wmin), 8);
        f.read(reinterpret_cast<char*>(&e.wmax), 8);
    }
    if (!f) return std::nullopt;
    const double eps = params.eps >= 0.0 ? params.eps : 1.5 * grid->max_diameter();
    return ChainGraph(std::move(grid), params, eps, std::move(offsets), std::move(edges));
}

}  // namespace selgrade
