#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selgrade/chain_graph.hpp"
#include "selgrade/morse.hpp"
#include "selgrade/projective.hpp"
#include "selgrade/system.hpp"

namespace selgrade {

enum class Classification { Central, AtInfinity, Unclassified };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::Central: return "central";
        case Classification::AtInfinity: return "at-infinity";
        default: return "unclassified";
    }
}

struct MorseComponent {
    std::vector<int> cells;  // ascending cell ids
    int index_in_order = -1;
    SpectrumInterval spectrum;
    Classification classification = Classification::Unclassified;
    std::vector<int> equator_contact;  // cells on the one-dimension-lower grid
    double max_abs_last = 0.0;
};

// one projective-space graph run: build, components, order, spectra
struct ChainAnalysis {
    std::shared_ptr<const CellGrid> grid;
    std::string graph_hash;
    int64_t edge_count = 0;
    double eps = 0.0;
    std::vector<MorseComponent> components;  // sorted by index_in_order
    bool non_linear_order = false;
};

struct InclusionFlags {
    bool geometric = false;            // embedded component meets the central one
    bool spectral_sufficient = false;  // zero in the open spectrum interior
};

struct AnalysisParams {
    GraphParams graph;              // control_samples may be left empty: filled per run
    int control_grid_per_axis = 3;  // used when control_samples is empty
    double delta_eq = -1.0;         // negative: 4 x max cell diameter of the lifted grid
    bool run_homogeneous = true;
    std::string cache_dir;          // empty disables the graph cache
};

struct DecompositionReport {
    ChainAnalysis lifted;
    int central_index = -1;  // into lifted.components, -1 when none
    bool multiple_central = false;
    bool zero_central = false;
    bool dim_central_is_one = false;
    bool pole_in_central = false;  // split systems: the polar direction is recurrent
    double delta_eq = 0.0;

    std::optional<ChainAnalysis> homogeneous;
    std::vector<InclusionFlags> inclusion;  // per homogeneous component

    std::vector<Vec> chain_control_set_points;  // pullback of central cell centers
    Vec pullback_lo, pullback_hi;               // bounding box, valid when points exist
    std::vector<std::string> warnings;
};

namespace detail {

inline ChainGraph build_or_load(const BilinearSystem& sys, std::shared_ptr<const CellGrid> grid,
                                const GraphParams& params, const std::string& cache_dir,
                                std::string& hash_out) {
    hash_out = graph_hash(sys, params);
    if (!cache_dir.empty()) {
        const std::string path = cache_dir + "/" + hash_out + ".graph";
        if (auto cached = try_load_graph(path, grid, params, hash_out)) return std::move(*cached);
        ChainGraph g = build_graph(sys, grid, params);
        save_graph(g, hash_out, path);
        return g;
    }
    return build_graph(sys, grid, params);
}

}  // namespace detail

// graph run on the projective space of a bilinear system
inline ChainAnalysis run_chain_analysis(const BilinearSystem& sys, GraphParams params,
                                        int control_grid_per_axis = 3,
                                        const std::string& cache_dir = "") {
    if (params.control_samples.empty())
        params.control_samples = control_grid(sys.omega, control_grid_per_axis);

    ChainAnalysis out;
    auto grid = std::make_shared<CellGrid>(sys.dim, params.resolution);
    ChainGraph g = detail::build_or_load(sys, grid, params, cache_dir, out.graph_hash);
    out.grid = g.grid_ptr();
    out.eps = g.eps();
    out.edge_count = g.edge_count();

    auto comps = strongly_connected_components(g);
    ComponentOrder order = component_order(g, comps);
    out.non_linear_order = order.non_linear;

    out.components.reserve(comps.size());
    for (size_t pos = 0; pos < order.linear_order.size(); ++pos) {
        int ci = order.linear_order[pos];
        MorseComponent mc;
        mc.cells = comps[ci];
        mc.index_in_order = static_cast<int>(pos);
        mc.spectrum = spectrum_interval(g, mc.cells);
        for (int cell : mc.cells)
            mc.max_abs_last = std::max(mc.max_abs_last,
                                       std::abs(out.grid->center_rep(cell)[sys.dim - 1]));
        out.components.push_back(std::move(mc));
    }
    return out;
}

// homogeneous-part analysis on the state projective space
inline ChainAnalysis analyze_homogeneous(const AffineControlSystem& sys, const AnalysisParams& params) {
    sys.validate();
    if (sys.d < 2) throw config_error("analyze_homogeneous: needs state dimension >= 2");
    BilinearSystem hom = homogeneous_part(sys);
    GraphParams gp = params.graph;
    gp.control_samples.clear();  // per-run sample grid over the restricted box
    return run_chain_analysis(hom, gp, params.control_grid_per_axis, params.cache_dir);
}

// full pipeline: lifted run, classification, at-infinity run, inclusion flags,
// chain-control-set pullback
inline DecompositionReport analyze_affine(const AffineControlSystem& sys, const AnalysisParams& params) {
    sys.validate();
    DecompositionReport rep;

    LiftedSystem lifted = lift(sys);
    BilinearSystem lifted_bi = lifted.bilinear();
    GraphParams gp = params.graph;
    if (gp.control_samples.empty())
        gp.control_samples = control_grid(sys.omega, params.control_grid_per_axis);
    rep.lifted = run_chain_analysis(lifted_bi, gp, params.control_grid_per_axis, params.cache_dir);

    const CellGrid& lgrid = *rep.lifted.grid;
    rep.delta_eq = params.delta_eq >= 0.0 ? params.delta_eq : 4.0 * lgrid.max_diameter();

    // classification by reach away from the equator
    int central_count = 0;
    for (auto& comp : rep.lifted.components) {
        comp.classification = comp.max_abs_last > rep.delta_eq ? Classification::Central
                                                               : Classification::AtInfinity;
        if (comp.classification == Classification::Central) ++central_count;
    }
    rep.zero_central = central_count == 0;
    rep.multiple_central = central_count > 1;
    if (rep.zero_central) rep.warnings.push_back("no central component found");
    if (rep.multiple_central) rep.warnings.push_back("multiple central components found");
    if (rep.lifted.non_linear_order)
        rep.warnings.push_back("component order is not total (discretization artifact)");
    for (size_t i = 0; i < rep.lifted.components.size(); ++i) {
        const auto& c = rep.lifted.components[i];
        if (c.classification == Classification::Central &&
            (rep.central_index < 0 ||
             c.max_abs_last > rep.lifted.components[rep.central_index].max_abs_last))
            rep.central_index = static_cast<int>(i);
    }

    // equator contact cells, projected to the one-dimension-lower grid
    std::shared_ptr<const CellGrid> egrid;
    if (sys.d >= 2) egrid = std::make_shared<CellGrid>(sys.d, params.graph.resolution);
    for (auto& comp : rep.lifted.components) {
        std::vector<int> contact;
        for (int cell : comp.cells) {
            const Vec& c = lgrid.center_rep(cell);
            if (std::abs(c[sys.d]) > rep.delta_eq) continue;
            if (sys.d >= 2) {
                Vec shadow(sys.d);
                for (int i = 0; i < sys.d; ++i) shadow[i] = c[i];
                contact.push_back(egrid->linear(egrid->locate(ProjectivePoint(shadow))));
            } else {
                contact.push_back(0);  // the equator of the projective line is a point
            }
        }
        std::sort(contact.begin(), contact.end());
        contact.erase(std::unique(contact.begin(), contact.end()), contact.end());
        comp.equator_contact = std::move(contact);
    }

    const MorseComponent* central =
        rep.central_index >= 0 ? &rep.lifted.components[rep.central_index] : nullptr;
    rep.dim_central_is_one = central != nullptr && central->equator_contact.empty();

    // split systems keep the polar direction inside the central component
    if (sys.split && central != nullptr) {
        Vec pole(sys.d + 1);
        pole[sys.d] = 1.0;
        int pole_cell = lgrid.linear(lgrid.locate(ProjectivePoint(pole)));
        rep.pole_in_central =
            std::binary_search(central->cells.begin(), central->cells.end(), pole_cell);
        if (!rep.pole_in_central) rep.warnings.push_back("polar cell missing from the central component");
    }

    // at-infinity structure from the homogeneous part, one dimension lower
    if (params.run_homogeneous && sys.d >= 2) {
        rep.homogeneous = analyze_homogeneous(sys, params);
        for (auto& comp : rep.homogeneous->components) comp.classification = Classification::AtInfinity;

        rep.inclusion.resize(rep.homogeneous->components.size());
        for (size_t i = 0; i < rep.homogeneous->components.size(); ++i) {
            const auto& hcomp = rep.homogeneous->components[i];
            InclusionFlags& fl = rep.inclusion[i];
            fl.spectral_sufficient = hcomp.spectrum.lo < 0.0 && hcomp.spectrum.hi > 0.0;
            if (central != nullptr) {
                // embedded component cells against near-equator central cells
                std::vector<ProjectivePoint> embedded;
                embedded.reserve(hcomp.cells.size());
                for (int cell : hcomp.cells)
                    embedded.push_back(
                        equator_embed(ProjectivePoint(rep.homogeneous->grid->center_rep(cell))));
                for (int cell : central->cells) {
                    const Vec& c = lgrid.center_rep(cell);
                    if (std::abs(c[sys.d]) > rep.lifted.eps) continue;
                    for (const auto& q : embedded)
                        if (proj_metric_unit(c, q) <= rep.lifted.eps) {
                            fl.geometric = true;
                            break;
                        }
                    if (fl.geometric) break;
                }
            }
        }
    }

    // pullback of the central component through the hemisphere chart
    if (central != nullptr) {
        rep.pullback_lo = Vec(sys.d);
        rep.pullback_hi = Vec(sys.d);
        bool first = true;
        for (int cell : central->cells) {
            const Vec& c = lgrid.center_rep(cell);
            if (std::abs(c[sys.d]) <= rep.delta_eq) continue;
            Vec x = h1_inverse(ProjectivePoint(c), rep.delta_eq);
            for (int i = 0; i < sys.d; ++i) {
                if (first || x[i] < rep.pullback_lo[i]) rep.pullback_lo[i] = x[i];
                if (first || x[i] > rep.pullback_hi[i]) rep.pullback_hi[i] = x[i];
            }
            first = false;
            rep.chain_control_set_points.push_back(std::move(x));
        }
    }

    rep.warnings.push_back(
        "finite control sampling under-approximates reachability; eps inflation over-approximates");
    return rep;
}

}  // namespace selgrade
