#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "selgrade/error.hpp"
#include "selgrade/linalg.hpp"
#include "selgrade/projective.hpp"

namespace selgrade {

// cube-map cell address: one face per ambient axis (antipodal faces folded),
// a multi-index over the remaining axes
struct CellId {
    int face = 0;
    std::array<int, kMaxDim - 1> index{};

    bool operator==(const CellId&) const = default;
};

// uniform cube-map decomposition of projective space: every direction is
// assigned to the face of its largest coordinate, antipodes land in the same cell
class CellGrid {
  public:
    CellGrid(int ambient_dim, int resolution) : ambient_(ambient_dim), res_(resolution) {
        if (ambient_ < 2 || ambient_ > kMaxDim) throw dimension_error("CellGrid: ambient dimension out of range");
        if (res_ < 2) throw dimension_error("CellGrid: resolution too small");
        per_face_ = 1;
        for (int j = 0; j < ambient_ - 1; ++j) per_face_ *= res_;
        count_ = ambient_ * per_face_;
        if (count_ > (1 << 28)) throw dimension_error("CellGrid: cell count too large");

        centers_.reserve(count_);
        max_diameter_ = 0.0;
        for (int id = 0; id < count_; ++id) {
            CellId c = cell(id);
            centers_.push_back(center_of(c).rep());
            max_diameter_ = std::max(max_diameter_, diameter_of(c));
        }
        build_adjacency();
    }

    int ambient_dim() const { return ambient_; }
    int resolution() const { return res_; }
    int cell_count() const { return count_; }

    // bound on the projective diameter of any cell; grid constant is resolution * max_diameter
    double max_diameter() const { return max_diameter_; }
    double grid_constant() const { return max_diameter_ * res_; }

    int linear(const CellId& c) const {
        int id = 0;
        for (int j = ambient_ - 2; j >= 0; --j) id = id * res_ + c.index[j];
        return c.face * per_face_ + id;
    }

    CellId cell(int id) const {
        CellId c;
        c.face = id / per_face_;
        int rest = id % per_face_;
        for (int j = 0; j < ambient_ - 1; ++j) {
            c.index[j] = rest % res_;
            rest /= res_;
        }
        return c;
    }

    CellId locate(const ProjectivePoint& p) const { return locate_unit(p.rep()); }

    CellId locate_unit(const Vec& v) const {
        int k = 0;
        for (int i = 1; i < ambient_; ++i)
            if (std::abs(v[i]) > std::abs(v[k])) k = i;
        const double pivot = v[k];
        CellId c;
        c.face = k;
        int j = 0;
        for (int i = 0; i < ambient_; ++i) {
            if (i == k) continue;
            double w = v[i] / pivot;  // in [-1,1], sign-fold included
            int idx = static_cast<int>(std::floor((w + 1.0) * 0.5 * res_));
            c.index[j++] = std::clamp(idx, 0, res_ - 1);
        }
        return c;
    }

    const Vec& center_rep(int id) const { return centers_[id]; }
    ProjectivePoint center(const CellId& c) const { return ProjectivePoint(centers_[linear(c)]); }

    // face-plane bounds of a cell (coordinates of the off-face axes, face axis fixed at +1)
    void cell_bounds(const CellId& c, std::array<double, kMaxDim - 1>& lo,
                     std::array<double, kMaxDim - 1>& hi) const {
        const double step = 2.0 / res_;
        for (int j = 0; j < ambient_ - 1; ++j) {
            lo[j] = -1.0 + step * c.index[j];
            hi[j] = lo[j] + step;
        }
    }

    Vec point_from_face(int face, const std::array<double, kMaxDim - 1>& w) const {
        Vec v(ambient_);
        int j = 0;
        for (int i = 0; i < ambient_; ++i) v[i] = (i == face) ? 1.0 : w[j++];
        double n = v.norm();
        for (int i = 0; i < ambient_; ++i) v[i] /= n;
        return v;
    }

    const std::vector<int32_t>& neighbors(int id) const { return adjacency_[id]; }

    // all cells whose center lies within radius + half a cell diameter of p;
    // always contains the cell of p itself
    std::vector<int> cells_within(const ProjectivePoint& p, double radius) const {
        std::vector<int> out;
        WithinScratch scratch;
        cells_within(p, radius, out, scratch);
        return out;
    }

    struct WithinScratch {
        std::vector<uint32_t> stamp;
        uint32_t tick = 0;
        std::vector<int32_t> queue;
    };

    void cells_within(const ProjectivePoint& p, double radius, std::vector<int>& out,
                      WithinScratch& s) const {
        if (p.ambient_dim() != ambient_) throw dimension_error("cells_within: ambient dimension mismatch");
        if (radius < 0.0) throw dimension_error("cells_within: negative radius");
        out.clear();
        if (s.stamp.size() != static_cast<size_t>(count_)) {
            s.stamp.assign(count_, 0);
            s.tick = 0;
        }
        ++s.tick;
        const double collect_r = radius + 0.5 * max_diameter_;
        const double expand_r = collect_r + 2.0 * max_diameter_;

        const int home = linear(locate(p));
        s.queue.clear();
        s.queue.push_back(home);
        s.stamp[home] = s.tick;
        out.push_back(home);
        for (size_t qi = 0; qi < s.queue.size(); ++qi) {
            const int cur = s.queue[qi];
            for (int32_t nb : adjacency_[cur]) {
                if (s.stamp[nb] == s.tick) continue;
                s.stamp[nb] = s.tick;
                const double d = proj_metric_unit(centers_[nb], p);
                if (d <= collect_r) out.push_back(nb);
                if (d <= expand_r) s.queue.push_back(nb);
            }
        }
        std::sort(out.begin(), out.end());
    }

  private:
    ProjectivePoint center_of(const CellId& c) const {
        std::array<double, kMaxDim - 1> lo{}, hi{};
        cell_bounds(c, lo, hi);
        std::array<double, kMaxDim - 1> mid{};
        for (int j = 0; j < ambient_ - 1; ++j) mid[j] = 0.5 * (lo[j] + hi[j]);
        return ProjectivePoint(point_from_face(c.face, mid));
    }

    // cells project to geodesic polygons, so the diameter is attained at corners
    double diameter_of(const CellId& c) const {
        std::array<double, kMaxDim - 1> lo{}, hi{};
        cell_bounds(c, lo, hi);
        const int corners = 1 << (ambient_ - 1);
        std::array<Vec, 1 << (kMaxDim - 1)> pts;
        for (int mask = 0; mask < corners; ++mask) {
            std::array<double, kMaxDim - 1> w{};
            for (int j = 0; j < ambient_ - 1; ++j) w[j] = (mask >> j) & 1 ? hi[j] : lo[j];
            pts[mask] = point_from_face(c.face, w);
        }
        double diam = 0.0;
        for (int a = 0; a < corners; ++a)
            for (int b = a + 1; b < corners; ++b) {
                double d = std::abs(pts[a].dot(pts[b]));
                diam = std::max(diam, std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(d, 1.0))));
            }
        return diam;
    }

    void build_adjacency() {
        adjacency_.assign(count_, {});
        const double step = 2.0 / res_;
        const int noff = ambient_ - 1;
        std::array<int, kMaxDim - 1> off{};
        for (int id = 0; id < count_; ++id) {
            CellId c = cell(id);
            std::array<double, kMaxDim - 1> lo{}, hi{};
            cell_bounds(c, lo, hi);
            std::array<double, kMaxDim - 1> mid{};
            for (int j = 0; j < noff; ++j) mid[j] = 0.5 * (lo[j] + hi[j]);

            off.fill(-1);
            while (true) {
                bool all_zero = true;
                for (int j = 0; j < noff; ++j) all_zero &= off[j] == 0;
                if (!all_zero) {
                    std::array<double, kMaxDim - 1> w = mid;
                    for (int j = 0; j < noff; ++j) w[j] += off[j] * step;
                    // coordinates past the face edge fold onto the adjacent face
                    Vec v = point_from_face(c.face, w);
                    int nb = linear(locate_unit(v));
                    if (nb != id) adjacency_[id].push_back(nb);
                }
                int j = 0;
                while (j < noff && off[j] == 1) {
                    off[j] = -1;
                    ++j;
                }
                if (j == noff) break;
                ++off[j];
            }
            std::sort(adjacency_[id].begin(), adjacency_[id].end());
            adjacency_[id].erase(std::unique(adjacency_[id].begin(), adjacency_[id].end()),
                                 adjacency_[id].end());
        }
    }

    int ambient_, res_;
    int per_face_ = 0, count_ = 0;
    double max_diameter_ = 0.0;
    std::vector<Vec> centers_;
    std::vector<std::vector<int32_t>> adjacency_;
};

}  // namespace selgrade
