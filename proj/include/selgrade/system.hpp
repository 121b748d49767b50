#pragma once

#include <optional>
#include <vector>

#include "selgrade/error.hpp"
#include "selgrade/linalg.hpp"

namespace selgrade {

// admissible control values form a box; every interval must contain zero
struct ControlBox {
    Vec lower, upper;

    ControlBox() = default;

    ControlBox(Vec lo, Vec hi) : lower(lo), upper(hi) { validate(); }

    int dim() const { return lower.dim(); }

    void validate() const {
        if (lower.dim() != upper.dim()) throw dimension_error("ControlBox: bound dimensions differ");
        if (!lower.finite() || !upper.finite()) throw config_error("ControlBox: bounds not finite");
        for (int i = 0; i < dim(); ++i) {
            if (lower[i] > upper[i]) throw config_error("ControlBox: lower bound above upper bound");
            if (lower[i] > 0.0 || upper[i] < 0.0)
                throw config_error("ControlBox: the box must contain the zero control");
        }
    }

    bool degenerate_axis(int i) const { return lower[i] == upper[i]; }

    bool contains(const Vec& u, double tol = 0.0) const {
        if (u.dim() != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (u[i] < lower[i] - tol || u[i] > upper[i] + tol) return false;
        return true;
    }
};

// designates which control axes act on the inhomogeneous part (u) and which on
// the matrices (v); the embedding of split systems into the general affine form
struct SplitMarker {
    std::vector<int> u_axes;
    std::vector<int> v_axes;
};

// dx/dt = A0 x + a0 + sum_i u_i (A_i x + a_i),  u in the box
struct AffineControlSystem {
    int d = 0;
    int m = 0;
    std::vector<Mat> A;  // m+1 entries
    std::vector<Vec> a;  // m+1 entries
    ControlBox omega;
    std::optional<SplitMarker> split;

    void validate() const {
        if (d < 1 || d > 3) throw config_error("AffineControlSystem: state dimension must be 1..3");
        if (m < 0) throw config_error("AffineControlSystem: negative control dimension");
        if (static_cast<int>(A.size()) != m + 1 || static_cast<int>(a.size()) != m + 1)
            throw dimension_error("AffineControlSystem: need m+1 coefficient matrices and vectors");
        for (const Mat& mat : A) {
            if (mat.rows() != d || mat.cols() != d) throw dimension_error("AffineControlSystem: matrix shape");
            if (!mat.finite()) throw config_error("AffineControlSystem: non-finite matrix entry");
        }
        for (const Vec& v : a) {
            if (v.dim() != d) throw dimension_error("AffineControlSystem: vector shape");
            if (!v.finite()) throw config_error("AffineControlSystem: non-finite vector entry");
        }
        if (omega.dim() != m) throw dimension_error("AffineControlSystem: control box dimension");
        omega.validate();
        if (split) {
            std::vector<char> seen(m, 0);
            for (int i : split->u_axes) {
                if (i < 0 || i >= m || seen[i]) throw config_error("SplitMarker: bad u axis");
                seen[i] = 1;
                if (!A[i + 1].zero()) throw config_error("SplitMarker: u axis with nonzero matrix");
            }
            for (int j : split->v_axes) {
                if (j < 0 || j >= m || seen[j]) throw config_error("SplitMarker: bad v axis");
                seen[j] = 1;
                if (a[j + 1].norm() != 0.0) throw config_error("SplitMarker: v axis with nonzero vector");
            }
            for (int i = 0; i < m; ++i)
                if (!seen[i]) throw config_error("SplitMarker: axis not assigned");
            if (a[0].norm() != 0.0) throw config_error("SplitMarker: split systems have no constant drift");
        }
    }

    Mat a_matrix(const Vec& u) const {
        Mat r = A[0];
        for (int i = 0; i < m; ++i)
            if (u[i] != 0.0) r = r + A[i + 1].scaled(u[i]);
        return r;
    }

    Vec a_vector(const Vec& u) const {
        Vec r = a[0];
        for (int i = 0; i < m; ++i)
            if (u[i] != 0.0) r = r + u[i] * a[i + 1];
        return r;
    }

    bool homogeneous() const {
        for (const Vec& v : a)
            if (v.norm() != 0.0) return false;
        return true;
    }
};

inline Vec eval_rhs(const AffineControlSystem& sys, const Vec& x, const Vec& u) {
    if (x.dim() != sys.d) throw dimension_error("eval_rhs: state dimension");
    if (u.dim() != sys.m) throw dimension_error("eval_rhs: control dimension");
    if (!sys.omega.contains(u, 1e-12)) throw control_range_error("eval_rhs: control outside the box");
    return sys.a_matrix(u) * x + sys.a_vector(u);
}

// dz/dt = M(u) z with M(u) = M0 + sum_i u_i M_i; the common shape of the lifted
// system and of the homogeneous part
struct BilinearSystem {
    int dim = 0;
    std::vector<Mat> M;  // m+1 entries, dim x dim
    ControlBox omega;

    int control_dim() const { return omega.dim(); }

    Mat coefficient(const Vec& u) const {
        if (u.dim() != control_dim()) throw dimension_error("BilinearSystem: control dimension");
        Mat r = M[0];
        for (int i = 0; i < u.dim(); ++i)
            if (u[i] != 0.0) r = r + M[i + 1].scaled(u[i]);
        return r;
    }
};

// appends the frozen scalar coordinate: M(u) = [[A(u), a(u)], [0, 0]]
struct LiftedSystem {
    AffineControlSystem source;

    int ambient_dim() const { return source.d + 1; }

    Mat coefficient(const Vec& u) const {
        const Mat am = source.a_matrix(u);
        const Vec av = source.a_vector(u);
        Mat r(source.d + 1, source.d + 1);
        for (int i = 0; i < source.d; ++i) {
            for (int j = 0; j < source.d; ++j) r(i, j) = am(i, j);
            r(i, source.d) = av[i];
        }
        return r;
    }

    BilinearSystem bilinear() const {
        BilinearSystem b;
        b.dim = source.d + 1;
        b.omega = source.omega;
        b.M.reserve(source.m + 1);
        for (int k = 0; k <= source.m; ++k) {
            Mat mk(b.dim, b.dim);
            for (int i = 0; i < source.d; ++i) {
                for (int j = 0; j < source.d; ++j) mk(i, j) = source.A[k](i, j);
                mk(i, source.d) = source.a[k][i];
            }
            b.M.push_back(mk);
        }
        return b;
    }
};

inline LiftedSystem lift(const AffineControlSystem& sys) {
    sys.validate();
    return LiftedSystem{sys};
}

// homogeneous part as a bilinear system on the state space, controls restricted
// to the axes that actually act on the matrices
inline BilinearSystem homogeneous_part(const AffineControlSystem& sys) {
    BilinearSystem b;
    b.dim = sys.d;
    std::vector<int> axes;
    for (int i = 0; i < sys.m; ++i)
        if (!sys.A[i + 1].zero()) axes.push_back(i);
    b.M.push_back(sys.A[0]);
    Vec lo(static_cast<int>(axes.size())), hi(static_cast<int>(axes.size()));
    for (size_t k = 0; k < axes.size(); ++k) {
        b.M.push_back(sys.A[axes[k] + 1]);
        lo[static_cast<int>(k)] = sys.omega.lower[axes[k]];
        hi[static_cast<int>(k)] = sys.omega.upper[axes[k]];
    }
    b.omega = ControlBox(lo, hi);
    return b;
}

struct ControlPiece {
    double duration = 0.0;
    Vec value;
};

// piecewise-constant control on [0, total_duration]
struct ControlSignal {
    std::vector<ControlPiece> pieces;

    double total_duration() const {
        double t = 0.0;
        for (const auto& p : pieces) t += p.duration;
        return t;
    }

    static ControlSignal constant(double duration, const Vec& value) {
        ControlSignal s;
        s.pieces.push_back({duration, value});
        return s;
    }

    void validate(const ControlBox& box) const {
        for (const auto& p : pieces) {
            if (!(p.duration > 0.0)) throw config_error("ControlSignal: piece duration must be positive");
            if (!box.contains(p.value, 1e-12)) throw control_range_error("ControlSignal: value outside the box");
        }
    }
};

struct FlowResult {
    Vec z;
    double log_growth = 0.0;
};

// exact propagator over one constant-control piece
inline FlowResult flow_constant(const BilinearSystem& sys, const Vec& z0, const Vec& u, double t) {
    if (z0.dim() != sys.dim) throw dimension_error("flow_constant: state dimension");
    const double n0 = z0.norm();
    if (n0 == 0.0) throw zero_vector_error("flow_constant: zero initial vector");
    if (!sys.omega.contains(u, 1e-12)) throw control_range_error("flow_constant: control outside the box");
    Vec z = expm(sys.coefficient(u), t) * z0;
    return {z, std::log(z.norm() / n0)};
}

inline FlowResult flow_constant(const LiftedSystem& sys, const Vec& z0, const Vec& u, double t) {
    return flow_constant(sys.bilinear(), z0, u, t);
}

inline FlowResult flow_signal(const BilinearSystem& sys, const Vec& z0, const ControlSignal& sig) {
    FlowResult r{z0, 0.0};
    if (z0.norm() == 0.0) throw zero_vector_error("flow_signal: zero initial vector");
    for (const auto& piece : sig.pieces) {
        FlowResult step = flow_constant(sys, r.z, piece.value, piece.duration);
        r.z = step.z;
        r.log_growth += step.log_growth;
    }
    return r;
}

inline FlowResult flow_signal(const LiftedSystem& sys, const Vec& z0, const ControlSignal& sig) {
    return flow_signal(sys.bilinear(), z0, sig);
}

// trajectory of the affine system itself, integrated through the lift
inline Vec affine_trajectory(const AffineControlSystem& sys, const Vec& x0, const ControlSignal& sig) {
    LiftedSystem ls = lift(sys);
    Vec z0(sys.d + 1);
    for (int i = 0; i < sys.d; ++i) z0[i] = x0[i];
    z0[sys.d] = 1.0;
    FlowResult r = flow_signal(ls, z0, sig);
    Vec x(sys.d);
    for (int i = 0; i < sys.d; ++i) x[i] = r.z[i];
    return x;
}

// || psi(T, alpha x0, alpha u, v) - alpha psi(T, x0, u, v) ||
inline double scaling_identity_residual(const AffineControlSystem& sys, const Vec& x0,
                                        const ControlSignal& sig, double alpha) {
    if (!sys.split) throw not_split_error("scaling_identity_residual: system has no split marker");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw config_error("scaling_identity_residual: alpha outside (0,1]");
    sig.validate(sys.omega);

    ControlSignal scaled = sig;
    for (auto& piece : scaled.pieces)
        for (int i : sys.split->u_axes) piece.value[i] *= alpha;

    Vec lhs = affine_trajectory(sys, alpha * x0, scaled);
    Vec rhs = alpha * affine_trajectory(sys, x0, sig);
    return (lhs - rhs).norm();
}

// control sample grid: per-axis equispaced values (box corners included),
// plus the zero control
inline std::vector<Vec> control_grid(const ControlBox& box, int per_axis) {
    if (per_axis < 1) throw config_error("control_grid: need at least one value per axis");
    const int m = box.dim();
    std::vector<std::vector<double>> axis_values(m);
    for (int i = 0; i < m; ++i) {
        if (box.degenerate_axis(i) || per_axis == 1) {
            axis_values[i].push_back(box.degenerate_axis(i) ? box.lower[i] : 0.0);
            continue;
        }
        for (int k = 0; k < per_axis; ++k)
            axis_values[i].push_back(box.lower[i] + (box.upper[i] - box.lower[i]) * k / (per_axis - 1));
    }
    std::vector<Vec> out;
    std::vector<int> idx(m, 0);
    while (true) {
        Vec u(m);
        for (int i = 0; i < m; ++i) u[i] = axis_values[i][idx[i]];
        out.push_back(u);
        int i = 0;
        while (i < m && idx[i] + 1 == static_cast<int>(axis_values[i].size())) {
            idx[i] = 0;
            ++i;
        }
        if (i == m) break;
        ++idx[i];
    }
    Vec zero(m);
    bool have_zero = false;
    for (const Vec& u : out) have_zero |= u == zero;
    if (!have_zero) out.push_back(zero);
    return out;
}

}  // namespace selgrade
