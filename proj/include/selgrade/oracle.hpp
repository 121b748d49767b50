#pragma once

#include <cmath>
#include <vector>

#include "selgrade/linalg.hpp"
#include "selgrade/projective.hpp"
#include "selgrade/system.hpp"

namespace selgrade {

// Lyapunov levels of a constant matrix: eigenvalue real parts grouped with
// their algebraic multiplicities
struct LyapunovDecomposition {
    struct Level {
        double lambda = 0.0;
        int dimension = 0;
    };

    std::vector<Level> levels;  // ascending
    bool has_central = false;
    int stable_count = 0;     // levels below zero
    int central_dimension = 0;
    int unstable_count = 0;
};

inline LyapunovDecomposition lyapunov_decomposition(const Mat& a, double tol = kEigGroupTol) {
    Spectrum s = eigen(a, tol);
    LyapunovDecomposition out;
    for (const auto& g : s.groups) {
        out.levels.push_back({g.real_part, g.multiplicity});
        if (std::abs(g.real_part) <= tol) {
            out.has_central = true;
            out.central_dimension = g.multiplicity;
        } else if (g.real_part < 0.0) {
            ++out.stable_count;
        } else {
            ++out.unstable_count;
        }
    }
    return out;
}

// dimension of the central subspace of the lifted matrix [[A, a],[0,0]]
inline int lifted_central_dimension(const Mat& a, double tol = kEigGroupTol) {
    return 1 + lyapunov_decomposition(a, tol).central_dimension;
}

// equilibrium -A(u)^{-1} a(u); defined only at hyperbolic constant controls
inline Vec bounded_solution_constant(const AffineControlSystem& sys, const Vec& u,
                                     double tol = kEigGroupTol) {
    if (!sys.omega.contains(u, 1e-12)) throw control_range_error("bounded_solution_constant: control outside the box");
    Mat a = sys.a_matrix(u);
    for (const auto& g : eigen(a, tol).groups)
        if (std::abs(g.real_part) <= tol)
            throw nonhyperbolic_error("bounded_solution_constant: eigenvalue on the imaginary axis");
    Vec rhs = (-1.0) * sys.a_vector(u);
    Vec x = solve_linear(a, rhs);
    return x;
}

// fiber direction of the central line bundle over a hyperbolic constant control
inline ProjectivePoint hyperbolic_central_line_point(const AffineControlSystem& sys, const Vec& u,
                                                     double tol = kEigGroupTol) {
    return h1(bounded_solution_constant(sys, u, tol));
}

}  // namespace selgrade
