#include <catch_amalgamated.hpp>

#include <cmath>

#include "selgrade/system.hpp"
#include "selgrade/util.hpp"
#include "test_systems.hpp"

using namespace selgrade;

namespace {

// classical fixed-step RK4 on dz/dt = M z, independent of the propagator path
Vec rk4_flow(const Mat& m, Vec z, double t, double h) {
    int steps = static_cast<int>(std::ceil(std::abs(t) / h));
    double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        Vec k1 = m * z;
        Vec k2 = m * (z + (dt / 2.0) * k1);
        Vec k3 = m * (z + (dt / 2.0) * k2);
        Vec k4 = m * (z + dt * k3);
        z = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

AffineControlSystem random_split_system(RandomStream& rng) {
    AffineControlSystem s;
    s.d = 1 + rng.next_index(3);
    int mu = 1 + rng.next_index(2);   // inhomogeneous axes
    int mv = rng.next_index(2);       // homogeneous axes
    s.m = mu + mv;
    s.A.assign(s.m + 1, Mat(s.d, s.d));
    s.a.assign(s.m + 1, Vec(s.d));
    SplitMarker marker;
    for (int i = 0; i < s.d; ++i)
        for (int j = 0; j < s.d; ++j) s.A[0](i, j) = rng.next_in(-1.0, 1.0);
    for (int k = 0; k < mu; ++k) {
        for (int i = 0; i < s.d; ++i) s.a[k + 1][i] = rng.next_in(-2.0, 2.0);
        marker.u_axes.push_back(k);
    }
    for (int k = mu; k < s.m; ++k) {
        for (int i = 0; i < s.d; ++i)
            for (int j = 0; j < s.d; ++j) s.A[k + 1](i, j) = rng.next_in(-0.5, 0.5);
        marker.v_axes.push_back(k);
    }
    s.split = marker;
    Vec lo(s.m), hi(s.m);
    for (int k = 0; k < s.m; ++k) {
        lo[k] = -rng.next_in(0.2, 1.0);
        hi[k] = rng.next_in(0.2, 1.0);
    }
    s.omega = ControlBox(lo, hi);
    s.validate();
    return s;
}

ControlSignal random_signal(RandomStream& rng, const ControlBox& box, double total) {
    ControlSignal sig;
    int pieces = 1 + rng.next_index(4);
    for (int p = 0; p < pieces; ++p) {
        Vec u(box.dim());
        for (int i = 0; i < box.dim(); ++i) u[i] = rng.next_in(box.lower[i], box.upper[i]);
        sig.pieces.push_back({total / pieces, u});
    }
    return sig;
}

}  // namespace

TEST_CASE("control box validation") {
    CHECK_THROWS_AS(ControlBox(Vec{1.0}, Vec{2.0}), config_error);
    CHECK_THROWS_AS(ControlBox(Vec{-1.0}, Vec{-0.5}), config_error);
    CHECK_THROWS_AS(ControlBox(Vec{1.0}, Vec{-1.0}), config_error);
    ControlBox ok(Vec{-1.0, 0.0}, Vec{1.0, 0.0});
    CHECK(ok.degenerate_axis(1));
    CHECK(!ok.degenerate_axis(0));
    CHECK(ok.contains(Vec{0.5, 0.0}));
    CHECK(!ok.contains(Vec{0.5, 0.1}));
}

TEST_CASE("eval_rhs") {
    auto sys = testsys::saddle();
    Vec r = eval_rhs(sys, Vec{0.0, 0.0}, Vec{1.0});
    CHECK(r == Vec{1.0, 1.0});

    // split systems fix the origin under zero control
    auto rnd = testsys::double_integrator();
    CHECK(eval_rhs(rnd, Vec{0.0, 0.0}, Vec{0.0}).norm() == 0.0);

    AffineControlSystem zero;
    zero.d = 2;
    zero.m = 1;
    zero.A = {Mat(2, 2), Mat(2, 2)};
    zero.a = {Vec(2), Vec(2)};
    zero.omega = ControlBox(Vec{-1.0}, Vec{1.0});
    CHECK(eval_rhs(zero, Vec{3.0, -2.0}, Vec{0.5}).norm() == 0.0);

    CHECK_THROWS_AS(eval_rhs(sys, Vec{0.0, 0.0}, Vec{2.0}), control_range_error);
}

TEST_CASE("lift block structure") {
    auto sys = testsys::saddle();
    LiftedSystem ls = lift(sys);
    for (double u : {-1.0, 0.0, 0.5, 1.0}) {
        Mat m = ls.coefficient(Vec{u});
        CHECK(m == Mat(3, 3, {1.0, 0.0, u, 0.0, -1.0, u, 0.0, 0.0, 0.0}));
    }

    // autonomous case: constant block form
    Mat A(2, 2, {0.5, 1.0, 0.0, -0.25});
    Vec a{2.0, 3.0};
    LiftedSystem aut = lift(testsys::autonomous(A, a));
    Mat M = aut.coefficient(Vec(0));
    CHECK(M == Mat(3, 3, {0.5, 1.0, 2.0, 0.0, -0.25, 3.0, 0.0, 0.0, 0.0}));

    // homogeneous input: last column zero
    auto cones = testsys::bilinear_cones();
    Mat hm = lift(cones).coefficient(Vec{0.3, 0.1, -0.2});
    for (int i = 0; i < 3; ++i) CHECK(hm(i, 2) == 0.0);
}

TEST_CASE("lift consistency with eval_rhs") {
    RandomStream rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        auto sys = random_split_system(rng);
        LiftedSystem ls = lift(sys);
        Vec x(sys.d), u(sys.m);
        for (int i = 0; i < sys.d; ++i) x[i] = rng.next_in(-3.0, 3.0);
        for (int i = 0; i < sys.m; ++i) u[i] = rng.next_in(sys.omega.lower[i], sys.omega.upper[i]);
        Vec z(sys.d + 1);
        for (int i = 0; i < sys.d; ++i) z[i] = x[i];
        z[sys.d] = 1.0;
        Vec lifted = ls.coefficient(u) * z;
        Vec rhs = eval_rhs(sys, x, u);
        for (int i = 0; i < sys.d; ++i) CHECK(lifted[i] == Catch::Approx(rhs[i]).margin(1e-14));
        CHECK(lifted[sys.d] == 0.0);
    }
}

TEST_CASE("flow_constant on diagonal lift") {
    BilinearSystem sys;
    sys.dim = 3;
    sys.M = {Mat::diagonal({1.0, -1.0, 0.0})};
    sys.omega = ControlBox(Vec(0), Vec(0));

    auto r = flow_constant(sys, Vec{1.0, 0.0, 0.0}, Vec(0), 1.0);
    CHECK(r.z[0] == Catch::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(r.z[1] == 0.0);
    CHECK(r.log_growth == Catch::Approx(1.0).epsilon(1e-12));

    // the pole is fixed whenever the inhomogeneous column vanishes
    auto pole = flow_constant(sys, Vec{0.0, 0.0, 1.0}, Vec(0), 7.0);
    CHECK(pole.z == Vec{0.0, 0.0, 1.0});
    CHECK(pole.log_growth == 0.0);

    CHECK_THROWS_AS(flow_constant(sys, Vec{0.0, 0.0, 0.0}, Vec(0), 1.0), zero_vector_error);
}

TEST_CASE("flow_constant matches dense RK4") {
    auto cones = testsys::bilinear_cones();
    Vec u{1.0, -0.25, -0.25};
    Mat m = cones.a_matrix(u);
    Vec z0{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};

    BilinearSystem plain;
    plain.dim = 2;
    plain.M = {m};
    plain.omega = ControlBox(Vec(0), Vec(0));
    auto r = flow_constant(plain, z0, Vec(0), 1.0);

    Vec ref = rk4_flow(m, z0, 1.0, 1e-4);
    CHECK(std::abs(r.log_growth - std::log(ref.norm() / z0.norm())) < 1e-6);
    CHECK((r.z - ref).norm() < 1e-6);
}

TEST_CASE("flow_signal composition") {
    auto sys = testsys::saddle();
    LiftedSystem ls = lift(sys);
    Vec z0{0.3, -0.4, 1.0};

    auto one = flow_signal(ls, z0, ControlSignal::constant(1.5, Vec{0.5}));
    auto direct = flow_constant(ls, z0, Vec{0.5}, 1.5);
    CHECK((one.z - direct.z).norm() == 0.0);
    CHECK(one.log_growth == direct.log_growth);

    // semigroup property for a split hop
    ControlSignal halves;
    halves.pieces = {{0.75, Vec{0.5}}, {0.75, Vec{0.5}}};
    auto two = flow_signal(ls, z0, halves);
    CHECK((two.z - direct.z).norm() < 1e-10);
    CHECK(two.log_growth == Catch::Approx(direct.log_growth).margin(1e-10));

    // empty signal: identity
    auto none = flow_signal(ls, z0, ControlSignal{});
    CHECK(none.z == z0);
    CHECK(none.log_growth == 0.0);

    // commuting family: forward then backward control cancels
    BilinearSystem diag;
    diag.dim = 2;
    diag.M = {Mat::diagonal({0.5, -0.5}), Mat::identity(2)};
    diag.omega = ControlBox(Vec{-1.0}, Vec{1.0});
    ControlSignal pm;
    pm.pieces = {{1.0, Vec{0.8}}, {1.0, Vec{-0.8}}};
    auto cancel = flow_signal(diag, Vec{1.0, 2.0}, pm);
    Mat prod = expm(diag.coefficient(Vec{-0.8}), 1.0) * expm(diag.coefficient(Vec{0.8}), 1.0);
    Vec expected = prod * Vec{1.0, 2.0};
    CHECK((cancel.z - expected).norm() < 1e-12);
    Vec direct2 = expm(diag.M[0], 2.0) * Vec{1.0, 2.0};
    CHECK((cancel.z - direct2).norm() < 1e-9);
}

TEST_CASE("last coordinate is conserved by the lifted flow") {
    RandomStream rng(111);
    for (int trial = 0; trial < 50; ++trial) {
        auto sys = random_split_system(rng);
        LiftedSystem ls = lift(sys);
        ControlSignal sig = random_signal(rng, sys.omega, rng.next_in(0.5, 3.0));
        Vec z0(sys.d + 1);
        for (int i = 0; i <= sys.d; ++i) z0[i] = rng.next_in(-2.0, 2.0);
        if (z0.norm() < 1e-3) continue;
        auto r = flow_signal(ls, z0, sig);
        CHECK(r.z[sys.d] == Catch::Approx(z0[sys.d]).margin(1e-9 * (1.0 + z0.norm())));

        // equator invariance: last coordinate zero stays zero
        z0[sys.d] = 0.0;
        if (z0.norm() < 1e-3) continue;
        auto eq = flow_signal(ls, z0, sig);
        CHECK(std::abs(eq.z[sys.d]) < 1e-11 * (1.0 + eq.z.norm()));
    }
}

TEST_CASE("scaling identity") {
    auto sys = testsys::saddle();
    ControlSignal sig = ControlSignal::constant(1.0, Vec{1.0});

    CHECK(scaling_identity_residual(sys, Vec{1.0, 1.0}, sig, 1.0) == 0.0);

    ControlSignal zero_sig = ControlSignal::constant(1.0, Vec{0.0});
    CHECK(scaling_identity_residual(sys, Vec{0.0, 0.0}, zero_sig, 0.7) == 0.0);

    CHECK(scaling_identity_residual(sys, Vec{1.0, 1.0}, sig, 0.5) <= 1e-8 * 2.0);

    auto aut = testsys::autonomous(Mat::identity(2), Vec{1.0, 0.0});
    CHECK_THROWS_AS(scaling_identity_residual(aut, Vec{1.0, 1.0}, ControlSignal{}, 0.5), not_split_error);
}

TEST_CASE("scaling identity over random split systems") {
    RandomStream rng(121);
    int done = 0;
    while (done < 60) {
        auto sys = random_split_system(rng);
        double total = rng.next_in(0.1, 3.0);
        ControlSignal sig = random_signal(rng, sys.omega, total);
        Vec x0(sys.d);
        for (int i = 0; i < sys.d; ++i) x0[i] = rng.next_in(-2.0, 2.0);
        double alpha = rng.next_in(0.05, 0.95);
        CHECK(scaling_identity_residual(sys, x0, sig, alpha) <= 1e-8 * (1.0 + x0.norm()));
        ++done;
    }
}

TEST_CASE("control sample grid") {
    ControlBox box(Vec{-1.0}, Vec{1.0});
    auto g3 = control_grid(box, 3);
    REQUIRE(g3.size() == 3);
    CHECK(g3[0] == Vec{-1.0});
    CHECK(g3[1] == Vec{0.0});
    CHECK(g3[2] == Vec{1.0});

    // even counts skip zero, so it is appended
    auto g2 = control_grid(box, 2);
    REQUIRE(g2.size() == 3);
    CHECK(g2[2] == Vec{0.0});

    // degenerate axes collapse to a single sample
    ControlBox degen(Vec{-1.0, 0.0}, Vec{1.0, 0.0});
    auto gd = control_grid(degen, 3);
    CHECK(gd.size() == 3);
    for (const Vec& u : gd) CHECK(u[1] == 0.0);

    // m = 0: a single empty control
    ControlBox empty(Vec(0), Vec(0));
    auto ge = control_grid(empty, 5);
    CHECK(ge.size() == 1);
    CHECK(ge[0].dim() == 0);
}
