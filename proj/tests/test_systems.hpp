#pragma once

// control systems shared across the test suites

#include "selgrade/system.hpp"

namespace selgrade::testsys {

// saddle linear system: dx = diag(1,-1) x + (1,1) u, |u| <= 1
inline AffineControlSystem saddle() {
    AffineControlSystem s;
    s.d = 2;
    s.m = 1;
    s.A = {Mat::diagonal({1.0, -1.0}), Mat(2, 2)};
    s.a = {Vec{0.0, 0.0}, Vec{1.0, 1.0}};
    s.omega = ControlBox(Vec{-1.0}, Vec{1.0});
    s.split = SplitMarker{{0}, {}};
    s.validate();
    return s;
}

// semistable linear system: dx = diag(0,1) x + (1,1) u, |u| <= 1
inline AffineControlSystem semistable() {
    AffineControlSystem s;
    s.d = 2;
    s.m = 1;
    s.A = {Mat::diagonal({0.0, 1.0}), Mat(2, 2)};
    s.a = {Vec{0.0, 0.0}, Vec{1.0, 1.0}};
    s.omega = ControlBox(Vec{-1.0}, Vec{1.0});
    s.split = SplitMarker{{0}, {}};
    s.validate();
    return s;
}

// shear with bounded drive: dx = [[0,1],[0,0]] x + (1,0) u, |u| <= 1
inline AffineControlSystem double_integrator() {
    AffineControlSystem s;
    s.d = 2;
    s.m = 1;
    s.A = {Mat(2, 2, {0.0, 1.0, 0.0, 0.0}), Mat(2, 2)};
    s.a = {Vec{0.0, 0.0}, Vec{1.0, 0.0}};
    s.omega = ControlBox(Vec{-1.0}, Vec{1.0});
    s.split = SplitMarker{{0}, {}};
    s.validate();
    return s;
}

// planar bilinear system with two invariant cones and overlapping spectra
inline AffineControlSystem bilinear_cones() {
    AffineControlSystem s;
    s.d = 2;
    s.m = 3;
    s.A = {Mat(2, 2, {0.0, 0.75, 0.75, 0.0}), Mat::identity(2), Mat(2, 2, {0.0, 1.0, 0.0, 0.0}),
           Mat(2, 2, {0.0, 0.0, 1.0, 0.0})};
    s.a = {Vec{0.0, 0.0}, Vec{0.0, 0.0}, Vec{0.0, 0.0}, Vec{0.0, 0.0}};
    s.omega = ControlBox(Vec{-1.0, -0.25, -0.25}, Vec{1.0, 0.25, 0.25});
    s.split = SplitMarker{{}, {0, 1, 2}};
    s.validate();
    return s;
}

// autonomous affine system dx = A x + a as a control system with m = 0
inline AffineControlSystem autonomous(const Mat& A, const Vec& a) {
    AffineControlSystem s;
    s.d = A.rows();
    s.m = 0;
    s.A = {A};
    s.a = {a};
    s.omega = ControlBox(Vec(0), Vec(0));
    s.validate();
    return s;
}

}  // namespace selgrade::testsys
