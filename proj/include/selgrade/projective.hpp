#pragma once

#include <cmath>

#include "selgrade/error.hpp"
#include "selgrade/linalg.hpp"

namespace selgrade {

// point of real projective space, stored as a canonical unit representative:
// the sign is flipped so the last nonzero coordinate is positive
class ProjectivePoint {
  public:
    explicit ProjectivePoint(const Vec& v) : rep_(v) {
        if (!rep_.finite()) throw zero_vector_error("ProjectivePoint: non-finite input");
        double n = rep_.norm();
        if (n == 0.0) throw zero_vector_error("ProjectivePoint: zero vector has no direction");
        if (std::abs(n - 1.0) > 4e-16)
            for (int i = 0; i < rep_.dim(); ++i) rep_[i] /= n;
        canonicalize();
    }

    const Vec& rep() const { return rep_; }
    int ambient_dim() const { return rep_.dim(); }
    double last() const { return rep_[rep_.dim() - 1]; }

    // the negated representative canonicalizes back to the same point, exactly
    ProjectivePoint antipode() const {
        ProjectivePoint p = *this;
        for (int i = 0; i < p.rep_.dim(); ++i) p.rep_[i] = -p.rep_[i];
        p.canonicalize();
        return p;
    }

  private:
    void canonicalize() {
        for (int i = rep_.dim() - 1; i >= 0; --i) {
            if (rep_[i] != 0.0) {
                if (rep_[i] < 0.0)
                    for (int j = 0; j <= i; ++j) rep_[j] = -rep_[j];
                return;
            }
        }
    }

    Vec rep_;
};

// chordal metric on projective space, min over the two unit representatives
inline double proj_metric(const ProjectivePoint& p, const ProjectivePoint& q) {
    if (p.ambient_dim() != q.ambient_dim()) throw dimension_error("proj_metric: ambient dimensions differ");
    double diff = 0.0, sum = 0.0;
    for (int i = 0; i < p.ambient_dim(); ++i) {
        double a = p.rep()[i], b = q.rep()[i];
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
    }
    return std::sqrt(std::min(diff, sum));
}

// distance from a unit vector to a projective point; same metric, saves a canonicalization
inline double proj_metric_unit(const Vec& u, const ProjectivePoint& q) {
    double d = std::abs(u.dot(q.rep()));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(d, 1.0)));
}

// chart of the northern hemisphere: x -> direction of (x, 1)
inline ProjectivePoint h1(const Vec& x) {
    Vec z(x.dim() + 1);
    for (int i = 0; i < x.dim(); ++i) z[i] = x[i];
    z[x.dim()] = 1.0;
    return ProjectivePoint(z);
}

// inverse chart; defined only away from the equator
inline Vec h1_inverse(const ProjectivePoint& p, double delta) {
    if (delta <= 0.0) throw dimension_error("h1_inverse: delta must be positive");
    const Vec& r = p.rep();
    const int d = r.dim() - 1;
    double last = r[d];
    if (std::abs(last) <= delta) throw at_infinity_error("h1_inverse: point at or near the equator");
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = r[i] / last;
    return x;
}

// embeds directions at infinity: appends a zero coordinate
inline ProjectivePoint equator_embed(const ProjectivePoint& p) {
    Vec z(p.ambient_dim() + 1);
    for (int i = 0; i < p.ambient_dim(); ++i) z[i] = p.rep()[i];
    z[p.ambient_dim()] = 0.0;
    return ProjectivePoint(z);
}

}  // namespace selgrade
