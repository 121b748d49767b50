#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "selgrade/error.hpp"

namespace selgrade {

// dimension cap: d <= 3 lifted twice stays within 8
inline constexpr int kMaxDim = 8;

// eigenvalue real parts closer than this fall into one Lyapunov level
inline constexpr double kEigGroupTol = 1e-6;

inline void check_dim(int n, const char* what) {
    if (n < 0 || n > kMaxDim) throw dimension_error(std::string(what) + ": dimension out of range");
}

class Vec {
  public:
    Vec() = default;

    explicit Vec(int dim, double fill = 0.0) : dim_(dim) {
        check_dim(dim, "Vec");
        e_.fill(0.0);
        for (int i = 0; i < dim_; ++i) e_[i] = fill;
    }

    Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
        check_dim(dim_, "Vec");
        e_.fill(0.0);
        int i = 0;
        for (double x : xs) e_[i++] = x;
    }

    static Vec from(const std::vector<double>& xs) {
        check_dim(static_cast<int>(xs.size()), "Vec");
        Vec v(static_cast<int>(xs.size()));
        for (size_t i = 0; i < xs.size(); ++i) v.e_[i] = xs[i];
        return v;
    }

    int dim() const { return dim_; }
    double operator[](int i) const { return e_[i]; }
    double& operator[](int i) { return e_[i]; }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += e_[i] * o.e_[i];
        return s;
    }

    double norm() const { return std::sqrt(dot(*this)); }

    double norm_inf() const {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(e_[i]));
        return m;
    }

    bool finite() const {
        for (int i = 0; i < dim_; ++i)
            if (!std::isfinite(e_[i])) return false;
        return true;
    }

    bool operator==(const Vec& o) const {
        if (dim_ != o.dim_) return false;
        for (int i = 0; i < dim_; ++i)
            if (e_[i] != o.e_[i]) return false;
        return true;
    }

    std::vector<double> to_std() const { return std::vector<double>(e_.begin(), e_.begin() + dim_); }

  private:
    int dim_ = 0;
    std::array<double, kMaxDim> e_{};
};

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(double s, const Vec& a) {
    Vec r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = s * a[i];
    return r;
}

class Mat {
  public:
    Mat() = default;

    Mat(int rows, int cols) : rows_(rows), cols_(cols) {
        check_dim(rows, "Mat");
        check_dim(cols, "Mat");
        e_.fill(0.0);
    }

    Mat(int rows, int cols, std::initializer_list<double> xs) : Mat(rows, cols) {
        if (static_cast<int>(xs.size()) != rows * cols) throw dimension_error("Mat: entry count mismatch");
        int i = 0;
        for (double x : xs) e_[i++] = x;
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diagonal(std::initializer_list<double> xs) {
        Mat m(static_cast<int>(xs.size()), static_cast<int>(xs.size()));
        int i = 0;
        for (double x : xs) {
            m(i, i) = x;
            ++i;
        }
        return m;
    }

    static Mat from_rows(const std::vector<std::vector<double>>& rows) {
        int r = static_cast<int>(rows.size());
        int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
        Mat m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c) throw dimension_error("Mat: ragged rows");
            for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double operator()(int i, int j) const { return e_[i * cols_ + j]; }
    double& operator()(int i, int j) { return e_[i * cols_ + j]; }

    Vec operator*(const Vec& v) const {
        if (v.dim() != cols_) throw dimension_error("Mat*Vec: shape mismatch");
        Vec r(rows_);
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw dimension_error("Mat*Mat: shape mismatch");
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    Mat operator+(const Mat& o) const {
        Mat r(rows_, cols_);
        for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i] + o.e_[i];
        return r;
    }

    Mat operator-(const Mat& o) const {
        Mat r(rows_, cols_);
        for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i] - o.e_[i];
        return r;
    }

    Mat scaled(double s) const {
        Mat r(rows_, cols_);
        for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = s * e_[i];
        return r;
    }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
        return s;
    }

    // max column sum
    double norm1() const {
        double m = 0.0;
        for (int j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (int i = 0; i < rows_ * cols_; ++i) m = std::max(m, std::abs(e_[i]));
        return m;
    }

    bool zero() const {
        for (int i = 0; i < rows_ * cols_; ++i)
            if (e_[i] != 0.0) return false;
        return true;
    }

    bool finite() const {
        for (int i = 0; i < rows_ * cols_; ++i)
            if (!std::isfinite(e_[i])) return false;
        return true;
    }

    bool operator==(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (int i = 0; i < rows_ * cols_; ++i)
            if (e_[i] != o.e_[i]) return false;
        return true;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::array<double, kMaxDim * kMaxDim> e_{};
};

namespace detail {

// LU with partial pivoting, in place; returns permutation sign, throws on collapse
inline double lu_decompose(Mat& a, std::array<int, kMaxDim>& perm, double pivot_tol) {
    const int n = a.rows();
    double sign = 1.0;
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) < pivot_tol) throw singular_matrix_error("pivot below tolerance");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            std::swap(perm[p], perm[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            for (int j = k + 1; j < n; ++j) a(i, j) -= a(i, k) * a(k, j);
        }
    }
    return sign;
}

inline Vec lu_solve(const Mat& lu, const std::array<int, kMaxDim>& perm, const Vec& b) {
    const int n = lu.rows();
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

}  // namespace detail

inline Vec solve_linear(const Mat& m, const Vec& b) {
    if (!m.square()) throw dimension_error("solve_linear: matrix not square");
    if (m.rows() != b.dim()) throw dimension_error("solve_linear: shape mismatch");
    Mat lu = m;
    std::array<int, kMaxDim> perm{};
    detail::lu_decompose(lu, perm, 1e-12);
    return detail::lu_solve(lu, perm, b);
}

// e^{tM} by scaling and squaring around a (7,7) Pade core
inline Mat expm(const Mat& m, double t = 1.0) {
    if (!m.square()) throw dimension_error("expm: matrix not square");
    if (!std::isfinite(t)) throw dimension_error("expm: time not finite");
    const int n = m.rows();
    if (n == 0) return Mat(0, 0);
    Mat a = m.scaled(t);

    int squarings = 0;
    double norm = a.norm1();
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        a = a.scaled(std::ldexp(1.0, -squarings));
    }

    static const double b[8] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
    const Mat id = Mat::identity(n);
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat u = a * (a6.scaled(b[7]) + a4.scaled(b[5]) + a2.scaled(b[3]) + id.scaled(b[1]));
    const Mat v = a6.scaled(b[6]) + a4.scaled(b[4]) + a2.scaled(b[2]) + id.scaled(b[0]);

    Mat den = v - u;
    Mat num = v + u;
    std::array<int, kMaxDim> perm{};
    detail::lu_decompose(den, perm, 1e-300);
    Mat f(n, n);
    for (int j = 0; j < n; ++j) {
        Vec col(n);
        for (int i = 0; i < n; ++i) col[i] = num(i, j);
        Vec x = detail::lu_solve(den, perm, col);
        for (int i = 0; i < n; ++i) f(i, j) = x[i];
    }

    for (int s = 0; s < squarings; ++s) f = f * f;
    return f;
}

struct Spectrum {
    struct Group {
        double real_part = 0.0;
        int multiplicity = 0;
    };

    std::vector<std::complex<double>> eigenvalues;
    std::vector<Group> groups;  // ascending real parts, separated by more than the grouping tolerance
};

// thrown when QR stalls; carries whatever eigenvalues already deflated
struct convergence_error : error {
    std::vector<std::complex<double>> partial;

    convergence_error(const std::string& msg, std::vector<std::complex<double>> got)
        : error(msg), partial(std::move(got)) {}
};

namespace detail {

// Parlett–Reinsch balancing, radix-2 scaling
inline void balance(Mat& a) {
    const int n = a.rows();
    bool converged = false;
    while (!converged) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / 2.0;
            double f = 1.0;
            double s = c + r;
            while (c < g) {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while (c > g) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                const double ginv = 1.0 / f;
                for (int j = 0; j < n; ++j) a(i, j) *= ginv;
                for (int j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form (eigenvalues only, no accumulation)
inline void hessenberg(Mat& a) {
    const int n = a.rows();
    for (int k = 1; k < n - 1; ++k) {
        double scale = 0.0;
        for (int i = k; i < n; ++i) scale += std::abs(a(i, k - 1));
        if (scale == 0.0) continue;

        double h = 0.0;
        std::array<double, kMaxDim> v{};
        for (int i = k; i < n; ++i) {
            v[i] = a(i, k - 1) / scale;
            h += v[i] * v[i];
        }
        double g = v[k] >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        h -= v[k] * g;
        v[k] -= g;

        // apply P = I - vv^T/h from both sides
        for (int j = 0; j < n; ++j) {
            double f = 0.0;
            for (int i = k; i < n; ++i) f += v[i] * a(i, j);
            f /= h;
            for (int i = k; i < n; ++i) a(i, j) -= f * v[i];
        }
        for (int i = 0; i < n; ++i) {
            double f = 0.0;
            for (int j = k; j < n; ++j) f += a(i, j) * v[j];
            f /= h;
            for (int j = k; j < n; ++j) a(i, j) -= f * v[j];
        }
        a(k, k - 1) = scale * g;
        for (int i = k + 1; i < n; ++i) a(i, k - 1) = 0.0;
    }
}

// Francis double-shift QR on a real Hessenberg matrix, eigenvalues only
inline std::vector<std::complex<double>> hqr(Mat& a, int max_sweeps_per_eig) {
    const int n = a.rows();
    std::vector<std::complex<double>> eig;
    eig.reserve(n);

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
    if (anorm == 0.0) anorm = 1.0;

    int nn = n - 1;
    double t = 0.0;
    int its = 0;
    while (nn >= 0) {
        int l;
        for (l = nn; l > 0; --l) {
            double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
            if (s == 0.0) s = anorm;
            if (std::abs(a(l, l - 1)) <= 1e-15 * s) {
                a(l, l - 1) = 0.0;
                break;
            }
        }
        double x = a(nn, nn);
        if (l == nn) {
            eig.emplace_back(x + t, 0.0);
            --nn;
            its = 0;
            continue;
        }
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
            double p = 0.5 * (y - x);
            double q = p * p + w;
            double z = std::sqrt(std::abs(q));
            x += t;
            if (q >= 0.0) {
                z = p + (p >= 0.0 ? z : -z);
                eig.emplace_back(x + z, 0.0);
                eig.emplace_back(z != 0.0 ? x - w / z : x + z, 0.0);
            } else {
                eig.emplace_back(x + p, z);
                eig.emplace_back(x + p, -z);
            }
            nn -= 2;
            its = 0;
            continue;
        }

        if (its >= max_sweeps_per_eig) {
            std::sort(eig.begin(), eig.end(), [](const auto& u, const auto& v) {
                return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
            });
            throw convergence_error("QR iteration budget exhausted", eig);
        }
        if (its == 10 || its == 20) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
        }
        ++its;

        int m;
        double p = 0.0, q = 0.0, z = 0.0, r = 0.0, s = 0.0;
        for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= 1e-16 * v) break;
        }
        for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
        }
        for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
                p = a(k, k - 1);
                q = a(k + 1, k - 1);
                r = k != nn - 1 ? a(k + 2, k - 1) : 0.0;
                x = std::abs(p) + std::abs(q) + std::abs(r);
                if (x != 0.0) {
                    p /= x;
                    q /= x;
                    r /= x;
                }
            }
            s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s == 0.0) continue;
            if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
                a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                    p += r * a(k + 2, j);
                    a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
            }
            int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                    p += z * a(i, k + 2);
                    a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
            }
        }
    }
    return eig;
}

}  // namespace detail

inline Spectrum eigen(const Mat& m, double group_tol = kEigGroupTol) {
    if (!m.square()) throw dimension_error("eigen: matrix not square");
    const int n = m.rows();
    Spectrum out;
    if (n == 0) return out;

    Mat a = m;
    detail::balance(a);
    detail::hessenberg(a);
    out.eigenvalues = detail::hqr(a, 40);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const auto& u, const auto& v) {
        return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    });

    // group by real part; clusters split where the gap exceeds the tolerance
    size_t i = 0;
    while (i < out.eigenvalues.size()) {
        size_t j = i + 1;
        while (j < out.eigenvalues.size() &&
               out.eigenvalues[j].real() - out.eigenvalues[j - 1].real() <= group_tol)
            ++j;
        double sum = 0.0;
        for (size_t k = i; k < j; ++k) sum += out.eigenvalues[k].real();
        out.groups.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
        i = j;
    }
    return out;
}

}  // namespace selgrade
