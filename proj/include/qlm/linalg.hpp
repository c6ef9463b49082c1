#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace qlm {

inline constexpr int kMaxDim = 8;

/// Small fixed-capacity vector for points and gradients in R^n, n <= 8.
struct Vec {
    int n = 0;
    std::array<double, kMaxDim> a{};

    Vec() = default;
    explicit Vec(int dim) : n(dim) { a.fill(0.0); }
    Vec(std::initializer_list<double> xs) : n(int(xs.size())) {
        int i = 0;
        for (double x : xs) a[i++] = x;
    }
    double& operator[](int i) { return a[size_t(i)]; }
    double operator[](int i) const { return a[size_t(i)]; }

    Vec operator+(const Vec& o) const {
        Vec r(n);
        for (int i = 0; i < n; ++i) r[i] = a[i] + o[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r(n);
        for (int i = 0; i < n; ++i) r[i] = a[i] - o[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r(n);
        for (int i = 0; i < n; ++i) r[i] = a[i] * s;
        return r;
    }
    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += a[i] * o[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

/// Dense symmetric n x n matrix, n <= 8.
struct SymMat {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    SymMat() = default;
    explicit SymMat(int dim) : n(dim) { a.fill(0.0); }
    double& at(int i, int j) { return a[size_t(i * kMaxDim + j)]; }
    double at(int i, int j) const { return a[size_t(i * kMaxDim + j)]; }

    static SymMat identity(int dim) {
        SymMat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }
    SymMat operator*(double s) const {
        SymMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) * s;
        return r;
    }
    SymMat operator-(const SymMat& o) const {
        SymMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) - o.at(i, j);
        return r;
    }
    Vec apply(const Vec& v) const {
        Vec r(n);
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += at(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }
    double quad(const Vec& v) const { return apply(v).dot(v); }
    double max_abs() const {
        double m = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m = std::max(m, std::abs(at(i, j)));
        return m;
    }
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending order.
inline std::array<double, kMaxDim> sym_eigenvalues(SymMat m) {
    const int n = m.n;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
        if (off < 1e-30 * (1.0 + m.max_abs() * m.max_abs())) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = m.at(k, p), akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = m.at(p, k), aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::array<double, kMaxDim> ev{};
    for (int i = 0; i < n; ++i) ev[size_t(i)] = m.at(i, i);
    for (int i = 1; i < n; ++i)
        for (int j = i; j > 0 && ev[size_t(j - 1)] > ev[size_t(j)]; --j)
            std::swap(ev[size_t(j - 1)], ev[size_t(j)]);
    return ev;
}

/// Solve the small linear system a x = b in place (partial pivoting).
inline Vec solve_linear(SymMat a, Vec b) {
    const int n = a.n;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a.at(i, k)) > std::abs(a.at(piv, k))) piv = i;
        if (std::abs(a.at(piv, k)) < 1e-300) throw std::runtime_error("solve_linear: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a.at(i, k) / a.at(k, k);
            for (int j = k; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a.at(i, j) * x[j];
        x[i] = s / a.at(i, i);
    }
    return x;
}

}  // namespace qlm
