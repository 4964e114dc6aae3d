#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ajchain/errors.hpp"

namespace ajchain {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Dense 2x2 real matrix, row major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
    // Rank-one v v^T.
    static Mat2 outer(const Vec2& u, const Vec2& v) {
        return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y};
    }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2& operator+=(const Mat2& o) {
        a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
        return *this;
    }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }

    Vec2 apply(const Vec2& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    double max_abs() const {
        return std::max(std::max(std::fabs(a11), std::fabs(a12)),
                        std::max(std::fabs(a21), std::fabs(a22)));
    }
    double frobenius() const {
        return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
    }
    // Smallest eigenvalue, assuming the matrix is (numerically) symmetric.
    double min_eigenvalue_sym() const {
        const double tr = trace();
        const double off = 0.5 * (a12 + a21);
        const double d = 0.5 * (a11 - a22);
        return 0.5 * tr - std::sqrt(d * d + off * off);
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Small dense square matrix for finite windows of the bilateral chain.
// Row/column indices run over the window states -M..M mapped to 0..2M.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    DenseMatrix operator*(const DenseMatrix& o) const {
        if (n_ != o.n_) throw DomainError("DenseMatrix: size mismatch in product");
        DenseMatrix r(n_);
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < n_; ++k) {
                const double v = at(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < n_; ++j) r.at(i, j) += v * o.at(k, j);
            }
        }
        return r;
    }

    double row_sum(int i) const {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += at(i, j);
        return s;
    }

private:
    int n_ = 0;
    std::vector<double> a_;
};

}  // namespace ajchain
