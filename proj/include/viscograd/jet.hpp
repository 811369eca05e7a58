#pragma once

#include <Eigen/Dense>

#include <array>
#include <cassert>

namespace viscograd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Symmetric n x n matrix (n <= 3) stored as its upper triangle, so X = X^T
/// holds by construction.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n) { assert(n >= 0 && n <= 3); }

    static SymMatrix zero(int n) { return SymMatrix(n); }
    static SymMatrix identity(int n, double scale = 1.0) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, scale);
        return m;
    }
    /// Reads the upper triangle of `dense`.
    static SymMatrix from_upper(const Mat& dense) {
        SymMatrix m(static_cast<int>(dense.rows()));
        for (int i = 0; i < m.n_; ++i)
            for (int j = i; j < m.n_; ++j) m.set(i, j, dense(i, j));
        return m;
    }
    static SymMatrix outer(const Vec& v) {
        SymMatrix m(static_cast<int>(v.size()));
        for (int i = 0; i < m.n_; ++i)
            for (int j = i; j < m.n_; ++j) m.set(i, j, v(i) * v(j));
        return m;
    }

    int dim() const noexcept { return n_; }
    double operator()(int i, int j) const noexcept { return upper_[slot(i, j)]; }
    void set(int i, int j, double v) noexcept { upper_[slot(i, j)] = v; }

    Mat dense() const {
        Mat m(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    /// X : p (x) p
    double contract(const Vec& p) const noexcept {
        double s = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * p(i) * p(j);
        return s;
    }
    double trace() const noexcept {
        double t = 0.0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }
    double min_eigenvalue() const {
        if (n_ == 0) return 0.0;
        Eigen::SelfAdjointEigenSolver<Mat> es(dense(), Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }
    double max_eigenvalue() const {
        if (n_ == 0) return 0.0;
        Eigen::SelfAdjointEigenSolver<Mat> es(dense(), Eigen::EigenvaluesOnly);
        return es.eigenvalues()(n_ - 1);
    }

    SymMatrix operator+(const SymMatrix& o) const noexcept {
        SymMatrix r(n_);
        for (int k = 0; k < 6; ++k) r.upper_[k] = upper_[k] + o.upper_[k];
        return r;
    }
    SymMatrix operator-(const SymMatrix& o) const noexcept {
        SymMatrix r(n_);
        for (int k = 0; k < 6; ++k) r.upper_[k] = upper_[k] - o.upper_[k];
        return r;
    }
    SymMatrix operator-() const noexcept {
        SymMatrix r(n_);
        for (int k = 0; k < 6; ++k) r.upper_[k] = -upper_[k];
        return r;
    }
    friend SymMatrix operator*(double s, const SymMatrix& m) noexcept {
        SymMatrix r(m.n_);
        for (int k = 0; k < 6; ++k) r.upper_[k] = s * m.upper_[k];
        return r;
    }

    bool operator==(const SymMatrix& o) const noexcept { return n_ == o.n_ && upper_ == o.upper_; }

private:
    // Row-major upper triangle of a 3x3 layout; unused slots stay zero.
    static constexpr int slot(int i, int j) noexcept {
        if (i > j) {
            const int t = i;
            i = j;
            j = t;
        }
        constexpr int row_start[3] = {0, 3, 5};
        return row_start[i] + (j - i);
    }

    int n_ = 0;
    std::array<double, 6> upper_{};
};

/// Candidate second-order one-sided derivative (p, X).
struct Jet {
    Vec p;
    SymMatrix X;
};

/// Jet with every entry negated; maps super-jets of u to sub-jets of -u.
inline Jet negated(const Jet& j) { return Jet{-j.p, -j.X}; }

} // namespace viscograd
