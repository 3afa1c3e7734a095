#pragma once

// Eigenvalues of Delta + q restricted to the box [-r, r]^d with zero
// boundary values, by Lanczos with full reorthogonalisation. Used only as an
// independent check on the bound-state scan.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "latrad/lattice.hpp"

namespace latrad::testing {

class BoxOperator {
public:
    BoxOperator(const CompactLatticeFunction& q, int radius) : d_(q.dim()), r_(radius), side_(2 * radius + 1) {
        size_ = 1;
        for (int j = 0; j < d_; ++j) size_ *= side_;
        potential_.assign(size_, 0.0);
        for (const auto& [s, v] : q.entries()) {
            long idx = 0;
            for (int j = 0; j < d_; ++j) idx = idx * side_ + (s[j] + r_);
            potential_[static_cast<size_t>(idx)] = v.real();
        }
        stride_.assign(static_cast<size_t>(d_), 1);
        for (int j = d_ - 2; j >= 0; --j) stride_[static_cast<size_t>(j)] = stride_[static_cast<size_t>(j + 1)] * side_;
    }

    long size() const { return size_; }

    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
        y.resize(size_);
        for (long i = 0; i < size_; ++i) {
            double acc = potential_[static_cast<size_t>(i)] * x(i);
            for (int j = 0; j < d_; ++j) {
                const long st = stride_[static_cast<size_t>(j)];
                const long c = (i / st) % side_;
                if (c > 0) acc += x(i - st);
                if (c + 1 < side_) acc += x(i + st);
            }
            y(i) = acc;
        }
    }

private:
    int d_, r_, side_;
    long size_ = 0;
    std::vector<double> potential_;
    std::vector<long> stride_;
};

// Converged Ritz values outside [-2d, 2d], ascending and deduplicated.
inline std::vector<double> box_bound_states(const CompactLatticeFunction& q, int radius, int steps = 160,
                                            double residual_tol = 1e-9) {
    const int d = q.dim();
    const BoxOperator op(q, radius);
    const long n = op.size();
    steps = static_cast<int>(std::min<long>(steps, n));
    Eigen::MatrixXd basis(n, steps);
    std::vector<double> alpha, beta;
    std::mt19937 rng(12345);
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n), w;
    for (long i = 0; i < n; ++i) v(i) = normal(rng);
    v.normalize();
    int m = 0;
    for (; m < steps; ++m) {
        basis.col(m) = v;
        op.apply(v, w);
        const double a = v.dot(w);
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            w -= basis.leftCols(m + 1) * (basis.leftCols(m + 1).transpose() * w);
        const double b = w.norm();
        if (m + 1 == steps || b < 1e-12) {
            ++m;
            beta.push_back(b);
            break;
        }
        beta.push_back(b);
        v = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<size_t>(i)];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    std::vector<double> out;
    const double edge = 2.0 * d;
    for (int i = 0; i < m; ++i) {
        const double theta = es.eigenvalues()(i);
        const double res = std::abs(beta.back() * es.eigenvectors()(m - 1, i));
        if (std::abs(theta) > edge && res < residual_tol)
            if (out.empty() || theta - out.back() > 1e-7) out.push_back(theta);
    }
    return out;
}

} // namespace latrad::testing
