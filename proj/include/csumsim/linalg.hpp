#pragma once

// Small dense complex matrices. Everything here is a handful of modes wide,
// so no attempt is made at being clever.

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"

namespace csumsim {

using cplx = std::complex<double>;

struct Mat {
    int n = 0;
    std::vector<cplx> a; // row-major, n*n

    Mat() = default;
    explicit Mat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim) {}
    Mat(int dim, std::initializer_list<cplx> vals) : n(dim), a(vals) {
        if (static_cast<int>(a.size()) != n * n)
            throw ConfigError("matrix initializer size mismatch");
    }

    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline Mat mul(const Mat& x, const Mat& y) {
    if (x.n != y.n) throw ConfigError("matrix dimension mismatch");
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            cplx v = x.at(i, k);
            if (v == cplx{}) continue;
            for (int j = 0; j < x.n; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

inline Mat adjoint(const Mat& x) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) r.at(i, j) = std::conj(x.at(j, i));
    return r;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
    double d = 0.0;
    for (size_t k = 0; k < x.a.size(); ++k) d = std::max(d, std::abs(x.a[k] - y.a[k]));
    return d;
}

inline bool is_unitary(const Mat& u, double tol = 1e-12) {
    return max_abs_diff(mul(adjoint(u), u), Mat::identity(u.n)) < tol;
}

// Spectral norm via power iteration on U†U; plenty for validation of tiny maps.
inline double op_norm(const Mat& u) {
    Mat m = mul(adjoint(u), u);
    std::vector<cplx> v(m.n, 1.0);
    double lambda = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<cplx> w(m.n);
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j) w[i] += m.at(i, j) * v[j];
        double norm = 0.0;
        for (auto& c : w) norm += std::norm(c);
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (auto& c : w) c /= norm;
        lambda = norm;
        v = std::move(w);
    }
    return std::sqrt(lambda);
}

} // namespace csumsim
