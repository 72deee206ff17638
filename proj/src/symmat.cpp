#include "gmrftau/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmrf {

SymMatrix SymMatrix::submatrix(const std::vector<int>& keep) const {
    SymMatrix out(int(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            out.set(int(i), int(j), (*this)(keep[i], keep[j]));
    return out;
}

double SymMatrix::max_abs_diff(const SymMatrix& other) const {
    double m = 0.0;
    for (std::size_t k = 0; k < tri_.size(); ++k)
        m = std::max(m, std::fabs(tri_[k] - other.tri_[k]));
    return m;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : tri_) m = std::max(m, std::fabs(v));
    return m;
}

CholeskyResult cholesky(const SymMatrix& m, double rel_tol) {
    const int n = m.dim();
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(m(i, i)));
    const double cutoff = rel_tol * std::max(max_diag, 1e-300);

    CholeskyResult res;
    res.factor.n_ = n;
    auto& L = res.factor.tri_;
    L.assign(std::size_t(n) * (n + 1) / 2, 0.0);
    auto at = [&L](int i, int j) -> double& { return L[std::size_t(i) * (i + 1) / 2 + j]; };

    for (int j = 0; j < n; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
        if (!(d > cutoff)) {  // also catches NaN
            res.ok = false;
            res.failed_pivot = j;
            return res;
        }
        const double root = std::sqrt(d);
        at(j, j) = root;
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / root;
        }
    }
    res.ok = true;
    return res;
}

CholeskyFactor cholesky_or_throw(const SymMatrix& m) {
    CholeskyResult res = cholesky(m);
    if (!res.ok) throw NotPositiveDefinite(res.failed_pivot);
    return res.factor;
}

bool is_positive_definite(const SymMatrix& m) { return cholesky(m).ok; }

double CholeskyFactor::logdet() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += std::log(pivot(i));
    return 2.0 * s;
}

void CholeskyFactor::solve_in_place(std::vector<double>& b) const {
    const auto& L = tri_;
    auto at = [&L](int i, int j) { return L[std::size_t(i) * (i + 1) / 2 + j]; };
    for (int i = 0; i < n_; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= at(i, k) * b[k];
        b[i] = s / at(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n_; ++k) s -= at(k, i) * b[k];
        b[i] = s / at(i, i);
    }
}

SymMatrix CholeskyFactor::inverse() const {
    SymMatrix out(n_);
    std::vector<double> col(n_);
    for (int j = 0; j < n_; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        solve_in_place(col);
        for (int i = j; i < n_; ++i) out.set(i, j, col[i]);
    }
    return out;
}

double logdet(const SymMatrix& m) { return cholesky_or_throw(m).logdet(); }

double det(const SymMatrix& m) {
    const double ld = logdet(m);
    if (ld >= 700.0) return std::numeric_limits<double>::infinity();
    if (ld <= -700.0) return 0.0;
    return std::exp(ld);
}

SymMatrix inverse(const SymMatrix& m) { return cholesky_or_throw(m).inverse(); }

SymMatrix schur_complement(const SymMatrix& m, const std::vector<int>& eliminate) {
    const int n = m.dim();
    std::vector<char> in_s(n, 0);
    for (int v : eliminate) {
        if (v < 0 || v >= n) throw std::invalid_argument("schur_complement: index out of range");
        if (in_s[v]) throw std::invalid_argument("schur_complement: duplicate index");
        in_s[v] = 1;
    }
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (!in_s[v]) rest.push_back(v);
    if (rest.empty()) throw std::invalid_argument("schur_complement: nothing left");
    if (eliminate.empty()) return m.submatrix(rest);

    CholeskyFactor f = cholesky_or_throw(m.submatrix(eliminate));
    const int k = int(eliminate.size());
    const int r = int(rest.size());
    // columns of m_{S x S'} solved against m_{SS}
    std::vector<std::vector<double>> sol(r, std::vector<double>(k));
    for (int j = 0; j < r; ++j) {
        for (int i = 0; i < k; ++i) sol[j][i] = m(eliminate[i], rest[j]);
        f.solve_in_place(sol[j]);
    }
    SymMatrix out(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = m(rest[i], rest[j]);
            for (int t = 0; t < k; ++t) s -= m(eliminate[t], rest[i]) * sol[j][t];
            out.set(i, j, s);
        }
    return out;
}

double LuDet::value() const {
    if (sign == 0) return 0.0;
    if (log_abs >= 700.0) return sign * std::numeric_limits<double>::infinity();
    return sign * std::exp(log_abs);
}

LuDet det_lu(DenseMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("det_lu: matrix not square");
    const int n = a.rows();
    int sign = 1;
    double log_abs = 0.0;
    for (int j = 0; j < n; ++j) {
        int piv = j;
        for (int i = j + 1; i < n; ++i)
            if (std::fabs(a.at(i, j)) > std::fabs(a.at(piv, j))) piv = i;
        if (a.at(piv, j) == 0.0)
            return {-std::numeric_limits<double>::infinity(), 0};
        if (piv != j) {
            for (int k = 0; k < n; ++k) std::swap(a.at(piv, k), a.at(j, k));
            sign = -sign;
        }
        const double d = a.at(j, j);
        if (d < 0) sign = -sign;
        log_abs += std::log(std::fabs(d));
        for (int i = j + 1; i < n; ++i) {
            const double f = a.at(i, j) / d;
            if (f == 0.0) continue;
            for (int k = j + 1; k < n; ++k) a.at(i, k) -= f * a.at(j, k);
        }
    }
    return {log_abs, sign};
}

}  // namespace gmrf
