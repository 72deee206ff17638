#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmrf {

/// Dense symmetric matrix. Only the lower triangle is stored, so symmetry
/// is exact by construction.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : n_(dim), tri_(std::size_t(dim) * (dim + 1) / 2, 0.0) {
        if (dim < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
    }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
        return m;
    }

    /// Matrix with `diag` on the diagonal and `off` everywhere else.
    static SymMatrix constant(int dim, double diag, double off) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j <= i; ++j) m.set(i, j, i == j ? diag : off);
        return m;
    }

    int dim() const { return n_; }

    double operator()(int i, int j) const { return tri_[idx(i, j)]; }
    void set(int i, int j, double v) { tri_[idx(i, j)] = v; }
    void add(int i, int j, double v) { tri_[idx(i, j)] += v; }

    /// Principal submatrix on the given (strictly increasing) index list.
    SymMatrix submatrix(const std::vector<int>& keep) const;

    /// Max |entry| of the difference, used for overlap checks.
    double max_abs_diff(const SymMatrix& other) const;

    double max_abs() const;

private:
    static std::size_t idx(int i, int j) {
        if (i < j) { int t = i; i = j; j = t; }
        return std::size_t(i) * (i + 1) / 2 + j;
    }

    int n_ = 0;
    std::vector<double> tri_;
};

/// Thrown when an operation requires a positive definite matrix and the
/// factorization hit a nonpositive pivot.
struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(int pivot_index)
        : std::runtime_error("matrix is not positive definite (pivot " +
                             std::to_string(pivot_index) + ")"),
          pivot(pivot_index) {}
    int pivot;
};

struct CholeskyResult;

/// Attempt the factorization. A pivot d <= rel_tol * max(diagonal) is
/// rejected as not positive definite (scale-aware cutoff).
CholeskyResult cholesky(const SymMatrix& m, double rel_tol = 1e-12);

/// Lower-triangular Cholesky factor L with L L^T = M.
class CholeskyFactor {
public:
    int dim() const { return n_; }
    double pivot(int i) const { return tri_[std::size_t(i) * (i + 1) / 2 + i]; }

    /// 2 * sum of log pivots.
    double logdet() const;

    /// Solve L L^T x = b in place.
    void solve_in_place(std::vector<double>& b) const;

    SymMatrix inverse() const;

private:
    friend CholeskyResult cholesky(const SymMatrix&, double);
    int n_ = 0;
    std::vector<double> tri_;
};

struct CholeskyResult {
    bool ok = false;
    int failed_pivot = -1;  // valid when !ok
    CholeskyFactor factor;  // valid when ok
};

CholeskyFactor cholesky_or_throw(const SymMatrix& m);
bool is_positive_definite(const SymMatrix& m);

double logdet(const SymMatrix& m);  // throws NotPositiveDefinite

/// exp(logdet); +inf / 0 when |logdet| >= 700 to avoid overflow.
double det(const SymMatrix& m);

SymMatrix inverse(const SymMatrix& m);

/// Eliminate the block S: returns m_{S'S'} - m_{S'S} m_{SS}^{-1} m_{SS'}
/// indexed by the complement of S in increasing order.
SymMatrix schur_complement(const SymMatrix& m, const std::vector<int>& eliminate);

/// Small general dense matrix for nonsymmetric determinants.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : r_(rows), c_(cols), a_(std::size_t(rows) * cols, 0.0) {}

    int rows() const { return r_; }
    int cols() const { return c_; }
    double& at(int i, int j) { return a_[std::size_t(i) * c_ + j]; }
    double at(int i, int j) const { return a_[std::size_t(i) * c_ + j]; }

private:
    int r_ = 0, c_ = 0;
    std::vector<double> a_;
};

struct LuDet {
    double log_abs;  // -inf when singular
    int sign;        // -1, 0, +1
    double value() const;
};

/// Determinant by LU with partial pivoting (destroys the copy).
LuDet det_lu(DenseMatrix a);

}  // namespace gmrf
