#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gmrftau/symmat.hpp"
#include "oracles.hpp"

using namespace gmrf;

namespace {

// Random PD matrix built as L L^T + eps I from a random lower-triangular L.
SymMatrix random_pd(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) l[i][j] = u(rng);
        l[i][i] = 0.5 + std::fabs(u(rng));
    }
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k <= j; ++k) s += l[i][k] * l[j][k];
            m.set(i, j, s + (i == j ? 1e-3 : 0.0));
        }
    return m;
}

}  // namespace

TEST_CASE("cholesky determinant matches cofactor expansion") {
    for (int n : {1, 2, 3, 5, 7}) {
        for (std::uint64_t seed : {11u, 12u, 13u}) {
            SymMatrix m = random_pd(n, seed * 100 + n);
            double reference = oracle::cofactor_det(m);
            REQUIRE(reference > 0.0);
            CHECK(logdet(m) == doctest::Approx(std::log(reference)).epsilon(1e-10));
            CHECK(det(m) == doctest::Approx(reference).epsilon(1e-10));
        }
    }
}

TEST_CASE("cholesky reports the first failing pivot") {
    SymMatrix m(3);
    m.set(0, 0, 1.0);
    m.set(1, 1, -1.0);
    m.set(2, 2, 1.0);
    CholeskyResult r = cholesky(m);
    REQUIRE(!r.ok);
    CHECK(r.failed_pivot == 1);
    CHECK_THROWS_AS(cholesky_or_throw(m), NotPositiveDefinite);
    try {
        cholesky_or_throw(m);
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot == 1);
    }
}

TEST_CASE("pivot cutoff is relative to the diagonal scale") {
    // A tiny but healthy matrix passes; a tiny pivot next to a large
    // diagonal fails.
    SymMatrix small = SymMatrix::identity(2);
    small.set(0, 0, 1e-8);
    small.set(1, 1, 1e-8);
    CHECK(is_positive_definite(small));

    SymMatrix skewed = SymMatrix::identity(2);
    skewed.set(0, 0, 1e16);
    skewed.set(1, 1, 1.0);
    CHECK(!cholesky(skewed).ok);
}

TEST_CASE("inverse really inverts") {
    SymMatrix m = random_pd(6, 42);
    SymMatrix inv = inverse(m);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double s = 0.0;
            for (int k = 0; k < 6; ++k) s += m(i, k) * inv(k, j);
            CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
        }
}

TEST_CASE("solve_in_place solves the system") {
    SymMatrix m = random_pd(5, 7);
    CholeskyFactor f = cholesky_or_throw(m);
    std::vector<double> b = {1.0, -2.0, 0.5, 3.0, -1.0};
    std::vector<double> x = b;
    f.solve_in_place(x);
    for (int i = 0; i < 5; ++i) {
        double s = 0.0;
        for (int k = 0; k < 5; ++k) s += m(i, k) * x[std::size_t(k)];
        CHECK(s == doctest::Approx(b[std::size_t(i)]).epsilon(1e-9));
    }
}

TEST_CASE("submatrix picks the right entries") {
    SymMatrix m = random_pd(5, 99);
    SymMatrix s = m.submatrix({0, 2, 4});
    REQUIRE(s.dim() == 3);
    int keep[3] = {0, 2, 4};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(s(i, j) == m(keep[i], keep[j]));
}

TEST_CASE("schur complement satisfies the determinant identity") {
    SymMatrix m = random_pd(6, 5);
    std::vector<int> elim = {1, 3};
    SymMatrix s = schur_complement(m, elim);
    REQUIRE(s.dim() == 4);
    // det M = det M_EE * det S
    double det_ee = oracle::cofactor_det(m.submatrix(elim));
    CHECK(oracle::cofactor_det(m) ==
          doctest::Approx(det_ee * oracle::cofactor_det(s)).epsilon(1e-9));
    // Entrywise: S = M_CC - M_CE M_EE^{-1} M_EC on the complement C = {0,2,4,5}.
    std::vector<int> comp = {0, 2, 4, 5};
    SymMatrix ee_inv = inverse(m.submatrix(elim));
    for (std::size_t i = 0; i < comp.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double corr = 0.0;
            for (std::size_t p = 0; p < elim.size(); ++p)
                for (std::size_t q = 0; q < elim.size(); ++q)
                    corr += m(comp[i], elim[p]) * ee_inv(int(p), int(q)) * m(elim[q], comp[j]);
            CHECK(s(int(i), int(j)) ==
                  doctest::Approx(m(comp[i], comp[j]) - corr).epsilon(1e-9));
        }
}

TEST_CASE("eigenvalues of the uniform completion candidate match closed form") {
    // constant(n, 1, x) has eigenvalues 1 - x (n-1 times) and 1 + (n-1) x.
    SymMatrix m = SymMatrix::constant(5, 1.0, 0.3);
    auto eig = oracle::jacobi_eigenvalues(m);
    for (int i = 0; i < 4; ++i) CHECK(eig[std::size_t(i)] == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(eig[4] == doctest::Approx(1.0 + 4 * 0.3).epsilon(1e-9));
    CHECK(logdet(m) == doctest::Approx(4 * std::log(0.7) + std::log(2.2)).epsilon(1e-9));
}

TEST_CASE("lu determinant handles signs and singularity") {
    // Row-swapped identity has determinant -1.
    DenseMatrix p(3, 3);
    p.at(0, 1) = 1.0;
    p.at(1, 0) = 1.0;
    p.at(2, 2) = 1.0;
    LuDet d = det_lu(p);
    CHECK(d.sign == -1);
    CHECK(d.value() == doctest::Approx(-1.0));

    DenseMatrix s(2, 2);
    s.at(0, 0) = 1.0;
    s.at(0, 1) = 2.0;
    s.at(1, 0) = 2.0;
    s.at(1, 1) = 4.0;
    CHECK(det_lu(s).value() == doctest::Approx(0.0));

    // Nonsymmetric case against the cofactor oracle.
    std::vector<std::vector<double>> a = {{2, -1, 3}, {0.5, 4, -2}, {1, 1, 1}};
    DenseMatrix da(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) da.at(i, j) = a[std::size_t(i)][std::size_t(j)];
    CHECK(det_lu(da).value() == doctest::Approx(oracle::cofactor_det(a)).epsilon(1e-12));
}

TEST_CASE("max_abs_diff measures the largest entry difference") {
    SymMatrix a = SymMatrix::identity(3);
    SymMatrix b = SymMatrix::identity(3);
    b.set(2, 1, 0.25);
    CHECK(a.max_abs_diff(b) == doctest::Approx(0.25));
    CHECK(a.max_abs() == doctest::Approx(1.0));
}
