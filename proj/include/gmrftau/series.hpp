#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gmrftau/graph.hpp"

#include "json.hpp"

namespace gmrf {

using Rational = boost::multiprecision::cpp_rational;

/// Exact truncated power series: coefficients c_0..c_N as rationals, all
/// arithmetic performed mod x^{N+1}. Binary operations require equal orders.
class TruncatedSeries {
public:
    TruncatedSeries() : c_(1) {}
    explicit TruncatedSeries(int order) : c_(std::size_t(order) + 1) {
        if (order < 0) throw std::invalid_argument("TruncatedSeries: order >= 0");
    }
    static TruncatedSeries constant(int order, const Rational& v);
    static TruncatedSeries variable(int order);  // the series x

    int order() const { return int(c_.size()) - 1; }
    const Rational& coeff(int i) const { return c_[std::size_t(i)]; }
    void set_coeff(int i, const Rational& v) { c_[std::size_t(i)] = v; }

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    /// Multiplicative inverse; requires a nonzero constant term.
    TruncatedSeries inverse() const;
    bool operator==(const TruncatedSeries& o) const { return c_ == o.c_; }
    bool operator!=(const TruncatedSeries& o) const { return c_ != o.c_; }

    /// Partial-sum evaluation in doubles.
    double evaluate(double x) const;

private:
    std::vector<Rational> c_;
};

/// Square matrix over the truncated series ring.
class SeriesMatrix {
public:
    SeriesMatrix(int dim, int order);
    static SeriesMatrix identity(int dim, int order);

    int dim() const { return n_; }
    int order() const { return order_; }
    TruncatedSeries& at(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
    const TruncatedSeries& at(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

    /// Gauss-Jordan inverse; requires unit-leading pivots (constant-term
    /// matrix invertible, here always the identity).
    SeriesMatrix inverse() const;
    TruncatedSeries det() const;
    bool operator==(const SeriesMatrix& o) const { return a_ == o.a_; }

private:
    int n_ = 0, order_ = 0;
    std::vector<TruncatedSeries> a_;
};

struct NoStabilization : std::runtime_error {
    int sweeps;
    explicit NoStabilization(int sweeps_);
};

/// A rational that should have been an integer; indicates an internal bug.
struct NonIntegerCoefficient : std::logic_error {
    explicit NonIntegerCoefficient(const std::string& what_);
};

/// Taylor coefficients of tau around 0, computed by running the completion
/// sweeps in the exact series ring until one full sweep changes nothing.
/// All coefficients are verified to be integers.
TruncatedSeries tau_series(const Graph& g, int order);

/// The integer coefficients of tau_series as exact strings.
nlohmann::json series_to_json(const TruncatedSeries& s);

}  // namespace gmrf
