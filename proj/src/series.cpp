#include "gmrftau/series.hpp"

namespace gmrf {

TruncatedSeries TruncatedSeries::constant(int order, const Rational& v) {
    TruncatedSeries s(order);
    s.c_[0] = v;
    return s;
}

TruncatedSeries TruncatedSeries::variable(int order) {
    if (order < 1) throw std::invalid_argument("variable: order >= 1");
    TruncatedSeries s(order);
    s.c_[1] = 1;
    return s;
}

namespace {

void require_same_order(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.order() != b.order())
        throw std::invalid_argument("TruncatedSeries: mismatched orders");
}

}  // namespace

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
    require_same_order(*this, o);
    TruncatedSeries r(order());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
    require_same_order(*this, o);
    TruncatedSeries r(order());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    require_same_order(*this, o);
    TruncatedSeries r(order());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; i + j < c_.size(); ++j) {
            if (o.c_[j] == 0) continue;
            r.c_[i + j] += c_[i] * o.c_[j];
        }
    }
    return r;
}

TruncatedSeries TruncatedSeries::inverse() const {
    if (c_[0] == 0)
        throw std::domain_error("TruncatedSeries::inverse: zero constant term");
    TruncatedSeries r(order());
    r.c_[0] = Rational(1) / c_[0];
    for (std::size_t k = 1; k < c_.size(); ++k) {
        Rational acc = 0;
        for (std::size_t i = 1; i <= k; ++i) acc += c_[i] * r.c_[k - i];
        r.c_[k] = -acc / c_[0];
    }
    return r;
}

double TruncatedSeries::evaluate(double x) const {
    double acc = 0.0, px = 1.0;
    for (const auto& c : c_) {
        acc += c.convert_to<double>() * px;
        px *= x;
    }
    return acc;
}

SeriesMatrix::SeriesMatrix(int dim, int order)
    : n_(dim), order_(order), a_(std::size_t(dim) * dim, TruncatedSeries(order)) {
    if (dim < 1) throw std::invalid_argument("SeriesMatrix: dim >= 1");
}

SeriesMatrix SeriesMatrix::identity(int dim, int order) {
    SeriesMatrix m(dim, order);
    for (int i = 0; i < dim; ++i) m.at(i, i) = TruncatedSeries::constant(order, 1);
    return m;
}

SeriesMatrix SeriesMatrix::inverse() const {
    SeriesMatrix work = *this;
    SeriesMatrix inv = identity(n_, order_);
    for (int k = 0; k < n_; ++k) {
        if (work.at(k, k).coeff(0) == 0)
            throw std::domain_error("SeriesMatrix::inverse: non-unit pivot");
        const TruncatedSeries pivot_inv = work.at(k, k).inverse();
        for (int j = 0; j < n_; ++j) {
            work.at(k, j) = work.at(k, j) * pivot_inv;
            inv.at(k, j) = inv.at(k, j) * pivot_inv;
        }
        for (int i = 0; i < n_; ++i) {
            if (i == k) continue;
            const TruncatedSeries f = work.at(i, k);
            bool zero = true;
            for (int t = 0; t <= order_ && zero; ++t)
                if (f.coeff(t) != 0) zero = false;
            if (zero) continue;
            for (int j = 0; j < n_; ++j) {
                work.at(i, j) = work.at(i, j) - f * work.at(k, j);
                inv.at(i, j) = inv.at(i, j) - f * inv.at(k, j);
            }
        }
    }
    return inv;
}

TruncatedSeries SeriesMatrix::det() const {
    SeriesMatrix work = *this;
    TruncatedSeries result = TruncatedSeries::constant(order_, 1);
    for (int k = 0; k < n_; ++k) {
        if (work.at(k, k).coeff(0) == 0)
            throw std::domain_error("SeriesMatrix::det: non-unit pivot");
        result = result * work.at(k, k);
        const TruncatedSeries pivot_inv = work.at(k, k).inverse();
        for (int i = k + 1; i < n_; ++i) {
            const TruncatedSeries f = work.at(i, k) * pivot_inv;
            for (int j = k; j < n_; ++j)
                work.at(i, j) = work.at(i, j) - f * work.at(k, j);
        }
    }
    return result;
}

NoStabilization::NoStabilization(int sweeps_)
    : std::runtime_error("series sweeps did not stabilize after " +
                         std::to_string(sweeps_) + " sweeps"),
      sweeps(sweeps_) {}

NonIntegerCoefficient::NonIntegerCoefficient(const std::string& what_)
    : std::logic_error(what_) {}

TruncatedSeries tau_series(const Graph& g, int order) {
    if (order < 0 || order > 40)
        throw std::invalid_argument("tau_series: order must lie in [0, 40]");
    const int n = g.vertex_count();
    const TruncatedSeries x = order >= 1 ? TruncatedSeries::variable(order)
                                         : TruncatedSeries(0);
    SeriesMatrix a = SeriesMatrix::identity(n, order);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a.at(i, j) = x;
            a.at(j, i) = x;
        }

    const auto non_edges = g.non_edges();
    if (!non_edges.empty()) {
        const int sweep_cap = 200;
        bool stabilized = false;
        for (int sweep = 0; sweep < sweep_cap && !stabilized; ++sweep) {
            const SeriesMatrix before = a;
            for (auto [v, w] : non_edges) {
                // Replace entry (v,w) with M_vZ M_ZZ^{-1} M_Zw, Z = rest.
                std::vector<int> zs;
                for (int u = 0; u < n; ++u)
                    if (u != v && u != w) zs.push_back(u);
                const int nz = int(zs.size());
                SeriesMatrix mzz(nz, order);
                for (int i = 0; i < nz; ++i)
                    for (int j = 0; j < nz; ++j) mzz.at(i, j) = a.at(zs[i], zs[j]);
                const SeriesMatrix inv = mzz.inverse();
                TruncatedSeries acc(order);
                for (int i = 0; i < nz; ++i) {
                    TruncatedSeries row(order);
                    for (int j = 0; j < nz; ++j)
                        row = row + inv.at(i, j) * a.at(zs[j], w);
                    acc = acc + a.at(v, zs[i]) * row;
                }
                a.at(v, w) = acc;
                a.at(w, v) = acc;
            }
            stabilized = a == before;
        }
        if (!stabilized) throw NoStabilization(sweep_cap);
    }

    const TruncatedSeries tau = a.det();
    for (int i = 0; i <= order; ++i) {
        const Rational& c = tau.coeff(i);
        if (boost::multiprecision::denominator(c) != 1)
            throw NonIntegerCoefficient("tau series coefficient " + std::to_string(i) +
                                        " is not an integer: " + c.str());
    }
    return tau;
}

nlohmann::json series_to_json(const TruncatedSeries& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int i = 0; i <= s.order(); ++i)
        coeffs.push_back(boost::multiprecision::numerator(s.coeff(i)).str());
    return nlohmann::json{{"order", s.order()}, {"coefficients", coeffs}};
}

}  // namespace gmrf
