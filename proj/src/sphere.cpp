#include "gmrftau/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gmrftau/solver.hpp"

namespace gmrf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    seed_ = mix64(seed ^ mix64(stream * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
}

std::uint64_t CounterRng::next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix64(counter_ ^ seed_);
}

double CounterRng::next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::acos(-1.0) * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

CounterRng CounterRng::split(std::uint64_t stream) const {
    return CounterRng(seed_, stream + 1);
}

namespace {

// One uniform unit vector on S_{n-1}; regenerates on (improbable) zero norm.
void sample_unit_vector(int n, CounterRng& rng, std::vector<double>& out) {
    out.resize(std::size_t(n));
    while (true) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            out[std::size_t(i)] = rng.next_gaussian();
            norm2 += out[std::size_t(i)] * out[std::size_t(i)];
        }
        if (norm2 > 1e-300) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (int i = 0; i < n; ++i) out[std::size_t(i)] *= inv;
            return;
        }
    }
}

}  // namespace

GramSample sample_gram(int k, int n, CounterRng& rng) {
    if (!(n >= k && k >= 2)) throw std::invalid_argument("sample_gram: need n >= k >= 2");
    std::vector<std::vector<double>> vs(static_cast<std::size_t>(k));
    for (auto& v : vs) sample_unit_vector(n, rng, v);
    GramSample s;
    s.k = k;
    s.n = n;
    s.m = SymMatrix(k);
    for (int i = 0; i < k; ++i) {
        s.m.set(i, i, 1.0);
        for (int j = 0; j < i; ++j) {
            const double dot = std::inner_product(vs[std::size_t(i)].begin(),
                                                  vs[std::size_t(i)].end(),
                                                  vs[std::size_t(j)].begin(), 0.0);
            s.m.set(i, j, dot);
        }
    }
    return s;
}

double mv_gamma_log(int k, double a) {
    if (k < 1) throw std::invalid_argument("mv_gamma_log: k >= 1");
    if (!(a > 0.5 * (k - 1))) throw std::invalid_argument("mv_gamma_log: a > (k-1)/2 required");
    double s = 0.25 * k * (k - 1) * std::log(std::acos(-1.0));
    for (int j = 1; j <= k; ++j) s += std::lgamma(a + 0.5 * (1 - j));
    return s;
}

double log_density_f(int k, int n, const SymMatrix& m) {
    if (m.dim() != k) throw std::invalid_argument("log_density_f: dimension mismatch");
    if (!(n >= k && k >= 2)) throw std::invalid_argument("log_density_f: need n >= k >= 2");
    for (int i = 0; i < k; ++i) {
        if (std::abs(m(i, i) - 1.0) > 1e-9) return -kInf;
        for (int j = 0; j < i; ++j)
            if (std::abs(m(i, j)) > 1.0 + 1e-12) return -kInf;
    }
    // PSD support test with a slack proportional to the unit diagonal.
    SymMatrix shifted = m;
    for (int i = 0; i < k; ++i) shifted.add(i, i, 1e-9);
    const CholeskyResult cr = cholesky(shifted);
    if (!cr.ok) return -kInf;
    const double log_det = is_positive_definite(m) ? logdet(m) : -kInf;
    const double coeff = 0.5 * (n - k - 1);
    const double norm = k * std::lgamma(0.5 * n) - mv_gamma_log(k, 0.5 * n);
    if (coeff == 0.0) return norm;  // n = k+1: constant on the elliptope
    if (log_det == -kInf) return coeff > 0.0 ? -kInf : kInf;
    return coeff * log_det + norm;
}

double density_f(int k, int n, const SymMatrix& m) {
    const double l = log_density_f(k, n, m);
    if (l == -kInf) return 0.0;
    return std::exp(l);
}

double elliptope_volume(int k) {
    if (k < 2) throw std::invalid_argument("elliptope_volume: k >= 2");
    return std::exp(mv_gamma_log(k, 0.5 * (k + 1)) - k * std::lgamma(0.5 * (k + 1)));
}

namespace {

// Splits `total` across `jobs` workers, runs `count_hits(rng, chunk)` on
// each stream, and sums the integer hit counts deterministically.
template <typename F>
long long parallel_hits(long long total, int jobs, std::uint64_t seed, F count_hits) {
    jobs = std::max(1, jobs);
    std::vector<long long> hits(std::size_t(jobs), 0);
    std::vector<std::thread> threads;
    const long long base = total / jobs, extra = total % jobs;
    for (int w = 0; w < jobs; ++w) {
        const long long chunk = base + (w < extra ? 1 : 0);
        threads.emplace_back([&, w, chunk] {
            CounterRng rng(seed, std::uint64_t(w) + 1);
            hits[std::size_t(w)] = count_hits(rng, chunk);
        });
    }
    for (auto& t : threads) t.join();
    return std::accumulate(hits.begin(), hits.end(), 0LL);
}

}  // namespace

McEstimate mc_elliptope_volume(int k, long long samples, std::uint64_t seed, int jobs) {
    if (k < 2 || k > 6) throw std::invalid_argument("mc_elliptope_volume: k in [2,6]");
    if (samples < 1) throw std::invalid_argument("mc_elliptope_volume: samples >= 1");
    const int dim = k * (k - 1) / 2;
    const long long hits = parallel_hits(samples, jobs, seed, [k](CounterRng& rng,
                                                                  long long chunk) {
        long long h = 0;
        SymMatrix m(k);
        for (int i = 0; i < k; ++i) m.set(i, i, 1.0);
        for (long long s = 0; s < chunk; ++s) {
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < i; ++j) m.set(i, j, 2.0 * rng.next_double() - 1.0);
            if (is_positive_definite(m)) ++h;
        }
        return h;
    });
    McEstimate est;
    est.samples = samples;
    est.hits = hits;
    const double cube = std::pow(2.0, double(dim));
    const double p = double(hits) / double(samples);
    est.value = cube * p;
    est.se = cube * std::sqrt(std::max(p * (1.0 - p), 0.0) / double(samples));
    est.low_hits = hits < 50;
    return est;
}

EdgeIntervalRegion::EdgeIntervalRegion(Graph graph, double lo_, double hi_)
    : g(std::move(graph)), lo(lo_), hi(hi_) {
    if (!(lo >= -1.0 && lo <= hi && hi <= 1.0))
        throw std::invalid_argument("EdgeIntervalRegion: need -1 <= lo <= hi <= 1");
}

double uniform_profile_sup_log_tau(const Graph& g, double lo, double hi, double* argmax) {
    const double clip = 1.0 - 1e-6;
    const double a = std::max(lo, -clip), b = std::min(hi, clip);
    if (!(a <= b)) throw std::invalid_argument("uniform_profile_sup_log_tau: empty interval");
    auto value = [&g](double x) {
        // Near |x| = 1 the solve can fail to converge in the allotted
        // budget; those points contribute log tau -> -inf to the sup.
        try {
            return solve_auto(CorrelationSpec::uniform(g, x)).log_tau;
        } catch (const NoConvergence&) {
            return -kInf;
        } catch (const NotPositiveDefinite&) {
            return -kInf;
        }
    };
    if (a == b) {
        if (argmax) *argmax = a;
        return value(a);
    }
    const int grid = 64;
    double best_x = a, best_v = -kInf;
    int best_i = 0;
    for (int i = 0; i <= grid; ++i) {
        const double x = a + (b - a) * i / grid;
        const double v = value(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    // Golden-section refinement on the bracketing grid cells.
    double left = a + (b - a) * std::max(best_i - 1, 0) / grid;
    double right = a + (b - a) * std::min(best_i + 1, grid) / grid;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = right - phi * (right - left), x2 = left + phi * (right - left);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 60 && right - left > 1e-10; ++it) {
        if (f1 < f2) {
            left = x1;
            x1 = x2;
            f1 = f2;
            x2 = left + phi * (right - left);
            f2 = value(x2);
        } else {
            right = x2;
            x2 = x1;
            f2 = f1;
            x1 = right - phi * (right - left);
            f1 = value(x1);
        }
    }
    const double mid = 0.5 * (left + right);
    const double fm = value(mid);
    if (fm > best_v) {
        best_v = fm;
        best_x = mid;
    }
    if (argmax) *argmax = best_x;
    return best_v;
}

namespace {

// Backtracking search for an automorphism sending u0->a and v0->b.
bool extend_automorphism(const Graph& g, std::vector<int>& image, std::vector<char>& used,
                         int next) {
    const int n = g.vertex_count();
    while (next < n && image[std::size_t(next)] >= 0) ++next;
    if (next == n) return true;
    for (int cand = 0; cand < n; ++cand) {
        if (used[std::size_t(cand)]) continue;
        if (g.degree(next) != g.degree(cand)) continue;
        bool ok = true;
        for (int p = 0; p < n && ok; ++p) {
            const int ip = image[std::size_t(p)];
            if (ip < 0) continue;
            if (g.has_edge(next, p) != g.has_edge(cand, ip)) ok = false;
        }
        if (!ok) continue;
        image[std::size_t(next)] = cand;
        used[std::size_t(cand)] = 1;
        if (extend_automorphism(g, image, used, next + 1)) return true;
        image[std::size_t(next)] = -1;
        used[std::size_t(cand)] = 0;
    }
    return false;
}

bool has_automorphism_mapping(const Graph& g, int u0, int v0, int a, int b) {
    if (g.degree(u0) != g.degree(a) || g.degree(v0) != g.degree(b)) return false;
    const int n = g.vertex_count();
    std::vector<int> image(std::size_t(n), -1);
    std::vector<char> used(std::size_t(n), 0);
    image[std::size_t(u0)] = a;
    used[std::size_t(a)] = 1;
    if (u0 != v0) {
        if (used[std::size_t(b)]) return false;
        image[std::size_t(v0)] = b;
        used[std::size_t(b)] = 1;
    }
    return extend_automorphism(g, image, used, 0);
}

}  // namespace

bool is_edge_transitive(const Graph& g) {
    const auto& es = g.edges();
    if (es.size() <= 1) return true;
    const auto [u0, v0] = es.front();
    for (std::size_t i = 1; i < es.size(); ++i) {
        const auto [a, b] = es[i];
        if (!has_automorphism_mapping(g, u0, v0, a, b) &&
            !has_automorphism_mapping(g, u0, v0, b, a))
            return false;
    }
    return true;
}

namespace {

long long region_hits(const Graph& g, double lo, double hi, int n, long long samples,
                      std::uint64_t seed, int jobs) {
    const int k = g.vertex_count();
    const auto& es = g.edges();
    return parallel_hits(samples, jobs, seed, [&, n, k](CounterRng& rng, long long chunk) {
        long long h = 0;
        std::vector<std::vector<double>> vs(static_cast<std::size_t>(k));
        for (long long s = 0; s < chunk; ++s) {
            for (auto& v : vs) sample_unit_vector(n, rng, v);
            bool inside = true;
            for (auto [u, v] : es) {
                const double dot = std::inner_product(vs[std::size_t(u)].begin(),
                                                      vs[std::size_t(u)].end(),
                                                      vs[std::size_t(v)].begin(), 0.0);
                if (dot < lo || dot > hi) {
                    inside = false;
                    break;
                }
            }
            if (inside) ++h;
        }
        return h;
    });
}

}  // namespace

std::vector<LdpEstimate> ldp_estimate(const EdgeIntervalRegion& region,
                                      const std::vector<int>& n_list, long long samples,
                                      std::uint64_t seed, int jobs) {
    const int k = region.g.vertex_count();
    if (k < 2) throw std::invalid_argument("ldp_estimate: need at least 2 vertices");
    if (samples < 1) throw std::invalid_argument("ldp_estimate: samples >= 1");
    const double theo_rate = 0.5 * uniform_profile_sup_log_tau(region.g, region.lo, region.hi);
    const bool lower_bound = !is_edge_transitive(region.g);
    std::vector<LdpEstimate> out;
    for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
        const int n = n_list[idx];
        if (n < k) throw std::invalid_argument("ldp_estimate: need n >= k");
        LdpEstimate e;
        e.k = k;
        e.n = n;
        e.samples = samples;
        // Distinct stream block per n so estimates are independent.
        e.hits = region_hits(region.g, region.lo, region.hi, n, samples,
                             seed + 0x51ED2700000000ULL * (idx + 1), jobs);
        e.p_hat = double(e.hits) / double(samples);
        e.se = std::sqrt(std::max(e.p_hat * (1.0 - e.p_hat), 0.0) / double(samples));
        e.emp_rate = e.hits > 0 ? std::log(e.p_hat) / double(n) : -kInf;
        e.theo_rate = theo_rate;
        e.gap = e.emp_rate - theo_rate;
        e.low_hits = e.hits < 50;
        e.lower_bound_rate = lower_bound;
        out.push_back(e);
    }
    return out;
}

McEstimate spherical_graphon_density(const Graph& g, double lo, double hi, int n,
                                     long long samples, std::uint64_t seed, int jobs) {
    const EdgeIntervalRegion region(g, lo, hi);  // validates the interval
    if (g.vertex_count() < 2)
        throw std::invalid_argument("spherical_graphon_density: need at least 2 vertices");
    if (n < g.vertex_count())
        throw std::invalid_argument("spherical_graphon_density: need n >= v(g)");
    McEstimate est;
    est.samples = samples;
    est.hits = region_hits(g, lo, hi, n, samples, seed, jobs);
    est.value = double(est.hits) / double(samples);
    est.se = std::sqrt(std::max(est.value * (1.0 - est.value), 0.0) / double(samples));
    est.low_hits = est.hits < 50;
    return est;
}

}  // namespace gmrf
