#pragma once

#include <cstdint>
#include <vector>

#include "gmrftau/graph.hpp"
#include "gmrftau/symmat.hpp"

namespace gmrf {

/// Counter-based splittable generator (SplitMix64 mixing). A (seed, stream)
/// pair determines the whole sequence, so parallel workers draw from
/// disjoint reproducible streams regardless of scheduling.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform in [0,1).
    double next_double();
    /// Standard normal (Box-Muller, pairs cached).
    double next_gaussian();
    /// Independent generator for the given stream id derived from this seed.
    CounterRng split(std::uint64_t stream) const;

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Scalar products of k independent uniform points on the sphere S_{n-1}.
struct GramSample {
    int k = 0, n = 0;
    SymMatrix m;
};

GramSample sample_gram(int k, int n, CounterRng& rng);

/// log Gamma_k(a) = (k(k-1)/4) log pi + sum_{j=1..k} lgamma(a + (1-j)/2).
double mv_gamma_log(int k, double a);

/// Density of the off-diagonal Gram entries w.r.t. Lebesgue measure:
/// det(M)^{(n-k-1)/2} Gamma(n/2)^k / Gamma_k(n/2); 0 outside the elliptope.
double density_f(int k, int n, const SymMatrix& m);
double log_density_f(int k, int n, const SymMatrix& m);

/// Volume of the elliptope (unit-diagonal PSD matrices) in off-diagonal
/// coordinates: Gamma((k+1)/2)^{-k} Gamma_k((k+1)/2).
double elliptope_volume(int k);

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
    long long samples = 0;
    long long hits = 0;
    bool low_hits = false;
};

/// Rejection estimate of elliptope_volume over [-1,1]^{k(k-1)/2}.
McEstimate mc_elliptope_volume(int k, long long samples, std::uint64_t seed, int jobs = 1);

/// {Gram matrices with every edge entry of g inside [lo, hi]}.
struct EdgeIntervalRegion {
    Graph g;
    double lo = -1.0, hi = 1.0;
    EdgeIntervalRegion(Graph graph, double lo_, double hi_);
};

struct LdpEstimate {
    int k = 0, n = 0;
    long long samples = 0, hits = 0;
    double p_hat = 0.0, se = 0.0;
    double emp_rate = 0.0, theo_rate = 0.0, gap = 0.0;
    bool low_hits = false;
    bool lower_bound_rate = false;
};

/// max over x in [lo,hi] of log tau(g,x) along the uniform-x profile
/// (grid scan plus golden-section refinement). Optionally reports the
/// maximizing x. This equals the true sup over the region for
/// edge-transitive g; otherwise it is a lower bound.
double uniform_profile_sup_log_tau(const Graph& g, double lo, double hi,
                                   double* argmax = nullptr);

/// Every automorphism image search: can each edge be mapped to the first?
bool is_edge_transitive(const Graph& g);

/// Per n: Monte-Carlo hit probability of the region, empirical rate
/// (1/n) log p_hat, and the theoretical rate (1/2) sup log tau.
std::vector<LdpEstimate> ldp_estimate(const EdgeIntervalRegion& region,
                                      const std::vector<int>& n_list, long long samples,
                                      std::uint64_t seed, int jobs = 1);

/// Homomorphism density of g into the spherical kernel 1_{[lo,hi]} on
/// S_{n-1}: the same hit probability exposed under the graphon name.
McEstimate spherical_graphon_density(const Graph& g, double lo, double hi, int n,
                                     long long samples, std::uint64_t seed, int jobs = 1);

}  // namespace gmrf
