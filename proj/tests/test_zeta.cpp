#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gmrftau/solver.hpp"
#include "gmrftau/zeta.hpp"
#include "oracles.hpp"

using namespace gmrf;

namespace {

const AuditReport& find_claim(const std::vector<AuditReport>& reports,
                              const std::string& claim) {
    for (const auto& r : reports)
        if (r.claim == claim) return r;
    throw std::runtime_error("claim not found: " + claim);
}

}  // namespace

TEST_CASE("directed edge matrix structure") {
    Graph c3 = cycle_graph(3);
    DirectedEdgeMatrix m(c3);
    CHECK(m.dim() == 6);
    for (int e = 0; e < 6; ++e) {
        CHECK(DirectedEdgeMatrix::reverse(e) == (e ^ 1));
        CHECK(m.tail(DirectedEdgeMatrix::reverse(e)) == m.head(e));
        // No backtracking: the reverse edge is never a successor.
        CHECK(m.entry(e, DirectedEdgeMatrix::reverse(e)) == 0);
        for (int f : m.successors(e)) {
            CHECK(m.entry(e, f) == 1);
            CHECK(m.tail(f) == m.head(e));
        }
        // On a cycle every directed edge has exactly one continuation.
        CHECK(m.successors(e).size() == 1);
    }
}

TEST_CASE("non-backtracking walk counts are exact integers") {
    // Below the girth there is no closed walk at all.
    DirectedEdgeMatrix pet(oracle::petersen());
    for (int k = 1; k < 5; ++k) CHECK(pet.trace_power(k) == 0);
    // At the girth: (number of girth cycles) x 2 orientations x girth starts.
    CHECK(pet.trace_power(5) == 120);  // the Petersen graph has 12 pentagons

    DirectedEdgeMatrix c3(cycle_graph(3));
    CHECK(c3.trace_power(1) == 0);
    CHECK(c3.trace_power(2) == 0);
    CHECK(c3.trace_power(3) == 6);
    CHECK(c3.trace_power(6) == 6);  // only the two full loops return at 2g

    DirectedEdgeMatrix k4(complete_graph(4));
    CHECK(k4.trace_power(3) == 24);  // 4 triangles

    DirectedEdgeMatrix tree(path_graph(6));
    for (int k = 1; k <= 10; ++k) CHECK(tree.trace_power(k) == 0);

    CHECK_THROWS_AS(c3.trace_power(0), std::invalid_argument);
    CHECK_THROWS_AS(c3.trace_power(33), std::invalid_argument);
}

TEST_CASE("zeta of a cycle matches the closed form") {
    for (int n : {3, 5, 6}) {
        Graph c = cycle_graph(n);
        for (double x : {0.2, 0.5, -0.3}) {
            double expect = 1.0 / std::pow(1.0 - std::pow(x, n), 2);
            CHECK(zeta_bass(c, x) == doctest::Approx(expect).epsilon(1e-12));
            CHECK(zeta_edge(c, x) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("zeta of a forest is one") {
    for (double x : {0.3, 0.8, -0.5}) {
        CHECK(zeta_bass(path_graph(5), x) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(zeta_edge(path_graph(5), x) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(zeta_bass(complete_graph(2), x) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(zeta_edge(complete_graph(2), x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("both zeta routes agree on irregular and regular graphs") {
    for (std::uint64_t seed : {1u, 2u}) {
        Graph g = erdos_renyi(8, 0.45, seed);
        for (double x : {0.15, -0.2})
            CHECK(zeta_bass(g, x) == doctest::Approx(zeta_edge(g, x)).epsilon(1e-10));
    }
    Graph cubic = random_regular(10, 3, 5);
    for (double x : {0.3, -0.45, 0.49})
        CHECK(zeta_bass(cubic, x) == doctest::Approx(zeta_edge(cubic, x)).epsilon(1e-10));
    CHECK(zeta_bass(oracle::petersen(), 0.25) ==
          doctest::Approx(zeta_edge(oracle::petersen(), 0.25)).epsilon(1e-10));
}

TEST_CASE("zeta at zero is one and poles are reported") {
    CHECK(zeta_bass(oracle::petersen(), 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(zeta_bass(cycle_graph(4), 1.0), ZetaPole);
    try {
        zeta_bass(cycle_graph(4), 1.0);
    } catch (const ZetaPole& p) {
        CHECK(p.x == doctest::Approx(1.0));
    }
}

TEST_CASE("zeta audit on an even cycle with hand-computed margins") {
    const double x = 0.4;
    auto reports = zeta_tau_audit(cycle_graph(6), x);
    CHECK(reports.size() == 4);
    for (const auto& r : reports) {
        CHECK(r.applicable);
        CHECK(r.pass);
    }
    const auto& logb = find_claim(reports, "zeta_log_upper_bound");
    double log_zeta = -2.0 * std::log(1.0 - std::pow(x, 6));
    double bound = 12.0 * std::pow(x, 6) / (1.0 - x);
    CHECK(logb.lhs == doctest::Approx(bound).epsilon(1e-10));
    CHECK(logb.rhs == doctest::Approx(log_zeta).epsilon(1e-10));
    // Feasibility margin: strict diagonal dominance of the scaled matrix.
    CHECK(find_claim(reports, "zeta_matrix_feasible").margin > 0.0);
}

TEST_CASE("zeta dominates tau after rescaling") {
    auto sol = solve_auto(CorrelationSpec::uniform(oracle::petersen(), 0.3));
    auto reports = zeta_tau_audit(oracle::petersen(), 0.3);
    const auto& upper = find_claim(reports, "zeta_tau_upper_bound");
    CHECK(upper.pass);
    double scaled = std::log(zeta_bass(oracle::petersen(), 0.3)) +
                    15.0 * std::log1p(-0.09);
    CHECK(upper.lhs == doctest::Approx(scaled).epsilon(1e-9));
    CHECK(upper.rhs == doctest::Approx(sol.log_tau).epsilon(1e-9));
}

TEST_CASE("zeta audit handles negative x one-sidedly") {
    auto reports = zeta_tau_audit(cycle_graph(5), -0.3);
    for (const auto& r : reports) {
        CHECK(r.applicable);
        CHECK(r.pass);
    }
}

TEST_CASE("zeta audit is silent outside the contraction radius") {
    auto reports = zeta_tau_audit(complete_graph(4), 0.6);  // 1/(max_deg-1) = 1/2
    CHECK(reports.size() == 4);
    for (const auto& r : reports) {
        CHECK(!r.applicable);
        CHECK(r.pass);
    }
}
