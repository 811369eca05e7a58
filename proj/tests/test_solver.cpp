#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles/geometry.hpp"
#include "support.hpp"
#include "viscograd/solver.hpp"

#include <cmath>
#include <random>

using namespace viscograd;
using testing::code_of;

namespace {

BoundaryData linear_data(double a0, double a1, double c) {
    return BoundaryData::from_function([=](const Point& x) { return a0 * x[0] + a1 * x[1] + c; }, "linear");
}

BoundaryData cone_data(double vx, double vy) {
    return BoundaryData::from_function(
        [=](const Point& x) { return std::hypot(x[0] - vx, x[1] - vy); }, "cone");
}

double max_error(const GridFunction& u, const std::function<double(const Point&)>& f) {
    double e = 0.0;
    for (Index n : u.grid().region_nodes()) e = std::max(e, std::abs(u[n] - f(u.grid().coord(n))));
    return e;
}

GridFunction random_interior(const BoundaryData& b, const GridPtr& g, std::mt19937_64& rng, double amp) {
    std::uniform_real_distribution<double> U(-amp, amp);
    GridFunction u = b.initial_guess(g);
    for (Index n : g->interior_nodes()) u[n] += U(rng);
    return u;
}

} // namespace

TEST_CASE("energy examples") {
    SUBCASE("three-node interval") {
        auto g = build_grid(Box::interval(0, 1), 0.5);
        const auto u = GridFunction::sample(g, [](const Point& x) { return x[0]; });
        for (double m : {2.0, 4.0, 64.0}) CHECK(m_energy(u, m) == doctest::Approx(1.0));
    }
    SUBCASE("affine on the unit square is |a|^m exactly") {
        auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 16);
        const auto u = GridFunction::sample(g, [](const Point& x) { return 0.6 * x[0] - 0.8 * x[1] + 3; });
        for (double m : {2.0, 3.0, 8.0}) CHECK(m_energy(u, m) == doctest::Approx(1.0).epsilon(1e-12));
        const auto v = GridFunction::sample(g, [](const Point& x) { return 0.5 * x[0]; });
        CHECK(m_energy(v, 4.0) == doctest::Approx(std::pow(0.5, 4)).epsilon(1e-12));
    }
    SUBCASE("constant is zero") {
        auto g = build_grid(Box::cube(0, 1, 3), 0.25);
        CHECK(m_energy(GridFunction(g, 5.0), 6.0) == 0.0);
    }
    SUBCASE("overflow") {
        auto g = build_grid(Box::interval(0, 1), 0.5);
        const auto u = GridFunction::sample(g, [](const Point& x) { return 1e200 * x[0]; });
        CHECK(code_of([&] { m_energy(u, 4.0); }) == ErrorCode::Overflow);
    }
}

TEST_CASE("energy gradient matches finite differences and the serial reference (property)") {
    std::mt19937_64 rng(1);
    auto g = build_grid(Box::rect(0, 1, 0, 0.75), 0.125);
    auto L = g->with_mask([](const Point& x) { return x[0] < 0.6 || x[1] < 0.4; });
    for (const auto& grid : {g, L}) {
        for (int trial = 0; trial < 5; ++trial) {
            GridFunction u = testing::random_lipschitz(grid, rng, 2.0);
            for (double m : {2.0, 4.5, 16.0}) {
                std::vector<double> grad(grid->size()), ref(grid->size());
                const double E = m_energy_gradient(u, m, grad);
                const double Eref = reference::m_energy_gradient(u, m, ref);
                CHECK(E == doctest::Approx(m_energy(u, m)).epsilon(1e-13));
                CHECK(Eref == doctest::Approx(E).epsilon(1e-13));
                double scale = 0.0;
                for (double v : grad) scale = std::max(scale, std::abs(v));
                for (Index n : grid->region_nodes()) {
                    CHECK(ref[n] == doctest::Approx(grad[n]).epsilon(1e-12).scale(scale));
                    const double step = 1e-6;
                    GridFunction up = u, down = u;
                    up[n] += step;
                    down[n] -= step;
                    const double fd = (m_energy(up, m) - m_energy(down, m)) / (2 * step);
                    CHECK(fd == doctest::Approx(grad[n]).epsilon(1e-5).scale(scale));
                }
            }
        }
    }
}

TEST_CASE("minimiser in 1D is affine for every m") {
    auto g = build_grid(Box::interval(0, 1), 1.0 / 32);
    const auto b = BoundaryData::from_function([](const Point& x) { return x[0]; });
    for (double m : {2.0, 4.0, 16.0, 64.0}) {
        std::mt19937_64 rng(static_cast<unsigned>(m));
        const auto r = minimize_m_energy(b, m, random_interior(b, g, rng, 0.3));
        CAPTURE(m);
        CHECK(r.converged);
        CHECK(r.monotonicity_breaks == 0);
        CHECK(max_error(r.u, [](const Point& x) { return x[0]; }) <= 1e-8);
    }
}

TEST_CASE("linear data in 2D: the extension is the minimiser") {
    auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 16);
    const auto b = linear_data(0.3, -0.7, 0.5);
    auto exact = [](const Point& x) { return 0.3 * x[0] - 0.7 * x[1] + 0.5; };
    const GridFunction lin = GridFunction::sample(g, exact);
    std::mt19937_64 rng(4);
    for (double m : {3.0, 8.0}) {
        // random perturbations vanishing on the boundary never lower the energy
        for (int k = 0; k < 20; ++k) {
            GridFunction v = lin;
            std::uniform_real_distribution<double> U(-0.05, 0.05);
            for (Index n : g->interior_nodes()) v[n] += U(rng);
            CHECK(m_energy(v, m) >= m_energy(lin, m));
        }
        const auto r = minimize_m_energy(b, m, random_interior(b, g, rng, 0.2));
        CHECK(r.converged);
        CHECK(r.monotonicity_breaks == 0);
        CHECK(max_error(r.u, exact) <= 1e-8);
    }
}

TEST_CASE("minimiser scales with the data (property)") {
    auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 16);
    const auto b = cone_data(-0.5, -0.3);
    const double m = 8.0;
    const auto base = minimize_m_energy(b, m, b.initial_guess(g));
    REQUIRE(base.converged);
    for (double s : {2.0, 10.0}) {
        const auto scaled = BoundaryData::from_function([&, s](const Point& x) { return s * b.strip_value(x); });
        const auto r = minimize_m_energy(scaled, m, scaled.initial_guess(g));
        REQUIRE(r.converged);
        double err = 0.0;
        for (Index n : g->region_nodes()) err = std::max(err, std::abs(r.u[n] - s * base.u[n]));
        CHECK(err <= 1e-7 * s);
    }
}

TEST_CASE("minimiser rejects m <= n") {
    auto g = build_grid(Box::rect(0, 1, 0, 1), 0.25);
    const auto b = linear_data(1, 0, 0);
    CHECK(code_of([&] { minimize_m_energy(b, 2.0, b.initial_guess(g)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("continuation") {
    auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 16);
    SUBCASE("linear data: every stage is the extension") {
        const auto b = linear_data(-0.4, 0.9, 0.1);
        const auto rep = solve_by_continuation(g, b);
        CHECK(rep.converged);
        REQUIRE(rep.stages.size() == 5);
        REQUIRE(rep.sup_norm_steps.size() == 4);
        for (double s : rep.sup_norm_steps) CHECK(s <= 1e-8);
        CHECK(max_error(rep.final, [](const Point& x) { return -0.4 * x[0] + 0.9 * x[1] + 0.1; }) <= 1e-8);
        for (Index n : g->boundary_nodes()) CHECK(rep.final[n] == b.at(*g, n));
        CHECK_FALSE(rep.lipschitz_flag);
    }
    SUBCASE("saddle data: stage steps shrink") {
        // at h = 1/16 the last step grows again; 1/32 resolves the trend
        auto fine = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 32);
        const auto b = BoundaryData::from_function([](const Point& x) { return x[0] * x[0] - x[1] * x[1]; });
        const auto rep = solve_by_continuation(fine, b);
        CHECK(rep.converged);
        for (std::size_t k = 1; k < rep.sup_norm_steps.size(); ++k)
            CHECK(rep.sup_norm_steps[k] < rep.sup_norm_steps[k - 1]);
        for (Index n : fine->boundary_nodes()) CHECK(rep.final[n] == b.at(*fine, n));
        CHECK(rep.lipschitz_ratio <= 2.0);
    }
    SUBCASE("schedule validation") {
        ContinuationSchedule s;
        s.m_values = {4, 4, 8};
        CHECK(code_of([&] { s.validate(2); }) == ErrorCode::InvalidSchedule);
        s.m_values = {2, 4};
        CHECK(code_of([&] { s.validate(2); }) == ErrorCode::InvalidSchedule);
        s.m_values = {};
        CHECK(code_of([&] { s.validate(1); }) == ErrorCode::InvalidSchedule);
        s.m_values = {3, 5};
        s.validate(2);
        CHECK(code_of([&] { solve_by_continuation(g, linear_data(1, 0, 0), ContinuationSchedule{{1.5, 4}}); }) ==
              ErrorCode::InvalidSchedule);
    }
}

TEST_CASE("tug-of-war") {
    auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 32);
    SUBCASE("linear data is an exact fixed point") {
        auto exact = [](const Point& x) { return 0.3 * x[0] - 0.7 * x[1] + 0.2; };
        const auto rep = solve_by_tug_of_war(g, linear_data(0.3, -0.7, 0.2), 2 * g->h());
        CHECK(rep.converged);
        CHECK(max_error(rep.final, exact) <= 1e-12);
        CHECK(rep.max_principle_violations == 0);
    }
    SUBCASE("constant data in one sweep") {
        TugOfWarOptions o;
        o.max_iters = 1;
        const auto rep = solve_by_tug_of_war(g, BoundaryData::from_function([](const Point&) { return 0.25; }),
                                             2 * g->h(), o);
        for (Index n : g->region_nodes()) CHECK(rep.final[n] == 0.25);
    }
    SUBCASE("maximum principle and Jacobi agreement") {
        const auto b = cone_data(-0.5, -0.3);
        const auto gs = solve_by_tug_of_war(g, b, 2 * g->h());
        TugOfWarOptions o;
        o.jacobi = true;
        const auto jac = solve_by_tug_of_war(g, b, 2 * g->h(), o);
        CHECK(gs.converged);
        CHECK(jac.converged);
        CHECK(gs.max_principle_violations == 0);
        CHECK(jac.max_principle_violations == 0);
        for (Index n : g->region_nodes()) {
            CHECK(gs.final[n] >= gs.data_min);
            CHECK(gs.final[n] <= gs.data_max);
        }
        CHECK(sup_distance(gs.final, jac.final) <= 1e-10);
        for (Index n : g->boundary_nodes()) CHECK(gs.final[n] == b.at(*g, n));
    }
    SUBCASE("a sweep preserves order (property)") {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> U(0, 1);
        const auto b = cone_data(-0.5, -0.3);
        for (int trial = 0; trial < 20; ++trial) {
            GridFunction lo = b.initial_guess(g), hi = lo;
            for (Index n : g->interior_nodes()) {
                const double a = U(rng), c = U(rng);
                lo[n] = 0.5 + std::min(a, c);
                hi[n] = 0.5 + std::max(a, c);
            }
            TugOfWarOptions o;
            o.max_iters = 1 + trial % 3;
            o.jacobi = trial % 2 == 1;
            o.init = lo;
            const auto a = solve_by_tug_of_war(g, b, 2 * g->h(), o);
            o.init = hi;
            const auto c = solve_by_tug_of_war(g, b, 2 * g->h(), o);
            for (Index n : g->region_nodes()) CHECK(a.final[n] <= c.final[n]);
        }
    }
    SUBCASE("masked region") {
        auto L = g->with_mask([](const Point& x) { return x[0] <= 0.5 || x[1] <= 0.5; });
        auto exact = [](const Point& x) { return 0.3 * x[0] - 0.7 * x[1] + 0.2; };
        const auto rep = solve_by_tug_of_war(L, linear_data(0.3, -0.7, 0.2), 2 * g->h());
        CHECK(rep.converged);
        CHECK(max_error(rep.final, exact) <= 1e-12);
    }
}

TEST_CASE("distance to the boundary") {
    SUBCASE("interval") {
        auto g = build_grid(Box::interval(-1, 1), 1.0 / 32);
        const auto d = distance_to_boundary(g);
        CHECK(max_error(d, [](const Point& x) { return 1 - std::abs(x[0]); }) <= 1e-14);
    }
    SUBCASE("square centre") {
        auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 16);
        const auto d = distance_to_boundary(g);
        CHECK(d[g->linear_index({8, 8, 0})] == doctest::Approx(0.5));
        CHECK(max_error(d, [](const Point& x) { return std::min({x[0], 1 - x[0], x[1], 1 - x[1]}); }) <= 1e-14);
    }
    SUBCASE("L-shape against exhaustive search") {
        auto g = build_grid(Box::rect(0, 1, 0, 1), 1.0 / 32);
        auto L = g->with_mask([](const Point& x) { return x[0] <= 0.5 || x[1] <= 0.5; });
        const auto d = distance_to_boundary(L);
        for (Index n : L->region_nodes()) CHECK(d[n] == doctest::Approx(oracle::distance_to_boundary(*L, n)).epsilon(1e-14));
    }
    SUBCASE("cube") {
        auto g = build_grid(Box::cube(0, 1, 3), 0.125);
        const auto d = distance_to_boundary(g);
        for (Index n : g->region_nodes()) CHECK(d[n] == doctest::Approx(oracle::distance_to_boundary(*g, n)).epsilon(1e-14));
    }
}
