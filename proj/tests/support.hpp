#pragma once

#include "viscograd/error.hpp"
#include "viscograd/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testing {

/// Error code thrown by f; fails the test when nothing is thrown.
template <class F>
viscograd::ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const viscograd::Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return viscograd::ErrorCode::InvalidArgument;
}

/// Random trigonometric polynomial of low degree, amplitude ~ `amp`.
struct TrigPoly {
    struct Term {
        std::array<double, 3> k;
        double phase;
        double amp;
    };
    std::vector<Term> terms;

    double operator()(const viscograd::Point& x) const {
        double s = 0.0;
        for (const auto& t : terms) s += t.amp * std::sin(t.k[0] * x[0] + t.k[1] * x[1] + t.k[2] * x[2] + t.phase);
        return s;
    }
};

inline TrigPoly random_trig(std::mt19937_64& rng, int dim, int terms = 4, double amp = 0.3, int max_freq = 3) {
    std::uniform_int_distribution<int> freq(-max_freq, max_freq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TrigPoly p;
    for (int t = 0; t < terms; ++t) {
        TrigPoly::Term term{{0, 0, 0}, 2.0 * std::numbers::pi * unit(rng), amp * (0.5 + unit(rng))};
        for (int a = 0; a < dim; ++a) term.k[a] = std::numbers::pi * freq(rng);
        p.terms.push_back(term);
    }
    return p;
}

/// Random Lipschitz grid function: a random walk along each axis direction
/// of bounded increments, i.e. a sum of per-axis piecewise-linear profiles
/// plus a random trigonometric part.
inline viscograd::GridFunction random_lipschitz(const viscograd::GridPtr& g, std::mt19937_64& rng, double lip = 1.0) {
    std::uniform_real_distribution<double> step(-lip, lip);
    std::vector<std::vector<double>> profile(static_cast<std::size_t>(g->dim()));
    for (int a = 0; a < g->dim(); ++a) {
        double v = 0.0;
        for (long k = 0; k < g->nodes(a); ++k) {
            profile[static_cast<std::size_t>(a)].push_back(v);
            v += step(rng) * g->h() / g->dim();
        }
    }
    const TrigPoly smooth = random_trig(rng, g->dim(), 3, 0.1 / std::numbers::pi, 1);
    viscograd::GridFunction u(g);
    for (auto node : g->region_nodes()) {
        const auto idx = g->multi_index(node);
        double s = smooth(g->coord(node));
        for (int a = 0; a < g->dim(); ++a) s += profile[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[a])];
        u[node] = s;
    }
    return u;
}

} // namespace testing
