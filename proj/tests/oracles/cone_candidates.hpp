#pragma once

// Seventeen (p, X) candidates per location for C(z) = -|z - vertex| in 2-D,
// mixing members and non-members of both one-sided jets. Off the vertex they
// are perturbations of the smooth jet computed here by hand; at the vertex
// they probe the open unit ball, the |p| = 1 stratum and |p| > 1.

#include "viscograd/jet.hpp"

#include <cmath>
#include <vector>

namespace oracle {

using viscograd::Jet;
using viscograd::SymMatrix;
using viscograd::Vec;

inline SymMatrix sym2(double a, double b, double c) {
    SymMatrix m(2);
    m.set(0, 0, a);
    m.set(0, 1, b);
    m.set(1, 1, c);
    return m;
}

inline Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

/// Gradient and Hessian of -|w| at w != 0.
inline Jet cone_smooth_jet(const Vec& w) {
    const double r = w.norm();
    const Vec q = w / r;
    return Jet{-q, sym2(-(1 - q(0) * q(0)) / r, q(0) * q(1) / r, -(1 - q(1) * q(1)) / r)};
}

inline std::vector<Jet> cone_candidates(const Vec& vertex, const Vec& x) {
    std::vector<Jet> out;
    const Vec w = x - vertex;
    if (w.norm() == 0.0) {
        const SymMatrix zero = sym2(0, 0, 0);
        for (const Vec& p : {vec2(0, 0), vec2(0.5, 0), vec2(0.3, -0.4), vec2(0, 0.9)})
            for (const SymMatrix& X : {zero, sym2(-10, 0, -10), sym2(3, 1, -5)}) out.push_back({p, X});
        out.push_back({vec2(1, 0), zero});
        out.push_back({vec2(0, -1), sym2(1, 0, 1)});
        out.push_back({vec2(-1, 0), sym2(-1, 0, 2)});
        out.push_back({vec2(1.3, 0), zero});
        out.push_back({vec2(0.8, 0.8), sym2(0.5, 0, 0.5)});
        return out;
    }
    const Jet base = cone_smooth_jet(w);
    const Vec q = w / w.norm();
    const Vec t = vec2(-q(1), q(0));
    auto shifted = [&](const SymMatrix& dX) { return Jet{base.p, base.X + dX}; };
    const SymMatrix qq = sym2(q(0) * q(0), q(0) * q(1), q(1) * q(1));
    const SymMatrix tt = sym2(t(0) * t(0), t(0) * t(1), t(1) * t(1));
    const SymMatrix id = sym2(1, 0, 1);

    out.push_back(base);
    out.push_back(shifted(id));
    out.push_back(shifted(qq));
    out.push_back(shifted(0.5 * tt));
    out.push_back(shifted(0.2 * id));
    out.push_back(shifted(-1.0 * id));
    out.push_back(shifted(-1.0 * qq));
    out.push_back(shifted(-0.5 * tt));
    out.push_back(shifted(-0.2 * id));
    out.push_back(shifted(-2.0 * id));
    out.push_back(shifted(qq - tt));
    out.push_back(shifted(2.0 * tt - qq));
    out.push_back(Jet{base.p + 0.3 * q, base.X});
    out.push_back(Jet{base.p + 0.3 * t, base.X});
    out.push_back(Jet{base.p - 0.05 * t, base.X});
    out.push_back(Jet{base.p + 0.05 * q, base.X + 0.5 * id});
    out.push_back(Jet{base.p - 0.1 * q, base.X - 0.5 * id});
    return out;
}

} // namespace oracle
