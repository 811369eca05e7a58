#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "viscograd/operators.hpp"

using namespace viscograd;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

SymMatrix m2(double a, double b, double c) {
    SymMatrix m(2);
    m.set(0, 0, a);
    m.set(0, 1, b);
    m.set(1, 1, c);
    return m;
}

} // namespace

TEST_CASE("operator values") {
    const Vec x = v2(0.1, 0.2);
    const Vec p = v2(1.0, 2.0);
    const SymMatrix X = m2(1.0, 0.5, -2.0);

    CHECK(PdeOperator::infinity_laplacian()(x, 0.0, p, X) == doctest::Approx(1 + 2 * 0.5 * 2 - 2 * 4));
    CHECK(PdeOperator::eikonal()(x, 0.0, p, X) == doctest::Approx(4.0));

    // m = 2 is the Laplacian, also at p = 0
    CHECK(PdeOperator::expanded_m_laplacian(2)(x, 0.0, p, X) == doctest::Approx(-1.0));
    CHECK(PdeOperator::expanded_m_laplacian(2)(x, 0.0, v2(0, 0), X) == doctest::Approx(-1.0));
    // m = 4: |p|^2 tr X + 2 X:p(x)p
    CHECK(PdeOperator::expanded_m_laplacian(4)(x, 0.0, p, X) == doctest::Approx(5 * -1.0 + 2 * (-5.0)));
    CHECK(PdeOperator::expanded_m_laplacian(4)(x, 0.0, v2(0, 0), X) == 0.0);

    LinearSecondOrder lin{[](const Vec&) { return SymMatrix::identity(2, 2.0); },
                          [](const Vec&) { return v2(1.0, -1.0); }, [](const Vec&) { return -3.0; }};
    CHECK(PdeOperator(lin)(x, 0.5, p, X) == doctest::Approx(2 * -1.0 + (1 - 2) - 1.5));
}

TEST_CASE("every operator is degenerate elliptic on 1000 random samples (property)") {
    LinearSecondOrder lin{[](const Vec& x) {
                              SymMatrix A = SymMatrix::outer(x);
                              return A + SymMatrix::identity(static_cast<int>(x.size()), 0.1);
                          },
                          [](const Vec& x) { return Vec(-x); }, [](const Vec&) { return -1.0; }};
    const PdeOperator ops[] = {PdeOperator::infinity_laplacian(), PdeOperator::expanded_m_laplacian(3),
                               PdeOperator::expanded_m_laplacian(8), PdeOperator::eikonal(), PdeOperator(lin)};
    for (const auto& op : ops)
        for (int dim = 1; dim <= 3; ++dim) {
            CAPTURE(op.name());
            CAPTURE(dim);
            const EllipticityReport r = check_degenerate_ellipticity(op, dim, 1000, 42 + dim);
            CHECK(r.samples == 1000);
            CHECK(r.violations == 0);
        }
}

TEST_CASE("the sampler catches an operator decreasing in X") {
    LinearSecondOrder bad{[](const Vec& x) { return SymMatrix::identity(static_cast<int>(x.size()), -1.0); },
                          [](const Vec& x) { return Vec(Vec::Zero(x.size())); }, [](const Vec&) { return 0.0; }};
    CHECK(check_degenerate_ellipticity(PdeOperator(bad), 2, 200, 1).violations > 0);
}
