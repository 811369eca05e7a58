#pragma once

#include "viscograd/jet.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

namespace viscograd {

/// F = X : p (x) p
struct InfinityLaplacian {};

/// F = |p|^(m-2) tr X + (m-2) |p|^(m-4) X : p (x) p, written as
/// |p|^(m-2) (tr X + (m-2) X : q (x) q) with q = p/|p| so p = 0 is regular for m > 2.
struct ExpandedMLaplacian {
    double m;
};

/// F = |p|^2 - 1
struct Eikonal {};

/// F = A(x) : X + B(x) . p + c(x) r
struct LinearSecondOrder {
    std::function<SymMatrix(const Vec&)> A;
    std::function<Vec(const Vec&)> B;
    std::function<double(const Vec&)> c;
};

/// Degenerate elliptic operator F(x, r, p, X), non-decreasing in X.
class PdeOperator {
public:
    using Kind = std::variant<InfinityLaplacian, ExpandedMLaplacian, Eikonal, LinearSecondOrder>;

    PdeOperator(Kind kind) : kind_(std::move(kind)) {}

    static PdeOperator infinity_laplacian() { return {InfinityLaplacian{}}; }
    static PdeOperator expanded_m_laplacian(double m) { return {ExpandedMLaplacian{m}}; }
    static PdeOperator eikonal() { return {Eikonal{}}; }

    double operator()(const Vec& x, double r, const Vec& p, const SymMatrix& X) const;
    std::string name() const;
    const Kind& kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct EllipticityReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst_drop = 0.0;  ///< largest F(X) - F(X+Q) seen
};

/// Samples (x, r, p, X, Q) with Q positive semidefinite and counts
/// F(x,r,p,X+Q) < F(x,r,p,X) - tol * max(1, |F(x,r,p,X)|).
EllipticityReport check_degenerate_ellipticity(const PdeOperator& op, int dim, std::size_t samples,
                                               std::uint64_t seed, double tol = 1e-12);

} // namespace viscograd
