#include "viscograd/operators.hpp"

#include <cmath>
#include <random>

namespace viscograd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

double PdeOperator::operator()(const Vec& x, double r, const Vec& p, const SymMatrix& X) const {
    return std::visit(
        overloaded{
            [&](const InfinityLaplacian&) { return X.contract(p); },
            [&](const ExpandedMLaplacian& op) {
                const double norm = p.norm();
                if (norm == 0.0) return op.m == 2.0 ? X.trace() : 0.0;
                const Vec q = p / norm;
                return std::pow(norm, op.m - 2.0) * (X.trace() + (op.m - 2.0) * X.contract(q));
            },
            [&](const Eikonal&) { return p.squaredNorm() - 1.0; },
            [&](const LinearSecondOrder& op) {
                double f = 0.0;
                const SymMatrix A = op.A(x);
                for (int i = 0; i < X.dim(); ++i)
                    for (int j = 0; j < X.dim(); ++j) f += A(i, j) * X(i, j);
                if (op.B) f += op.B(x).dot(p);
                if (op.c) f += op.c(x) * r;
                return f;
            },
        },
        kind_);
}

std::string PdeOperator::name() const {
    return std::visit(overloaded{
                          [](const InfinityLaplacian&) { return std::string("infinity-laplacian"); },
                          [](const ExpandedMLaplacian& op) {
                              return "expanded-m-laplacian(m=" + std::to_string(op.m) + ")";
                          },
                          [](const Eikonal&) { return std::string("eikonal"); },
                          [](const LinearSecondOrder&) { return std::string("linear-second-order"); },
                      },
                      kind_);
}

EllipticityReport check_degenerate_ellipticity(const PdeOperator& op, int dim, std::size_t samples,
                                               std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto random_vec = [&](double scale) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v(i) = scale * unit(rng);
        return v;
    };

    EllipticityReport report;
    for (std::size_t s = 0; s < samples; ++s) {
        const Vec x = random_vec(1.0);
        const double r = unit(rng);
        const Vec p = random_vec(2.0);
        Mat M(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) M(i, j) = unit(rng);
        const SymMatrix X = SymMatrix::from_upper(M + M.transpose());
        const Mat G = Mat::NullaryExpr(dim, dim, [&] { return unit(rng); });
        const SymMatrix Q = SymMatrix::from_upper(G * G.transpose());

        const double base = op(x, r, p, X);
        const double raised = op(x, r, p, X + Q);
        const double drop = base - raised;
        ++report.samples;
        if (drop > tol * std::max(1.0, std::abs(base))) ++report.violations;
        report.worst_drop = std::max(report.worst_drop, drop);
    }
    return report;
}

} // namespace viscograd
