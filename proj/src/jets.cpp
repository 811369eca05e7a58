#include "viscograd/jets.hpp"

#include "viscograd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace viscograd {

namespace {

constexpr double kShellFactors[] = {1.0, 0.875, 0.75, 0.625};

void check_radii(std::span<const double> radii) {
    if (radii.empty()) fail(ErrorCode::RadiiNotDecreasing, "empty radius schedule");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0)) fail(ErrorCode::RadiiNotDecreasing, "radii must be positive");
        if (k > 0 && !(radii[k] < radii[k - 1])) fail(ErrorCode::RadiiNotDecreasing, "radii must strictly decrease");
    }
}

std::vector<Vec> unit_directions(int dim) {
    std::vector<Vec> dirs;
    if (dim == 1) {
        dirs.push_back(Vec::Constant(1, 1.0));
        dirs.push_back(Vec::Constant(1, -1.0));
    } else if (dim == 2) {
        constexpr int count = 32;
        for (int k = 0; k < count; ++k) {
            const double t = 2.0 * std::numbers::pi * k / count;
            Vec d(2);
            d << std::cos(t), std::sin(t);
            dirs.push_back(d);
        }
    } else {
        for (int a = 0; a < 3; ++a)
            for (double s : {1.0, -1.0}) {
                Vec d = Vec::Zero(3);
                d(a) = s;
                dirs.push_back(d);
            }
        // Fibonacci sphere
        constexpr int count = 96;
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            const double zc = 1.0 - 2.0 * (k + 0.5) / count;
            const double rc = std::sqrt(1.0 - zc * zc);
            Vec d(3);
            d << rc * std::cos(golden * k), rc * std::sin(golden * k), zc;
            dirs.push_back(d);
        }
    }
    return dirs;
}

double remainder_ratio(double u_xz, double u_x, const Jet& jet, const Vec& z) {
    const double z2 = z.squaredNorm();
    return (u_xz - u_x - jet.p.dot(z) - 0.5 * jet.X.contract(z)) / z2;
}

JetVerdict classify(std::span<const double> radii, std::vector<double> ratios, double slack) {
    JetVerdict v;
    v.radii_tested.assign(radii.begin(), radii.end());
    v.ratios = std::move(ratios);
    const auto& R = v.ratios;
    const std::size_t K = R.size();
    v.worst_remainder_ratio = *std::max_element(R.begin(), R.end());

    auto pos = [](double r) { return std::max(r, 0.0); };
    bool non_increasing = true;
    for (std::size_t k = 1; k < K; ++k)
        if (pos(R[k]) > pos(R[k - 1]) + slack) non_increasing = false;
    const double last = R[K - 1];

    bool decaying = K >= 3 && last > slack;
    for (std::size_t k = K >= 3 ? K - 2 : K; decaying && k < K; ++k)
        if (!(R[k] <= 0.6 * R[k - 1] + slack)) decaying = false;

    const double smallest = *std::min_element(R.begin(), R.end());
    const bool persistent = K < 2 || last >= 0.75 * R[K - 2];

    if (pos(last) <= slack && non_increasing)
        v.status = JetStatus::Member;
    else if (decaying)
        v.status = JetStatus::Member;
    else if (smallest > slack && persistent)
        v.status = JetStatus::Nonmember;
    else
        v.status = JetStatus::Inconclusive;
    return v;
}

} // namespace

std::string to_string(JetStatus status) {
    switch (status) {
    case JetStatus::Member: return "member";
    case JetStatus::Nonmember: return "nonmember";
    case JetStatus::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::vector<double> dyadic_radii(double r0, int levels) {
    std::vector<double> r;
    for (int k = 0; k < levels; ++k) r.push_back(std::ldexp(r0, -k));
    return r;
}

JetVerdict superjet_test(const Field& u, const Vec& x, const Jet& jet, std::span<const double> radii, double slack) {
    check_radii(radii);
    const auto dirs = unit_directions(static_cast<int>(x.size()));
    const double ux = u(x);
    std::vector<double> ratios;
    for (double r : radii) {
        double worst = -std::numeric_limits<double>::infinity();
        for (double f : kShellFactors)
            for (const Vec& d : dirs) {
                const Vec z = (f * r) * d;
                worst = std::max(worst, remainder_ratio(u(x + z), ux, jet, z));
            }
        ratios.push_back(worst);
    }
    return classify(radii, std::move(ratios), slack);
}

JetVerdict superjet_test(const GridFunction& u, Index x, const Jet& jet, std::span<const double> radii,
                         std::optional<double> slack) {
    check_radii(radii);
    const Grid& g = u.grid();
    const double h = g.h();
    if (radii.back() < 2.0 * h * (1.0 - 1e-12))
        fail(ErrorCode::InvalidArgument, "smallest radius must be at least 2h for sampled functions");
    const double tol = slack.value_or(10.0 * h * sampled_lipschitz(u));
    const int n = g.dim();
    const long reach = static_cast<long>(std::floor(radii.front() / h + 1e-9));

    std::vector<double> ratios(radii.size(), -std::numeric_limits<double>::infinity());
    Offset o{0, 0, 0};
    const long rj = n > 1 ? reach : 0, rk = n > 2 ? reach : 0;
    for (o[2] = -rk; o[2] <= rk; ++o[2])
        for (o[1] = -rj; o[1] <= rj; ++o[1])
            for (o[0] = -reach; o[0] <= reach; ++o[0]) {
                Vec z(n);
                for (int a = 0; a < n; ++a) z(a) = h * static_cast<double>(o[a]);
                const double dist = z.norm();
                if (dist == 0.0 || dist > radii.front() * (1.0 + 1e-12)) continue;
                auto y = g.shift(x, o);
                if (!y) fail(ErrorCode::BallExitsDomain, "test ball leaves the region");
                const double ratio = remainder_ratio(u[*y], u[x], jet, z);
                for (std::size_t k = 0; k < radii.size(); ++k)
                    if (dist <= radii[k] * (1.0 + 1e-12) && dist > 0.5 * radii[k] * (1.0 + 1e-12))
                        ratios[k] = std::max(ratios[k], ratio);
            }
    return classify(radii, std::move(ratios), tol);
}

JetVerdict subjet_test(const Field& u, const Vec& x, const Jet& jet, std::span<const double> radii, double slack) {
    const Field neg = [&u](const Vec& z) { return -u(z); };
    return superjet_test(neg, x, negated(jet), radii, slack);
}

JetVerdict subjet_test(const GridFunction& u, Index x, const Jet& jet, std::span<const double> radii,
                       std::optional<double> slack) {
    return superjet_test(-u, x, negated(jet), radii, slack);
}

bool ConeJetDescription::in_superjet(const Jet& jet, double tol) const {
    if (at_vertex) {
        const double norm = jet.p.norm();
        if (norm < 1.0 - tol) return true;
        if (norm <= 1.0 + tol) return jet.X.contract(jet.p) >= -tol;
        return false;
    }
    if ((jet.p - base.p).norm() > tol) return false;
    return (jet.X - base.X).min_eigenvalue() >= -tol;
}

bool ConeJetDescription::in_subjet(const Jet& jet, double tol) const {
    if (at_vertex) return false;
    if ((jet.p - base.p).norm() > tol) return false;
    return (jet.X - base.X).max_eigenvalue() <= tol;
}

ConeJetDescription cone_jet_oracle(const Vec& vertex, const Vec& x) {
    ConeJetDescription d;
    const int n = static_cast<int>(x.size());
    const Vec w = x - vertex;
    const double r = w.norm();
    if (r == 0.0) {
        d.at_vertex = true;
        d.base = Jet{Vec::Zero(n), SymMatrix::zero(n)};
        return d;
    }
    const Vec unit = w / r;
    d.base.p = -unit;
    d.base.X = (-1.0 / r) * (SymMatrix::identity(n) - SymMatrix::outer(unit));
    return d;
}

JetFamily twice_differentiability_jet(const SmoothField& u, const Vec& x) {
    return JetFamily{Jet{u.gradient(x), u.hessian(x)}};
}

namespace fields {

SmoothField affine(const Vec& a, double c) {
    return SmoothField{
        [a, c](const Vec& z) { return a.dot(z) + c; },
        [a](const Vec&) { return a; },
        [n = static_cast<int>(a.size())](const Vec&) { return SymMatrix::zero(n); },
    };
}

SmoothField quadratic(const SymMatrix& A, const Vec& a, double c) {
    return SmoothField{
        [A, a, c](const Vec& z) { return 0.5 * A.contract(z) + a.dot(z) + c; },
        [A, a](const Vec& z) { return Vec(A.dense() * z + a); },
        [A](const Vec&) { return A; },
    };
}

SmoothField aronsson() {
    return SmoothField{
        [](const Vec& z) { return std::pow(std::abs(z(0)), 4.0 / 3.0) - std::pow(std::abs(z(1)), 4.0 / 3.0); },
        [](const Vec& z) {
            Vec g(2);
            g << (4.0 / 3.0) * std::cbrt(z(0)), -(4.0 / 3.0) * std::cbrt(z(1));
            return g;
        },
        [](const Vec& z) {
            SymMatrix H(2);
            H.set(0, 0, (4.0 / 9.0) * std::pow(std::abs(z(0)), -2.0 / 3.0));
            H.set(1, 1, -(4.0 / 9.0) * std::pow(std::abs(z(1)), -2.0 / 3.0));
            return H;
        },
    };
}

Field cone(const Vec& vertex, double slope, double offset) {
    return [vertex, slope, offset](const Vec& z) { return offset + slope * (z - vertex).norm(); };
}

Field piecewise_linear_1d(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 2 || xs.size() != ys.size()) fail(ErrorCode::InvalidArgument, "need at least two breakpoints");
    return [xs = std::move(xs), ys = std::move(ys)](const Vec& z) {
        const double t = z(0);
        std::size_t k = 0;
        while (k + 2 < xs.size() && t > xs[k + 1]) ++k;
        const double slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
        return ys[k] + slope * (t - xs[k]);
    };
}

} // namespace fields

std::string to_string(SideVerdict v, bool sub_side) {
    const std::string side = sub_side ? "sub" : "super";
    return (v == SideVerdict::Consistent ? "consistent_" : "violates_") + side;
}

ViscosityVerdict viscosity_verdict(const PdeOperator& op, const Field& u, const Vec& x,
                                   std::span<const Jet> jet_samples, std::span<const double> radii, double slack) {
    ViscosityVerdict verdict;
    verdict.min_F_on_superjets = std::numeric_limits<double>::infinity();
    verdict.max_F_on_subjets = -std::numeric_limits<double>::infinity();
    const double ux = u(x);
    for (const Jet& jet : jet_samples) {
        if (superjet_test(u, x, jet, radii, slack).status == JetStatus::Member) {
            ++verdict.confirmed_superjets;
            const double F = op(x, ux, jet.p, jet.X);
            verdict.min_F_on_superjets = std::min(verdict.min_F_on_superjets, F);
            if (F < -slack) verdict.sub = SideVerdict::Violates;
        }
        if (subjet_test(u, x, jet, radii, slack).status == JetStatus::Member) {
            ++verdict.confirmed_subjets;
            const double F = op(x, ux, jet.p, jet.X);
            verdict.max_F_on_subjets = std::max(verdict.max_F_on_subjets, F);
            if (F > slack) verdict.super = SideVerdict::Violates;
        }
    }
    return verdict;
}

std::vector<Jet> quadratic_fit_jets(const Field& u, const Vec& x, std::span<const double> widths) {
    const int n = static_cast<int>(x.size());
    const int unknowns = n + n * (n + 1) / 2;
    const double ux = u(x);
    std::vector<Jet> jets;
    for (double w : widths) {
        std::vector<Vec> zs;
        constexpr int per_axis = 4;
        Offset o{0, 0, 0};
        const long rj = n > 1 ? per_axis : 0, rk = n > 2 ? per_axis : 0;
        for (o[2] = -rk; o[2] <= rk; ++o[2])
            for (o[1] = -rj; o[1] <= rj; ++o[1])
                for (o[0] = -per_axis; o[0] <= per_axis; ++o[0]) {
                    Vec z(n);
                    for (int a = 0; a < n; ++a) z(a) = w * static_cast<double>(o[a]) / per_axis;
                    if (z.norm() > 0.0 && z.norm() <= w * (1.0 + 1e-12)) zs.push_back(z);
                }
        Mat A(static_cast<Eigen::Index>(zs.size()), unknowns);
        Vec b(static_cast<Eigen::Index>(zs.size()));
        for (std::size_t s = 0; s < zs.size(); ++s) {
            const Vec& z = zs[s];
            const auto row = static_cast<Eigen::Index>(s);
            int col = 0;
            for (int a = 0; a < n; ++a) A(row, col++) = z(a);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) A(row, col++) = (i == j ? 0.5 : 1.0) * z(i) * z(j);
            b(row) = u(x + z) - ux;
        }
        const Vec coef = A.colPivHouseholderQr().solve(b);
        Jet jet{coef.head(n), SymMatrix(n)};
        int col = n;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) jet.X.set(i, j, coef(col++));
        jets.push_back(jet);
    }
    return jets;
}

KinkJets1D kink_jets_1d(double left_slope, double right_slope) {
    KinkJets1D k;
    k.p_lo = std::min(left_slope, right_slope);
    k.p_hi = std::max(left_slope, right_slope);
    k.superjet_nonempty = left_slope >= right_slope;
    k.subjet_nonempty = left_slope <= right_slope;
    return k;
}

std::vector<Jet> kink_jet_samples(const KinkJets1D& kink, int count) {
    std::vector<Jet> jets;
    const double lo = kink.p_lo - 0.5, hi = kink.p_hi + 0.5;
    for (int k = 0; k < count; ++k) {
        const double p = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (count - 1);
        for (double X : {-1.0, 0.0, 1.0}) {
            SymMatrix m(1);
            m.set(0, 0, X);
            jets.push_back(Jet{Vec::Constant(1, p), m});
        }
    }
    return jets;
}

} // namespace viscograd
