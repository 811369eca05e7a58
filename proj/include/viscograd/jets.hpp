#pragma once

#include "viscograd/grid.hpp"
#include "viscograd/jet.hpp"
#include "viscograd/operators.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace viscograd {

/// Closed-form scalar field on R^n.
using Field = std::function<double(const Vec&)>;

enum class JetStatus { Member, Nonmember, Inconclusive };

std::string to_string(JetStatus status);

/// Outcome of a one-sided jet test.
///
/// ratios[k] is the largest remainder / |z|^2 over sample points in the shell
/// radii[k]/2 < |z| <= radii[k].
struct JetVerdict {
    JetStatus status = JetStatus::Inconclusive;
    double worst_remainder_ratio = 0.0;
    std::vector<double> radii_tested;
    std::vector<double> ratios;
};

inline constexpr double kClosedFormSlack = 1e-6;

/// r0 * 2^-k for k = 0 .. levels-1.
std::vector<double> dyadic_radii(double r0 = 0.25, int levels = 7);

/// Tests (p, X) against u(x+z) <= u(x) + p.z + X:z(x)z/2 + o(|z|^2).
///
/// member:    the last ratio is <= slack and the ratios never rise by more
///            than slack, or they are positive but halve with every level
///            (remainder of order |z|^3);
/// nonmember: every ratio exceeds slack and the last one has not decayed;
/// otherwise inconclusive.
/// Throws RadiiNotDecreasing.
JetVerdict superjet_test(const Field& u, const Vec& x, const Jet& jet, std::span<const double> radii,
                         double slack = kClosedFormSlack);

/// Sampled variant: sample points are the lattice offsets in each shell. The
/// smallest radius must be >= 2h; default slack is 10 h Lip(u).
/// Throws RadiiNotDecreasing, BallExitsDomain.
JetVerdict superjet_test(const GridFunction& u, Index x, const Jet& jet, std::span<const double> radii,
                         std::optional<double> slack = std::nullopt);

/// Sub-jet test, evaluated as superjet_test(-u, x, (-p, -X)).
JetVerdict subjet_test(const Field& u, const Vec& x, const Jet& jet, std::span<const double> radii,
                       double slack = kClosedFormSlack);
JetVerdict subjet_test(const GridFunction& u, Index x, const Jet& jet, std::span<const double> radii,
                       std::optional<double> slack = std::nullopt);

/// Analytic jets of C(z) = -|z - vertex|.
///
/// Away from the vertex C is smooth, with base jet p = -w/|w|,
/// X = -(I - w(x)w/|w|^2)/|w| (w = x - vertex): super-jets add a PSD matrix,
/// sub-jets subtract one. At the vertex the super-jet is the open unit ball
/// times S(n) together with |p| = 1, X:p(x)p >= 0; the sub-jet is empty.
struct ConeJetDescription {
    bool at_vertex = false;
    Jet base;

    bool in_superjet(const Jet& jet, double tol = 1e-9) const;
    bool in_subjet(const Jet& jet, double tol = 1e-9) const;
};

ConeJetDescription cone_jet_oracle(const Vec& vertex, const Vec& x);

/// Field with analytic first and second derivatives.
struct SmoothField {
    Field value;
    std::function<Vec(const Vec&)> gradient;
    std::function<SymMatrix(const Vec&)> hessian;
};

/// Jets of a function twice differentiable at x: (Du, D^2u + A) for the
/// super-jet and (Du, D^2u - A) for the sub-jet, A >= 0.
struct JetFamily {
    Jet base;
    Jet super_member(const SymMatrix& psd) const { return {base.p, base.X + psd}; }
    Jet sub_member(const SymMatrix& psd) const { return {base.p, base.X - psd}; }
};

JetFamily twice_differentiability_jet(const SmoothField& u, const Vec& x);

namespace fields {

SmoothField affine(const Vec& a, double c = 0.0);
/// z.Az/2 + a.z + c
SmoothField quadratic(const SymMatrix& A, const Vec& a, double c = 0.0);
/// |x|^(4/3) - |y|^(4/3); derivatives valid off the axes.
SmoothField aronsson();
/// offset + slope |z - vertex|
Field cone(const Vec& vertex, double slope = -1.0, double offset = 0.0);
/// Continuous piecewise-affine function on R through the given breakpoints.
Field piecewise_linear_1d(std::vector<double> xs, std::vector<double> ys);

} // namespace fields

enum class SideVerdict { Consistent, Violates };

/// Viscosity sub/super tests at one point. Sub: every confirmed super-jet has
/// F >= -slack. Super: every confirmed sub-jet has F <= slack. A side with no
/// confirmed jets is consistent.
struct ViscosityVerdict {
    SideVerdict sub = SideVerdict::Consistent;
    SideVerdict super = SideVerdict::Consistent;
    std::size_t confirmed_superjets = 0;
    std::size_t confirmed_subjets = 0;
    double min_F_on_superjets = 0.0;
    double max_F_on_subjets = 0.0;

    bool operator==(const ViscosityVerdict& o) const { return sub == o.sub && super == o.super; }
};

std::string to_string(SideVerdict v, bool sub_side);

/// Screens each candidate with superjet_test/subjet_test and evaluates F on the
/// members only.
ViscosityVerdict viscosity_verdict(const PdeOperator& op, const Field& u, const Vec& x,
                                   std::span<const Jet> jet_samples,
                                   std::span<const double> radii, double slack = kClosedFormSlack);

/// Candidate jets from least-squares quadratic fits of u on balls of the given
/// widths around x (one jet per width).
std::vector<Jet> quadratic_fit_jets(const Field& u, const Vec& x, std::span<const double> widths);

/// One-dimensional kink with slopes left/right: the closed interval of
/// first-order jets between the slopes belongs to the super-jet when
/// left > right and to the sub-jet when left < right; the other side is empty.
struct KinkJets1D {
    double p_lo;
    double p_hi;
    bool superjet_nonempty;
    bool subjet_nonempty;
};

KinkJets1D kink_jets_1d(double left_slope, double right_slope);

/// Jet samples for a 1-D kink: `count` slopes spread over [p_lo - 0.5, p_hi + 0.5]
/// (so both members and non-members are offered) times X in {-1, 0, 1}.
std::vector<Jet> kink_jet_samples(const KinkJets1D& kink, int count = 13);

} // namespace viscograd
