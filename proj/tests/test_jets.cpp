#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles/cone_candidates.hpp"
#include "oracles/kink_fixture.hpp"
#include "support.hpp"
#include "viscograd/jets.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace viscograd;
using oracle::sym2;
using oracle::vec2;
using testing::code_of;

namespace {

const std::vector<double> kRadii = dyadic_radii(0.25, 7);

Vec v1(double a) { return Vec::Constant(1, a); }

SymMatrix s1(double a) {
    SymMatrix m(1);
    m.set(0, 0, a);
    return m;
}

SymMatrix random_psd(std::mt19937_64& rng, int n, double floor = 0.0) {
    std::normal_distribution<double> N;
    Mat B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = N(rng);
    Mat A = B * B.transpose() / n;
    A += floor * Mat::Identity(n, n);
    return SymMatrix::from_upper(A);
}

bool member(const JetVerdict& v) { return v.status == JetStatus::Member; }
bool nonmember(const JetVerdict& v) { return v.status == JetStatus::Nonmember; }

} // namespace

TEST_CASE("exact Taylor jets of quadratics are members on both sides") {
    const SymMatrix A = sym2(2, -1, 0.5);
    const auto q = fields::quadratic(A, vec2(0, 0));
    const Jet jet{vec2(0, 0), A};
    CHECK(member(superjet_test(q.value, vec2(0, 0), jet, kRadii)));
    CHECK(member(subjet_test(q.value, vec2(0, 0), jet, kRadii)));
    // the remainder is identically zero
    CHECK(std::abs(superjet_test(q.value, vec2(0, 0), jet, kRadii).worst_remainder_ratio) < 1e-12);
}

TEST_CASE("absolute value at its minimum") {
    const auto a = fields::cone(v1(0), 1.0);
    const Jet zero{v1(0), s1(0)};
    CHECK(member(subjet_test(a, v1(0), zero, kRadii)));
    CHECK(nonmember(superjet_test(a, v1(0), zero, kRadii)));
}

TEST_CASE("cone oracle formulas") {
    SUBCASE("off the vertex") {
        const auto d = cone_jet_oracle(vec2(0, 0), vec2(1, 0));
        CHECK_FALSE(d.at_vertex);
        CHECK(d.base.p(0) == doctest::Approx(-1));
        CHECK(d.base.p(1) == doctest::Approx(0));
        CHECK(d.base.X(0, 0) == doctest::Approx(0));
        CHECK(d.base.X(0, 1) == doctest::Approx(0));
        CHECK(d.base.X(1, 1) == doctest::Approx(-1));
    }
    SUBCASE("second location") {
        const auto d = cone_jet_oracle(vec2(0, 0), vec2(0, 2));
        CHECK(d.base.p(0) == doctest::Approx(0));
        CHECK(d.base.p(1) == doctest::Approx(-1));
        CHECK(d.base.X(0, 0) == doctest::Approx(-0.5));
        CHECK(d.base.X(1, 1) == doctest::Approx(0));
    }
    SUBCASE("at the vertex the sub-jet is empty") {
        const auto d = cone_jet_oracle(vec2(0, 0), vec2(0, 0));
        CHECK(d.at_vertex);
        for (const Jet& j : oracle::cone_candidates(vec2(0, 0), vec2(0, 0))) CHECK_FALSE(d.in_subjet(j));
        CHECK(d.in_superjet({vec2(0.5, 0.2), sym2(-100, 3, 7)}));
        CHECK(d.in_superjet({vec2(1, 0), sym2(0, 5, -5)}));
        CHECK_FALSE(d.in_superjet({vec2(1, 0), sym2(-0.1, 0, 0)}));
        CHECK_FALSE(d.in_superjet({vec2(1.01, 0), sym2(0, 0, 0)}));
    }
}

TEST_CASE("numerical verdicts agree with the cone oracle on 17 candidates at 5 locations") {
    const Vec vertex = vec2(0.1, -0.2);
    const auto cone = fields::cone(vertex);
    const std::vector<Vec> locations = {vertex, vertex + vec2(1, 0), vertex + vec2(0, 2), vertex + vec2(-0.6, 0.8),
                                        vertex + vec2(0.5, 0.5)};
    for (const Vec& x : locations) {
        const auto d = cone_jet_oracle(vertex, x);
        const auto candidates = oracle::cone_candidates(vertex, x);
        REQUIRE(candidates.size() == 17);
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            CAPTURE(x.transpose());
            CAPTURE(k);
            const auto sup = superjet_test(cone, x, candidates[k], kRadii);
            const auto sub = subjet_test(cone, x, candidates[k], kRadii);
            CHECK(sup.status == (d.in_superjet(candidates[k]) ? JetStatus::Member : JetStatus::Nonmember));
            CHECK(sub.status == (d.in_subjet(candidates[k]) ? JetStatus::Member : JetStatus::Nonmember));
        }
    }
}

TEST_CASE("sub-jet test is the mirrored super-jet test bit for bit (property)") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    const auto aron = fields::aronsson();
    for (int k = 0; k < 50; ++k) {
        const Vec x = vec2(1.5 + 0.4 * U(rng), 1.5 + 0.4 * U(rng));
        const Jet jet{vec2(U(rng), U(rng)), sym2(U(rng), U(rng), U(rng))};
        const Field neg = [&](const Vec& z) { return -aron.value(z); };
        const auto a = subjet_test(aron.value, x, jet, kRadii);
        const auto b = superjet_test(neg, x, negated(jet), kRadii);
        CHECK(a.status == b.status);
        CHECK(a.ratios == b.ratios);
    }
}

TEST_CASE("smooth jet families: +PSD members, -PD rejected, unbounded diameter (property)") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    const auto aron = fields::aronsson();
    for (int k = 0; k < 40; ++k) {
        const bool use_quadratic = k % 2 == 0;
        const SmoothField f = use_quadratic ? fields::quadratic(sym2(U(rng), U(rng), U(rng)), vec2(U(rng), U(rng)), U(rng))
                                            : aron;
        const Vec x = use_quadratic ? vec2(U(rng), U(rng)) : vec2(1.5 + 0.3 * U(rng), 1.5 + 0.3 * U(rng));
        const JetFamily fam = twice_differentiability_jet(f, x);
        const SymMatrix A = random_psd(rng, 2);
        const SymMatrix Q = random_psd(rng, 2, 0.1);
        CAPTURE(k);
        CHECK(member(superjet_test(f.value, x, fam.super_member(A), kRadii)));
        CHECK(member(subjet_test(f.value, x, fam.sub_member(A), kRadii)));
        CHECK(nonmember(superjet_test(f.value, x, fam.sub_member(Q), kRadii)));
        CHECK(nonmember(subjet_test(f.value, x, fam.super_member(Q), kRadii)));
        for (double t : {1.0, 10.0, 100.0})
            CHECK(member(superjet_test(f.value, x, fam.super_member(SymMatrix::identity(2, t)), kRadii)));
    }
}

TEST_CASE("convex combinations of members stay members (property)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0, 1);
    const auto aron = fields::aronsson();
    const Vec x = vec2(1.3, 1.7);
    const JetFamily fam = twice_differentiability_jet(aron, x);
    for (int k = 0; k < 30; ++k) {
        const Jet a = fam.super_member(random_psd(rng, 2));
        const Jet b = fam.super_member(random_psd(rng, 2));
        const auto va = superjet_test(aron.value, x, a, kRadii);
        const auto vb = superjet_test(aron.value, x, b, kRadii);
        REQUIRE(member(va));
        REQUIRE(member(vb));
        const double s = std::max(va.ratios.back(), vb.ratios.back());
        const double lambda = U(rng);
        const Jet c{lambda * a.p + (1 - lambda) * b.p, lambda * a.X + (1 - lambda) * b.X};
        const auto vc = superjet_test(aron.value, x, c, kRadii);
        CHECK(member(vc));
        CHECK(vc.ratios.back() <= s + 1e-12);
    }
}

TEST_CASE("smooth derivatives") {
    const auto aron = fields::aronsson();
    const JetFamily j = twice_differentiability_jet(aron, vec2(1, 1));
    CHECK(j.base.p(0) == doctest::Approx(4.0 / 3));
    CHECK(j.base.p(1) == doctest::Approx(-4.0 / 3));
    CHECK(j.base.X(0, 0) == doctest::Approx(4.0 / 9));
    CHECK(j.base.X(1, 1) == doctest::Approx(-4.0 / 9));
    CHECK(j.base.X(0, 1) == 0.0);

    const JetFamily half = twice_differentiability_jet(fields::quadratic(SymMatrix::identity(2), vec2(0, 0)), vec2(0.3, -2));
    CHECK(half.base.p(0) == doctest::Approx(0.3));
    CHECK(half.base.p(1) == doctest::Approx(-2));
    CHECK(half.base.X == SymMatrix::identity(2));

    const JetFamily aff = twice_differentiability_jet(fields::affine(vec2(2, -1), 4), vec2(5, 5));
    CHECK(aff.base.p(0) == 2.0);
    CHECK(aff.base.X == SymMatrix::zero(2));
}

TEST_CASE("least-squares fits recover quadratic jets") {
    const SymMatrix A = sym2(1.5, -0.25, -2);
    const auto q = fields::quadratic(A, vec2(0.5, 1), -3);
    const std::vector<double> widths = {0.1, 0.05, 0.025};
    for (const Jet& j : quadratic_fit_jets(q.value, vec2(0.2, 0.4), widths)) {
        const JetFamily exact = twice_differentiability_jet(q, vec2(0.2, 0.4));
        CHECK((j.p - exact.base.p).norm() < 1e-9);
        CHECK((j.X - exact.base.X).max_eigenvalue() < 1e-6);
        CHECK((j.X - exact.base.X).min_eigenvalue() > -1e-6);
    }
}

TEST_CASE("frozen eikonal kink verdicts and the distinction between the two candidates") {
    const Field distance = fields::piecewise_linear_1d({-1, 0, 1}, {0, 1, 0});
    const Field sawtooth = fields::piecewise_linear_1d({-1, -0.5, 0, 0.5, 1}, {0, 0.5, 0, 0.5, 0});
    const PdeOperator eik = PdeOperator::eikonal();
    const std::vector<double> radii = dyadic_radii(0.2, 7);
    std::set<std::string> distance_set, sawtooth_set;
    for (const auto& row : oracle::kink_fixture()) {
        CAPTURE(row.candidate);
        CAPTURE(row.x);
        const Field& f = row.candidate == "distance" ? distance : sawtooth;
        const auto kink = kink_jets_1d(row.left_slope, row.right_slope);
        const auto samples = kink_jet_samples(kink);
        const auto v = viscosity_verdict(eik, f, v1(row.x), samples, radii);
        CHECK(to_string(v.sub, true) == row.sub);
        CHECK(to_string(v.super, false) == row.super);
        // every confirmed jet lies in the analytic slope interval
        for (const Jet& j : samples) {
            if (member(superjet_test(f, v1(row.x), j, radii)))
                CHECK((kink.superjet_nonempty && j.p(0) >= kink.p_lo - 1e-12 && j.p(0) <= kink.p_hi + 1e-12));
            if (member(subjet_test(f, v1(row.x), j, radii)))
                CHECK((kink.subjet_nonempty && j.p(0) >= kink.p_lo - 1e-12 && j.p(0) <= kink.p_hi + 1e-12));
        }
        (row.candidate == "distance" ? distance_set : sawtooth_set).insert(row.sub + "/" + row.super);
    }
    CHECK(distance_set != sawtooth_set);
}

TEST_CASE("infinity-Laplacian on cones and affine functions is consistent both ways") {
    const PdeOperator dinf = PdeOperator::infinity_laplacian();
    const auto cone = fields::cone(vec2(0, 0));
    for (const Vec& x : {vec2(1, 0), vec2(0, 2), vec2(-0.6, 0.8)}) {
        const auto d = cone_jet_oracle(vec2(0, 0), x);
        CHECK(dinf(x, 0, d.base.p, d.base.X) == doctest::Approx(0).epsilon(1e-14));
        const std::vector<Jet> samples = {d.base};
        const auto v = viscosity_verdict(dinf, cone, x, samples, kRadii);
        CHECK(v.sub == SideVerdict::Consistent);
        CHECK(v.super == SideVerdict::Consistent);
        CHECK(v.confirmed_superjets == 1);
        CHECK(v.confirmed_subjets == 1);
    }
    const auto lin = fields::affine(vec2(0.3, -1.2), 0.5);
    const auto fits = quadratic_fit_jets(lin.value, vec2(0.4, 0.4), std::vector<double>{0.1, 0.05, 0.025});
    const auto v = viscosity_verdict(dinf, lin.value, vec2(0.4, 0.4), fits, kRadii);
    CHECK(v.sub == SideVerdict::Consistent);
    CHECK(v.super == SideVerdict::Consistent);
    CHECK(v.confirmed_superjets == 3);
}

TEST_CASE("sampled jet tests on a lattice") {
    const double h = 1.0 / 64;
    auto g = build_grid(Box::rect(-1, 1, -1, 1), h);
    const SymMatrix A = sym2(1, 0.5, -1);
    const auto q = fields::quadratic(A, vec2(0.2, 0));
    const auto u = GridFunction::sample(g, [&](const Point& p) { return q.value(vec2(p[0], p[1])); });
    const Index centre = g->linear_index({64, 64, 0});
    const auto radii = dyadic_radii(0.25, 3);
    CHECK(member(superjet_test(u, centre, Jet{vec2(0.2, 0), A}, radii)));
    CHECK(member(subjet_test(u, centre, Jet{vec2(0.2, 0), A}, radii)));
    CHECK(nonmember(superjet_test(u, centre, Jet{vec2(0.2, 0), A - SymMatrix::identity(2, 4.0)}, radii)));

    const Index near_edge = g->linear_index({3, 64, 0});
    CHECK(code_of([&] { superjet_test(u, near_edge, Jet{vec2(0, 0), A}, radii); }) == ErrorCode::BallExitsDomain);
    const std::vector<double> bad = {0.1, 0.2};
    CHECK(code_of([&] { superjet_test(u, centre, Jet{vec2(0, 0), A}, bad); }) == ErrorCode::RadiiNotDecreasing);
    CHECK(code_of([&] { superjet_test(q.value, vec2(0, 0), Jet{vec2(0, 0), A}, bad); }) ==
          ErrorCode::RadiiNotDecreasing);
}
