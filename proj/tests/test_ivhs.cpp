#include <gtest/gtest.h>

#include "ivhs/ivhs.hpp"

using namespace ivhs;

namespace {

PrimeField big_prime(u64 seed)
{
    Rng rng(seed);
    return make_prime_field(random_prime(rng, 62));
}

Form<PrimeField> mono(const PrimeField& f, int x, int y, int z) { return Form<PrimeField>::monomial(f, {x, y, z}); }

// A smooth curve packaged as a certified NodalCurve with no nodes.
NodalCurve smooth_curve(const Form<PrimeField>& f)
{
    NodalCurve c{f.degree(), 0, genus_of(f.degree(), 0), f.field(), f, PointConfig<ExtField>(ExtField(f.field())), 0,
        "given", 0, {}};
    c.certificate = certify(c);
    return c;
}

// Coefficient of t^m in (1 + t + ... + t^(d-2))^3.
long long hilbert_coefficient(int d, int m)
{
    long long count = 0;
    for (int a = 0; a <= d - 2; ++a)
        for (int b = 0; b <= d - 2; ++b) {
            const int c = m - a - b;
            if (c >= 0 && c <= d - 2)
                ++count;
        }
    return count;
}

// In the Fermat jacobian ring the monomials with all exponents <= d-2 form a
// basis, and multiplication by a monomial permutes or kills them.
std::size_t fermat_monomial_rank(int d, Exponent v)
{
    std::size_t count = 0;
    for (const auto& m : monomials(d - 3))
        if (m.x + v.x <= d - 2 && m.y + v.y <= d - 2 && m.z + v.z <= d - 2)
            ++count;
    return count;
}

} // namespace

TEST(Ledger, Examples)
{
    auto f = big_prime(1);
    struct Row {
        int d, n;
        std::size_t low, high, jac;
    };
    for (auto r : {Row{4, 0, 3, 21, 18}, Row{5, 3, 3, 33, 30}, Row{4, 2, 1, 19, 18}}) {
        auto l = ledger(generate(r.d, r.n, f, 5));
        EXPECT_EQ(l.h0_adjoint, r.low);
        EXPECT_EQ(l.h0_adjoint_high, r.high);
        EXPECT_EQ(l.jacobian_dim, r.jac);
        EXPECT_EQ(l.syzygy_defect, 0u);
        EXPECT_EQ(l.h1, genus_of(r.d, r.n));
    }
}

TEST(Ledger, HoldsOnParametricCurves)
{
    auto f = big_prime(2);
    auto l = ledger(generate(7, 13, f, 1));
    EXPECT_EQ(l.h1, 2);
    EXPECT_EQ(l.h0_adjoint + l.jacobian_dim, l.h0_adjoint_high);
}

TEST(Variation, SmoothQuarticIsMaximal)
{
    auto f = big_prime(3);
    auto c = generate(4, 0, f, 2);
    Rng rng(4);
    auto r = variation_rank(c, random_form(f, 4, rng));
    EXPECT_EQ(r.variation, 3);
    EXPECT_TRUE(r.maximal);
}

TEST(Variation, FermatQuinticWitness)
{
    auto f = big_prime(5);
    auto c = smooth_curve(fermat_form(f, 5));
    ASSERT_TRUE(c.certificate.passed());
    auto r = variation_rank(c, mono(f, 3, 2, 0));
    EXPECT_EQ(r.variation, 2);
    EXPECT_FALSE(r.maximal);
    EXPECT_EQ(r.defect, 4);
}

TEST(Variation, NodalQuinticIsMaximal)
{
    auto f = big_prime(6);
    auto c = generate(5, 3, f, 3);
    VariationContext ctx(c);
    Rng rng(7);
    auto r = variation_rank(c, ctx.random_sigma(rng), ctx);
    EXPECT_EQ(r.variation, 3);
    EXPECT_TRUE(r.maximal);
}

TEST(Variation, RejectsSigmaOffTheNodes)
{
    auto f = big_prime(8);
    auto c = generate(5, 3, f, 3);
    Rng rng(9);
    try {
        variation_rank(c, random_form(f, 5, rng));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SigmaNotAdjoint);
    }
    EXPECT_THROW(variation_rank(c, Form<PrimeField>(f, 5)), Error);
}

TEST(Variation, GenericMaximalityExamples)
{
    auto f = big_prime(10);
    for (auto [d, n] : std::vector<std::pair<int, int>>{{4, 1}, {6, 9}}) {
        auto c = generate(d, n, f, 4);
        auto reports = generic_maximality(c, 10, 77);
        ASSERT_EQ(reports.size(), 10u);
        for (const auto& r : reports) {
            EXPECT_TRUE(r.maximal);
            EXPECT_EQ(r.variation, c.g);
        }
    }
    EXPECT_TRUE(generic_maximality(generate(4, 1, f, 4), 0, 1).empty());
}

TEST(Variation, RankBoundsAndScalingInvariance)
{
    auto f = big_prime(11);
    Rng rng(12);
    auto c = generate(6, 5, f, 6);
    VariationContext ctx(c);
    for (int i = 0; i < 5; ++i) {
        auto s = ctx.random_sigma(rng);
        auto r = ctx.rank(s);
        EXPECT_GE(r, 0);
        EXPECT_LE(r, c.g);
        auto lambda = f.random(rng);
        if (lambda) {
            EXPECT_EQ(ctx.rank(scale(s, lambda)), r);
        }
    }
}

TEST(Variation, CoordinateChangeInvariance)
{
    auto f = big_prime(13);
    Rng rng(14);
    auto c = generate(5, 4, f, 8);
    VariationContext ctx(c);
    auto m = random_invertible(f, rng);
    auto moved = change_coordinates(c, m);
    VariationContext moved_ctx(moved);
    for (int i = 0; i < 3; ++i) {
        auto s = ctx.random_sigma(rng);
        EXPECT_EQ(moved_ctx.rank(substitute(s, m)), ctx.rank(s));
    }
    // a deliberately degenerate sigma keeps its lower rank too
    auto fc = smooth_curve(fermat_form(f, 5));
    auto fm = change_coordinates(fc, m);
    auto w = mono(f, 3, 2, 0);
    EXPECT_EQ(variation_rank(fm, substitute(w, m)).variation, variation_rank(fc, w).variation);
}

TEST(CayleyBacharach, QuarticWithTwoNodes)
{
    auto f = big_prime(15);
    auto c = generate(4, 2, f, 7);
    auto dec = cb_decompose(c, 7);
    EXPECT_EQ(dec.sigma_points.size(), 7u);
    EXPECT_EQ(dec.delta.size(), 2u);
    EXPECT_EQ(dec.z.size(), 4u);
    EXPECT_EQ(dec.y.size(), 3u);
    EXPECT_TRUE(dec.z_certificate);
    EXPECT_TRUE(dec.y_certificate);
    EXPECT_TRUE(dec.f3_certificate);
    EXPECT_LE(dec.trace.size(), dec.initial_h);
    // no line through the three points of Y
    EXPECT_EQ(linsys(dec.y_points(), 1, 1).dim(), 0u);

    auto sigma = sigma_from_decomposition(c, dec, 3);
    const auto& e = dec.field;
    EXPECT_EQ(linsys(dec.delta.united(dec.z_points()), 4, 1).dim(), 9u);
    for (const auto& p : dec.delta.united(dec.z_points()))
        EXPECT_TRUE(e.is_zero(evaluate(sigma, p)));
    for (const auto& p : dec.y_points())
        EXPECT_FALSE(e.is_zero(evaluate(sigma, p)));
    auto r = variation_rank(c, sigma);
    EXPECT_TRUE(r.maximal);
    EXPECT_EQ(r.sigma_kind, "constructed");
}

TEST(CayleyBacharach, ExchangeStrictlyDecreases)
{
    auto f = big_prime(16);
    auto c = generate(5, 3, f, 9);
    auto dec = cb_decompose(c, 11);
    EXPECT_EQ(dec.sigma_points.size(), 13u);
    EXPECT_EQ(dec.z.size(), 7u);
    EXPECT_EQ(dec.y.size(), 6u);
    EXPECT_TRUE(dec.z_certificate && dec.y_certificate);
    EXPECT_LE(dec.trace.size(), dec.initial_h);
    for (std::size_t i = 0; i < dec.trace.size(); ++i)
        EXPECT_EQ(dec.trace[i].h_before, dec.initial_h - i);
    EXPECT_TRUE(variation_rank(c, sigma_from_decomposition(c, dec, 1)).maximal);
}

TEST(CayleyBacharach, DeterministicPerSeed)
{
    auto f = big_prime(17);
    auto c = generate(4, 1, f, 2);
    auto a = cb_decompose(c, 5);
    auto b = cb_decompose(c, 5);
    EXPECT_EQ(a.z, b.z);
    EXPECT_EQ(a.sigma_points.points().size(), b.sigma_points.points().size());
    for (std::size_t i = 0; i < a.sigma_points.size(); ++i)
        EXPECT_EQ(a.sigma_points[i].c, b.sigma_points[i].c);
    EXPECT_EQ(sigma_from_decomposition(c, a, 1), sigma_from_decomposition(c, b, 1));
}

TEST(JacobianRing, QuotientDimensionsMatchHilbertSeries)
{
    auto f = big_prime(18);
    Rng rng(19);
    for (int d = 4; d <= 6; ++d) {
        JacobianRing ring(random_form(f, d, rng));
        for (int m = 0; m <= 3 * d - 6; ++m)
            EXPECT_EQ(static_cast<long long>(ring.quotient_dim(m)), hilbert_coefficient(d, m)) << d << " " << m;
        EXPECT_EQ(static_cast<long long>(ring.quotient_dim(d - 3)), genus_of(d, 0));
        EXPECT_EQ(static_cast<long long>(ring.quotient_dim(2 * d - 3)), genus_of(d, 0));
    }
}

TEST(JacobianRing, FermatMonomialRanksMatchCountingOracle)
{
    auto f = big_prime(20);
    for (int d = 5; d <= 7; ++d) {
        JacobianRing ring(fermat_form(f, d));
        for (const auto& e : monomials(d))
            EXPECT_EQ(ring.mu_rank(Form<PrimeField>::monomial(f, e)), fermat_monomial_rank(d, e));
    }
}

TEST(JacobianRing, SmoothMuRankExamples)
{
    auto f = big_prime(21);
    EXPECT_EQ(smooth_mu_rank(fermat_form(f, 5), mono(f, 3, 2, 0)), 2u);
    Rng rng(22);
    auto c = generate(4, 0, f, 3);
    EXPECT_EQ(smooth_mu_rank(c.F, random_form(f, 4, rng)), 3u);
    auto nodal = generate(4, 1, f, 3);
    try {
        JacobianRing ring(nodal.F);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotSmooth);
    }
}

TEST(JacobianRing, SmoothConsistencyWithNodalPipeline)
{
    auto f = big_prime(23);
    Rng rng(24);
    for (int d = 4; d <= 5; ++d) {
        auto c = generate(d, 0, f, 10 + d);
        JacobianRing ring(c.F);
        VariationContext ctx(c);
        for (int i = 0; i < 3; ++i) {
            auto s = random_form(f, d, rng);
            EXPECT_EQ(ctx.rank(s), static_cast<long long>(ring.mu_rank(s)));
        }
        // degenerate sigma: a partial times a linear form lies in J_F
        auto trivial = multiply(partial(c.F, Var::X), mono(f, 0, 1, 0));
        EXPECT_EQ(ctx.rank(trivial), static_cast<long long>(ring.mu_rank(trivial)));
        EXPECT_EQ(ctx.rank(trivial), 0);
    }
}

TEST(Fermat, MinimalWitness)
{
    auto f = big_prime(25);
    for (int d = 5; d <= 7; ++d) {
        auto w = fermat_min_witness(d, f);
        EXPECT_EQ(w.rank, static_cast<std::size_t>(d - 3));
        EXPECT_EQ(w.v, mono(f, d - 2, 2, 0));
    }
}

TEST(Noether, Surjective)
{
    auto f = big_prime(26);
    for (int d = 4; d <= 6; ++d) {
        auto c = generate(d, 0, f, 1);
        auto r = noether_rank(c.F);
        EXPECT_TRUE(r.surjective);
        EXPECT_EQ(static_cast<long long>(r.target), 3 * genus_of(d, 0) - 3);
    }
    EXPECT_EQ(noether_rank(generate(4, 0, f, 1).F).rank, 6u);
    EXPECT_EQ(noether_rank(generate(5, 0, f, 1).F).rank, 15u);
    EXPECT_EQ(noether_rank(generate(6, 0, f, 1).F).rank, 27u);
}

TEST(Exchange, LowersDegenerateStartToZero)
{
    auto f = big_prime(27);
    Rng rng(28);
    auto random_point = [&] { return Point<PrimeField>{{f.random(rng), f.random(rng), f.one()}}; };
    // four points of T and both base points on the conic XZ = Y^2
    PointConfig<PrimeField> base(f), pool(f);
    auto on_conic = [&] {
        const auto s = f.random(rng);
        return Point<PrimeField>{{f.mul(s, s), s, f.one()}};
    };
    base.insert(on_conic());
    base.insert(on_conic());
    while (pool.size() < 4)
        pool.insert(on_conic());
    while (pool.size() < 7)
        pool.insert(random_point());
    auto res = exchange_to_zero(base, pool, {0, 1, 2, 3}, 2);
    EXPECT_EQ(res.initial_h, 1u);
    ASSERT_EQ(res.trace.size(), 1u);
    EXPECT_EQ(res.trace[0].h_before, 1u);
    EXPECT_GE(res.trace[0].added, 4u);
    EXPECT_TRUE(res.finished);
    EXPECT_EQ(linsys(base.united(pool.subset(res.t)), 2, 1).dim(), 0u);
}

TEST(Exchange, StrictlyDecreasesFromCollinearStart)
{
    auto f = big_prime(29);
    Rng rng(30);
    PointConfig<PrimeField> base(f), pool(f);
    while (pool.size() < 5)
        pool.insert({{f.random(rng), f.zero(), f.one()}});
    while (pool.size() < 10)
        pool.insert({{f.random(rng), f.random(rng), f.one()}});
    // five collinear points and one more: conics L * M with M through one point
    auto res = exchange_to_zero(base, pool, {0, 1, 2, 3, 4, 5}, 2);
    EXPECT_EQ(res.initial_h, 2u);
    EXPECT_TRUE(res.finished);
    EXPECT_LE(res.trace.size(), res.initial_h);
    EXPECT_EQ(res.trace.size(), res.initial_h);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        EXPECT_LT(res.trace[i].h_before, res.trace[i - 1].h_before);
    EXPECT_EQ(res.t.size(), 6u);
}

TEST(Exchange, GeneralStartNeedsNoSwap)
{
    auto f = big_prime(31);
    Rng rng(32);
    PointConfig<PrimeField> base(f), pool(f);
    while (pool.size() < 8)
        pool.insert({{f.random(rng), f.random(rng), f.one()}});
    auto res = exchange_to_zero(base, pool, {5, 1, 3, 0, 2, 7}, 2);
    EXPECT_EQ(res.initial_h, 0u);
    EXPECT_TRUE(res.trace.empty());
    EXPECT_EQ(res.t, (std::vector<std::size_t>{0, 1, 2, 3, 5, 7}));
}

TEST(CayleyBacharach, EachSwapLowersHByOne)
{
    auto f = big_prime(33);
    std::size_t swaps = 0;
    for (auto [d, n] : std::vector<std::pair<int, int>>{{4, 1}, {5, 2}, {6, 5}}) {
        auto c = generate(d, n, f, 12);
        for (u64 s = 0; s < (d < 6 ? 10u : 3u); ++s) {
            auto dec = cb_decompose(c, s);
            EXPECT_TRUE(dec.z_certificate && dec.y_certificate);
            EXPECT_EQ(dec.trace.size(), dec.initial_h);
            swaps += dec.trace.size();
        }
    }
    RecordProperty("exchange_steps", static_cast<int>(swaps));
}
