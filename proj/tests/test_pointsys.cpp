#include <gtest/gtest.h>

#include "ivhs/pointsys.hpp"

using namespace ivhs;

namespace {

using PF = PrimeField;

Form<PF> mono(const PF& f, int x, int y, int z) { return Form<PF>::monomial(f, {x, y, z}); }

PointConfig<PF> random_points(const PF& f, std::size_t n, Rng& rng)
{
    PointConfig<PF> pts(f);
    while (pts.size() < n)
        pts.insert({{f.random(rng), f.random(rng), 1}});
    return pts;
}

template <class F>
bool vanishes_on(const Form<F>& a, const PointConfig<F>& pts)
{
    for (const auto& p : pts)
        if (!a.field().is_zero(evaluate(a, p)))
            return false;
    return true;
}

} // namespace

TEST(PointConfig, DeduplicatesProjectively)
{
    auto f = make_prime_field(7);
    PointConfig<PF> pts(f);
    EXPECT_TRUE(pts.insert({{1, 2, 3}}));
    EXPECT_FALSE(pts.insert({{2, 4, 6}}));
    EXPECT_TRUE(pts.insert({{1, 0, 0}}));
    EXPECT_EQ(pts.size(), 2u);
    EXPECT_THROW(pts.insert({{0, 0, 0}}), Error);
}

TEST(Pointsys, VanishingMatrixExamples)
{
    auto f = make_prime_field(101);
    PointConfig<PF> one(f, {{{1, 0, 0}}});
    auto m = vanishing_matrix(one, 2, 1);
    ASSERT_EQ(m.rows(), 1u);
    EXPECT_EQ(m.row_vector(0), (std::vector<u64>{1, 0, 0, 0, 0, 0}));
    EXPECT_EQ(kernel_basis(m).dim(), 5u);

    PointConfig<PF> origin(f, {{{0, 0, 1}}});
    auto sys = linsys(origin, 2, 2);
    EXPECT_EQ(sys.dim(), 3u);
    // surviving forms are X^2, XY, Y^2
    EXPECT_TRUE(sys.space.contains(mono(f, 2, 0, 0).coeffs()));
    EXPECT_TRUE(sys.space.contains(mono(f, 1, 1, 0).coeffs()));
    EXPECT_TRUE(sys.space.contains(mono(f, 0, 2, 0).coeffs()));
    EXPECT_FALSE(sys.space.contains(mono(f, 1, 0, 1).coeffs()));

    PointConfig<PF> two(f, {{{1, 2, 1}}, {{3, 5, 1}}});
    EXPECT_EQ(linsys(two, 1, 1).dim(), 1u);
}

TEST(Pointsys, LinsysExamples)
{
    auto f = make_prime_field(101);
    PointConfig<PF> tri(f, {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}});
    EXPECT_EQ(linsys(tri, 1, 1).dim(), 0u);
    Rng rng(1);
    auto big = make_prime_field(random_prime(rng, 62));
    EXPECT_EQ(linsys(random_points(big, 3, rng), 2, 1).dim(), 3u);
}

TEST(Pointsys, GeneralPointsImposeIndependentConditions)
{
    Rng rng(2);
    auto f = make_prime_field(random_prime(rng, 62));
    for (int m = 1; m <= 6; ++m) {
        const std::size_t cap = monomial_count(m);
        for (std::size_t n : {std::size_t{1}, cap / 2, cap - 1, cap}) {
            auto pts = random_points(f, n, rng);
            auto sys = linsys(pts, m, 1);
            EXPECT_EQ(sys.dim(), cap - n);
            for (std::size_t i = 0; i < sys.dim(); ++i)
                EXPECT_TRUE(vanishes_on(form_from_row(f, m, sys.space.basis().row(i)), pts));
        }
    }
}

TEST(Pointsys, DoublePointSystemsVanishToOrderTwo)
{
    Rng rng(3);
    auto f = make_prime_field(random_prime(rng, 62));
    auto pts = random_points(f, 3, rng);
    auto sys = linsys(pts, 5, 2);
    EXPECT_EQ(sys.dim(), 21u - 9u);
    for (std::size_t i = 0; i < sys.dim(); ++i) {
        auto g = form_from_row(f, 5, sys.space.basis().row(i));
        EXPECT_TRUE(vanishes_on(g, pts));
        for (auto v : {Var::X, Var::Y, Var::Z})
            EXPECT_TRUE(vanishes_on(partial(g, v), pts));
    }
}

TEST(Pointsys, ResultantOfLinesAndConics)
{
    auto f = make_prime_field(1000003);
    // Y - X and Y - 2Z meet where x = 2
    auto a = sub(mono(f, 0, 1, 0), mono(f, 1, 0, 0));
    auto b = sub(mono(f, 0, 1, 0), scale(mono(f, 0, 0, 1), u64{2}));
    auto r = upoly::monic(f, resultant_y(a, b));
    EXPECT_EQ(r, (std::vector<u64>{f.neg(2), 1}));
}

TEST(Pointsys, IntersectionOfLinePairs)
{
    auto f = make_prime_field(1000003);
    auto x = mono(f, 1, 0, 0), y = mono(f, 0, 1, 0), z = mono(f, 0, 0, 1);
    auto [pts, e] = intersection_points(multiply(x, y), multiply(sub(x, z), sub(y, z)), 5);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(e.degree(), 1u);
    for (auto expect : std::vector<std::array<u64, 3>>{{0, 1, 0}, {0, 1, 1}, {1, 0, 0}, {1, 0, 1}})
        EXPECT_TRUE(pts.contains(lift(Point<PF>{expect}, e)));
}

TEST(Pointsys, GeneralIntersectionsAreTransverse)
{
    Rng rng(4);
    auto f = make_prime_field(random_prime(rng, 62));
    for (auto [da, db] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {4, 4}}) {
        auto a = random_form(f, da, rng);
        auto b = random_form(f, db, rng);
        auto [pts, e] = intersection_points(a, b, rng(), {.attempts = 16, .max_extension = 1u << 10});
        EXPECT_EQ(pts.size(), static_cast<std::size_t>(da * db));
        auto la = lift(a, e), lb = lift(b, e);
        for (const auto& p : pts) {
            EXPECT_TRUE(e.is_zero(evaluate(la, p)));
            EXPECT_TRUE(e.is_zero(evaluate(lb, p)));
        }
    }
}

TEST(Pointsys, CommonComponentIsDetected)
{
    auto f = make_prime_field(1000003);
    auto x = mono(f, 1, 0, 0), y = mono(f, 0, 1, 0), z = mono(f, 0, 0, 1);
    try {
        intersection_points(multiply(x, y), multiply(x, z), 1);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::CommonComponent);
    }
}

TEST(Pointsys, SingularPointsOfNodalCubic)
{
    auto f = make_prime_field(1000003);
    // Y^2 Z - X^2 (X + Z) has its node at (0:0:1)
    auto g = sub(mono(f, 0, 2, 1), add(mono(f, 3, 0, 0), mono(f, 2, 0, 1)));
    auto [pts, e] = singular_points(g, 3);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_TRUE(pts.contains(lift(Point<PF>{{0, 0, 1}}, e)));

    Rng rng(5);
    auto smooth = random_form(f, 4, rng);
    EXPECT_TRUE(singular_points(smooth, 4).first.empty());
}

TEST(Pointsys, RationalLinsysDescendsConjugatePoints)
{
    Rng rng(6);
    auto fp = make_prime_field(random_prime(rng, 62));
    // a conic through the two conjugate roots of an irreducible quadratic
    auto quad = make_extension(fp, 2, 9);
    auto e = make_extension(fp, 4, 10);
    auto roots = find_roots(UniPoly<PrimeField>(fp, quad.modulus()), e, 11);
    ASSERT_EQ(roots.size(), 2u);
    PointConfig<ExtField> pts(e);
    for (const auto& r : roots)
        pts.insert({{r, e.from_int(3), e.one()}});
    auto space = rational_linsys(pts, 2, 1);
    EXPECT_EQ(space.dim(), 4u);
    auto check = linsys(pts, 2, 1).space;
    EXPECT_EQ(extend_scalars(space, e), check);
}
