#ifndef IVHS_POINTSYS_HPP
#define IVHS_POINTSYS_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "forms.hpp"
#include "linalg.hpp"

namespace ivhs {

// Distinct points of P^2, each stored normalized (last nonzero coordinate 1).
template <class F>
class PointConfig {
public:
    explicit PointConfig(F field) : field_(std::move(field)) {}

    PointConfig(F field, const std::vector<Point<F>>& pts) : field_(std::move(field))
    {
        for (const auto& p : pts)
            insert(p);
    }

    const F& field() const noexcept { return field_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point<F>& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Point<F>>& points() const noexcept { return points_; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

    std::optional<std::size_t> index_of(const Point<F>& p) const
    {
        const auto q = normalize(field_, p);
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i].c == q.c)
                return i;
        return std::nullopt;
    }

    bool contains(const Point<F>& p) const { return index_of(p).has_value(); }

    // Adds p unless already present; returns whether it was new.
    bool insert(const Point<F>& p)
    {
        auto q = normalize(field_, p);
        if (contains(q))
            return false;
        points_.push_back(std::move(q));
        return true;
    }

    PointConfig subset(const std::vector<std::size_t>& idx) const
    {
        PointConfig r(field_);
        for (auto i : idx)
            r.points_.push_back(points_[i]);
        return r;
    }

    PointConfig united(const PointConfig& other) const
    {
        PointConfig r = *this;
        for (const auto& p : other)
            r.insert(p);
        return r;
    }

private:
    F field_;
    std::vector<Point<F>> points_;
};

template <class F>
struct LinSys {
    int degree;
    Subspace<F> space;

    std::size_t dim() const { return space.dim(); }
};

// Conditions on degree-m forms: a value row per point (order 1), or the
// three partial-derivative rows per point (order 2).
template <class F>
Matrix<F> vanishing_matrix(const PointConfig<F>& pts, int m, int order)
{
    if (m < 0)
        throw Error(ErrorKind::DegreeMismatch, "negative degree");
    if (order != 1 && order != 2)
        throw Error(ErrorKind::Unsupported, "vanishing order must be 1 or 2");
    const F& f = pts.field();
    const auto& mons = monomials(m);
    Matrix<F> mat(f, 0, mons.size());
    std::vector<typename F::Elem> row(mons.size(), f.zero());
    for (const auto& p : pts) {
        const auto pw = detail::coordinate_powers(f, p, m);
        if (order == 1) {
            for (std::size_t j = 0; j < mons.size(); ++j)
                row[j] = f.mul(pw[0][mons[j].x], f.mul(pw[1][mons[j].y], pw[2][mons[j].z]));
            mat.append_row(row);
            continue;
        }
        for (int v = 0; v < 3; ++v) {
            for (std::size_t j = 0; j < mons.size(); ++j) {
                std::array<int, 3> e{mons[j].x, mons[j].y, mons[j].z};
                if (e[v] == 0) {
                    row[j] = f.zero();
                    continue;
                }
                const auto k = f.from_int(e[v]);
                --e[v];
                row[j] = f.mul(k, f.mul(pw[0][e[0]], f.mul(pw[1][e[1]], pw[2][e[2]])));
            }
            mat.append_row(row);
        }
    }
    return mat;
}

template <class F>
LinSys<F> linsys(const PointConfig<F>& pts, int m, int order)
{
    return {m, kernel_basis(vanishing_matrix(pts, m, order))};
}

inline PointConfig<ExtField> as_extension_points(const PointConfig<PrimeField>& pts)
{
    ExtField e(pts.field());
    PointConfig<ExtField> r(e);
    for (const auto& p : pts)
        r.insert(lift(p, e));
    return r;
}

// The degree-m forms over F_p vanishing on a Galois-stable configuration
// given over an extension.
inline Subspace<PrimeField> rational_linsys(const PointConfig<ExtField>& pts, int m, int order)
{
    const ExtField& e = pts.field();
    if (e.degree() == 1) {
        PointConfig<PrimeField> q(e.base());
        for (const auto& p : pts)
            q.insert({{p.c[0][0], p.c[1][0], p.c[2][0]}});
        return linsys(q, m, order).space;
    }
    return descend(linsys(pts, m, order).space);
}

namespace detail {

// f(x0, Y, 1) as a polynomial in Y.
template <class F>
upoly::Vec<F> restrict_to_vertical(const Form<F>& a, const typename F::Elem& x0)
{
    const F& f = a.field();
    const int m = a.degree();
    std::vector<typename F::Elem> xp{f.one()};
    for (int k = 1; k <= m; ++k)
        xp.push_back(f.mul(xp.back(), x0));
    upoly::Vec<F> r(m + 1, f.zero());
    const auto& mons = monomials(m);
    for (std::size_t i = 0; i < mons.size(); ++i) {
        if (f.is_zero(a.coeffs()[i]))
            continue;
        r[mons[i].y] = f.add(r[mons[i].y], f.mul(a.coeffs()[i], xp[mons[i].x]));
    }
    upoly::trim(f, r);
    return r;
}

// Sylvester resultant of two univariate polynomials of formal degrees m, n.
template <class F>
typename F::Elem sylvester_resultant(const F& f, const upoly::Vec<F>& a, int m, const upoly::Vec<F>& b, int n)
{
    const std::size_t s = static_cast<std::size_t>(m + n);
    if (s == 0)
        return f.one();
    Matrix<F> syl(f, s, s);
    auto coef = [&](const upoly::Vec<F>& p, int i) { return i < static_cast<int>(p.size()) ? p[i] : f.zero(); };
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i)
            syl(r, r + i) = coef(a, m - i);
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i)
            syl(n + r, r + i) = coef(b, n - i);
    return determinant(std::move(syl));
}

} // namespace detail

// Res_Y(a(x, Y, 1), b(x, Y, 1)) as a polynomial in x, by evaluation at
// deg a * deg b + 1 points and interpolation. Requires the Y^deg coefficients
// of both forms to be nonzero so that formal degrees never drop.
inline upoly::Vec<PrimeField> resultant_y(const Form<PrimeField>& a, const Form<PrimeField>& b)
{
    const PrimeField& f = a.field();
    const int da = a.degree(), db = b.degree();
    if (f.is_zero(a.coeff({0, da, 0})) || f.is_zero(b.coeff({0, db, 0})))
        throw Error(ErrorKind::Unsupported, "(0:1:0) lies on an input curve");
    const int npts = da * db + 1;
    if (f.characteristic() < static_cast<u64>(npts))
        throw Error(ErrorKind::PrimeTooSmall, "not enough evaluation points for the resultant");
    std::vector<u64> xs, ys;
    for (int i = 0; i < npts; ++i) {
        const u64 x0 = static_cast<u64>(i);
        xs.push_back(x0);
        ys.push_back(detail::sylvester_resultant(f, detail::restrict_to_vertical(a, x0), da,
            detail::restrict_to_vertical(b, x0), db));
    }
    return upoly::interpolate(f, xs, ys);
}

namespace detail {

inline bool squarefree(const PrimeField& f, const upoly::Vec<PrimeField>& r)
{
    return upoly::degree<PrimeField>(upoly::gcd(f, r, upoly::derivative(f, r))) == 0;
}

inline Matrix<ExtField> lift_matrix(const Matrix<PrimeField>& m, const ExtField& e)
{
    Matrix<ExtField> r(e, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = e.from_base(m(i, j));
    return r;
}

} // namespace detail

struct IntersectionOptions {
    int attempts = 16;
    unsigned max_extension = 64;
};

// All points of a = b = 0, over the splitting field of the resultant.
inline std::pair<PointConfig<ExtField>, ExtField> intersection_points(
    const Form<PrimeField>& a, const Form<PrimeField>& b, u64 seed, const IntersectionOptions& opt = {})
{
    if (!(a.field() == b.field()))
        throw Error(ErrorKind::FieldMismatch, "intersecting forms over different fields");
    if (a.degree() < 1 || b.degree() < 1)
        throw Error(ErrorKind::DegreeMismatch, "intersection needs positive degrees");
    const PrimeField& fp = a.field();
    const int expected = a.degree() * b.degree();
    Rng rng(seed);
    bool too_large = false;
    for (int attempt = 0; attempt < opt.attempts; ++attempt) {
        const auto mat = random_invertible(fp, rng);
        const auto ga = substitute(a, mat);
        const auto gb = substitute(b, mat);
        if (fp.is_zero(ga.coeff({0, ga.degree(), 0})) || fp.is_zero(gb.coeff({0, gb.degree(), 0})))
            continue;
        const auto res = resultant_y(ga, gb);
        if (res.empty())
            throw Error(ErrorKind::CommonComponent, "resultant vanishes identically");
        if (upoly::degree<PrimeField>(res) != expected || !detail::squarefree(fp, res))
            continue;
        const unsigned k = splitting_degree(fp, res, opt.max_extension);
        if (k > opt.max_extension) {
            too_large = true;
            continue;
        }
        const ExtField e = make_extension(fp, k, rng());
        const auto xs = find_roots(UniPoly<PrimeField>(fp, res), e, rng());
        const auto ea = lift(ga, e), eb = lift(gb, e);
        const auto emat = detail::lift_matrix(mat, e);
        PointConfig<ExtField> pts(e);
        bool ok = true;
        for (const auto& x0 : xs) {
            auto g = upoly::gcd(e, detail::restrict_to_vertical(ea, x0), detail::restrict_to_vertical(eb, x0));
            if (upoly::degree<ExtField>(g) != 1) {
                ok = false;
                break;
            }
            Point<ExtField> q{{x0, e.neg(g[0]), e.one()}};
            pts.insert(transform(emat, q));
        }
        if (ok && pts.size() == static_cast<std::size_t>(expected))
            return {std::move(pts), e};
    }
    if (too_large)
        throw Error(ErrorKind::SplittingTooLarge,
            "intersection points need an extension of degree above " + std::to_string(opt.max_extension));
    throw Error(ErrorKind::NonTransverse, "fewer than " + std::to_string(expected) + " distinct intersection points");
}

// Common zeros of the three partials of g over their splitting field.
inline std::pair<PointConfig<ExtField>, ExtField> singular_points(
    const Form<PrimeField>& g, u64 seed, const IntersectionOptions& opt = {})
{
    const PrimeField& fp = g.field();
    const int d = g.degree();
    if (d < 2)
        throw Error(ErrorKind::DegreeMismatch, "singular points need degree >= 2");
    Rng rng(seed);
    bool too_large = false;
    for (int attempt = 0; attempt < opt.attempts; ++attempt) {
        const auto mat = random_invertible(fp, rng);
        const auto h = substitute(g, mat);
        const std::array<Form<PrimeField>, 3> dh{partial(h, Var::X), partial(h, Var::Y), partial(h, Var::Z)};
        const auto mix = random_invertible(fp, rng);
        std::vector<Form<PrimeField>> q;
        for (int i = 0; i < 3; ++i)
            q.push_back(add(add(scale(dh[0], mix(i, 0)), scale(dh[1], mix(i, 1))), scale(dh[2], mix(i, 2))));
        bool leading = true;
        for (const auto& qi : q)
            leading = leading && !fp.is_zero(qi.coeff({0, d - 1, 0}));
        if (!leading)
            continue;
        const auto r12 = resultant_y(q[0], q[1]);
        const auto r13 = resultant_y(q[0], q[2]);
        if (r12.empty() || r13.empty())
            throw Error(ErrorKind::CommonComponent, "partials share a component");
        if (upoly::degree<PrimeField>(r12) != (d - 1) * (d - 1))
            continue;
        const auto common = upoly::monic(fp, upoly::gcd(fp, r12, r13));
        if (upoly::degree<PrimeField>(common) <= 0)
            return {PointConfig<ExtField>(ExtField(fp)), ExtField(fp)};
        if (!detail::squarefree(fp, common))
            continue;
        const unsigned k = splitting_degree(fp, common, opt.max_extension);
        if (k > opt.max_extension) {
            too_large = true;
            continue;
        }
        const ExtField e = make_extension(fp, k, rng());
        const auto xs = find_roots(UniPoly<PrimeField>(fp, common), e, rng());
        std::vector<Form<ExtField>> eq;
        for (const auto& qi : q)
            eq.push_back(lift(qi, e));
        const auto emat = detail::lift_matrix(mat, e);
        PointConfig<ExtField> pts(e);
        bool ok = true;
        for (const auto& x0 : xs) {
            auto c = upoly::gcd(e, detail::restrict_to_vertical(eq[0], x0), detail::restrict_to_vertical(eq[1], x0));
            c = upoly::gcd(e, c, detail::restrict_to_vertical(eq[2], x0));
            const int dc = upoly::degree<ExtField>(c);
            if (dc == 0)
                continue; // x-coordinate shared by unrelated intersection points
            if (dc != 1) {
                ok = false;
                break;
            }
            pts.insert(transform(emat, Point<ExtField>{{x0, e.neg(c[0]), e.one()}}));
        }
        if (ok)
            return {std::move(pts), e};
    }
    if (too_large)
        throw Error(ErrorKind::SplittingTooLarge,
            "singular points need an extension of degree above " + std::to_string(opt.max_extension));
    throw Error(ErrorKind::NonTransverse, "could not separate the singular points");
}

} // namespace ivhs

#endif
