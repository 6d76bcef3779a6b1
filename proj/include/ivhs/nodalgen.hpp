#ifndef IVHS_NODALGEN_HPP
#define IVHS_NODALGEN_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pointsys.hpp"

namespace ivhs {

inline long long binom(long long n, long long k)
{
    if (k < 0 || n < k)
        return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

inline long long genus_of(int d, int n) { return binom(d - 1, 2) - n; }

struct Certificate {
    bool nodes_ok = false;
    bool scheme_ok = false;
    long long scheme_length = -1; // -1 when the Hilbert function did not stabilize
    bool adjoint_ok = false;
    std::size_t adjoint_dim = 0;
    bool syzygy_ok = false;
    std::size_t syzygy_dim = 0;
    bool high_adjoint_ok = false;
    std::size_t high_adjoint_dim = 0;

    bool passed() const { return nodes_ok && scheme_ok && adjoint_ok && syzygy_ok && high_adjoint_ok; }

    std::string first_failure() const
    {
        if (!nodes_ok)
            return "nodes";
        if (!scheme_ok)
            return "jacobian_scheme_length";
        if (!adjoint_ok)
            return "adjoint_dimension";
        if (!syzygy_ok)
            return "syzygies";
        if (!high_adjoint_ok)
            return "high_adjoint_dimension";
        return "";
    }
};

// An irreducible plane curve F = 0 over F_p whose singularities are exactly
// the n nodes in `nodes`. The nodes form a Galois-stable set and are stored
// over their splitting field (F_p itself when they are rational).
struct NodalCurve {
    int d = 0;
    int n = 0;
    long long g = 0;
    PrimeField field;
    Form<PrimeField> F;
    PointConfig<ExtField> nodes;
    u64 seed = 0;
    std::string method;
    int retries = 0;
    Certificate certificate;

    const ExtField& node_field() const { return nodes.field(); }
};

// (J_F)_m: the span of all monomial multiples of F_X, F_Y, F_Z in degree m,
// one row per (partial, monomial) pair.
inline Matrix<PrimeField> jacobian_rows(const Form<PrimeField>& f, int m)
{
    const int d = f.degree();
    const std::array<Form<PrimeField>, 3> parts{partial(f, Var::X), partial(f, Var::Y), partial(f, Var::Z)};
    Matrix<PrimeField> rows(f.field(), 0, monomial_count(m));
    for (const auto& part : parts)
        for (const auto& e : monomials(m - d + 1))
            rows.append_row(shifted_coeffs(part, e));
    return rows;
}

inline Subspace<PrimeField> jacobian_space(const Form<PrimeField>& f, int m)
{
    return Subspace<PrimeField>::span_of(jacobian_rows(f, m));
}

// Length of the singular scheme, read off the Hilbert function of S/J_F at
// degree 3d and checked for stability at 3d + 1.
inline long long jacobian_scheme_length(const Form<PrimeField>& f)
{
    const int d = f.degree();
    if (d < 3)
        throw Error(ErrorKind::DegreeMismatch, "jacobian scheme length needs degree >= 3");
    auto colength = [&](int m) {
        return static_cast<long long>(monomial_count(m)) - static_cast<long long>(rank(jacobian_rows(f, m)));
    };
    const long long a = colength(3 * d);
    const long long b = colength(3 * d + 1);
    if (a != b)
        throw Error(ErrorKind::NotStabilized,
            "Hilbert function of S/J_F is " + std::to_string(a) + " then " + std::to_string(b));
    return a;
}

// Ordinary double point: singular with a rank-2 Hessian (two distinct tangents).
template <class F>
bool is_node(const Form<F>& a, const Point<F>& p)
{
    const F& f = a.field();
    const std::array<Var, 3> vars{Var::X, Var::Y, Var::Z};
    std::array<Form<F>, 3> grad{partial(a, Var::X), partial(a, Var::Y), partial(a, Var::Z)};
    for (const auto& g : grad)
        if (!f.is_zero(evaluate(g, p)))
            throw Error(ErrorKind::NotSingular, "point is not a singular point of the curve");
    Matrix<F> hess(f, 3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            hess(i, j) = evaluate(partial(grad[i], vars[j]), p);
    return rank(hess) == 2;
}

// Dimension of the degree-(d-2) syzygies of (F_X, F_Y, F_Z).
inline std::size_t syzygy_dimension(const Form<PrimeField>& f)
{
    const int d = f.degree();
    auto rows = jacobian_rows(f, 2 * d - 3);
    return rows.rows() - rank(rows);
}

inline Certificate certify(const NodalCurve& c)
{
    Certificate cert;
    const int d = c.d;
    const auto lf = lift(c.F, c.node_field());
    cert.nodes_ok = c.nodes.size() == static_cast<std::size_t>(c.n);
    for (const auto& p : c.nodes) {
        if (!cert.nodes_ok)
            break;
        try {
            cert.nodes_ok = is_node(lf, p);
        } catch (const Error&) {
            cert.nodes_ok = false;
        }
    }
    try {
        cert.scheme_length = jacobian_scheme_length(c.F);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotStabilized)
            throw;
        cert.scheme_length = -1;
    }
    cert.scheme_ok = cert.scheme_length == c.n;
    cert.adjoint_dim = rational_linsys(c.nodes, d - 3, 1).dim();
    cert.adjoint_ok = static_cast<long long>(cert.adjoint_dim) == c.g;
    cert.syzygy_dim = syzygy_dimension(c.F);
    cert.syzygy_ok = cert.syzygy_dim == 0;
    cert.high_adjoint_dim = rational_linsys(c.nodes, 2 * d - 3, 1).dim();
    cert.high_adjoint_ok = static_cast<long long>(cert.high_adjoint_dim) == (d - 1) * (2 * d - 1) - c.n;
    return cert;
}

enum class GenerationMethod { Auto, GeneralNodes, Parametric };

inline std::string to_string(GenerationMethod m)
{
    switch (m) {
    case GenerationMethod::Auto: return "auto";
    case GenerationMethod::GeneralNodes: return "general-nodes";
    case GenerationMethod::Parametric: return "parametric";
    }
    return "unknown";
}

struct GenerateOptions {
    int max_retries = 50;
    GenerationMethod method = GenerationMethod::Auto;
};

// Nodes at general points exist only while the double-point conditions leave
// room for an irreducible member; past that, curves are built as images of
// lower-degree curves of the right genus.
inline GenerationMethod default_method(int d, int n)
{
    return static_cast<long long>(3 * n) + 3 <= binom(d + 2, 2) ? GenerationMethod::GeneralNodes
                                                                  : GenerationMethod::Parametric;
}

namespace detail {

inline void check_generation_input(int d, int n, const PrimeField& fp, int min_degree)
{
    if (d < min_degree)
        throw Error(ErrorKind::DegreeMismatch, "degree must be at least " + std::to_string(min_degree));
    if (n < 0 || n > binom(d - 1, 2) - 1)
        throw Error(ErrorKind::TooManyNodes,
            "n = " + std::to_string(n) + " outside [0, " + std::to_string(binom(d - 1, 2) - 1) + "] for d = " +
                std::to_string(d));
    if (fp.characteristic() <= static_cast<u64>(2 * d - 3))
        throw Error(ErrorKind::PrimeTooSmall, "prime must exceed 2d - 3 = " + std::to_string(2 * d - 3));
}

inline Form<PrimeField> random_member(const Subspace<PrimeField>& space, int m, Rng& rng)
{
    const PrimeField& f = space.field();
    Form<PrimeField> r(f, m);
    for (;;) {
        for (std::size_t i = 0; i < space.dim(); ++i)
            f.axpy(std::span<u64>(r.coeffs()), space.basis().row(i), f.neg(f.random(rng)));
        if (!r.is_zero())
            return r;
    }
}

inline std::optional<NodalCurve> sample_general(int d, int n, const PrimeField& fp, Rng& rng)
{
    PointConfig<PrimeField> pts(fp);
    while (pts.size() < static_cast<std::size_t>(n))
        pts.insert({{fp.random(rng), fp.random(rng), fp.one()}});
    auto sys = linsys(pts, d, 2);
    if (static_cast<long long>(sys.dim()) != binom(d + 2, 2) - 3LL * n || sys.dim() == 0)
        return std::nullopt;
    NodalCurve c{d, n, genus_of(d, n), fp, random_member(sys.space, d, rng), as_extension_points(pts), 0,
        to_string(GenerationMethod::GeneralNodes), 0, {}};
    return c;
}

// Affine points of f = 0 with Z = 1, found line by line.
inline std::vector<Point<PrimeField>> sample_curve_points(const Form<PrimeField>& f, std::size_t count, Rng& rng)
{
    const PrimeField& fp = f.field();
    std::vector<Point<PrimeField>> out;
    PointConfig<PrimeField> seen(fp);
    std::size_t misses = 0;
    while (out.size() < count && misses < 64 * count + 1024) {
        const u64 x0 = fp.random(rng);
        const auto line = detail::restrict_to_vertical(f, x0);
        if (upoly::degree<PrimeField>(line) < 1) {
            ++misses;
            continue;
        }
        const auto roots = find_roots(UniPoly<PrimeField>(fp, line), rng());
        if (roots.empty())
            ++misses;
        for (u64 y0 : roots) {
            Point<PrimeField> p{{x0, y0, fp.one()}};
            if (seen.insert(p))
                out.push_back(p);
        }
    }
    return out;
}

// Image of a certified curve of degree e and genus g under three random forms
// of degree k through b = k e - d base points on it.
inline std::optional<NodalCurve> sample_parametric(int d, int n, const PrimeField& fp, Rng& rng)
{
    const long long g = genus_of(d, n);
    int e = 3;
    while (binom(e - 1, 2) < g)
        ++e;
    const int n0 = static_cast<int>(binom(e - 1, 2) - g);
    if (e >= d)
        return std::nullopt;

    std::optional<NodalCurve> src;
    for (int i = 0; i < 8 && !src; ++i) {
        src = sample_general(e, n0, fp, rng);
        if (src && !certify(*src).passed())
            src.reset();
    }
    if (!src)
        return std::nullopt;

    const int k = (d + e - 1) / e;
    const int b = k * e - d;
    const std::size_t need = static_cast<std::size_t>(d) * k * e + 1 + static_cast<std::size_t>(b) + 8;
    auto pts = sample_curve_points(src->F, need + static_cast<std::size_t>(b), rng);
    if (pts.size() < need + static_cast<std::size_t>(b))
        return std::nullopt;
    PointConfig<PrimeField> base(fp);
    for (int i = 0; i < b; ++i)
        base.insert(pts[i]);
    const auto sections = linsys(base, k, 1);
    std::array<Form<PrimeField>, 3> s{random_member(sections.space, k, rng), random_member(sections.space, k, rng),
        random_member(sections.space, k, rng)};

    const auto& mons = monomials(d);
    Matrix<PrimeField> rows(fp, 0, mons.size());
    std::vector<u64> row(mons.size());
    for (std::size_t i = static_cast<std::size_t>(b); i < pts.size(); ++i) {
        Point<PrimeField> v{{evaluate(s[0], pts[i]), evaluate(s[1], pts[i]), evaluate(s[2], pts[i])}};
        if (v.c[0] == 0 && v.c[1] == 0 && v.c[2] == 0)
            continue;
        const auto pw = detail::coordinate_powers(fp, v, d);
        for (std::size_t j = 0; j < mons.size(); ++j)
            row[j] = fp.mul(pw[0][mons[j].x], fp.mul(pw[1][mons[j].y], pw[2][mons[j].z]));
        rows.append_row(row);
    }
    const auto eq = kernel_basis(std::move(rows));
    if (eq.dim() != 1)
        return std::nullopt;
    Form<PrimeField> image = form_from_row(fp, d, eq.basis().row(0));

    std::pair<PointConfig<ExtField>, ExtField> sing{PointConfig<ExtField>(ExtField(fp)), ExtField(fp)};
    try {
        sing = singular_points(image, rng());
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::CommonComponent)
            return std::nullopt;
        if (err.kind() == ErrorKind::SplittingTooLarge || err.kind() == ErrorKind::NonTransverse)
            return std::nullopt;
        throw;
    }
    if (sing.first.size() != static_cast<std::size_t>(n))
        return std::nullopt;
    NodalCurve c{d, n, g, fp, std::move(image), std::move(sing.first), 0, to_string(GenerationMethod::Parametric),
        0, {}};
    return c;
}

} // namespace detail

// A certified irreducible degree-d curve with exactly n nodes, determined by
// (d, n, p, seed).
inline NodalCurve generate(int d, int n, const PrimeField& fp, u64 seed, const GenerateOptions& opt = {})
{
    detail::check_generation_input(d, n, fp, 4);
    const GenerationMethod method = opt.method == GenerationMethod::Auto ? default_method(d, n) : opt.method;
    Rng rng(seed);
    std::string last = "no candidate";
    for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
        auto cand = method == GenerationMethod::GeneralNodes ? detail::sample_general(d, n, fp, rng)
                                                             : detail::sample_parametric(d, n, fp, rng);
        if (!cand) {
            last = "sampling";
            continue;
        }
        cand->certificate = certify(*cand);
        if (!cand->certificate.passed()) {
            last = cand->certificate.first_failure();
            continue;
        }
        cand->seed = seed;
        cand->retries = attempt;
        return std::move(*cand);
    }
    throw Error(ErrorKind::GenerationExhausted,
        "d = " + std::to_string(d) + ", n = " + std::to_string(n) + " after " + std::to_string(opt.max_retries) +
            " attempts; last failure: " + last);
}

// The same curve after the substitution X -> M X: F' = F(M X), nodes M^-1 P.
inline NodalCurve change_coordinates(const NodalCurve& c, const Matrix<PrimeField>& m)
{
    NodalCurve r = c;
    r.F = substitute(c.F, m);
    const ExtField& e = c.node_field();
    const auto minv = detail::lift_matrix(inverse(m), e);
    PointConfig<ExtField> moved(e);
    for (const auto& p : c.nodes)
        moved.insert(transform(minv, p));
    r.nodes = std::move(moved);
    return r;
}

} // namespace ivhs

#endif
