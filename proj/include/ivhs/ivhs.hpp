#ifndef IVHS_IVHS_HPP
#define IVHS_IVHS_HPP

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nodalgen.hpp"

namespace ivhs {

// FNV-1a over the prime and the coefficient vector.
inline u64 curve_hash(const Form<PrimeField>& f)
{
    u64 h = 0xcbf29ce484222325ULL;
    auto mix = [&](u64 v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(f.field().characteristic());
    mix(static_cast<u64>(f.degree()));
    for (u64 c : f.coeffs())
        mix(c);
    return h;
}

struct CohomologyLedger {
    int d = 0;
    int n = 0;
    long long g = 0;
    std::size_t h0_adjoint = 0;      // dim H^0(I_Delta(d-3))
    std::size_t h0_adjoint_high = 0; // dim H^0(I_Delta(2d-3))
    std::size_t jacobian_dim = 0;    // dim (J_F)_{2d-3}
    std::size_t syzygy_defect = 0;
    long long h1 = 0;
};

inline CohomologyLedger ledger(const NodalCurve& c)
{
    CohomologyLedger l;
    l.d = c.d;
    l.n = c.n;
    l.g = c.g;
    const int d = c.d;
    l.h0_adjoint = rational_linsys(c.nodes, d - 3, 1).dim();
    l.h0_adjoint_high = rational_linsys(c.nodes, 2 * d - 3, 1).dim();
    const auto rows = jacobian_rows(c.F, 2 * d - 3);
    l.jacobian_dim = rank(rows);
    l.syzygy_defect = rows.rows() - l.jacobian_dim;
    const long long sections = 3 * binom(d, 2);
    l.h1 = static_cast<long long>(l.h0_adjoint_high) - sections + static_cast<long long>(l.syzygy_defect);

    auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::LedgerViolation, what + " (d = " + std::to_string(d) + ", n = " + std::to_string(c.n) + ")");
    };
    if (l.syzygy_defect != 0)
        fail("syzygy defect " + std::to_string(l.syzygy_defect) + " != 0");
    if (static_cast<long long>(l.h0_adjoint) != c.g)
        fail("h0(I(d-3)) = " + std::to_string(l.h0_adjoint) + " != g");
    if (l.h1 != c.g)
        fail("h1 = " + std::to_string(l.h1) + " != g = " + std::to_string(c.g));
    if (l.h0_adjoint + l.jacobian_dim != l.h0_adjoint_high)
        fail("complementary dimensions fail: " + std::to_string(l.h0_adjoint) + " + " + std::to_string(l.jacobian_dim) +
            " != " + std::to_string(l.h0_adjoint_high));
    return l;
}

struct VariationReport {
    int d = 0;
    int n = 0;
    long long g = 0;
    u64 prime = 0;
    u64 curve_seed = 0;
    u64 curve_hash = 0;
    std::string method;
    int trial = 0;
    u64 sigma_seed = 0;
    std::string sigma_kind;
    std::vector<std::vector<u64>> sigma; // coefficient coordinates over F_p
    long long variation = 0;
    bool maximal = false;
    long long defect = 0;
    Certificate certificates;
    int retries = 0;
    double ms = 0;
};

// The spaces a variation computation needs, built once per curve.
class VariationContext {
public:
    explicit VariationContext(const NodalCurve& c)
        : curve_(&c),
          adjoint_(rational_linsys(c.nodes, c.d - 3, 1)),
          sigma_space_(rational_linsys(c.nodes, c.d, 1)),
          jacobian_(jacobian_space(c.F, 2 * c.d - 3))
    {
    }

    const NodalCurve& curve() const { return *curve_; }
    const Subspace<PrimeField>& adjoint() const { return adjoint_; }
    const Subspace<PrimeField>& sigma_space() const { return sigma_space_; }
    const Subspace<PrimeField>& jacobian() const { return jacobian_; }

    // g - dim(sigma * H^0(I_Delta(d-3)) ∩ (J_F)_{2d-3}).
    template <class F>
    long long rank(const Form<F>& sigma) const
    {
        const NodalCurve& c = *curve_;
        const F& f = sigma.field();
        if (sigma.degree() != c.d)
            throw Error(ErrorKind::DegreeMismatch, "sigma must have the curve's degree");
        if (sigma.is_zero())
            throw Error(ErrorKind::SigmaNotAdjoint, "sigma is zero");
        if (!lifted(sigma_space_, f).contains(sigma.coeffs()))
            throw Error(ErrorKind::SigmaNotAdjoint, "sigma does not vanish on every node");
        const auto adj = lifted(adjoint_, f);
        Matrix<F> prod(f, 0, monomial_count(2 * c.d - 3));
        for (std::size_t i = 0; i < adj.dim(); ++i)
            prod.append_row(multiply(sigma, form_from_row(f, c.d - 3, adj.basis().row(i))).coeffs());
        const auto a = Subspace<F>::span_of(std::move(prod));
        if (static_cast<long long>(a.dim()) != c.g)
            throw Error(ErrorKind::LedgerViolation, "multiplication by sigma is not injective on adjoints");
        const auto r = combine_and_rank(a, lifted(jacobian_, f));
        return c.g - static_cast<long long>(r.intersection_dim);
    }

    Form<PrimeField> random_sigma(Rng& rng) const { return detail::random_member(sigma_space_, curve_->d, rng); }

private:
    template <class F>
    static Subspace<F> lifted(const Subspace<PrimeField>& s, const F& f)
    {
        if constexpr (std::is_same_v<F, PrimeField>)
            return s;
        else
            return extend_scalars(s, f);
    }

    const NodalCurve* curve_;
    Subspace<PrimeField> adjoint_;
    Subspace<PrimeField> sigma_space_;
    Subspace<PrimeField> jacobian_;
};

namespace detail {

template <class F>
std::vector<std::vector<u64>> coefficient_coordinates(const Form<F>& f)
{
    std::vector<std::vector<u64>> out;
    for (const auto& c : f.coeffs())
        out.push_back(f.field().coordinates(c));
    return out;
}

inline VariationReport report_header(const NodalCurve& c)
{
    VariationReport r;
    r.d = c.d;
    r.n = c.n;
    r.g = c.g;
    r.prime = c.field.characteristic();
    r.curve_seed = c.seed;
    r.curve_hash = curve_hash(c.F);
    r.method = c.method;
    r.certificates = c.certificate;
    r.retries = c.retries;
    return r;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

template <class F>
VariationReport variation_rank(const NodalCurve& c, const Form<F>& sigma, const VariationContext& ctx)
{
    const auto t0 = std::chrono::steady_clock::now();
    VariationReport r = detail::report_header(c);
    r.sigma_kind = std::is_same_v<F, PrimeField> ? "random" : "constructed";
    r.sigma = detail::coefficient_coordinates(sigma);
    r.variation = ctx.rank(sigma);
    r.defect = c.g - r.variation;
    r.maximal = r.defect == 0;
    r.ms = detail::elapsed_ms(t0);
    return r;
}

template <class F>
VariationReport variation_rank(const NodalCurve& c, const Form<F>& sigma)
{
    return variation_rank(c, sigma, VariationContext(c));
}

// One report per trial, sigma drawn uniformly from H^0(I_Delta(d)) \ {0}.
inline std::vector<VariationReport> generic_maximality(const NodalCurve& c, int trials, u64 seed)
{
    std::vector<VariationReport> out;
    if (trials <= 0)
        return out;
    const VariationContext ctx(c);
    for (int t = 0; t < trials; ++t) {
        const u64 s = derive_seed(seed, static_cast<u64>(t));
        Rng rng(s);
        auto r = variation_rank(c, ctx.random_sigma(rng), ctx);
        r.trial = t;
        r.sigma_seed = s;
        out.push_back(std::move(r));
    }
    return out;
}

struct ExchangeStep {
    std::size_t h_before = 0;
    std::size_t removed = 0; // indices into sigma_points
    std::size_t added = 0;
};

struct CBDecomposition {
    Matrix<PrimeField> basis_change;
    ExtField field;
    PointConfig<ExtField> delta;
    PointConfig<ExtField> sigma_points;
    std::vector<std::size_t> z; // indices into sigma_points
    std::vector<std::size_t> y;
    std::size_t initial_h = 0;
    std::vector<ExchangeStep> trace;
    bool z_certificate = false; // h0(I_{Z ∪ Delta}(d-2)) = 0
    bool y_certificate = false; // h0(I_Y(d-3)) = 0
    bool f3_certificate = false; // F_3 vanishes simply on Delta, nowhere on Sigma
    int retries = 0;

    PointConfig<ExtField> z_points() const { return sigma_points.subset(z); }
    PointConfig<ExtField> y_points() const { return sigma_points.subset(y); }
};

struct DecomposeOptions {
    int max_retries = 200;
    IntersectionOptions intersection{4, 24};
};

namespace detail {

inline std::array<Form<PrimeField>, 3> rotated_partials(const Form<PrimeField>& f, const Matrix<PrimeField>& m)
{
    const std::array<Form<PrimeField>, 3> p{partial(f, Var::X), partial(f, Var::Y), partial(f, Var::Z)};
    std::array<Form<PrimeField>, 3> out{Form<PrimeField>(f.field(), f.degree() - 1),
        Form<PrimeField>(f.field(), f.degree() - 1), Form<PrimeField>(f.field(), f.degree() - 1)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out[i] = add(out[i], scale(p[j], m(i, j)));
    return out;
}

template <class F>
bool gradient_vanishes(const Form<F>& f, const Point<F>& p)
{
    for (auto v : {Var::X, Var::Y, Var::Z})
        if (!f.field().is_zero(evaluate(partial(f, v), p)))
            return false;
    return true;
}

// h0 of degree-m forms through a configuration, over its own field.
inline std::size_t h0(const PointConfig<ExtField>& pts, int m) { return linsys(pts, m, 1).dim(); }

} // namespace detail

struct ExchangeResult {
    std::vector<std::size_t> t; // sorted indices into the pool
    std::size_t initial_h = 0;
    std::size_t final_h = 0;
    std::vector<ExchangeStep> trace;
    bool finished = false;
};

// Swaps points of T for points of the pool until no degree-m form vanishes on
// base ∪ T. A swap removes t whose removal keeps h and adds z outside the base
// locus of the remaining system, so h drops by one each time. Scans t, then z,
// in index order.
template <class F>
ExchangeResult exchange_to_zero(const PointConfig<F>& base, const PointConfig<F>& pool, std::vector<std::size_t> t,
    int m)
{
    const F& e = pool.field();
    std::sort(t.begin(), t.end());
    auto system = [&](const std::vector<std::size_t>& idx) { return linsys(base.united(pool.subset(idx)), m, 1); };
    ExchangeResult res;
    std::size_t h = system(t).dim();
    res.initial_h = h;
    bool stalled = false;
    while (h > 0 && !stalled) {
        stalled = true;
        for (std::size_t ti = 0; ti < t.size() && stalled; ++ti) {
            std::vector<std::size_t> rest = t;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(ti));
            const auto sys = system(rest);
            if (sys.dim() != h)
                continue;
            for (std::size_t z = 0; z < pool.size() && stalled; ++z) {
                if (std::binary_search(rest.begin(), rest.end(), z))
                    continue;
                bool outside = false;
                for (std::size_t b = 0; b < sys.dim() && !outside; ++b)
                    outside = !e.is_zero(evaluate(form_from_row(e, m, sys.space.basis().row(b)), pool[z]));
                if (!outside)
                    continue;
                res.trace.push_back({h, t[ti], z});
                rest.insert(std::upper_bound(rest.begin(), rest.end(), z), z);
                t = std::move(rest);
                const std::size_t next = system(t).dim();
                if (next >= h)
                    throw Error(ErrorKind::ExchangeStalled, "exchange did not lower h");
                h = next;
                stalled = false;
            }
        }
    }
    res.t = std::move(t);
    res.final_h = h;
    res.finished = h == 0;
    return res;
}

// Splits F_1 ∩ F_2 = Delta ∪ Sigma into Z ∪ Y by point exchange.
inline CBDecomposition cb_decompose(const NodalCurve& c, u64 seed, const DecomposeOptions& opt = {})
{
    const PrimeField& fp = c.field;
    const int d = c.d;
    const std::size_t sigma_size = static_cast<std::size_t>((d - 1) * (d - 1) - c.n);
    const std::size_t z_size = static_cast<std::size_t>(binom(d, 2) - c.n);
    Rng rng(seed);
    ErrorKind last = ErrorKind::ExchangeStalled;
    std::string last_msg = "no attempt";
    for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
        const auto basis = random_invertible(fp, rng);
        const auto fs = detail::rotated_partials(c.F, basis);
        std::pair<PointConfig<ExtField>, ExtField> inter{PointConfig<ExtField>(ExtField(fp)), ExtField(fp)};
        try {
            inter = intersection_points(fs[0], fs[1], rng(), opt.intersection);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SplittingTooLarge && e.kind() != ErrorKind::NonTransverse)
                throw;
            last = e.kind();
            last_msg = e.what();
            continue;
        }
        const ExtField& e = inter.second;
        const auto f3 = lift(fs[2], e);
        const auto lf = lift(c.F, e);
        PointConfig<ExtField> delta(e), sigma(e);
        for (const auto& p : inter.first)
            (e.is_zero(evaluate(f3, p)) ? delta : sigma).insert(p);
        bool delta_ok = delta.size() == static_cast<std::size_t>(c.n) && sigma.size() == sigma_size;
        for (const auto& p : delta)
            delta_ok = delta_ok && detail::gradient_vanishes(lf, p) && !detail::gradient_vanishes(f3, p);
        if (!delta_ok) {
            last = ErrorKind::NonTransverse;
            last_msg = "Delta is not cut out as expected by F_1, F_2, F_3";
            continue;
        }

        CBDecomposition dec{basis, e, delta, sigma, {}, {}, 0, {}, false, false, true, attempt};
        std::vector<std::size_t> order(sigma.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[uniform_below(rng, i)]);
        std::vector<std::size_t> t(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(z_size));
        std::sort(t.begin(), t.end());

        auto ex = exchange_to_zero(delta, sigma, std::move(t), d - 2);
        if (!ex.finished) {
            last = ErrorKind::ExchangeStalled;
            last_msg = "no admissible exchange at h = " + std::to_string(ex.final_h);
            continue;
        }
        dec.initial_h = ex.initial_h;
        dec.trace = std::move(ex.trace);
        t = std::move(ex.t);
        dec.z = t;
        for (std::size_t i = 0; i < sigma.size(); ++i)
            if (!std::binary_search(t.begin(), t.end(), i))
                dec.y.push_back(i);
        dec.z_certificate = detail::h0(delta.united(dec.z_points()), d - 2) == 0;
        dec.y_certificate = detail::h0(dec.y_points(), d - 3) == 0;
        for (const auto& p : sigma)
            dec.f3_certificate = dec.f3_certificate && !e.is_zero(evaluate(f3, p));
        dec.retries = attempt;
        return dec;
    }
    throw Error(last, "cb_decompose exhausted " + std::to_string(opt.max_retries) + " attempts: " + last_msg);
}

// A member of H^0(I_{Delta ∪ Z}(d)) that is nonzero at every point of Y.
inline Form<ExtField> sigma_from_decomposition(const NodalCurve& c, const CBDecomposition& dec, u64 seed)
{
    const ExtField& e = dec.field;
    const int d = c.d;
    const auto sys = linsys(dec.delta.united(dec.z_points()), d, 1);
    if (static_cast<long long>(sys.dim()) != 2LL * d + 1)
        throw Error(ErrorKind::EmptySystem,
            "h0(I_{Delta ∪ Z}(d)) = " + std::to_string(sys.dim()) + ", expected " + std::to_string(2 * d + 1));
    const auto f3 = lift(detail::rotated_partials(c.F, dec.basis_change)[2], e);
    for (const auto& p : dec.z_points())
        if (e.is_zero(evaluate(f3, p)))
            throw Error(ErrorKind::EmptySystem, "F_3 vanishes on a point of Z");
    Rng rng(seed);
    const auto ys = dec.y_points();
    for (int attempt = 0; attempt < 64; ++attempt) {
        Form<ExtField> s(e, d);
        for (std::size_t i = 0; i < sys.dim(); ++i)
            e.axpy(std::span<ExtField::Elem>(s.coeffs()), sys.space.basis().row(i), e.neg(e.random(rng)));
        bool ok = !s.is_zero();
        for (const auto& y : ys)
            ok = ok && !e.is_zero(evaluate(s, y));
        if (ok)
            return s;
    }
    throw Error(ErrorKind::EmptySystem, "every sampled member vanishes somewhere on Y");
}

// Jacobian ring S/J_F of a smooth curve.
class JacobianRing {
public:
    explicit JacobianRing(Form<PrimeField> f) : f_(std::move(f))
    {
        const int d = f_.degree();
        if (f_.field().characteristic() <= static_cast<u64>(3 * d))
            throw Error(ErrorKind::PrimeTooSmall, "prime must exceed 3d");
        if (jacobian_scheme_length(f_) != 0)
            throw Error(ErrorKind::NotSmooth, "curve is singular");
        high_ = jacobian_space(f_, 2 * d - 3);
    }

    const Form<PrimeField>& form() const { return f_; }

    std::size_t quotient_dim(int m) const
    {
        if (m < f_.degree() - 1)
            return monomial_count(m);
        return monomial_count(m) - rank(jacobian_rows(f_, m));
    }

    bool in_jacobian(const Form<PrimeField>& v) const
    {
        if (v.degree() < f_.degree() - 1)
            return v.is_zero();
        return jacobian_space(f_, v.degree()).contains(v.coeffs());
    }

    // Rank of multiplication by v from (S/J)_{d-3} to (S/J)_{2d-3}.
    std::size_t mu_rank(const Form<PrimeField>& v) const
    {
        const int d = f_.degree();
        if (v.degree() != d)
            throw Error(ErrorKind::DegreeMismatch, "v must have degree d");
        Matrix<PrimeField> rows(f_.field(), 0, monomial_count(2 * d - 3));
        for (const auto& e : monomials(d - 3))
            rows.append_row(high_.reduce(shifted_coeffs(v, e)));
        return rank(std::move(rows));
    }

private:
    Form<PrimeField> f_;
    Subspace<PrimeField> high_{f_.field(), 0};
};

inline std::size_t smooth_mu_rank(const Form<PrimeField>& f, const Form<PrimeField>& v)
{
    return JacobianRing(f).mu_rank(v);
}

inline Form<PrimeField> fermat_form(const PrimeField& fp, int d)
{
    Form<PrimeField> f(fp, d);
    f.set_coeff({d, 0, 0}, fp.one());
    f.set_coeff({0, d, 0}, fp.one());
    f.set_coeff({0, 0, d}, fp.one());
    return f;
}

struct FermatWitness {
    Form<PrimeField> v;
    std::size_t rank;
};

// Smallest nonzero variation found on the Fermat curve: monomials in
// canonical order first, then random perturbations of the best one.
inline FermatWitness fermat_min_witness(int d, const PrimeField& fp, u64 seed = 0)
{
    if (d < 5)
        throw Error(ErrorKind::DegreeMismatch, "Fermat witness needs d >= 5");
    if (fp.characteristic() % static_cast<u64>(d) == 0)
        throw Error(ErrorKind::PrimeTooSmall, "p divides d");
    const JacobianRing ring(fermat_form(fp, d));
    std::optional<FermatWitness> best;
    auto consider = [&](const Form<PrimeField>& v) {
        if (ring.in_jacobian(v))
            return;
        const auto r = ring.mu_rank(v);
        if (!best || r < best->rank)
            best = FermatWitness{v, r};
    };
    for (const auto& e : monomials(d))
        consider(Form<PrimeField>::monomial(fp, e));
    Rng rng(seed);
    const auto& mons = monomials(d);
    for (std::size_t i = 0; i < mons.size(); ++i) {
        auto v = best->v;
        v.set_coeff(mons[uniform_below(rng, mons.size())], fp.random(rng));
        consider(v);
    }
    return *best;
}

struct NoetherResult {
    bool surjective = false;
    std::size_t rank = 0;   // of the products modulo F
    std::size_t target = 0; // 3g - 3
};

// Products of pairs of degree-(d-3) forms against degree-(2d-6) forms modulo F.
inline NoetherResult noether_rank(const Form<PrimeField>& f)
{
    const int d = f.degree();
    if (d < 4)
        throw Error(ErrorKind::DegreeMismatch, "Noether check needs d >= 4");
    if (jacobian_scheme_length(f) != 0)
        throw Error(ErrorKind::NotSmooth, "curve is singular");
    const PrimeField& fp = f.field();
    const int m = 2 * d - 6;
    Matrix<PrimeField> ideal(fp, 0, monomial_count(m));
    for (const auto& e : monomials(d - 6))
        ideal.append_row(shifted_coeffs(f, e));
    const std::size_t ideal_rank = rank(ideal);
    Matrix<PrimeField> all = ideal;
    const auto& low = monomials(d - 3);
    for (std::size_t i = 0; i < low.size(); ++i)
        for (std::size_t j = i; j < low.size(); ++j) {
            const Exponent e{low[i].x + low[j].x, low[i].y + low[j].y, low[i].z + low[j].z};
            all.append_row(Form<PrimeField>::monomial(fp, e).coeffs());
        }
    NoetherResult r;
    r.rank = rank(std::move(all)) - ideal_rank;
    r.target = static_cast<std::size_t>(binom(2 * d - 4, 2) - binom(d - 4, 2));
    r.surjective = r.rank == r.target;
    return r;
}

inline bool noether_check(const Form<PrimeField>& f) { return noether_rank(f).surjective; }

} // namespace ivhs

#endif
