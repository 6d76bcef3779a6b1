#ifndef IVHS_FORMS_HPP
#define IVHS_FORMS_HPP

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"
#include "linalg.hpp"

namespace ivhs {

struct Exponent {
    int x = 0;
    int y = 0;
    int z = 0;

    int total() const noexcept { return x + y + z; }
    friend bool operator==(const Exponent&, const Exponent&) = default;
};

enum class Var { X, Y, Z };

inline std::size_t monomial_count(int m) noexcept
{
    return m < 0 ? 0 : static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m + 2) / 2;
}

// Graded lexicographic position with X > Y > Z: the monomials with a larger
// X-exponent come first, then Y descends. For s = m - e.x the index is
// s(s+1)/2 + e.z.
inline std::size_t monomial_index(int m, Exponent e)
{
    if (e.x < 0 || e.y < 0 || e.z < 0 || e.total() != m)
        throw Error(ErrorKind::DegreeMismatch, "exponent does not have total degree " + std::to_string(m));
    const std::size_t s = static_cast<std::size_t>(m - e.x);
    return s * (s + 1) / 2 + static_cast<std::size_t>(e.z);
}

// Exponents of all degree-m monomials in canonical order.
inline const std::vector<Exponent>& monomials(int m)
{
    thread_local std::vector<std::vector<Exponent>> cache;
    if (m < 0) {
        static const std::vector<Exponent> none;
        return none;
    }
    if (cache.size() <= static_cast<std::size_t>(m))
        cache.resize(m + 1);
    auto& list = cache[m];
    if (list.empty()) {
        for (int x = m; x >= 0; --x)
            for (int y = m - x; y >= 0; --y)
                list.push_back({x, y, m - x - y});
    }
    return list;
}

template <class F>
struct Point {
    using Elem = typename F::Elem;
    std::array<Elem, 3> c;
};

// Scale so that the last nonzero coordinate is 1.
template <class F>
Point<F> normalize(const F& f, Point<F> p)
{
    for (int i = 2; i >= 0; --i) {
        if (!f.is_zero(p.c[i])) {
            const auto inv = f.inv(p.c[i]);
            for (auto& x : p.c)
                x = f.mul(x, inv);
            return p;
        }
    }
    throw Error(ErrorKind::ZeroPoint, "(0:0:0) is not a projective point");
}

template <class F>
bool same_point(const F& f, const Point<F>& a, const Point<F>& b)
{
    auto na = normalize(f, a);
    auto nb = normalize(f, b);
    for (int i = 0; i < 3; ++i)
        if (!f.equal(na.c[i], nb.c[i]))
            return false;
    return true;
}

// Homogeneous polynomial in X, Y, Z of a fixed degree, dense over the
// canonical monomial order.
template <class F>
class Form {
public:
    using Elem = typename F::Elem;

    Form(F field, int degree) : field_(std::move(field)), degree_(degree)
    {
        if (degree < 0)
            throw Error(ErrorKind::DegreeMismatch, "form degree must be nonnegative");
        coeffs_.assign(monomial_count(degree), field_.zero());
    }

    Form(F field, int degree, std::vector<Elem> coeffs) : field_(std::move(field)), degree_(degree), coeffs_(std::move(coeffs))
    {
        if (degree < 0 || coeffs_.size() != monomial_count(degree))
            throw Error(ErrorKind::DegreeMismatch, "coefficient vector length does not match degree");
    }

    static Form monomial(const F& field, Exponent e)
    {
        Form f(field, e.total());
        f.coeffs_[monomial_index(e.total(), e)] = field.one();
        return f;
    }

    const F& field() const noexcept { return field_; }
    int degree() const noexcept { return degree_; }
    const std::vector<Elem>& coeffs() const noexcept { return coeffs_; }
    std::vector<Elem>& coeffs() noexcept { return coeffs_; }

    const Elem& coeff(Exponent e) const { return coeffs_[monomial_index(degree_, e)]; }
    void set_coeff(Exponent e, Elem v) { coeffs_[monomial_index(degree_, e)] = std::move(v); }

    bool is_zero() const
    {
        for (const auto& c : coeffs_)
            if (!field_.is_zero(c))
                return false;
        return true;
    }

    friend bool operator==(const Form& a, const Form& b)
    {
        return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
    }

private:
    F field_;
    int degree_;
    std::vector<Elem> coeffs_;
};

template <class F>
Form<F> add(const Form<F>& a, const Form<F>& b)
{
    if (a.degree() != b.degree())
        throw Error(ErrorKind::DegreeMismatch, "adding forms of different degrees");
    const F& f = a.field();
    Form<F> r = a;
    for (std::size_t i = 0; i < r.coeffs().size(); ++i)
        r.coeffs()[i] = f.add(r.coeffs()[i], b.coeffs()[i]);
    return r;
}

template <class F>
Form<F> sub(const Form<F>& a, const Form<F>& b)
{
    if (a.degree() != b.degree())
        throw Error(ErrorKind::DegreeMismatch, "subtracting forms of different degrees");
    const F& f = a.field();
    Form<F> r = a;
    for (std::size_t i = 0; i < r.coeffs().size(); ++i)
        r.coeffs()[i] = f.sub(r.coeffs()[i], b.coeffs()[i]);
    return r;
}

template <class F>
Form<F> scale(const Form<F>& a, const typename F::Elem& c)
{
    Form<F> r = a;
    for (auto& x : r.coeffs())
        x = a.field().mul(x, c);
    return r;
}

template <class F>
Form<F> multiply(const Form<F>& a, const Form<F>& b)
{
    if (!(a.field() == b.field()))
        throw Error(ErrorKind::FieldMismatch, "multiplying forms over different fields");
    const F& f = a.field();
    const int m = a.degree() + b.degree();
    Form<F> r(f, m);
    const auto& ea = monomials(a.degree());
    const auto& eb = monomials(b.degree());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (f.is_zero(a.coeffs()[i]))
            continue;
        for (std::size_t j = 0; j < eb.size(); ++j) {
            if (f.is_zero(b.coeffs()[j]))
                continue;
            const Exponent e{ea[i].x + eb[j].x, ea[i].y + eb[j].y, ea[i].z + eb[j].z};
            auto& slot = r.coeffs()[monomial_index(m, e)];
            slot = f.add(slot, f.mul(a.coeffs()[i], b.coeffs()[j]));
        }
    }
    return r;
}

// Coefficient vector of e * a in degree a.degree() + e.total().
template <class F>
std::vector<typename F::Elem> shifted_coeffs(const Form<F>& a, Exponent e)
{
    const F& f = a.field();
    const int m = a.degree() + e.total();
    std::vector<typename F::Elem> out(monomial_count(m), f.zero());
    const auto& ea = monomials(a.degree());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (f.is_zero(a.coeffs()[i]))
            continue;
        out[monomial_index(m, {ea[i].x + e.x, ea[i].y + e.y, ea[i].z + e.z})] = a.coeffs()[i];
    }
    return out;
}

template <class F>
Form<F> partial(const Form<F>& a, Var v)
{
    if (a.degree() < 1)
        throw Error(ErrorKind::DegreeMismatch, "partial derivative of a constant form");
    const F& f = a.field();
    Form<F> r(f, a.degree() - 1);
    const auto& ea = monomials(a.degree());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (f.is_zero(a.coeffs()[i]))
            continue;
        Exponent e = ea[i];
        int* slot = v == Var::X ? &e.x : v == Var::Y ? &e.y : &e.z;
        const int k = *slot;
        if (k == 0)
            continue;
        --*slot;
        r.coeffs()[monomial_index(a.degree() - 1, e)] = f.mul(a.coeffs()[i], f.from_int(k));
    }
    return r;
}

namespace detail {

template <class F>
std::array<std::vector<typename F::Elem>, 3> coordinate_powers(const F& f, const Point<F>& p, int m)
{
    std::array<std::vector<typename F::Elem>, 3> pw;
    for (int i = 0; i < 3; ++i) {
        pw[i].reserve(m + 1);
        pw[i].push_back(f.one());
        for (int k = 1; k <= m; ++k)
            pw[i].push_back(f.mul(pw[i].back(), p.c[i]));
    }
    return pw;
}

} // namespace detail

// Value at the stored coordinates of p (the caller fixes the representative).
template <class F>
typename F::Elem evaluate(const Form<F>& a, const Point<F>& p)
{
    const F& f = a.field();
    if (f.is_zero(p.c[0]) && f.is_zero(p.c[1]) && f.is_zero(p.c[2]))
        throw Error(ErrorKind::ZeroPoint, "cannot evaluate at (0:0:0)");
    const auto pw = detail::coordinate_powers(f, p, a.degree());
    const auto& ea = monomials(a.degree());
    auto acc = f.zero();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (f.is_zero(a.coeffs()[i]))
            continue;
        acc = f.add(acc, f.mul(a.coeffs()[i], f.mul(pw[0][ea[i].x], f.mul(pw[1][ea[i].y], pw[2][ea[i].z]))));
    }
    return acc;
}

// a(M * (X, Y, Z)^T): each variable is replaced by the matching row of M.
template <class F>
Form<F> substitute(const Form<F>& a, const Matrix<F>& m)
{
    if (m.rows() != 3 || m.cols() != 3)
        throw Error(ErrorKind::AmbientMismatch, "coordinate change must be 3x3");
    const F& f = a.field();
    const int d = a.degree();
    std::array<std::vector<Form<F>>, 3> pw;
    for (int i = 0; i < 3; ++i) {
        Form<F> lin(f, 1, {m(i, 0), m(i, 1), m(i, 2)});
        pw[i].push_back(Form<F>(f, 0, {f.one()}));
        for (int k = 1; k <= d; ++k)
            pw[i].push_back(multiply(pw[i].back(), lin));
    }
    Form<F> r(f, d);
    const auto& ea = monomials(d);
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (f.is_zero(a.coeffs()[i]))
            continue;
        auto term = multiply(multiply(pw[0][ea[i].x], pw[1][ea[i].y]), pw[2][ea[i].z]);
        r = add(r, scale(term, a.coeffs()[i]));
    }
    return r;
}

template <class F>
Point<F> transform(const Matrix<F>& m, const Point<F>& p)
{
    const F& f = m.field();
    Point<F> r{{f.zero(), f.zero(), f.zero()}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.c[i] = f.add(r.c[i], f.mul(m(i, j), p.c[j]));
    return r;
}

// Same form with coefficients pushed into an extension (or copied, for F_p).
template <class F>
Form<F> lift(const Form<PrimeField>& a, const F& target)
{
    std::vector<typename F::Elem> c;
    c.reserve(a.coeffs().size());
    for (u64 x : a.coeffs())
        c.push_back(target.from_base(x));
    return Form<F>(target, a.degree(), std::move(c));
}

template <class F>
Point<F> lift(const Point<PrimeField>& p, const F& target)
{
    return {{target.from_base(p.c[0]), target.from_base(p.c[1]), target.from_base(p.c[2])}};
}

template <class F>
Form<F> random_form(const F& f, int degree, Rng& rng)
{
    Form<F> r(f, degree);
    for (auto& c : r.coeffs())
        c = f.random(rng);
    return r;
}

// Random invertible 3x3 matrix.
template <class F>
Matrix<F> random_invertible(const F& f, Rng& rng)
{
    for (;;) {
        Matrix<F> m(f, 3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                m(i, j) = f.random(rng);
        if (!f.is_zero(determinant(m)))
            return m;
    }
}

// Form of degree m from its coefficient vector (a row of some basis matrix).
template <class F>
Form<F> form_from_row(const F& f, int m, std::span<const typename F::Elem> row)
{
    return Form<F>(f, m, std::vector<typename F::Elem>(row.begin(), row.end()));
}

} // namespace ivhs

#endif
