#ifndef IVHS_IO_HPP
#define IVHS_IO_HPP

#include <cstdio>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "lab.hpp"

namespace ivhs {

using Json = nlohmann::ordered_json;

namespace detail {

template <class F>
Json element_json(const F& f, const typename F::Elem& a)
{
    if constexpr (std::is_same_v<F, PrimeField>)
        return a;
    else
        return f.coordinates(a);
}

template <class F>
typename F::Elem element_from_json(const F& f, const Json& j)
{
    if constexpr (std::is_same_v<F, PrimeField>) {
        const u64 v = j.get<u64>();
        if (v >= f.characteristic())
            throw Error(ErrorKind::Parse, "coefficient is not reduced modulo p");
        return f.from_base(v);
    } else {
        const auto c = j.get<std::vector<u64>>();
        bool reduced = true;
        for (u64 v : c)
            reduced = reduced && v < f.characteristic();
        if (!reduced)
            throw Error(ErrorKind::Parse, "coefficient is not reduced modulo p");
        if (c.size() != f.degree())
            throw Error(ErrorKind::Parse, "extension element has the wrong length");
        return f.from_coordinates(c);
    }
}

} // namespace detail

// [[e1, e2, e3, coeff], ...] in canonical order, zero coefficients omitted.
template <class F>
Json form_to_json(const Form<F>& f)
{
    Json out = Json::array();
    const auto& mons = monomials(f.degree());
    for (std::size_t i = 0; i < mons.size(); ++i) {
        const auto& c = f.coeffs()[i];
        if (f.field().is_zero(c))
            continue;
        out.push_back(Json::array({mons[i].x, mons[i].y, mons[i].z, detail::element_json(f.field(), c)}));
    }
    return out;
}

template <class F>
Form<F> form_from_json(const F& field, int degree, const Json& j)
{
    Form<F> f(field, degree);
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 4)
            throw Error(ErrorKind::Parse, "a term must be [e1, e2, e3, coeff]");
        const Exponent e{term[0].get<int>(), term[1].get<int>(), term[2].get<int>()};
        if (e.x < 0 || e.y < 0 || e.z < 0 || e.x + e.y + e.z != degree)
            throw Error(ErrorKind::Parse, "term exponent does not match the degree");
        f.set_coeff(e, detail::element_from_json(field, term[3]));
    }
    return f;
}

template <class F>
Json points_to_json(const PointConfig<F>& pts)
{
    Json out = Json::array();
    for (const auto& p : pts)
        out.push_back(Json::array({detail::element_json(pts.field(), p.c[0]), detail::element_json(pts.field(), p.c[1]),
            detail::element_json(pts.field(), p.c[2])}));
    return out;
}

template <class F>
PointConfig<F> points_from_json(const F& field, const Json& j)
{
    PointConfig<F> pts(field);
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 3)
            throw Error(ErrorKind::Parse, "a point must have three coordinates");
        pts.insert({{detail::element_from_json(field, p[0]), detail::element_from_json(field, p[1]),
            detail::element_from_json(field, p[2])}});
    }
    return pts;
}

inline Json certificate_to_json(const Certificate& c)
{
    return Json{{"passed", c.passed()}, {"nodes", c.nodes_ok}, {"scheme_length", c.scheme_length},
        {"adjoint_dim", c.adjoint_dim}, {"syzygy_dim", c.syzygy_dim}, {"high_adjoint_dim", c.high_adjoint_dim}};
}

inline Json curve_to_json(const NodalCurve& c)
{
    Json j{{"prime", c.field.characteristic()}};
    if (c.node_field().degree() > 1)
        j["extension_modulus"] = c.node_field().modulus();
    j["degree"] = c.d;
    j["n"] = c.n;
    j["coefficients"] = form_to_json(c.F);
    j["nodes"] = points_to_json(c.nodes);
    j["seed"] = c.seed;
    j["method"] = c.method;
    j["retries"] = c.retries;
    j["certificate"] = certificate_to_json(c.certificate);
    return j;
}

// Reads a curve record and recertifies it from scratch.
inline NodalCurve curve_from_json(const Json& j)
{
    try {
        const PrimeField fp = make_prime_field(j.at("prime").get<u64>());
        const ExtField ef = j.contains("extension_modulus")
            ? ExtField(fp, j.at("extension_modulus").get<std::vector<u64>>())
            : ExtField(fp);
        const int d = j.at("degree").get<int>();
        const int n = j.at("n").get<int>();
        if (d < 4 || n < 0 || n >= binom(d - 1, 2))
            throw Error(ErrorKind::Parse, "degree or node count out of range");
        NodalCurve c{d, n, genus_of(d, n), fp, form_from_json(fp, d, j.at("coefficients")),
            points_from_json(ef, j.at("nodes")), j.value("seed", u64{0}), j.value("method", std::string("file")),
            j.value("retries", 0), {}};
        if (c.nodes.size() != static_cast<std::size_t>(n))
            throw Error(ErrorKind::Parse, "node list does not have n points");
        c.certificate = certify(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

inline Json ledger_to_json(const CohomologyLedger& l)
{
    return Json{{"h0_adjoint", l.h0_adjoint}, {"h0_adjoint_high", l.h0_adjoint_high}, {"jacobian_dim", l.jacobian_dim},
        {"syzygy_defect", l.syzygy_defect}, {"h1", l.h1}, {"g", l.g}};
}

// One JSON Lines record per trial.
inline Json report_to_json(const VariationReport& r, bool timing = true)
{
    return Json{{"d", r.d}, {"n", r.n}, {"prime", r.prime}, {"seed", r.curve_seed}, {"trial", r.trial},
        {"sigma_seed", r.sigma_seed}, {"sigma_kind", r.sigma_kind}, {"variation", r.variation}, {"g", r.g},
        {"maximal", r.maximal}, {"defect", r.defect}, {"certificates", certificate_to_json(r.certificates)},
        {"retries", r.retries}, {"ms", timing ? r.ms : 0.0}, {"curve_hash", r.curve_hash}, {"method", r.method}};
}

inline std::string csv_header()
{
    return "d,n,prime,seed,trial,sigma_seed,sigma_kind,variation,g,maximal,defect,certificates_passed,scheme_length,"
           "adjoint_dim,syzygy_dim,high_adjoint_dim,retries,ms,curve_hash,method";
}

inline std::string format_ms(double ms)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

inline std::string report_to_csv(const VariationReport& r, bool timing = true)
{
    std::ostringstream os;
    const auto& c = r.certificates;
    os << r.d << ',' << r.n << ',' << r.prime << ',' << r.curve_seed << ',' << r.trial << ',' << r.sigma_seed << ','
       << r.sigma_kind << ',' << r.variation << ',' << r.g << ',' << (r.maximal ? "true" : "false") << ',' << r.defect
       << ',' << (c.passed() ? "true" : "false") << ',' << c.scheme_length << ',' << c.adjoint_dim << ','
       << c.syzygy_dim << ',' << c.high_adjoint_dim << ',' << r.retries << ',' << format_ms(timing ? r.ms : 0.0) << ','
       << r.curve_hash << ',' << r.method;
    return os.str();
}

inline Json decomposition_to_json(const CBDecomposition& dec)
{
    Json steps = Json::array();
    for (const auto& s : dec.trace)
        steps.push_back(Json{{"h", s.h_before}, {"removed", s.removed}, {"added", s.added}});
    Json basis = Json::array();
    for (std::size_t i = 0; i < 3; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < 3; ++k)
            row.push_back(dec.basis_change(i, k));
        basis.push_back(row);
    }
    return Json{{"extension_modulus", dec.field.modulus()}, {"basis_change", basis},
        {"delta", points_to_json(dec.delta)}, {"sigma_points", points_to_json(dec.sigma_points)},
        {"sigma_size", dec.sigma_points.size()}, {"z", dec.z}, {"y", dec.y}, {"z_size", dec.z.size()},
        {"y_size", dec.y.size()}, {"initial_h", dec.initial_h}, {"exchange", steps},
        {"z_certificate", dec.z_certificate}, {"y_certificate", dec.y_certificate},
        {"f3_certificate", dec.f3_certificate}, {"retries", dec.retries}};
}

inline Json cell_summary_to_json(const CellResult& c, bool timing = true)
{
    return Json{{"d", c.d}, {"n", c.n}, {"pass", c.passed()}, {"trials", c.trials}, {"maximal", c.maximal},
        {"status", static_cast<int>(c.status())}, {"retries", c.retries}, {"ms", timing ? c.ms : 0.0},
        {"error", c.error}};
}

// All trial reports of a cell list, cell order then prime, curve, trial.
inline std::string reports_jsonl(const std::vector<CellResult>& cells, bool timing = true)
{
    std::string out;
    for (const auto& c : cells)
        for (const auto& run : c.runs)
            for (const auto& r : run.reports)
                out += report_to_json(r, timing).dump() + '\n';
    return out;
}

} // namespace ivhs

#endif
