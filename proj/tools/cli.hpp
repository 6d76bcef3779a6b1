#ifndef IVHS_TOOLS_CLI_HPP
#define IVHS_TOOLS_CLI_HPP

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ivhs/io.hpp"

namespace ivhs::cli {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

inline LogLevel log_level_from_env()
{
    const char* v = std::getenv("IVHS_LOG");
    if (!v)
        return LogLevel::Error;
    const std::string s(v);
    if (s == "debug")
        return LogLevel::Debug;
    if (s == "info")
        return LogLevel::Info;
    return LogLevel::Error;
}

struct RunConfig {
    std::string subcommand;
    int degree = 0;
    std::optional<int> nodes;
    int degree_min = 4;
    int degree_max = 7;
    int trials = 10;
    int curves = 1;
    u64 seed = 1;
    std::string prime = "auto";
    int primes = 3;
    unsigned prime_bits = 62;
    unsigned jobs = 1;
    int max_retries = 50;
    std::string out;
    std::string format = "json";
    bool timing = true;
    std::string curve_file;
    std::string save_curve;
    LogLevel log = LogLevel::Error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Runner {
public:
    Runner(RunConfig cfg, std::ostream& out, std::ostream& err) : cfg_(std::move(cfg)), stdout_(out), err_(err) {}

    int run()
    {
        try {
            if (!cfg_.out.empty()) {
                file_.open(cfg_.out, std::ios::binary);
                if (!file_)
                    throw UsageError("cannot open " + cfg_.out);
            }
            Status s = Status::Ok;
            if (cfg_.subcommand == "verify-nodal")
                s = verify_nodal();
            else if (cfg_.subcommand == "construct-sigma")
                s = construct_sigma();
            else if (cfg_.subcommand == "sweep")
                s = sweep();
            else if (cfg_.subcommand == "identities")
                s = identities();
            else if (cfg_.subcommand == "fermat-min")
                s = fermat_min();
            return static_cast<int>(s);
        } catch (const UsageError& e) {
            error_line("Usage", e.what());
            return static_cast<int>(Status::Usage);
        } catch (const Error& e) {
            error_line(std::string(to_string(e.kind())), e.what());
            return static_cast<int>(Status::Exhausted);
        }
    }

private:
    std::ostream& out() { return cfg_.out.empty() ? stdout_ : file_; }

    void log(LogLevel level, const std::string& msg)
    {
        if (level <= cfg_.log)
            err_ << "[ivhs] " << msg << '\n';
    }

    void error_line(const std::string& kind, const std::string& msg)
    {
        err_ << Json{{"error", kind}, {"message", msg}, {"subcommand", cfg_.subcommand}}.dump() << '\n';
    }

    void emit(const VariationReport& r)
    {
        if (cfg_.format == "csv") {
            if (!header_written_)
                out() << csv_header() << '\n';
            header_written_ = true;
            out() << report_to_csv(r, cfg_.timing) << '\n';
        } else {
            out() << report_to_json(r, cfg_.timing).dump() << '\n';
        }
    }

    std::vector<PrimeField> primes()
    {
        PrimeSpec spec;
        if (cfg_.prime != "auto") {
            try {
                std::size_t used = 0;
                spec.fixed = std::stoull(cfg_.prime, &used);
                if (used != cfg_.prime.size())
                    throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw UsageError("--prime must be an integer or auto");
            }
            if (!is_prime(*spec.fixed))
                throw UsageError("--prime " + cfg_.prime + " is not prime");
        }
        if (cfg_.primes < 1)
            throw UsageError("--primes must be at least 1");
        if (cfg_.prime_bits < 8 || cfg_.prime_bits > 62)
            throw UsageError("--prime-bits must lie in [8, 62]");
        spec.count = cfg_.primes;
        spec.bits = cfg_.prime_bits;
        return choose_primes(spec, cfg_.seed);
    }

    void check_cell(int d, std::optional<int> n, const std::vector<PrimeField>& ps)
    {
        if (d < 4)
            throw UsageError("--degree must be at least 4");
        if (!n)
            throw UsageError("--nodes is required");
        if (*n < 0 || *n >= binom(d - 1, 2))
            throw UsageError("--nodes must lie in [0, " + std::to_string(binom(d - 1, 2) - 1) + "] for degree " +
                std::to_string(d));
        for (const auto& f : ps)
            if (f.characteristic() <= static_cast<u64>(3 * d))
                throw UsageError("prime " + std::to_string(f.characteristic()) + " is too small for degree " +
                    std::to_string(d));
    }

    void check_trials()
    {
        if (cfg_.trials < 1)
            throw UsageError("--trials must be at least 1");
        if (cfg_.curves < 1)
            throw UsageError("--curves must be at least 1");
    }

    CellConfig cell_config(int d, int n) const
    {
        CellConfig c;
        c.d = d;
        c.n = n;
        c.curves = cfg_.curves;
        c.trials = cfg_.trials;
        c.seed = cfg_.seed;
        c.generation.max_retries = cfg_.max_retries;
        return c;
    }

    void save_curves(const std::vector<const NodalCurve*>& curves)
    {
        if (cfg_.save_curve.empty())
            return;
        std::ofstream f(cfg_.save_curve, std::ios::binary);
        if (!f)
            throw UsageError("cannot open " + cfg_.save_curve);
        Json arr = Json::array();
        for (const auto* c : curves)
            arr.push_back(curve_to_json(*c));
        f << (arr.size() == 1 ? arr[0] : arr).dump() << '\n';
    }

    std::vector<NodalCurve> load_curves()
    {
        std::ifstream f(cfg_.curve_file, std::ios::binary);
        if (!f)
            throw UsageError("cannot open " + cfg_.curve_file);
        Json j;
        try {
            j = Json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("curve file: ") + e.what());
        }
        std::vector<NodalCurve> out;
        try {
            if (j.is_array())
                for (const auto& r : j)
                    out.push_back(curve_from_json(r));
            else
                out.push_back(curve_from_json(j));
        } catch (const Error& e) {
            throw UsageError(std::string("curve file: ") + e.what());
        }
        return out;
    }

    Status verify_loaded()
    {
        check_trials();
        Status s = Status::Ok;
        for (const auto& c : load_curves()) {
            if (!c.certificate.passed()) {
                error_line("Certificate", "loaded curve fails " + c.certificate.first_failure());
                s = combine(s, Status::Violated);
                continue;
            }
            try {
                ledger(c);
            } catch (const Error& e) {
                error_line(std::string(to_string(e.kind())), e.what());
                s = combine(s, Status::Violated);
            }
            for (const auto& r : generic_maximality(c, cfg_.trials, sigma_seed(c.seed))) {
                emit(r);
                if (!r.maximal)
                    s = combine(s, Status::Violated);
            }
        }
        return s;
    }

    Status verify_nodal()
    {
        if (!cfg_.curve_file.empty())
            return verify_loaded();
        const auto ps = primes();
        check_cell(cfg_.degree, cfg_.nodes, ps);
        check_trials();
        const auto cell = run_cell(cell_config(cfg_.degree, *cfg_.nodes), ps);
        std::vector<const NodalCurve*> curves;
        for (const auto& run : cell.runs) {
            if (run.nodal)
                curves.push_back(&*run.nodal);
            for (const auto& r : run.reports)
                emit(r);
        }
        save_curves(curves);
        if (!cell.passed())
            error_line(cell.disagreement ? "PrimeDisagreement" : "CellFailed", cell.error);
        log(LogLevel::Info, "verify-nodal d=" + std::to_string(cell.d) + " n=" + std::to_string(cell.n) + " maximal " +
                std::to_string(cell.maximal) + "/" + std::to_string(cell.trials));
        return cell.status();
    }

    Status construct_sigma()
    {
        const auto ps = primes();
        check_cell(cfg_.degree, cfg_.nodes, ps);
        Status s = Status::Ok;
        std::vector<long long> variations;
        std::vector<NodalCurve> curves;
        for (const auto& fp : ps) {
            const u64 cs = curve_seed(cfg_.seed, cfg_.degree, *cfg_.nodes, 0);
            GenerateOptions gen;
            gen.max_retries = cfg_.max_retries;
            NodalCurve c = generate(cfg_.degree, *cfg_.nodes, fp, cs, gen);
            DecomposeOptions opt;
            opt.max_retries = std::max(cfg_.max_retries, 1);
            const u64 ds = derive_seed(cs, 0x6362ULL);
            CBDecomposition dec = cb_decompose(c, ds, opt);
            const auto sigma = sigma_from_decomposition(c, dec, derive_seed(ds, 1));
            auto report = variation_rank(c, sigma);
            report.sigma_seed = ds;
            const bool certs = dec.z_certificate && dec.y_certificate && dec.f3_certificate && c.certificate.passed();
            if (!report.maximal || !certs || dec.trace.size() > dec.initial_h)
                s = combine(s, Status::Violated);
            variations.push_back(report.variation);
            if (cfg_.format == "csv") {
                emit(report);
            } else {
                Json j{{"report", report_to_json(report, cfg_.timing)}, {"decomposition", decomposition_to_json(dec)},
                    {"sigma", form_to_json(sigma)}, {"curve", curve_to_json(c)}};
                out() << j.dump() << '\n';
            }
            curves.push_back(std::move(c));
        }
        std::vector<const NodalCurve*> ptrs;
        for (const auto& c : curves)
            ptrs.push_back(&c);
        save_curves(ptrs);
        for (auto v : variations)
            if (v != variations.front())
                s = combine(s, Status::Disagreement);
        return s;
    }

    Status sweep()
    {
        if (cfg_.degree_min < 4)
            throw UsageError("--degree-min must be at least 4");
        if (cfg_.degree_max < cfg_.degree_min)
            throw UsageError("empty degree range");
        check_trials();
        const auto ps = primes();
        for (int d = cfg_.degree_min; d <= cfg_.degree_max; ++d)
            check_cell(d, 0, ps);
        auto cells = sweep_cells(cfg_.degree_min, cfg_.degree_max, cfg_.curves, cfg_.trials, cfg_.seed);
        for (auto& c : cells)
            c.generation.max_retries = cfg_.max_retries;
        const unsigned jobs = cfg_.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg_.jobs;
        log(LogLevel::Info, "sweep: " + std::to_string(cells.size()) + " cells on " + std::to_string(jobs) + " jobs");
        const auto results = run_cells(cells, ps, jobs);
        Status s = Status::Ok;
        err_ << std::left << std::setw(4) << "d" << std::setw(4) << "n" << std::setw(6) << "pass" << std::setw(10)
             << "maximal" << std::setw(8) << "retries" << "ms\n";
        for (const auto& c : results) {
            for (const auto& run : c.runs)
                for (const auto& r : run.reports)
                    emit(r);
            s = combine(s, c.status());
            err_ << std::left << std::setw(4) << c.d << std::setw(4) << c.n << std::setw(6)
                 << (c.passed() ? "yes" : "NO") << std::setw(10)
                 << (std::to_string(c.maximal) + "/" + std::to_string(c.trials)) << std::setw(8) << c.retries
                 << format_ms(cfg_.timing ? c.ms : 0.0) << '\n';
            if (!c.passed())
                error_line("CellFailed", "d=" + std::to_string(c.d) + " n=" + std::to_string(c.n) + ": " + c.error);
        }
        return s;
    }

    void identity_line(const std::string& check, int d, bool ok, Json detail, Status& s, std::string& first)
    {
        Json j{{"check", check}, {"d", d}, {"ok", ok}};
        j["detail"] = std::move(detail);
        out() << j.dump() << '\n';
        if (!ok) {
            s = combine(s, Status::Violated);
            if (first.empty())
                first = check + " at d=" + std::to_string(d);
        }
    }

    Status identities()
    {
        if (cfg_.degree_min < 4)
            throw UsageError("--degree-min must be at least 4");
        if (cfg_.degree_max < cfg_.degree_min)
            throw UsageError("empty degree range");
        const auto ps = primes();
        const PrimeField& fp = ps.front();
        for (int d = cfg_.degree_min; d <= cfg_.degree_max; ++d)
            check_cell(d, 0, {fp});
        Status s = Status::Ok;
        std::string first;
        for (int d = cfg_.degree_min; d <= cfg_.degree_max; ++d) {
            const long long lhs = binom(d - 1, 2) + 3 * binom(d, 2);
            identity_line("arithmetic", d, lhs == binom(2 * d - 1, 2), Json{{"lhs", lhs}, {"rhs", binom(2 * d - 1, 2)}},
                s, first);
            for (int n = 0; n < binom(d - 1, 2); ++n) {
                GenerateOptions gen;
                gen.max_retries = cfg_.max_retries;
                const NodalCurve c = generate(d, n, fp, curve_seed(cfg_.seed, d, n, 0), gen);
                Json detail{{"n", n}};
                bool ok = c.certificate.passed();
                try {
                    const auto l = ledger(c);
                    detail["ledger"] = ledger_to_json(l);
                    ok = ok && static_cast<long long>(l.h0_adjoint_high) == (d - 1LL) * (2 * d - 1) - n;
                } catch (const Error& e) {
                    ok = false;
                    detail["error"] = e.what();
                }
                identity_line("ledger", d, ok, detail, s, first);
            }
            const NodalCurve smooth = generate(d, 0, fp, curve_seed(cfg_.seed, d, 0, 1));
            const auto nr = noether_rank(smooth.F);
            identity_line("noether", d, nr.surjective && static_cast<long long>(nr.target) == 3 * smooth.g - 3,
                Json{{"rank", nr.rank}, {"target", nr.target}}, s, first);
            if (d >= 5) {
                const auto w = fermat_min_witness(d, fp, derive_seed(cfg_.seed, 0x66ULL, static_cast<u64>(d)));
                identity_line("fermat_witness", d, w.rank == static_cast<std::size_t>(d - 3),
                    Json{{"v", form_to_json(w.v)}, {"rank", w.rank}, {"expected", d - 3}}, s, first);
            }
        }
        if (s != Status::Ok)
            error_line("IdentityFailed", first);
        return s;
    }

    Status fermat_min()
    {
        if (cfg_.degree < 5)
            throw UsageError("--degree must be at least 5 for fermat-min");
        if (cfg_.trials < 0)
            throw UsageError("--trials must be non-negative");
        const auto ps = primes();
        Status s = Status::Ok;
        std::vector<std::size_t> witness_ranks;
        for (const auto& fp : ps) {
            if (fp.characteristic() <= static_cast<u64>(3 * cfg_.degree))
                throw UsageError("prime too small for degree");
            const int d = cfg_.degree;
            const auto w = fermat_min_witness(d, fp, derive_seed(cfg_.seed, 0x66ULL, static_cast<u64>(d)));
            const JacobianRing ring(fermat_form(fp, d));
            Rng rng(derive_seed(cfg_.seed, 0x72ULL, static_cast<u64>(d)));
            std::size_t min_random = monomial_count(d);
            std::size_t below = 0;
            for (int t = 0; t < cfg_.trials; ++t) {
                const auto r = ring.mu_rank(random_form(fp, d, rng));
                min_random = std::min(min_random, r);
                below += r < static_cast<std::size_t>(d - 3);
            }
            const bool ok = w.rank == static_cast<std::size_t>(d - 3) && below == 0;
            if (!ok)
                s = combine(s, Status::Violated);
            witness_ranks.push_back(w.rank);
            Json j{{"d", d}, {"prime", fp.characteristic()}, {"witness", form_to_json(w.v)}, {"rank", w.rank},
                {"expected", d - 3}, {"random_trials", cfg_.trials},
                {"random_min_rank", cfg_.trials > 0 ? Json(min_random) : Json(nullptr)}, {"random_below_bound", below},
                {"lower_bound", "sampled evidence only"}, {"ok", ok}};
            out() << j.dump() << '\n';
        }
        for (auto r : witness_ranks)
            if (r != witness_ranks.front())
                s = combine(s, Status::Disagreement);
        return s;
    }

    RunConfig cfg_;
    std::ostream& stdout_;
    std::ostream& err_;
    std::ofstream file_;
    bool header_written_ = false;
};

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    RunConfig cfg;
    cfg.log = log_level_from_env();
    CLI::App app{"Verification laboratory for the infinitesimal variation of nodal plane curves", "ivhs_lab"};
    app.require_subcommand(1);
    bool no_timing = false;
    int nodes = -1;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "Run seed");
        sub->add_option("--prime", cfg.prime, "Prime: an integer or auto");
        sub->add_option("--primes", cfg.primes, "Number of primes for consensus when --prime auto");
        sub->add_option("--prime-bits", cfg.prime_bits, "Bit size of sampled primes");
        sub->add_option("--max-retries", cfg.max_retries, "Retry budget for randomized constructions");
        sub->add_option("--out", cfg.out, "Output file (default stdout)");
        sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--no-timing", no_timing, "Write ms = 0 so reports are byte-reproducible");
    };

    auto* verify = app.add_subcommand("verify-nodal", "Generic maximality for random sigma on generated curves");
    common(verify);
    verify->add_option("--degree", cfg.degree, "Curve degree");
    verify->add_option("--nodes", nodes, "Number of nodes");
    verify->add_option("--trials", cfg.trials, "Random sigma per curve");
    verify->add_option("--curves", cfg.curves, "Curves per prime");
    verify->add_option("--curve", cfg.curve_file, "Verify curves read from a file instead of generating");
    verify->add_option("--save-curve", cfg.save_curve, "Write the generated curves to a file");

    auto* construct = app.add_subcommand("construct-sigma", "Decomposition-based sigma and its variation rank");
    common(construct);
    construct->add_option("--degree", cfg.degree, "Curve degree")->required();
    construct->add_option("--nodes", nodes, "Number of nodes")->required();
    construct->add_option("--save-curve", cfg.save_curve, "Write the generated curves to a file");

    auto* sweep = app.add_subcommand("sweep", "verify-nodal over every (d, n) cell in a degree range");
    common(sweep);
    sweep->add_option("--degree-min", cfg.degree_min, "Smallest degree");
    sweep->add_option("--degree-max", cfg.degree_max, "Largest degree");
    sweep->add_option("--trials", cfg.trials, "Random sigma per curve")->default_val(5);
    sweep->add_option("--curves", cfg.curves, "Curves per cell and prime");
    sweep->add_option("--jobs", cfg.jobs, "Worker threads (0 = all cores)");

    auto* ids = app.add_subcommand("identities", "Ledger, Noether, Fermat and arithmetic identities");
    common(ids);
    ids->add_option("--degree-min", cfg.degree_min, "Smallest degree");
    ids->add_option("--degree-max", cfg.degree_max, "Largest degree");

    auto* fermat = app.add_subcommand("fermat-min", "Minimal-variation witness on the Fermat curve");
    common(fermat);
    fermat->add_option("--degree", cfg.degree, "Curve degree")->required();
    fermat->add_option("--trials", cfg.trials, "Random sigma sampled as lower-bound evidence")->default_val(100);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << Json{{"error", "Usage"}, {"message", e.what()}}.dump() << '\n';
        return static_cast<int>(Status::Usage);
    }
    for (auto* sub : app.get_subcommands())
        cfg.subcommand = sub->get_name();
    if (nodes >= 0 || (cfg.subcommand == "verify-nodal" && verify->count("--nodes")))
        cfg.nodes = nodes;
    if (cfg.subcommand == "sweep" && !sweep->count("--trials"))
        cfg.trials = 5;
    if (cfg.subcommand == "fermat-min" && !fermat->count("--trials"))
        cfg.trials = 100;
    cfg.timing = !no_timing;
    if (cfg.subcommand == "verify-nodal" && cfg.curve_file.empty() && !verify->count("--degree")) {
        err << Json{{"error", "Usage"}, {"message", "--degree is required"}}.dump() << '\n';
        return static_cast<int>(Status::Usage);
    }
    return Runner(cfg, out, err).run();
}

} // namespace ivhs::cli

#endif
