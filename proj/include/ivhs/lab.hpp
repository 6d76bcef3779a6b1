#ifndef IVHS_LAB_HPP
#define IVHS_LAB_HPP

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ivhs.hpp"

namespace ivhs {

// Exit-code contract shared by the CLI and the acceptance runner.
enum class Status : int { Ok = 0, Violated = 2, Disagreement = 3, Exhausted = 4, Usage = 64 };

struct PrimeSpec {
    std::optional<u64> fixed; // explicit prime, otherwise sampled
    int count = 3;
    unsigned bits = 62;
};

// Distinct primes of the requested size drawn from the run seed.
inline std::vector<PrimeField> choose_primes(const PrimeSpec& spec, u64 seed)
{
    if (spec.fixed) {
        if (!is_prime(*spec.fixed))
            throw Error(ErrorKind::CompositeModulus, std::to_string(*spec.fixed) + " is not prime");
        return {make_prime_field(*spec.fixed)};
    }
    if (spec.count < 1)
        throw Error(ErrorKind::Unsupported, "prime count must be positive");
    Rng rng(derive_seed(seed, 0x7072696d6573ULL));
    std::vector<PrimeField> out;
    while (out.size() < static_cast<std::size_t>(spec.count)) {
        const u64 p = random_prime(rng, spec.bits);
        bool fresh = true;
        for (const auto& f : out)
            fresh = fresh && f.characteristic() != p;
        if (fresh)
            out.push_back(make_prime_field(p));
    }
    return out;
}

inline u64 cell_seed(u64 seed, int d, int n) { return derive_seed(seed, static_cast<u64>(d), static_cast<u64>(n)); }
inline u64 curve_seed(u64 seed, int d, int n, int k) { return derive_seed(cell_seed(seed, d, n), static_cast<u64>(k)); }
inline u64 sigma_seed(u64 curve_seed) { return derive_seed(curve_seed, 0x7369676d61ULL); }

struct CellConfig {
    int d = 4;
    int n = 0;
    int curves = 1;
    int trials = 1;
    u64 seed = 0;
    GenerateOptions generation;
};

// One curve over one prime with its ledger and trial reports.
struct CurveRun {
    std::size_t prime_index = 0;
    int curve = 0;
    std::optional<NodalCurve> nodal;
    std::optional<CohomologyLedger> ledger;
    std::string failure; // empty when curve, ledger and certificate are fine
    std::vector<VariationReport> reports;
};

struct CellResult {
    int d = 0;
    int n = 0;
    std::vector<CurveRun> runs; // prime-major, then curve index
    std::size_t trials = 0;
    std::size_t maximal = 0;
    bool exhausted = false;
    bool violated = false;
    bool disagreement = false;
    std::string error;
    int retries = 0;
    double ms = 0;

    Status status() const
    {
        if (disagreement)
            return Status::Disagreement;
        if (violated)
            return Status::Violated;
        if (exhausted)
            return Status::Exhausted;
        return Status::Ok;
    }
    bool passed() const { return status() == Status::Ok; }
};

inline CurveRun run_curve(const CellConfig& cfg, const PrimeField& fp, std::size_t prime_index, int k)
{
    CurveRun run;
    run.prime_index = prime_index;
    run.curve = k;
    const u64 cs = curve_seed(cfg.seed, cfg.d, cfg.n, k);
    run.nodal = generate(cfg.d, cfg.n, fp, cs, cfg.generation);
    const NodalCurve& c = *run.nodal;
    if (!c.certificate.passed()) {
        run.failure = "certificate: " + c.certificate.first_failure();
        return run;
    }
    try {
        run.ledger = ledger(c);
    } catch (const Error& e) {
        run.failure = e.what();
    }
    run.reports = generic_maximality(c, cfg.trials, sigma_seed(cs));
    return run;
}

// Generates cfg.curves curves per prime and runs every trial. Verdicts for the
// same (curve, trial) index must agree across primes.
inline CellResult run_cell(const CellConfig& cfg, const std::vector<PrimeField>& primes)
{
    const auto t0 = std::chrono::steady_clock::now();
    CellResult cell;
    cell.d = cfg.d;
    cell.n = cfg.n;
    for (std::size_t pi = 0; pi < primes.size(); ++pi) {
        for (int k = 0; k < cfg.curves; ++k) {
            try {
                cell.runs.push_back(run_curve(cfg, primes[pi], pi, k));
            } catch (const Error& e) {
                cell.exhausted = true;
                if (cell.error.empty())
                    cell.error = e.what();
                CurveRun failed;
                failed.prime_index = pi;
                failed.curve = k;
                failed.failure = e.what();
                cell.runs.push_back(std::move(failed));
            }
        }
    }
    std::map<std::pair<int, int>, std::vector<long long>> verdicts;
    for (const auto& run : cell.runs) {
        if (run.nodal)
            cell.retries += run.nodal->retries;
        if (!run.failure.empty() && run.nodal) {
            cell.violated = true;
            if (cell.error.empty())
                cell.error = run.failure;
        }
        for (const auto& r : run.reports) {
            ++cell.trials;
            if (r.maximal)
                ++cell.maximal;
            else
                cell.violated = true;
            verdicts[{run.curve, r.trial}].push_back(r.variation);
        }
    }
    for (const auto& [key, values] : verdicts)
        for (auto v : values)
            if (v != values.front() || values.size() != primes.size())
                cell.disagreement = true;
    if (cell.disagreement && cell.error.empty())
        cell.error = "verdicts differ across primes";
    cell.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return cell;
}

// Runs cells on up to `jobs` threads; results keep the input order.
inline std::vector<CellResult> run_cells(const std::vector<CellConfig>& cells, const std::vector<PrimeField>& primes,
    unsigned jobs = 1)
{
    std::vector<CellResult> out(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++)
            out[i] = run_cell(cells[i], primes);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
    if (jobs == 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j)
        pool.emplace_back(worker);
    pool.clear();
    return out;
}

// All cells (d, n) with d in [dmin, dmax] and 0 <= n < C(d-1, 2).
inline std::vector<CellConfig> sweep_cells(int dmin, int dmax, int curves, int trials, u64 seed,
    const GenerateOptions& gen = {})
{
    std::vector<CellConfig> out;
    for (int d = dmin; d <= dmax; ++d)
        for (int n = 0; n < binom(d - 1, 2); ++n)
            out.push_back({d, n, curves, trials, seed, gen});
    return out;
}

inline Status combine(Status a, Status b)
{
    auto rank = [](Status s) {
        switch (s) {
        case Status::Ok: return 0;
        case Status::Exhausted: return 1;
        case Status::Violated: return 2;
        case Status::Disagreement: return 3;
        case Status::Usage: return 4;
        }
        return 0;
    };
    return rank(a) >= rank(b) ? a : b;
}

} // namespace ivhs

#endif
