#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace ivhs;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "ivhs_lab");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<Json> lines(const std::string& s)
{
    std::vector<Json> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);)
        out.push_back(Json::parse(line));
    return out;
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

} // namespace

TEST(Cli, VerifyNodalConsensusRun)
{
    auto r = run({"verify-nodal", "--degree", "5", "--nodes", "3", "--trials", "10", "--seed", "42", "--prime", "auto",
        "--primes", "3"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto recs = lines(r.out);
    ASSERT_EQ(recs.size(), 30u);
    std::set<u64> primes;
    for (const auto& j : recs) {
        EXPECT_TRUE(j["maximal"].get<bool>());
        EXPECT_EQ(j["variation"], 3);
        EXPECT_EQ(j["g"], 3);
        EXPECT_EQ(j["sigma_kind"], "random");
        EXPECT_TRUE(j["certificates"]["passed"].get<bool>());
        EXPECT_TRUE(j.contains("seed") && j.contains("curve_hash") && j.contains("retries") && j.contains("ms"));
        primes.insert(j["prime"].get<u64>());
    }
    EXPECT_EQ(primes.size(), 3u);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({"verify-nodal", "--degree", "4", "--nodes", "7"}).code, 64);
    EXPECT_EQ(run({"verify-nodal", "--degree", "3", "--nodes", "0"}).code, 64);
    EXPECT_EQ(run({"verify-nodal", "--degree", "5"}).code, 64);
    EXPECT_EQ(run({"verify-nodal", "--degree", "5", "--nodes", "1", "--trials", "0"}).code, 64);
    EXPECT_EQ(run({"verify-nodal", "--degree", "5", "--nodes", "1", "--prime", "100"}).code, 64);
    EXPECT_EQ(run({"verify-nodal", "--degree", "5", "--nodes", "1", "--prime", "7"}).code, 64);
    EXPECT_EQ(run({"verify-nodal", "--degree", "5", "--nodes", "1", "--format", "xml"}).code, 64);
    EXPECT_EQ(run({"construct-sigma", "--degree", "4"}).code, 64);
    EXPECT_EQ(run({"sweep", "--degree-min", "6", "--degree-max", "5"}).code, 64);
    EXPECT_EQ(run({"bogus"}).code, 64);
    EXPECT_EQ(run({}).code, 64);
    auto r = run({"verify-nodal", "--degree", "4", "--nodes", "7"});
    EXPECT_NE(r.err.find("\"error\":\"Usage\""), std::string::npos);
}

TEST(Cli, SmoothCaseThroughNodalPipeline)
{
    auto r = run({"verify-nodal", "--degree", "4", "--nodes", "0", "--trials", "3", "--primes", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 6u);
}

TEST(Cli, ConstructSigma)
{
    auto r = run({"construct-sigma", "--degree", "4", "--nodes", "2", "--seed", "7"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto recs = lines(r.out);
    ASSERT_EQ(recs.size(), 3u);
    for (const auto& j : recs) {
        EXPECT_EQ(j["decomposition"]["sigma_size"], 7);
        EXPECT_EQ(j["decomposition"]["z_size"], 4);
        EXPECT_EQ(j["decomposition"]["y_size"], 3);
        EXPECT_TRUE(j["decomposition"]["z_certificate"].get<bool>());
        EXPECT_TRUE(j["decomposition"]["y_certificate"].get<bool>());
        EXPECT_EQ(j["report"]["sigma_kind"], "constructed");
        EXPECT_TRUE(j["report"]["maximal"].get<bool>());
    }
    EXPECT_EQ(run({"construct-sigma", "--degree", "5", "--nodes", "3", "--primes", "1"}).code, 0);
}

TEST(Cli, SweepCellCounts)
{
    auto r = run({"sweep", "--degree-min", "4", "--degree-max", "4", "--trials", "1", "--primes", "1"});
    EXPECT_EQ(r.code, 0);
    std::set<int> cells;
    for (const auto& j : lines(r.out))
        cells.insert(j["n"].get<int>());
    EXPECT_EQ(cells, (std::set<int>{0, 1, 2}));

    r = run({"sweep", "--degree-min", "4", "--degree-max", "6", "--trials", "1", "--primes", "1"});
    EXPECT_EQ(r.code, 0);
    std::set<std::pair<int, int>> grid;
    for (const auto& j : lines(r.out))
        grid.insert({j["d"].get<int>(), j["n"].get<int>()});
    EXPECT_EQ(grid.size(), 19u);
}

TEST(Cli, OutputIsReproducibleAcrossJobs)
{
    const std::vector<std::string> base{"sweep", "--degree-min", "4", "--degree-max", "5", "--trials", "2", "--primes",
        "2", "--no-timing", "--seed", "9"};
    auto a = base, b = base;
    a.insert(a.end(), {"--jobs", "1"});
    b.insert(b.end(), {"--jobs", "4"});
    const auto ra = run(a), rb = run(b);
    EXPECT_EQ(ra.code, 0);
    EXPECT_EQ(ra.out, rb.out);
    for (const auto& j : lines(ra.out))
        EXPECT_EQ(j["ms"], 0.0);
}

TEST(Cli, CsvMirrorsJson)
{
    auto j = run({"verify-nodal", "--degree", "5", "--nodes", "2", "--trials", "2", "--primes", "1", "--no-timing"});
    auto c = run({"verify-nodal", "--degree", "5", "--nodes", "2", "--trials", "2", "--primes", "1", "--no-timing",
        "--format", "csv"});
    EXPECT_EQ(c.code, 0);
    std::istringstream is(c.out);
    std::string header, row;
    std::getline(is, header);
    EXPECT_EQ(header, csv_header());
    const auto recs = lines(j.out);
    for (const auto& rec : recs) {
        ASSERT_TRUE(std::getline(is, row));
        EXPECT_EQ(row.rfind(std::to_string(rec["d"].get<int>()) + "," + std::to_string(rec["n"].get<int>()) + "," +
                          std::to_string(rec["prime"].get<u64>()) + "," + std::to_string(rec["seed"].get<u64>()),
                      0),
            0u);
    }
}

TEST(Cli, SavedCurveRoundTrips)
{
    const auto path = temp_path("ivhs_curve.json");
    auto r = run({"verify-nodal", "--degree", "6", "--nodes", "9", "--trials", "2", "--primes", "1", "--seed", "3",
        "--no-timing", "--save-curve", path});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(path);
    const auto rec = Json::parse(f);
    EXPECT_EQ(rec["degree"], 6);
    EXPECT_EQ(rec["n"], 9);
    EXPECT_TRUE(rec.contains("extension_modulus"));
    EXPECT_EQ(rec["nodes"].size(), 9u);
    auto again = run({"verify-nodal", "--curve", path, "--trials", "2", "--no-timing"});
    EXPECT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(again.out, r.out);
}

TEST(Cli, CorruptCurveFileIsRejected)
{
    const auto path = temp_path("ivhs_bad_curve.json");
    std::ofstream(path) << R"({"prime": 1000003, "degree": 4, "n": 1, "coefficients": [[4,0,0,1]], "nodes": []})";
    EXPECT_EQ(run({"verify-nodal", "--curve", path}).code, 64);
    std::ofstream(path) << "not json";
    EXPECT_EQ(run({"verify-nodal", "--curve", path}).code, 64);
}

TEST(Cli, IdentitiesAndFermat)
{
    auto r = run({"identities", "--degree-min", "4", "--degree-max", "5", "--primes", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    bool saw_ledger = false, saw_witness = false;
    for (const auto& j : lines(r.out)) {
        EXPECT_TRUE(j["ok"].get<bool>()) << j.dump();
        if (j["check"] == "ledger" && j["d"] == 5 && j["detail"]["n"] == 3) {
            saw_ledger = true;
            const auto& l = j["detail"]["ledger"];
            EXPECT_EQ(l["h0_adjoint"], 3);
            EXPECT_EQ(l["h0_adjoint_high"], 33);
            EXPECT_EQ(l["jacobian_dim"], 30);
            EXPECT_EQ(l["syzygy_defect"], 0);
            EXPECT_EQ(l["h1"], 3);
        }
        if (j["check"] == "fermat_witness" && j["d"] == 5) {
            saw_witness = true;
            EXPECT_EQ(j["detail"]["rank"], 2);
        }
    }
    EXPECT_TRUE(saw_ledger && saw_witness);

    auto f = run({"fermat-min", "--degree", "5", "--primes", "1", "--trials", "20"});
    EXPECT_EQ(f.code, 0);
    const auto recs = lines(f.out);
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0]["rank"], 2);
    EXPECT_EQ(recs[0]["witness"], Json::parse("[[3,2,0,1]]"));
    EXPECT_EQ(run({"fermat-min", "--degree", "4"}).code, 64);
}

TEST(Io, FormRoundTripOmitsZeros)
{
    auto f = make_prime_field(1000003);
    Form<PrimeField> g(f, 3);
    g.set_coeff({3, 0, 0}, 5);
    g.set_coeff({0, 1, 2}, 1000002);
    const auto j = form_to_json(g);
    EXPECT_EQ(j, Json::parse("[[3,0,0,5],[0,1,2,1000002]]"));
    EXPECT_EQ(form_from_json(f, 3, j), g);
    EXPECT_THROW(form_from_json(f, 3, Json::parse("[[2,0,0,1]]")), Error);
    EXPECT_THROW(form_from_json(f, 3, Json::parse("[[3,0,0,1000003]]")), Error);
}

TEST(Io, CurveRoundTripWithExtensionNodes)
{
    Rng rng(1);
    auto f = make_prime_field(random_prime(rng, 62));
    const auto c = generate(6, 9, f, 2);
    ASSERT_GT(c.node_field().degree(), 1u);
    const auto j = curve_to_json(c);
    const auto back = curve_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back.F, c.F);
    EXPECT_EQ(back.node_field(), c.node_field());
    ASSERT_EQ(back.nodes.size(), c.nodes.size());
    for (std::size_t i = 0; i < c.nodes.size(); ++i)
        EXPECT_TRUE(back.nodes.contains(c.nodes[i]));
    EXPECT_TRUE(back.certificate.passed());
    EXPECT_EQ(curve_hash(back.F), curve_hash(c.F));
}

TEST(Io, TamperedCurveFailsCertification)
{
    Rng rng(3);
    auto f = make_prime_field(random_prime(rng, 62));
    auto j = curve_to_json(generate(5, 2, f, 4));
    auto& coeff = j["coefficients"][0][3];
    coeff = (coeff.get<u64>() + 1) % f.characteristic();
    EXPECT_FALSE(curve_from_json(j).certificate.passed());
}
