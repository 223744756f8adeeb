#include "obp/harness.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

using namespace obp;

namespace {

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("obp_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream(path, std::ios::binary) << text;
}

std::string expect_config_error(const std::string& text)
{
    try {
        parse_sequence(text, "seq.txt");
    } catch (const ConfigError& e) {
        return e.what();
    }
    ADD_FAILURE() << "accepted: " << text;
    return {};
}

} // namespace

TEST(SequenceFile, RoundTripsRandomSequences)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        SequenceFile f;
        f.ell = 2 + static_cast<int>(rng() % 4);
        f.k = 1 + static_cast<int>(rng() % 20);
        f.n = f.ell * f.k;
        if (f.n < 2) {
            continue;
        }
        f.requests = random_learning_sequence(f.ell, f.k, f.n, static_cast<int>(rng() % 50), rng());
        EXPECT_EQ(parse_sequence(serialize_sequence(f)), f);
    }
}

TEST(SequenceFile, ToleratesBlankLinesAndCrlf)
{
    const SequenceFile f = parse_sequence("obp 1 k=2 l=2 n=4\r\n\r\n1 0 3\r\n2 1 2\r\n");
    ASSERT_EQ(f.requests.size(), 2u);
    EXPECT_EQ(f.requests[1], (Request{1, 2, 2}));
}

TEST(SequenceFile, DiagnosticsNameFileAndLine)
{
    EXPECT_NE(expect_config_error("").find("missing header"), std::string::npos);
    EXPECT_NE(expect_config_error("obq 1 k=2 l=2 n=4\n").find("seq.txt:1:"), std::string::npos);
    EXPECT_NE(expect_config_error("obp 2 k=2 l=2 n=4\n").find("version"), std::string::npos);
    EXPECT_NE(expect_config_error("obp 1 k=2 l=2 n=9\n").find("seq.txt:1:"), std::string::npos);
    EXPECT_NE(expect_config_error("obp 1 k=2 l=2 n=4\n1 0 1\n3 0 1\n").find("seq.txt:3: expected time 2"),
              std::string::npos);
    EXPECT_NE(expect_config_error("obp 1 k=2 l=2 n=4\n1 0 7\n").find("seq.txt:2:"), std::string::npos);
    EXPECT_NE(expect_config_error("obp 1 k=2 l=2 n=4\n1 2 2\n").find("distinct"), std::string::npos);
    EXPECT_NE(expect_config_error("obp 1 k=2 l=2 n=4\n1 x 2\n").find("seq.txt:2:"), std::string::npos);
    EXPECT_NE(expect_config_error("obp 1 k=2 l=2 n=4\n1 0\n").find("seq.txt:2:"), std::string::npos);
}

TEST(SequenceFile, MissingFile)
{
    EXPECT_THROW(read_sequence_file(temp_path("does_not_exist")), ConfigError);
}

TEST(Learning, RestrictionCheck)
{
    EXPECT_TRUE(learning_restricted({}, 2, 2, 4));
    EXPECT_TRUE(learning_restricted({Request{0, 3, 1}}, 2, 2, 4));
    EXPECT_FALSE(learning_restricted({Request{0, 1, 1}, Request{1, 2, 2}}, 2, 2, 4));
    // Sizes 2,2,2 into two servers of capacity 3 do not pack.
    EXPECT_FALSE(learning_restricted({Request{0, 1, 1}, Request{2, 3, 2}, Request{4, 5, 3}}, 2, 3, 6));
    for (std::uint64_t seed = 1; seed < 30; ++seed) {
        EXPECT_TRUE(learning_restricted(random_learning_sequence(3, 5, 15, 60, seed), 3, 5, 15));
    }
}

TEST(Csv, EmptyIsHeaderOnly)
{
    EXPECT_EQ(emit_csv({}), std::string(kCsvHeader) + "\n");
    EXPECT_TRUE(parse_csv(emit_csv({})).empty());
}

TEST(Csv, HeaderStartsWithTheRequiredColumns)
{
    const std::string h = kCsvHeader;
    EXPECT_EQ(h.rfind("k,ℓ,ε,algorithm,adversary,migration,communication,cost_flow,cost_large,cost_merge,cost_mono,"
                      "cost_schedule,lower_bound,opt_static,opt_dynamic,ratio_vs_dual,ratio_vs_opt",
                      0),
              0u);
}

TEST(Csv, OneRecordRoundTrips)
{
    ExperimentConfig c;
    c.k = 4;
    c.ell = 2;
    c.eps = Rational(1, 4);
    c.adversary = "random:30:7";
    const RunRecord r = run_one(c);
    const std::string text = emit_csv({r});
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
    const auto back = parse_csv(text);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_TRUE(back[0].same_csv_fields(r));
    EXPECT_EQ(emit_csv(back), text);
    ASSERT_TRUE(r.opt_static.has_value());
    ASSERT_TRUE(r.opt_dynamic.has_value());
}

TEST(Csv, SkippedOraclesPrintSkipped)
{
    ExperimentConfig c;
    c.k = 16;
    c.ell = 2;
    c.adversary = "unlimited";
    c.algorithm = "strawman";
    const RunRecord r = run_one(c);
    EXPECT_FALSE(r.opt_dynamic.has_value());
    const std::string row = csv_row(r);
    EXPECT_NE(row.find("skipped"), std::string::npos);
    EXPECT_TRUE(parse_csv(emit_csv({r}))[0].same_csv_fields(r));
}

TEST(Csv, RejectsMalformedRows)
{
    EXPECT_THROW(parse_csv("nope\n"), ConfigError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\n1,2,3\n"), ConfigError);
}

TEST(Config, ValidationNamesTheField)
{
    auto msg = [](ExperimentConfig c) {
        try {
            validate_config(c);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    ExperimentConfig c;
    c.k = 0;
    EXPECT_NE(msg(c).find("field 'k'"), std::string::npos);
    c = {};
    c.algorithm = "magic";
    EXPECT_NE(msg(c).find("field 'algo'"), std::string::npos);
    c = {};
    c.adversary = "nasty";
    EXPECT_NE(msg(c).find("field 'adversary'"), std::string::npos);
    c = {};
    c.eps = Rational(3, 16);
    EXPECT_NE(msg(c).find("field 'eps'"), std::string::npos);
    c = {};
    c.adversary = "random:x:1";
    EXPECT_NE(msg(c).find("field 'adversary'"), std::string::npos);
    EXPECT_EQ(msg(ExperimentConfig{}), "");
}

TEST(Runs, DeterministicAcrossThreadCounts)
{
    GridSpec g;
    g.k = {16, 32};
    g.ell = {2};
    g.eps = {Rational(1, 8)};
    g.algorithms = {"one-eps", "two-eps"};
    g.adversaries = {"one-eps", "unlimited"};
    const auto cells = expand(g);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[1].adversary, "unlimited");
    EXPECT_EQ(cells[2].algorithm, "two-eps");
    EXPECT_EQ(cells[4].k, 32);
    const std::string a = emit_csv(run(cells, 1));
    const std::string b = emit_csv(run(cells, 4));
    EXPECT_EQ(a, b);
}

TEST(Runs, VerifyModeIsClean)
{
    for (const char* algo : {"one-eps", "two-eps", "learn-only"}) {
        ExperimentConfig c;
        c.k = 16;
        c.ell = 2;
        c.algorithm = algo;
        c.verify = true;
        const RunRecord r = run_one(c);
        ASSERT_TRUE(r.invariants_ok.has_value());
        EXPECT_TRUE(*r.invariants_ok) << algo << ": " << (r.failures.empty() ? "" : r.failures.front());
    }
}

TEST(Runs, ReplayFileWithTwoEpsHasNoCommunication)
{
    const std::string path = temp_path("replay.txt");
    write_file(path, "obp 1 k=2 l=2 n=4\n1 0 2\n2 0 2\n3 1 3\n4 1 3\n");
    ExperimentConfig c;
    c.k = 2;
    c.ell = 2;
    c.eps = Rational(1);
    c.algorithm = "two-eps";
    c.adversary = "file:" + path;
    c.verify = true;
    const RunRecord r = run_one(c);
    EXPECT_EQ(r.requests, 4);
    EXPECT_EQ(r.ledger.communication, 0);
    EXPECT_TRUE(r.invariants_ok.value_or(false));
    EXPECT_LE(r.lower_bound, r.opt_dynamic.value());
    c.k = 3;
    EXPECT_THROW(run_one(c), ConfigError);
    std::filesystem::remove(path);
}

TEST(Grid, ParsesAndCountsCells)
{
    const GridSpec g = parse_grid("# grid\nk = 16, 32\nell = 2,4\neps = 1/8\nalgo = one-eps,two-eps\n"
                                  "adversary = one-eps, unlimited , random:40:3\nverify = true\n");
    EXPECT_EQ(expand(g).size(), 2u * 2 * 1 * 2 * 3);
    EXPECT_TRUE(g.verify);
}

TEST(Grid, Diagnostics)
{
    auto msg = [](const std::string& t) {
        try {
            parse_grid(t, "g.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(msg("k 16\n").find("g.cfg:1:"), std::string::npos);
    EXPECT_NE(msg("\nsize = 3\n").find("g.cfg:2: unknown field 'size'"), std::string::npos);
    EXPECT_NE(msg("k = 16,\n").find("empty value"), std::string::npos);
    EXPECT_NE(msg("eps = 1/x\n").find("field 'eps'"), std::string::npos);
    EXPECT_NE(msg("verify = yes\n").find("field 'verify'"), std::string::npos);
    EXPECT_NE(msg("algo = magic\n").find("grid cell 0"), std::string::npos);
}

TEST(Exhaustive, SmallSweepIsClean)
{
    EXPECT_EQ(default_exhaustive_cases().size(), 31u);
    const ExhaustiveSummary s = verify_exhaustive(default_exhaustive_cases(), 3);
    EXPECT_TRUE(s.ok()) << s.failures.front();
    EXPECT_GT(s.sequences, 10000);
    EXPECT_GT(s.pruned, 0);
    EXPECT_GT(s.max_lower_bound, 0);
}

TEST(Cli, EndToEnd)
{
    const char* cli = std::getenv("OBP_CLI");
    if (cli == nullptr) {
        GTEST_SKIP() << "OBP_CLI not set";
    }
    const std::string seq = temp_path("cli_seq.txt");
    const std::string csv1 = temp_path("cli_a.csv");
    const std::string csv2 = temp_path("cli_b.csv");
    const std::string c = cli;
    ASSERT_EQ(std::system((c + " generate --k 16 --ell 2 --adversary one-eps --algo two-eps --out " + seq).c_str()), 0);
    const SequenceFile f = read_sequence_file(seq);
    EXPECT_EQ(f.k, 16);
    EXPECT_FALSE(f.requests.empty());
    for (const std::string& out : {csv1, csv2}) {
        ASSERT_EQ(std::system((c + " run --k 16 --ell 2 --algo two-eps --verify --adversary file:" + seq + " --out " +
                               out)
                                  .c_str()),
                  0);
    }
    std::ifstream a(csv1), b(csv2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(parse_csv(sa.str()).size(), 1u);
    EXPECT_NE(std::system((c + " run --k 0 --out " + csv1 + " 2>/dev/null").c_str()), 0);
    EXPECT_NE(std::system((c + " run --adversary file:/nonexistent --out " + csv1 + " 2>/dev/null").c_str()), 0);
    for (const auto& p : {seq, csv1, csv2}) {
        std::filesystem::remove(p);
    }
}
