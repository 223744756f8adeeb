#pragma once

#include "obp/adversaries.hpp"
#include "obp/algorithms.hpp"
#include "obp/errors.hpp"
#include "obp/model.hpp"
#include "obp/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace obp {

// ---------------------------------------------------------------------------
// Sequence files

struct SequenceFile {
    int version = 1;
    int k = 0;
    int ell = 0;
    int n = 0;
    RequestSequence requests;

    friend bool operator==(const SequenceFile&, const SequenceFile&) = default;
};

inline std::string serialize_sequence(const SequenceFile& f)
{
    std::string out = "obp " + std::to_string(f.version) + " k=" + std::to_string(f.k) + " l=" + std::to_string(f.ell) +
                      " n=" + std::to_string(f.n) + "\n";
    for (const Request& r : f.requests) {
        out += std::to_string(r.time) + " " + std::to_string(r.a) + " " + std::to_string(r.b) + "\n";
    }
    return out;
}

namespace detail {

inline int parse_int(std::string_view s, const std::string& where)
{
    if (s.empty()) {
        throw ConfigError(where + ": expected an integer");
    }
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(std::string(s), &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + std::string(s) + "'");
    }
    if (pos != s.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError(where + ": expected an integer, got '" + std::string(s) + "'");
    }
    return static_cast<int>(v);
}

inline std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) {
        out.push_back(tok);
    }
    return out;
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace detail

/// Errors carry `<source>:<line>:` prefixes.
inline SequenceFile parse_sequence(std::string_view text, const std::string& source = "<input>")
{
    SequenceFile f;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto tok = detail::split_ws(line);
        if (tok.empty()) {
            continue;
        }
        if (!header) {
            if (tok.size() != 5 || tok[0] != "obp") {
                throw ConfigError(where + ": expected header 'obp 1 k=<int> l=<int> n=<int>'");
            }
            f.version = detail::parse_int(tok[1], where);
            if (f.version != 1) {
                throw ConfigError(where + ": unsupported format version " + tok[1]);
            }
            const char* keys[] = {"k=", "l=", "n="};
            int* fields[] = {&f.k, &f.ell, &f.n};
            for (int i = 0; i < 3; ++i) {
                if (tok[2 + i].rfind(keys[i], 0) != 0) {
                    throw ConfigError(where + ": expected field '" + std::string(keys[i]) + "<int>'");
                }
                *fields[i] = detail::parse_int(std::string_view(tok[2 + i]).substr(2), where);
            }
            try {
                ProblemSpec{f.ell, f.k, f.n, Rational(0), Rational(1)}.validate();
            } catch (const InstanceError& e) {
                throw ConfigError(where + ": " + e.what());
            }
            header = true;
            continue;
        }
        if (tok.size() != 3) {
            throw ConfigError(where + ": expected '<t> <a> <b>'");
        }
        Request r{detail::parse_int(tok[1], where), detail::parse_int(tok[2], where), detail::parse_int(tok[0], where)};
        if (r.time != static_cast<int>(f.requests.size()) + 1) {
            throw ConfigError(where + ": expected time " + std::to_string(f.requests.size() + 1));
        }
        if (r.a < 0 || r.a >= f.n || r.b < 0 || r.b >= f.n || r.a == r.b) {
            throw ConfigError(where + ": endpoints must be distinct processes in [0, n)");
        }
        f.requests.push_back(r);
    }
    if (!header) {
        throw ConfigError(source + ": missing header");
    }
    return f;
}

inline SequenceFile read_sequence_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_sequence(ss.str(), path);
}

/// Random input where every demand component stays inside one of ell groups
/// of at most k processes, so a colocating k-capacity placement exists.
inline RequestSequence random_learning_sequence(int ell, int k, int n, int length, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<ProcessId> perm(n);
    for (int i = 0; i < n; ++i) {
        perm[i] = i;
    }
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<ProcessId>> groups(ell);
    for (int i = 0; i < n; ++i) {
        groups[i / k].push_back(perm[i]);
    }
    std::vector<int> usable;
    for (int g = 0; g < ell; ++g) {
        if (groups[g].size() >= 2) {
            usable.push_back(g);
        }
    }
    RequestSequence sigma;
    if (usable.empty()) {
        return sigma;
    }
    for (int t = 1; t <= length; ++t) {
        const auto& grp = groups[usable[rng() % usable.size()]];
        const std::size_t i = rng() % grp.size();
        std::size_t j = rng() % (grp.size() - 1);
        j += j >= i;
        sigma.push_back(Request{grp[i], grp[j], t});
    }
    return sigma;
}

/// True iff the final demand components can be packed whole into ell servers
/// of capacity k. Exact backtracking over the non-singleton components.
inline bool learning_restricted(const RequestSequence& sigma, int ell, int k, int n)
{
    DemandGraph g(n);
    for (const Request& r : sigma) {
        g.record_request(r);
    }
    // Singletons fit anywhere once n <= ell*k.
    std::vector<int> sizes;
    for (int root : g.roots()) {
        if (g.size(root) > 1) {
            sizes.push_back(g.size(root));
        }
    }
    std::sort(sizes.rbegin(), sizes.rend());
    std::vector<int> load(ell, 0);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == sizes.size()) {
            return true;
        }
        for (int s = 0; s < ell; ++s) {
            if (load[s] + sizes[i] > k) {
                continue;
            }
            // Empty servers are interchangeable.
            if (load[s] == 0 && s > 0 && load[s - 1] == 0) {
                break;
            }
            load[s] += sizes[i];
            if (self(self, i + 1)) {
                return true;
            }
            load[s] -= sizes[i];
        }
        return false;
    };
    return n <= ell * k && rec(rec, 0);
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
    int k = 16;
    int ell = 2;
    Rational eps{1, 8};
    std::string algorithm = "two-eps";
    /// unlimited | one-eps | file:<path> | random:<length>:<seed>
    std::string adversary = "one-eps";
    bool verify = false;
    /// Exact oracles are attempted when ell^n * |sigma| fits this budget.
    std::int64_t oracle_budget = 2'000'000;
    std::int64_t max_requests = 2'000'000;
};

struct RunRecord {
    int k = 0;
    int ell = 0;
    int n = 0;
    Rational eps;
    std::string algorithm;
    std::string adversary;
    std::int64_t requests = 0;
    CostLedger ledger;
    std::int64_t lower_bound = 0;
    std::optional<std::int64_t> opt_static;
    std::optional<std::int64_t> opt_dynamic;
    std::optional<std::int64_t> witness_static;
    int peak_load = 0;
    std::optional<bool> invariants_ok;
    std::vector<std::string> failures;
    double wall_seconds = 0;

    std::int64_t cost() const { return ledger.total(); }

    /// Equality over everything the CSV carries.
    bool same_csv_fields(const RunRecord& o) const;
};

inline const char* kCsvHeader =
    "k,ℓ,ε,algorithm,adversary,migration,communication,cost_flow,cost_large,cost_merge,cost_mono,cost_schedule,"
    "lower_bound,opt_static,opt_dynamic,ratio_vs_dual,ratio_vs_opt,n,requests,cost_learn,cost_reset,witness_static,"
    "peak_load,invariants";

namespace detail {

inline std::string opt_field(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "skipped"; }

inline std::string ratio_field(std::int64_t num, std::optional<std::int64_t> den)
{
    if (!den || *den <= 0) {
        return "skipped";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(num) / static_cast<double>(*den));
    return buf;
}

inline std::optional<std::int64_t> parse_opt(const std::string& s, const std::string& where)
{
    if (s == "skipped") {
        return std::nullopt;
    }
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos == s.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError(where + ": expected an integer or 'skipped', got '" + s + "'");
}

} // namespace detail

inline std::string csv_row(const RunRecord& r)
{
    using detail::opt_field;
    const CostLedger& L = r.ledger;
    std::vector<std::string> f = {
        std::to_string(r.k),
        std::to_string(r.ell),
        r.eps.to_string(),
        r.algorithm,
        r.adversary,
        std::to_string(L.migration),
        std::to_string(L.communication),
        std::to_string(L.category(CostCategory::flow)),
        std::to_string(L.category(CostCategory::large)),
        std::to_string(L.category(CostCategory::merge)),
        std::to_string(L.category(CostCategory::mono)),
        std::to_string(L.category(CostCategory::schedule)),
        std::to_string(r.lower_bound),
        opt_field(r.opt_static),
        opt_field(r.opt_dynamic),
        detail::ratio_field(r.cost(), r.lower_bound > 0 ? std::optional<std::int64_t>(r.lower_bound) : std::nullopt),
        detail::ratio_field(r.cost(), r.opt_dynamic ? r.opt_dynamic : r.opt_static),
        std::to_string(r.n),
        std::to_string(r.requests),
        std::to_string(L.category(CostCategory::learn)),
        std::to_string(L.category(CostCategory::reset)),
        opt_field(r.witness_static),
        std::to_string(r.peak_load),
        r.invariants_ok ? (*r.invariants_ok ? "pass" : "fail") : "skipped",
    };
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += (i ? "," : "") + f[i];
    }
    return out;
}

inline std::string emit_csv(const std::vector<RunRecord>& records)
{
    std::string out = std::string(kCsvHeader) + "\n";
    for (const RunRecord& r : records) {
        out += csv_row(r) + "\n";
    }
    return out;
}

/// Inverse of emit_csv. Ratios are derived columns and only checked for shape.
inline std::vector<RunRecord> parse_csv(std::string_view text, const std::string& source = "<csv>")
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ConfigError(source + ":1: unexpected CSV header");
    }
    std::vector<RunRecord> out;
    int lineno = 1;
    const std::size_t columns = detail::split(kCsvHeader, ',').size();
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const std::string where = source + ":" + std::to_string(lineno);
        auto f = detail::split(line, ',');
        if (f.size() != columns) {
            throw ConfigError(where + ": expected " + std::to_string(columns) + " fields");
        }
        RunRecord r;
        auto num = [&](int i) { return detail::parse_opt(f[i], where).value_or(-1); };
        r.k = static_cast<int>(num(0));
        r.ell = static_cast<int>(num(1));
        try {
            r.eps = Rational::parse(f[2]);
        } catch (const std::exception&) {
            throw ConfigError(where + ": bad epsilon '" + f[2] + "'");
        }
        r.algorithm = f[3];
        r.adversary = f[4];
        r.ledger.migration = num(5);
        r.ledger.communication = num(6);
        r.ledger.add(CostCategory::flow, num(7));
        r.ledger.add(CostCategory::large, num(8));
        r.ledger.add(CostCategory::merge, num(9));
        r.ledger.add(CostCategory::mono, num(10));
        r.ledger.add(CostCategory::schedule, num(11));
        r.lower_bound = num(12);
        r.opt_static = detail::parse_opt(f[13], where);
        r.opt_dynamic = detail::parse_opt(f[14], where);
        r.n = static_cast<int>(num(17));
        r.requests = num(18);
        r.ledger.add(CostCategory::learn, num(19));
        r.ledger.add(CostCategory::reset, num(20));
        r.witness_static = detail::parse_opt(f[21], where);
        r.peak_load = static_cast<int>(num(22));
        if (f[23] == "pass" || f[23] == "fail") {
            r.invariants_ok = f[23] == "pass";
        } else if (f[23] != "skipped") {
            throw ConfigError(where + ": bad invariants field '" + f[23] + "'");
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline bool RunRecord::same_csv_fields(const RunRecord& o) const { return csv_row(*this) == csv_row(o); }

/// Field-level validation; messages name the offending field.
inline void validate_config(const ExperimentConfig& c)
{
    if (c.k <= 0) {
        throw ConfigError("field 'k': must be positive, got " + std::to_string(c.k));
    }
    if (c.ell <= 0) {
        throw ConfigError("field 'ell': must be positive, got " + std::to_string(c.ell));
    }
    if (c.eps < Rational(0)) {
        throw ConfigError("field 'eps': must be nonnegative");
    }
    static const char* algos[] = {"one-eps", "two-eps", "learn-only", "strawman", "never-migrate"};
    if (std::find(std::begin(algos), std::end(algos), c.algorithm) == std::end(algos)) {
        throw ConfigError("field 'algo': unknown algorithm '" + c.algorithm + "'");
    }
    const std::string& a = c.adversary;
    if (a != "unlimited" && a != "one-eps" && a.rfind("file:", 0) != 0 && a.rfind("random:", 0) != 0) {
        throw ConfigError("field 'adversary': unknown adversary '" + a + "'");
    }
    if (a.rfind("random:", 0) == 0) {
        auto parts = detail::split(a, ':');
        if (parts.size() != 3) {
            throw ConfigError("field 'adversary': expected random:<length>:<seed>");
        }
        detail::parse_int(parts[1], "field 'adversary'");
        detail::parse_int(parts[2], "field 'adversary'");
    }
    if (a == "one-eps") {
        const std::int64_t ek = c.eps.floor_mul(c.k);
        if (Rational(ek) != c.eps * Rational(c.k) || ek < 2 || (ek & (ek - 1)) != 0 || 4 * ek > c.k) {
            throw ConfigError("field 'eps': eps*k must be a power of two in [2, k/4] for the one-eps adversary");
        }
    }
}

/// Runs the algorithm, auditing every step in verify mode.
inline void drive(OnlineAlgorithm& alg, const std::function<std::optional<Request>()>& source, RunRecord& rec,
                  bool verify)
{
    const bool two_eps = alg.name() == "two-eps";
    auto fail = [&](const std::string& msg) {
        if (rec.failures.size() < 20) {
            rec.failures.push_back("t=" + std::to_string(alg.time()) + ": " + msg);
        }
    };
    while (auto r = source()) {
        alg.step(*r);
        ++rec.requests;
        if (!verify) {
            continue;
        }
        for (const std::string& m : alg.audit(true)) {
            fail(m);
        }
        if (alg.load_violations() > 0) {
            fail("load above the augmented capacity");
        }
        if (two_eps) {
            const auto& t = static_cast<const TwoEpsAlgorithm&>(alg);
            if (t.post_rebalance_violations() > 0) {
                fail("load above 2k after a rebalance");
            }
        }
    }
}

inline RunRecord run_one(const ExperimentConfig& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    validate_config(c);
    RunRecord rec;
    rec.k = c.k;
    rec.ell = c.ell;
    rec.eps = c.eps;
    rec.algorithm = c.algorithm;
    rec.adversary = c.adversary;
    rec.n = c.ell * c.k;

    std::unique_ptr<Adversary> adv;
    RequestSequence fixed;
    if (c.adversary == "unlimited") {
        adv = std::make_unique<UnlimitedAugAdversary>(c.ell, c.k, c.max_requests);
    } else if (c.adversary == "one-eps") {
        adv = std::make_unique<OneEpsAdversary>(c.ell, c.k, c.eps, c.max_requests);
    } else if (c.adversary.rfind("file:", 0) == 0) {
        const SequenceFile f = read_sequence_file(c.adversary.substr(5));
        if (f.k != c.k || f.ell != c.ell) {
            throw ConfigError(c.adversary.substr(5) + ":1: header k/l disagree with the run configuration");
        }
        rec.n = f.n;
        fixed = f.requests;
    } else {
        auto parts = detail::split(c.adversary, ':');
        fixed = random_learning_sequence(c.ell, c.k, rec.n, detail::parse_int(parts[1], "adversary"),
                                         static_cast<std::uint64_t>(detail::parse_int(parts[2], "adversary")));
    }

    auto alg = make_algorithm(c.algorithm, c.ell, c.k, rec.n, c.eps);
    std::size_t pos = 0;
    std::function<std::optional<Request>()> source;
    if (adv) {
        source = [&]() { return adv->next(alg->configuration()); };
    } else {
        source = [&]() -> std::optional<Request> {
            return pos < fixed.size() ? std::optional<Request>(fixed[pos++]) : std::nullopt;
        };
    }
    drive(*alg, source, rec, c.verify);
    const RequestSequence& sigma = adv ? adv->log() : fixed;

    rec.ledger = alg->ledger();
    rec.lower_bound = alg->lower_bound();
    rec.peak_load = alg->peak_load();
    if (adv) {
        rec.witness_static = adv->static_witness().cost;
    }
    const ProblemSpec spec{c.ell, c.k, rec.n, c.eps, Rational(1)};
    const std::int64_t states = detail::state_count(c.ell, rec.n, c.oracle_budget);
    if (states > 0 && states * std::max<std::int64_t>(1, static_cast<std::int64_t>(sigma.size())) <= c.oracle_budget) {
        rec.opt_static = exact_static_opt(spec, alg->initial(), sigma, c.oracle_budget).cost;
        rec.opt_dynamic = exact_dynamic_opt(spec, alg->initial(), sigma, c.oracle_budget);
    }
    if (c.verify) {
        if (rec.opt_dynamic && rec.lower_bound > *rec.opt_dynamic) {
            rec.failures.push_back("lower bound exceeds the dynamic optimum");
        }
        if (rec.opt_dynamic && rec.opt_static && *rec.opt_dynamic > *rec.opt_static) {
            rec.failures.push_back("dynamic optimum exceeds the static optimum");
        }
        if ((c.algorithm == "two-eps" || c.algorithm == "learn-only") && rec.ledger.communication != 0 &&
            learning_restricted(sigma, c.ell, c.k, rec.n)) {
            rec.failures.push_back("communication on a learning-restricted input");
        }
        rec.invariants_ok = rec.failures.empty();
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

/// Runs every config; records come back in input order whatever the thread count.
inline std::vector<RunRecord> run(const std::vector<ExperimentConfig>& grid, unsigned threads = 1)
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            validate_config(grid[i]);
        } catch (const ConfigError& e) {
            throw ConfigError("grid cell " + std::to_string(i) + ": " + e.what());
        }
    }
    std::vector<RunRecord> out(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i; (i = next++) < grid.size();) {
            try {
                out[i] = run_one(grid[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

struct GridSpec {
    std::vector<int> k{16};
    std::vector<int> ell{2};
    std::vector<Rational> eps{Rational(1, 8)};
    std::vector<std::string> algorithms{"two-eps"};
    std::vector<std::string> adversaries{"one-eps"};
    bool verify = false;
};

/// Cartesian product in k, ell, eps, algorithm, adversary order (last varies fastest).
inline std::vector<ExperimentConfig> expand(const GridSpec& g)
{
    std::vector<ExperimentConfig> out;
    for (int k : g.k) {
        for (int ell : g.ell) {
            for (const Rational& eps : g.eps) {
                for (const auto& a : g.algorithms) {
                    for (const auto& adv : g.adversaries) {
                        ExperimentConfig c;
                        c.k = k;
                        c.ell = ell;
                        c.eps = eps;
                        c.algorithm = a;
                        c.adversary = adv;
                        c.verify = g.verify;
                        out.push_back(c);
                    }
                }
            }
        }
    }
    return out;
}

/// `key = v1,v2,...` lines; '#' starts a comment. Keys: k, ell, eps, algo, adversary, verify.
inline GridSpec parse_grid(std::string_view text, const std::string& source = "<grid>")
{
    GridSpec g;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        line = detail::trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        std::vector<std::string> vals;
        for (auto& v : detail::split(line.substr(eq + 1), ',')) {
            vals.push_back(detail::trim(v));
            if (vals.back().empty()) {
                throw ConfigError(where + ": field '" + key + "': empty value");
            }
        }
        const std::string fw = where + ": field '" + key + "'";
        if (key == "k" || key == "ell") {
            auto& dst = key == "k" ? g.k : g.ell;
            dst.clear();
            for (auto& v : vals) {
                dst.push_back(detail::parse_int(v, fw));
            }
        } else if (key == "eps") {
            g.eps.clear();
            for (auto& v : vals) {
                try {
                    g.eps.push_back(Rational::parse(v));
                } catch (const std::exception&) {
                    throw ConfigError(fw + ": bad rational '" + v + "'");
                }
            }
        } else if (key == "algo") {
            g.algorithms = vals;
        } else if (key == "adversary") {
            g.adversaries = vals;
        } else if (key == "verify") {
            if (vals.size() != 1 || (vals[0] != "true" && vals[0] != "false")) {
                throw ConfigError(fw + ": expected true or false");
            }
            g.verify = vals[0] == "true";
        } else {
            throw ConfigError(where + ": unknown field '" + key + "'");
        }
    }
    auto cells = expand(g);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        try {
            validate_config(cells[i]);
        } catch (const ConfigError& e) {
            throw ConfigError(source + ": grid cell " + std::to_string(i) + ": " + e.what());
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Exhaustive verification

struct ExhaustiveCase {
    int ell;
    int k;
    int n;
    std::vector<std::pair<ProcessId, ProcessId>> pool;
};

/// Every pair (a, b) with a < b, in lexicographic order.
inline std::vector<std::pair<ProcessId, ProcessId>> all_pairs(int n)
{
    std::vector<std::pair<ProcessId, ProcessId>> out;
    for (ProcessId a = 0; a < n; ++a) {
        for (ProcessId b = a + 1; b < n; ++b) {
            out.emplace_back(a, b);
        }
    }
    return out;
}

/// Every (ell, k, n) with ell in {2, 3}, 2 <= n <= 6 and ceil(n/ell) <= k <= n,
/// over the full pair set. Larger k behaves like k = n.
inline std::vector<ExhaustiveCase> default_exhaustive_cases()
{
    std::vector<ExhaustiveCase> out;
    for (int ell : {2, 3}) {
        for (int n = 2; n <= 6; ++n) {
            for (int k = (n + ell - 1) / ell; k <= n; ++k) {
                out.push_back({ell, k, n, all_pairs(n)});
            }
        }
    }
    return out;
}

struct ExhaustiveSummary {
    std::int64_t sequences = 0;
    /// Prefixes cut because they break the learning restriction.
    std::int64_t pruned = 0;
    std::int64_t runs = 0;
    std::int64_t max_lower_bound = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

/// Every learning-restricted sequence of length <= max_t over each pool: runs the listed
/// algorithms with step-wise audits and checks
/// lower_bound <= dynamic optimum <= static optimum.
inline ExhaustiveSummary verify_exhaustive(const std::vector<ExhaustiveCase>& cases, int max_t,
                                           const std::vector<std::string>& algorithms = {"one-eps", "two-eps"},
                                           Rational eps = Rational(1))
{
    ExhaustiveSummary sum;
    auto fail = [&](const std::string& m) {
        if (sum.failures.size() < 50) {
            sum.failures.push_back(m);
        }
    };
    for (const ExhaustiveCase& ec : cases) {
        const ProblemSpec spec{ec.ell, ec.k, ec.n, eps, Rational(1)};
        const Configuration initial = Configuration::balanced(ec.ell, ec.k, ec.n);
        RequestSequence sigma;
        auto describe = [&]() {
            std::string s = "l=" + std::to_string(ec.ell) + " k=" + std::to_string(ec.k) + " n=" +
                            std::to_string(ec.n) + " sigma=";
            for (const Request& r : sigma) {
                s += "(" + std::to_string(r.a) + "," + std::to_string(r.b) + ")";
            }
            return s;
        };
        // Algorithm states and the dynamic oracle are forked along prefixes.
        using Algs = std::vector<std::pair<std::string, std::unique_ptr<OnlineAlgorithm>>>;
        // Static side: running cost of every capacity-k placement, extended
        // by one request per level.
        std::vector<std::vector<ServerId>> placements;
        std::vector<std::int64_t> moves;
        {
            std::vector<ServerId> cur(ec.n, 0);
            std::vector<int> load(ec.ell, 0);
            auto gen = [&](auto&& g, int i) -> void {
                if (i == ec.n) {
                    placements.push_back(cur);
                    std::int64_t m = 0;
                    for (ProcessId p = 0; p < ec.n; ++p) {
                        m += cur[p] != initial.server_of(p);
                    }
                    moves.push_back(m);
                    return;
                }
                for (ServerId s = 0; s < ec.ell; ++s) {
                    if (load[s] < ec.k) {
                        ++load[s];
                        cur[i] = s;
                        g(g, i + 1);
                        --load[s];
                    }
                }
            };
            gen(gen, 0);
        }
        auto rec = [&](auto&& self, const DynamicOptTracker& dp, const Algs& algs,
                       const std::vector<std::int64_t>& st_cost) -> void {
            ++sum.sequences;
            const std::int64_t opt_dyn = dp.value();
            const std::int64_t opt_st = *std::min_element(st_cost.begin(), st_cost.end());
            if (opt_dyn > opt_st) {
                fail(describe() + ": dynamic optimum " + std::to_string(opt_dyn) + " > static " +
                     std::to_string(opt_st));
            }
            for (const auto& [id, alg] : algs) {
                ++sum.runs;
                if (alg->load_violations() > 0) {
                    fail(describe() + " " + id + ": load above the augmented capacity");
                }
                const std::int64_t lb = alg->lower_bound();
                sum.max_lower_bound = std::max(sum.max_lower_bound, lb);
                if (lb > opt_dyn) {
                    fail(describe() + " " + id + ": lower bound " + std::to_string(lb) + " > dynamic optimum " +
                         std::to_string(opt_dyn));
                }
            }
            if (static_cast<int>(sigma.size()) == max_t) {
                return;
            }
            for (auto [a, b] : ec.pool) {
                sigma.push_back(Request{a, b, static_cast<int>(sigma.size()) + 1});
                // Outside the learning restriction, and so is every extension.
                if (!learning_restricted(sigma, ec.ell, ec.k, ec.n)) {
                    ++sum.pruned;
                    sigma.pop_back();
                    continue;
                }
                DynamicOptTracker next = dp;
                next.step(sigma.back());
                std::vector<std::int64_t> next_st = st_cost;
                for (std::size_t i = 0; i < placements.size(); ++i) {
                    next_st[i] += placements[i][a] != placements[i][b];
                }
                Algs forked;
                for (const auto& [id, alg] : algs) {
                    auto c = alg->clone();
                    try {
                        c->step(sigma.back());
                        for (const auto& m : c->audit(true)) {
                            fail(describe() + " " + id + ": " + m);
                        }
                        forked.emplace_back(id, std::move(c));
                    } catch (const Error& e) {
                        fail(describe() + " " + id + ": threw " + e.what());
                    }
                }
                self(self, next, forked, next_st);
                sigma.pop_back();
            }
        };
        Algs roots;
        for (const auto& id : algorithms) {
            roots.emplace_back(id, make_algorithm(id, ec.ell, ec.k, ec.n, eps));
        }
        rec(rec, DynamicOptTracker(spec, initial), roots, moves);
    }
    return sum;
}

} // namespace obp
