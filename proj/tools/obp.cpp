#include "obp/obp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace obp;

std::vector<std::string> csv_list(const std::string& s) { return obp::detail::split(s, ','); }

void write_out(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError(path + ": cannot open for writing");
    }
    out << text;
}

// One-eps needs eps*k to be a power of two; round down and say so.
Rational resolve_eps(Rational eps, int k, const std::string& adversary)
{
    if (adversary != "one-eps" || k <= 0) {
        return eps;
    }
    auto r = round_down_feasible_eps(eps, k);
    if (!r) {
        throw ConfigError("field 'eps': no feasible value at or below " + eps.to_string() + " for k=" + std::to_string(k));
    }
    if (*r != eps) {
        std::cerr << "note: eps rounded down from " << eps.to_string() << " to " << r->to_string() << " for k=" << k
                  << "\n";
    }
    return *r;
}

Rational parse_eps(const std::string& s)
{
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        throw ConfigError("field 'eps': bad rational '" + s + "'");
    }
}

int report(const std::vector<RunRecord>& records, const std::string& out, bool verify)
{
    write_out(out, emit_csv(records));
    int bad = 0;
    for (const RunRecord& r : records) {
        for (const std::string& f : r.failures) {
            std::cerr << r.algorithm << " vs " << r.adversary << " k=" << r.k << " l=" << r.ell << ": " << f << "\n";
        }
        bad += r.invariants_ok && !*r.invariants_ok;
    }
    return verify && bad > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"online balanced graph partitioning simulator"};
    app.require_subcommand(1);

    int k = 16;
    int ell = 2;
    std::string eps_s = "1/8";
    std::string algo = "two-eps";
    std::string adversary = "one-eps";
    std::string out;
    bool verify = false;

    auto* gen = app.add_subcommand("generate", "write an adversary's sequence against an algorithm to a file");
    gen->add_option("--k", k);
    gen->add_option("--ell", ell);
    gen->add_option("--eps", eps_s);
    gen->add_option("--adversary", adversary)->check(CLI::IsMember({"unlimited", "one-eps"}));
    gen->add_option("--algo", algo, "algorithm the adversary reacts to");
    gen->add_option("--out", out, "sequence file (default stdout)");

    auto* run = app.add_subcommand("run", "replay a sequence or attack one algorithm");
    run->add_option("--k", k);
    run->add_option("--ell", ell);
    run->add_option("--eps", eps_s);
    run->add_option("--algo", algo);
    run->add_option("--adversary", adversary, "unlimited | one-eps | file:<path> | random:<length>:<seed>");
    run->add_option("--out", out, "CSV (default stdout)");
    run->add_flag("--verify", verify);

    std::string ks = "16,32,64";
    std::string ells = "2,4";
    std::string epss = "1/8";
    std::string algos = "one-eps,two-eps";
    std::string advs = "one-eps";
    std::string grid_file;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
    sweep->add_option("--k", ks, "comma list");
    sweep->add_option("--ell", ells, "comma list");
    sweep->add_option("--eps", epss, "comma list");
    sweep->add_option("--algo", algos, "comma list");
    sweep->add_option("--adversary", advs, "comma list");
    sweep->add_option("--config", grid_file, "grid file with 'key = v1,v2' lines; overrides the list flags");
    sweep->add_option("--threads", threads);
    sweep->add_option("--out", out);
    sweep->add_flag("--verify", verify);

    std::string seq_file;
    auto* oracle = app.add_subcommand("oracle", "exact static and dynamic optima of a sequence file");
    oracle->add_option("file", seq_file)->required();

    int max_t = 6;
    auto* ver = app.add_subcommand("verify", "exhaustive invariant sweep over small instances");
    ver->add_option("--max-t", max_t, "longest sequence")->check(CLI::Range(0, 8));
    std::string verify_eps = "1";
    ver->add_option("--eps", verify_eps, "slack for the tiny capacities used here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const Rational eps = resolve_eps(parse_eps(eps_s), k, adversary);
            ExperimentConfig c;
            c.k = k;
            c.ell = ell;
            c.eps = eps;
            c.algorithm = algo;
            c.adversary = adversary;
            validate_config(c);
            auto alg = make_algorithm(algo, ell, k, ell * k, eps);
            std::unique_ptr<Adversary> adv;
            if (adversary == "unlimited") {
                adv = std::make_unique<UnlimitedAugAdversary>(ell, k);
            } else {
                adv = std::make_unique<OneEpsAdversary>(ell, k, eps);
            }
            run_attack(*adv, *alg);
            write_out(out, serialize_sequence(SequenceFile{1, k, ell, ell * k, adv->log()}));
            return 0;
        }
        if (*run) {
            ExperimentConfig c;
            c.k = k;
            c.ell = ell;
            c.eps = resolve_eps(parse_eps(eps_s), k, adversary);
            c.algorithm = algo;
            c.adversary = adversary;
            c.verify = verify;
            return report(obp::run({c}), out, verify);
        }
        if (*sweep) {
            GridSpec g;
            if (!grid_file.empty()) {
                std::ifstream in(grid_file);
                if (!in) {
                    throw ConfigError(grid_file + ": cannot open");
                }
                std::stringstream ss;
                ss << in.rdbuf();
                g = parse_grid(ss.str(), grid_file);
                g.verify = g.verify || verify;
            } else {
                g.k.clear();
                for (auto& s : csv_list(ks)) {
                    g.k.push_back(obp::detail::parse_int(s, "field 'k'"));
                }
                g.ell.clear();
                for (auto& s : csv_list(ells)) {
                    g.ell.push_back(obp::detail::parse_int(s, "field 'ell'"));
                }
                g.eps.clear();
                for (auto& s : csv_list(epss)) {
                    g.eps.push_back(parse_eps(s));
                }
                g.algorithms = csv_list(algos);
                g.adversaries = csv_list(advs);
                g.verify = verify;
            }
            auto cells = expand(g);
            for (auto& c : cells) {
                c.eps = resolve_eps(c.eps, c.k, c.adversary);
            }
            return report(obp::run(cells, threads), out, g.verify);
        }
        if (*oracle) {
            const SequenceFile f = read_sequence_file(seq_file);
            const ProblemSpec spec{f.ell, f.k, f.n, Rational(0), Rational(1)};
            const Configuration init = Configuration::balanced(f.ell, f.k, f.n);
            const OracleResult st = exact_static_opt(spec, init, f.requests);
            std::cout << "opt_static " << st.cost << "\n";
            try {
                std::cout << "opt_dynamic " << exact_dynamic_opt(spec, init, f.requests) << "\n";
            } catch (const ScaleError& e) {
                std::cout << "opt_dynamic skipped (" << e.what() << ")\n";
            }
            std::cout << "greedy_static " << greedy_static_baseline(spec, init, f.requests).cost << "\n";
            return 0;
        }
        if (*ver) {
            const auto sum = verify_exhaustive(default_exhaustive_cases(), max_t, {"one-eps", "two-eps"},
                                               parse_eps(verify_eps));
            std::cout << "sequences " << sum.sequences << " pruned " << sum.pruned << " runs " << sum.runs << " max_lower_bound "
                      << sum.max_lower_bound << " failures " << sum.failures.size() << "\n";
            for (const auto& f : sum.failures) {
                std::cerr << f << "\n";
            }
            return sum.ok() ? 0 : 1;
        }
    } catch (const obp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
