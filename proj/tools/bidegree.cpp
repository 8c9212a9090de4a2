#include "bidegree/asymptotic.hpp"
#include "bidegree/exact.hpp"
#include "bidegree/io.hpp"
#include "bidegree/patterns.hpp"
#include "bidegree/sampler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace bidegree;
using nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 usage, 2 parse, 3 too large, 4 shape / not graphical,
// 5 not balanced / wrong form, 6 bad k.
int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::ParseError:
        case ErrorCode::LengthMismatch:
        case ErrorCode::NegativeDegree:
            return 2;
        case ErrorCode::TooLarge:
            return 3;
        case ErrorCode::ShapeMismatch:
        case ErrorCode::BadShape:
        case ErrorCode::NotGraphical:
            return 4;
        case ErrorCode::NotBalanced:
        case ErrorCode::WrongForm:
        case ErrorCode::SumMismatch:
            return 5;
        case ErrorCode::BadK:
            return 6;
        default:
            return 1;
    }
}

std::string fmt(double x, int digits = 10) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string show(const LogEstimate& e) {
    if (auto q = e.exact_value(); q && denominator(*q) == 1) return numerator(*q).str();
    return fmt(e.value());
}

double rel_err(double est, const BigInt& exact) {
    const double x = to_double(exact);
    return x == 0 ? std::nan("") : std::fabs(est - x) / x;
}

json summary(const BidegreeSequence& s) {
    json j{{"N", s.size()}, {"S", s.edges()}, {"form", form_name(s.form())}};
    try {
        auto d = sparsity_diagnostic(s);
        j["d_max"] = d.d_max;
        j["effective_tau"] = d.effective_tau;
        j["condition_A1"] = d.condition_A1;
        j["in_regime"] = d.in_regime;
    } catch (const Error&) {
    }
    return j;
}

void banner(const BidegreeSequence& s) {
    try {
        auto d = sparsity_diagnostic(s);
        std::cerr << "# N=" << s.size() << " S=" << d.S << " d_max=" << d.d_max << " effective_tau=" << fmt(d.effective_tau, 6)
                  << " condition_A1=" << d.condition_A1 << (d.in_regime ? "" : " (outside the sparse regime)") << "\n";
    } catch (const Error& e) {
        std::cerr << "# " << e.what() << "\n";
    }
}

struct Common {
    std::string input;
    std::string variant;
    std::string format = "tsv";
};

GraphVariant parse_variant(const std::string& v, bool undirected_input) {
    if (v.empty()) return undirected_input ? GraphVariant::UndirectedNoLoops : GraphVariant::DirectedWithLoops;
    if (v == "directed-loops") return GraphVariant::DirectedWithLoops;
    if (v == "directed-noloops") return GraphVariant::DirectedNoLoops;
    return GraphVariant::UndirectedNoLoops;
}

const std::vector<std::string> kVariants{"directed-loops", "directed-noloops", "undirected"};

int cmd_count(const Common& c, const std::string& mode) {
    auto in = load_sequence(c.input);
    const auto variant = parse_variant(c.variant, in.undirected);
    BigInt n;
    if (mode == "closed-form") {
        if (variant != GraphVariant::DirectedWithLoops)
            throw Error(ErrorCode::ShapeMismatch, "closed forms cover directed graphs with loops");
        n = count_closed_special(in.sequence);
    } else {
        n = count_exact(in.sequence, variant);
    }
    if (c.format == "json") {
        json j{{"count", n.str()}, {"variant", variant_name(variant)}, {"mode", mode}, {"sequence", summary(in.sequence)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << n << "\n";
    }
    return 0;
}

int cmd_estimate(const Common& c, int order) {
    auto in = load_sequence(c.input);
    const auto& s = in.sequence;
    if (!s.balanced()) throw Error(ErrorCode::NotBalanced, "count estimates need equal in/out sums");
    banner(s);
    auto closed = count_estimate_closed(s);
    auto tel = telescope_count(s, order);
    if (!closed.graphical) std::cerr << "# sequence is not graphical; the true count is 0\n";
    if (c.format == "json") {
        json j{{"sequence", summary(s)},
               {"closed_form", {{"log_estimate", closed.log_value}, {"estimate", show(closed)}}},
               {"telescope", {{"order", order}, {"log_estimate", tel.log_value}, {"estimate", show(tel)}}},
               {"graphical", closed.graphical}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "method\torder\tlog_estimate\testimate\n";
    std::cout << "closed-form\t1\t" << fmt(closed.log_value) << "\t" << show(closed) << "\n";
    std::cout << "telescope\t" << order << "\t" << fmt(tel.log_value) << "\t" << show(tel) << "\n";
    return 0;
}

std::vector<BidegreeSequence> reg2_family(const std::vector<int>& sizes) {
    std::vector<BidegreeSequence> out;
    for (int n : sizes) {
        if (n < 1) throw Error(ErrorCode::BadArgument, "sizes must be positive");
        out.emplace_back(std::vector<int>(n, 2), std::vector<int>(n, 2));
    }
    return out;
}

int cmd_compare(const Common& c, const std::string& family, const std::vector<int>& sizes,
                const std::vector<std::string>& files, bool timing) {
    std::vector<std::string> keys;
    std::vector<BidegreeSequence> seqs;
    if (family == "reg2") {
        seqs = reg2_family(sizes);
        for (int n : sizes) keys.push_back(std::to_string(n));
    } else {
        for (const auto& f : files) {
            seqs.push_back(load_sequence(f).sequence);
            keys.push_back(std::filesystem::path(f).stem().string());
        }
    }
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::time_point t0) { return std::chrono::duration<double, std::milli>(clock::now() - t0).count(); };

    struct Row {
        BigInt exact;
        double closed;
        std::vector<double> est, t;
    };
    std::vector<Row> rows;
    for (const auto& s : seqs) {
        Row r;
        auto t0 = clock::now();
        r.exact = count_exact(s);
        r.t.push_back(ms(t0));
        t0 = clock::now();
        r.closed = count_estimate_closed(s).value();
        r.t.push_back(ms(t0));
        for (int o = 1; o <= 4; ++o) {
            t0 = clock::now();
            r.est.push_back(telescope_count(s, o).value());
            r.t.push_back(ms(t0));
        }
        rows.push_back(std::move(r));
    }

    const char* key = family == "reg2" ? "N" : "name";
    const std::vector<std::string> methods{"closed", "order1", "order2", "order3", "order4"};
    if (c.format == "json") {
        json out = json::array();
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto& r = rows[k];
            json j{{key, keys[k]}, {"exact", r.exact.str()}};
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const double v = m == 0 ? r.closed : r.est[m - 1];
                j[methods[m]] = {{"estimate", v}, {"rel_error", rel_err(v, r.exact)}};
                if (timing) j[methods[m]]["ms"] = r.t[m + 1];
            }
            if (timing) j["exact_ms"] = r.t[0];
            out.push_back(j);
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << key << "\texact";
    for (const auto& m : methods) std::cout << "\t" << m;
    for (const auto& m : methods) std::cout << "\trelerr_" << m;
    if (timing) {
        std::cout << "\tms_exact";
        for (const auto& m : methods) std::cout << "\tms_" << m;
    }
    std::cout << "\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        std::vector<double> v{r.closed};
        v.insert(v.end(), r.est.begin(), r.est.end());
        std::cout << keys[k] << "\t" << r.exact;
        for (double x : v) std::cout << "\t" << fmt(x);
        for (double x : v) std::cout << "\t" << fmt(rel_err(x, r.exact), 6);
        if (timing)
            for (double t : r.t) std::cout << "\t" << fmt(t, 4);
        std::cout << "\n";
    }
    return 0;
}

// Exact-mode expansion against the factored evaluation of its source on random tables.
bool identity_check(int k, bool weighted) {
    auto e = weighted ? expand_with_initial_equality(k, ExpansionMode::Exact) : expand_distinct(k, ExpansionMode::Exact);
    const auto src = weighted ? weighted_source() : distinct_source();
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int r = 2 * k; r <= 2 * k + 3; ++r)
        for (int N = 1; N <= 6; ++N) {
            std::vector<BigInt> f(N), g(N);
            for (int x = 0; x < N; ++x) {
                f[x] = val(rng);
                g[x] = val(rng);
            }
            if (evaluate_expansion(e, f, &g, r) != evaluate_pattern(src, f, &g, r)) return false;
        }
    return true;
}

int cmd_expand(const Common& c, int k, bool weighted, const std::string& mode, std::optional<long long> r) {
    const auto m = mode == "exact" ? ExpansionMode::Exact : ExpansionMode::Truncated;
    auto e = weighted ? expand_with_initial_equality(k, m) : expand_distinct(k, m);
    const bool ok = identity_check(k, weighted);
    if (c.format == "json") {
        json terms = json::array();
        for (const auto& t : e.terms) {
            json j{{"coefficient", t.coefficient.str()},
                   {"blocks", t.pattern.blocks},
                   {"free", format_free(t.pattern)},
                   {"distinct_from", t.pattern.distinct_from}};
            if (r) j["value_at_r"] = t.coefficient.eval(*r).str();
            terms.push_back(j);
        }
        json j{{"k", k}, {"weighted", weighted}, {"mode", mode}, {"truncation_weight", e.truncation_weight},
               {"terms", terms}, {"identity_check", ok}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    for (const auto& t : e.terms) {
        std::cout << format_term(t);
        if (r) std::cout << " | at r=" << *r << ": " << t.coefficient.eval(*r);
        std::cout << "\n";
    }
    std::cout << "# exact-mode identity check: " << (ok ? "pass" : "FAIL") << "\n";
    return 0;
}

std::string edge_list(const LabeledDigraph& g) {
    std::string s;
    for (auto [u, v] : g.edges()) s += std::to_string(u) + " " + std::to_string(v) + "\n";
    return s;
}

int cmd_sample(const Common& c, std::size_t samples, long long burn_in, long long thin, std::uint64_t seed,
               const std::string& out_dir) {
    auto in = load_sequence(c.input);
    const auto variant = parse_variant(c.variant, in.undirected);
    check_variant(in.sequence, variant);
    auto draws = sample_uniform(in.sequence, variant, burn_in, thin, samples, seed);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        for (std::size_t k = 0; k < draws.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "sample_%04zu.txt", k);
            std::ofstream(std::filesystem::path(out_dir) / name) << edge_list(draws[k]);
        }
        std::cerr << "# wrote " << draws.size() << " samples to " << out_dir << "\n";
        return 0;
    }
    if (c.format == "json") {
        json out = json::array();
        for (const auto& g : draws)
            out.push_back({{"in_degrees", g.in_degrees()}, {"out_degrees", g.out_degrees()}, {"edges", g.edges()}});
        std::cout << json{{"variant", variant_name(variant)}, {"seed", seed}, {"samples", out}}.dump(2) << "\n";
        return 0;
    }
    for (std::size_t k = 0; k < draws.size(); ++k) std::cout << (k ? "\n" : "") << edge_list(draws[k]);
    return 0;
}

int cmd_ratio(const Common& c, std::size_t i, std::size_t j, const std::string& side_name, std::size_t samples,
              long long burn_in, long long thin, std::uint64_t seed) {
    auto in = load_sequence(c.input);
    const auto& s = in.sequence;
    const auto variant = parse_variant(c.variant, in.undirected);
    if (variant == GraphVariant::UndirectedNoLoops)
        throw Error(ErrorCode::UnsupportedVariant, "ratios are defined for directed variants");
    const Side side = side_name == "out" ? Side::Out : Side::In;
    const auto want = side == Side::In ? SequenceForm::InHeavy : SequenceForm::OutHeavy;
    if (s.form() != want) throw Error(ErrorCode::WrongForm, "sequence is not in ratio form for this side");
    check_pair(s, i, j);

    std::optional<Rational> exact;
    try {
        exact = ratio_exact(s, i, j, side, variant);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TooLarge && e.code() != ErrorCode::DenominatorZero) throw;
        std::cerr << "# exact ratio unavailable: " << e.what() << "\n";
    }
    std::vector<double> est;
    for (int o = 1; o <= 4; ++o) est.push_back(ratio_estimate(s, i, j, o, side));
    std::optional<EmpiricalRatio> emp;
    if (samples > 0) {
        const auto base = side == Side::In ? s : s.transposed();
        emp = estimate_ratio_empirical(base, i, j, samples, seed, burn_in, thin, variant);
    }

    if (c.format == "json") {
        json j{{"i", i}, {"j", j}, {"side", side_name}, {"variant", variant_name(variant)}};
        if (exact) j["exact"] = {{"value", to_double(*exact)}, {"rational", to_string(*exact)}};
        for (int o = 1; o <= 4; ++o) j["order" + std::to_string(o)] = est[o - 1];
        if (emp) j["empirical"] = {{"estimate", emp->estimate}, {"std_error", emp->std_error}, {"samples", emp->samples}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "exact\torder1\torder2\torder3\torder4";
    if (emp) std::cout << "\tempirical\tempirical_se";
    std::cout << "\n" << (exact ? fmt(to_double(*exact)) : "NA");
    for (double x : est) std::cout << "\t" << fmt(x);
    if (emp) std::cout << "\t" << fmt(emp->estimate) << "\t" << fmt(emp->std_error, 4);
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Count, estimate and sample graphs with a given bidegree sequence"};
    app.require_subcommand(1);
    Common c;
    auto common = [&](CLI::App* sub, bool needs_input) {
        auto* opt = sub->add_option("--input", c.input, "sequence file (JSON or CSV)");
        if (needs_input) opt->required();
        sub->add_option("--variant", c.variant, "directed-loops, directed-noloops or undirected")
            ->check(CLI::IsMember(kVariants));
        sub->add_option("--format", c.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
    };

    std::string mode;
    int order = 1, k = 1, i = 0, j = 1;
    bool weighted = false, timing = false;
    std::size_t samples = 0;
    long long burn_in = 1000, thin = 100;
    std::uint64_t seed = 0;
    std::optional<long long> r;
    std::string family = "reg2", side = "in", out_dir;
    std::vector<int> sizes;
    std::vector<std::string> files;

    auto* count = app.add_subcommand("count", "exact count");
    common(count, true);
    count->add_option("--mode", mode, "exact or closed-form")->check(CLI::IsMember({"exact", "closed-form"}));

    auto* estimate = app.add_subcommand("estimate", "asymptotic count estimate");
    common(estimate, true);
    estimate->add_option("--order", order, "correction order")->check(CLI::Range(1, 4));

    auto* compare = app.add_subcommand("compare", "exact versus estimates over a family");
    common(compare, false);
    compare->add_option("--family", family)->check(CLI::IsMember({"reg2", "custom"}));
    compare->add_option("--sizes", sizes, "node counts for reg2")->delimiter(',');
    compare->add_option("--files", files, "sequence files for custom")->delimiter(',');
    compare->add_flag("--timing", timing, "add runtime columns");

    auto* expand = app.add_subcommand("expand", "equality-pattern expansion");
    common(expand, false);
    expand->add_option("--k", k, "number of freed index pairs")->required();
    expand->add_flag("--weighted", weighted, "start from x1 = x2 with weight g");
    expand->add_option("--mode", mode, "truncated or exact")->check(CLI::IsMember({"truncated", "exact"}));
    expand->add_option("--r", r, "also evaluate coefficients at r");

    auto* sample = app.add_subcommand("sample", "uniform samples by edge swaps");
    common(sample, true);
    sample->add_option("--samples", samples)->required();
    sample->add_option("--burn-in", burn_in);
    sample->add_option("--thin", thin);
    sample->add_option("--seed", seed);
    sample->add_option("--out-dir", out_dir, "write one edge list per file");

    auto* ratio = app.add_subcommand("ratio", "count ratio for a node pair");
    common(ratio, true);
    ratio->add_option("--i", i)->required();
    ratio->add_option("--j", j)->required();
    ratio->add_option("--side", side)->check(CLI::IsMember({"in", "out"}));
    ratio->add_option("--samples", samples, "empirical estimate from this many samples");
    ratio->add_option("--burn-in", burn_in);
    ratio->add_option("--thin", thin);
    ratio->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*count) return cmd_count(c, mode.empty() ? "exact" : mode);
        if (*estimate) return cmd_estimate(c, order);
        if (*compare) return cmd_compare(c, family, sizes, files, timing);
        if (*expand) return cmd_expand(c, k, weighted, mode.empty() ? "truncated" : mode, r);
        if (*sample) return cmd_sample(c, samples, burn_in, thin, seed, out_dir);
        if (*ratio) {
            if (i < 0 || j < 0) throw Error(ErrorCode::BadIndex, "node indices are 0-based and non-negative");
            return cmd_ratio(c, i, j, side, samples, burn_in, thin, seed);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << error_name(e.code()) << ": " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
