// Command-line surface. Every subcommand echoes its mathematical parameters
// and the tool version and emits a machine-readable report (JSON unless the
// subcommand is specified as CSV). Execution knobs (thread count) are not
// part of the payload, so reports are byte-identical across thread counts.
//
// Exit status: 0 success and measured-only outcomes; 1 usage or resource
// errors; 2 violation of an exact identity.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chowla/chowla.hpp"

namespace chowla::cli {

using json = nlohmann::ordered_json;

// Round to 15 significant digits so serialized floats are reproducible and
// readable.
inline double sig15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

inline std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

// Deterministic xorshift-based generator; identical streams on every
// platform for a fixed seed.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed * 6364136223846793005ULL + 1442695040888963407ULL) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    long long below(long long n) { return static_cast<long long>(next() % static_cast<std::uint64_t>(n)); }
};

inline std::string poly_to_text(const IntPolynomial& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (int i = f.degree(); i >= 0; --i) {
        i128 c = f.c[static_cast<size_t>(i)];
        if (c == 0) continue;
        if (!s.empty()) s += c > 0 ? "+" : "-";
        else if (c < 0) s += "-";
        i128 a = abs128(c);
        if (a != 1 || i == 0) s += to_string(a);
        if (i >= 1) s += "x";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
}

inline json report_skeleton(const std::string& subcommand) {
    json r;
    r["tool"] = "chowla";
    r["version"] = kVersion;
    r["subcommand"] = subcommand;
    r["params"] = json::object();
    r["result"] = json::object();
    return r;
}

struct TableSource {
    std::string path;  // --table or CHOWLA_TABLE; empty = build in memory
};

inline LiouvilleTable acquire_table(const TableSource& src, std::uint64_t needed_limit,
                                    int threads) {
    std::string path = src.path;
    if (path.empty()) {
        const char* env = std::getenv("CHOWLA_TABLE");
        if (env != nullptr && *env != '\0') path = env;
    }
    if (!path.empty()) {
        LiouvilleTable t = LiouvilleTable::load(path);
        if (t.limit() < needed_limit)
            throw std::runtime_error("table file covers only " + std::to_string(t.limit()) +
                                     " but " + std::to_string(needed_limit) + " is required");
        return t;
    }
    BuildOptions opt;
    opt.threads = threads;
    return LiouvilleTable::build(needed_limit, opt);
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"workbench for Liouville correlations, quadratic characters and sieve identities"};
    app.require_subcommand(1);
    app.fallthrough(true);  // --threads/--seed may follow the subcommand

    int threads = 1;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker thread count")->capture_default_str();
    app.add_option("--seed", seed, "seed for randomized suites")->capture_default_str();

    // --- sieve-build ---
    auto* sieve_cmd = app.add_subcommand("sieve-build", "build a Liouville parity table");
    std::uint64_t sb_limit = 0, sb_segment = 1 << 18;
    std::string sb_out;
    sieve_cmd->add_option("--limit", sb_limit, "table covers 1..limit")->required();
    sieve_cmd->add_option("--segment-size", sb_segment, "sieve segment size (>= 64)");
    sieve_cmd->add_option("--out", sb_out, "output file path");

    // --- correlate ---
    auto* corr_cmd = app.add_subcommand("correlate", "exact correlation sums of lambda (and lambda_z)");
    double c_x = 0;
    std::vector<long long> c_shifts;
    double c_z = 0;
    long long c_disc = 0;
    double c_eta = 0;
    std::string c_table;
    corr_cmd->add_option("--x", c_x, "sum over n <= x")->required();
    corr_cmd->add_option("--shifts", c_shifts, "comma-separated shifts")->required()->delimiter(',');
    corr_cmd->add_option("--z", c_z, "proxy threshold (with --disc)");
    corr_cmd->add_option("--disc", c_disc, "fundamental discriminant (with --z)");
    corr_cmd->add_option("--eta", c_eta, "Siegel quality for the gap bound");
    corr_cmd->add_option("--table", c_table, "Liouville table file");

    // --- proxy-gap ---
    auto* gap_cmd = app.add_subcommand("proxy-gap", "measure the lambda to lambda_z transition gap");
    double g_x = 0, g_z = 0, g_eta = 0;
    long long g_disc = 0;
    std::vector<long long> g_shifts;
    std::string g_table;
    gap_cmd->add_option("--x", g_x)->required();
    gap_cmd->add_option("--z", g_z)->required();
    gap_cmd->add_option("--disc", g_disc)->required();
    gap_cmd->add_option("--eta", g_eta)->required();
    gap_cmd->add_option("--shifts", g_shifts)->required()->delimiter(',');
    gap_cmd->add_option("--table", g_table, "Liouville table file");

    // --- bound ---
    auto* bound_cmd = app.add_subcommand("bound", "evaluate the headline bound formulas");
    double b_q = 0, b_eta = 0, b_V = 0, b_eps = 0, b_c = 0.01, b_delta = 0.5, b_cp = 0.01;
    int b_k = 2;
    bound_cmd->add_option("--q", b_q)->required();
    bound_cmd->add_option("--eta", b_eta)->required();
    bound_cmd->add_option("--V", b_V)->required();
    bound_cmd->add_option("--eps", b_eps)->required();
    bound_cmd->add_option("--k", b_k)->required();
    bound_cmd->add_option("--c", b_c)->capture_default_str();
    bound_cmd->add_option("--delta", b_delta)->capture_default_str();
    bound_cmd->add_option("--c-prime", b_cp)->capture_default_str();

    // --- weights-verify ---
    auto* w_cmd = app.add_subcommand("weights-verify", "build sieve weights and verify the envelope");
    double w_z = 0, w_u = 0, w_beta = 0;
    std::uint64_t w_N = 0;
    w_cmd->add_option("--z", w_z)->required();
    w_cmd->add_option("--u", w_u)->required();
    w_cmd->add_option("--beta", w_beta)->required();
    w_cmd->add_option("--N", w_N)->required();

    // --- decompose-verify ---
    auto* d_cmd = app.add_subcommand("decompose-verify", "check the exact decomposition identity");
    double d_x = 0, d_z = 0, d_u = 0;
    long long d_disc = 0;
    std::vector<long long> d_shifts;
    std::string d_table;
    bool d_enumerate = false;
    d_cmd->add_option("--x", d_x)->required();
    d_cmd->add_option("--z", d_z)->required();
    d_cmd->add_option("--u", d_u)->required();
    d_cmd->add_option("--shifts", d_shifts)->required()->delimiter(',');
    d_cmd->add_option("--disc", d_disc)->required();
    d_cmd->add_option("--table", d_table, "Liouville table file");
    d_cmd->add_flag("--enumerate", d_enumerate, "force the full tuple-enumeration path");

    // --- weil-bench ---
    auto* wb_cmd = app.add_subcommand("weil-bench", "complete character sums against the prime-modulus bound");
    long long wb_pmin = 0, wb_pmax = 0, wb_trials = 0;
    int wb_deg = 3;
    std::string wb_format = "csv";
    wb_cmd->add_option("--p-min", wb_pmin)->required();
    wb_cmd->add_option("--p-max", wb_pmax)->required();
    wb_cmd->add_option("--trials", wb_trials)->required();
    wb_cmd->add_option("--deg", wb_deg)->capture_default_str();
    wb_cmd->add_option("--format", wb_format)->check(CLI::IsMember({"csv", "json"}));

    // --- search-characters ---
    auto* sc_cmd = app.add_subcommand("search-characters", "rank fundamental discriminants by exceptional-likeness");
    long long sc_min = 0, sc_max = 0;
    double sc_z = 0;
    std::size_t sc_top = 10;
    std::string sc_format = "csv";
    sc_cmd->add_option("--min", sc_min)->required();
    sc_cmd->add_option("--max", sc_max)->required();
    sc_cmd->add_option("--z", sc_z)->required();
    sc_cmd->add_option("--top", sc_top)->required();
    sc_cmd->add_option("--format", sc_format)->check(CLI::IsMember({"csv", "json"}));

    // --- joka ---
    auto* j_cmd = app.add_subcommand("joka", "prime sum (1 + chi(p))/p over (z, x]");
    long long j_disc = 0;
    double j_z = 0, j_x = 0;
    j_cmd->add_option("--disc", j_disc)->required();
    j_cmd->add_option("--z", j_z)->required();
    j_cmd->add_option("--x", j_x)->required();

    // CLI11 wants argc/argv ordering
    std::vector<const char*> argv;
    argv.push_back("chowla");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (sieve_cmd->parsed()) {
            BuildOptions opt;
            opt.segment_size = sb_segment;
            opt.threads = threads;
            opt.with_spf = false;
            LiouvilleTable t = LiouvilleTable::build(sb_limit, opt);
            json r = report_skeleton("sieve-build");
            r["params"] = {{"limit", sb_limit}, {"segment_size", sb_segment}, {"seed", seed}};
            auto bytes = t.serialize();
            r["result"]["parity_bytes"] = bytes.size();
            r["result"]["checksum_fnv1a"] = fnv1a(bytes);
            if (!sb_out.empty()) {
                t.save(sb_out);
                r["result"]["file"] = sb_out;
            }
            out << r.dump(2) << "\n";
            return 0;
        }

        if (corr_cmd->parsed()) {
            ShiftSystem shifts(c_shifts);
            std::uint64_t need = static_cast<std::uint64_t>(c_x) + shifts.max_shift();
            LiouvilleTable t = acquire_table({c_table}, need, threads);
            json r = report_skeleton("correlate");
            r["params"] = {{"x", sig15(c_x)}, {"shifts", c_shifts}, {"seed", seed}};
            long long sl = correlate([&](long long n) { return t.lambda(static_cast<std::uint64_t>(n)); },
                                     shifts, c_x, threads);
            r["result"]["sum_lambda"] = sl;
            r["result"]["normalized"] = sig15(static_cast<double>(sl) / c_x);
            r["result"]["sum_lambda_z"] = nullptr;
            r["result"]["gap_bound_branch"] = nullptr;
            r["result"]["gap_bound_value"] = nullptr;
            if (c_z > 0 && c_disc != 0) {
                r["params"]["z"] = sig15(c_z);
                r["params"]["disc"] = c_disc;
                QuadCharacter chi = QuadCharacter::from_discriminant(c_disc);
                long long slz = correlate(
                    [&](long long n) { return lambda_z(static_cast<std::uint64_t>(n), c_z, chi, t); },
                    shifts, c_x, threads);
                r["result"]["sum_lambda_z"] = slz;
                if (c_eta > 0) {
                    r["params"]["eta"] = sig15(c_eta);
                    TransitionBound tb =
                        transition_bound(c_x, c_z, static_cast<double>(chi.modulus()), c_eta);
                    r["result"]["gap_bound_branch"] = tb.branch;
                    r["result"]["gap_bound_value"] = sig15(tb.value);
                }
            }
            out << r.dump(2) << "\n";
            return 0;
        }

        if (gap_cmd->parsed()) {
            ShiftSystem shifts(g_shifts);
            QuadCharacter chi = QuadCharacter::from_discriminant(g_disc);
            chi.set_eta(g_eta);
            std::uint64_t need = static_cast<std::uint64_t>(g_x) + shifts.max_shift();
            LiouvilleTable t = acquire_table({g_table}, need, threads);
            ProxyGap g = proxy_gap(g_x, g_z, chi, shifts, t);
            json r = report_skeleton("proxy-gap");
            r["params"] = {{"x", sig15(g_x)}, {"z", sig15(g_z)}, {"disc", g_disc},
                           {"eta", sig15(g_eta)}, {"shifts", g_shifts}, {"seed", seed}};
            r["result"] = {{"lhs", g.lhs},
                           {"lhs_expansion", g.lhs_expansion},
                           {"rhs", sig15(g.rhs)},
                           {"ratio", sig15(g.ratio)},
                           {"branch", g.branch},
                           {"v", sig15(g.v)}};
            out << r.dump(2) << "\n";
            return 0;
        }

        if (bound_cmd->parsed()) {
            TheoremBound b = theorem_bound(b_q, b_eta, b_V, b_eps, b_k, b_c, b_delta, b_cp);
            ParameterChoice p = choose_parameters(b_q, b_eta, b_V, b_eps, b_k);
            json r = report_skeleton("bound");
            r["params"] = {{"q", sig15(b_q)}, {"eta", sig15(b_eta)}, {"V", sig15(b_V)},
                           {"eps", sig15(b_eps)}, {"k", b_k}, {"c", sig15(b_c)},
                           {"delta", sig15(b_delta)}, {"c_prime", sig15(b_cp)}, {"seed", seed}};
            r["result"] = {{"log_x", sig15(b.log_x)},
                           {"x", sig15(b.x)},
                           {"main", sig15(b.main)},
                           {"log_main_term2", sig15(b.log_main_term2)},
                           {"corollary_branch_1", sig15(b.corollary_branch_1)},
                           {"corollary_branch_2", sig15(b.corollary_branch_2)},
                           {"branch_1_applicable", b.branch_1_applicable},
                           {"branch_2_applicable", b.branch_2_applicable},
                           {"parameter_choice",
                            {{"v", sig15(p.v)}, {"z", sig15(p.z)}, {"u", sig15(p.u)}, {"beta", sig15(p.beta)}}}};
            out << r.dump(2) << "\n";
            return 0;
        }

        if (w_cmd->parsed()) {
            SieveWeightSet w = build_weights(w_z, w_u, w_beta);
            BuildOptions opt;
            opt.threads = threads;
            LiouvilleTable t = LiouvilleTable::build(std::max<std::uint64_t>(w_N, 2), opt);
            EnvelopeReport rep = verify_envelope(w, w_N, t, threads);
            json r = report_skeleton("weights-verify");
            r["params"] = {{"z", sig15(w_z)}, {"u", sig15(w_u)}, {"beta", sig15(w_beta)},
                           {"N", w_N}, {"seed", seed}};
            r["result"] = {{"support_size", rep.support_size},
                           {"min_C", sig15(rep.min_C)},
                           {"worst_n", rep.worst_n},
                           {"exact_outside_envelope", rep.exact_outside_envelope},
                           {"nonzero_delta_count", rep.nonzero_delta_count}};
            out << r.dump(2) << "\n";
            return rep.exact_outside_envelope ? 0 : 2;
        }

        if (d_cmd->parsed()) {
            ShiftSystem shifts(d_shifts);
            QuadCharacter chi = QuadCharacter::from_discriminant(d_disc);
            std::uint64_t need = static_cast<std::uint64_t>(d_x) + shifts.max_shift();
            LiouvilleTable t = acquire_table({d_table}, need, threads);
            AssembleReport rep = assemble_S(d_x, d_z, d_u, shifts, chi, t);
            json r = report_skeleton("decompose-verify");
            r["params"] = {{"x", sig15(d_x)}, {"z", sig15(d_z)}, {"u", sig15(d_u)},
                           {"shifts", d_shifts}, {"disc", d_disc}, {"seed", seed}};
            bool equal = rep.S_direct == rep.S_decomposed;
            r["result"]["S_direct"] = rep.S_direct;
            r["result"]["S_decomposed"] = rep.S_decomposed;
            r["result"]["equal"] = equal;
            r["result"]["dropped_by_restriction"] = rep.dropped;
            // tuple statistics from the enumeration path when it is feasible
            double volume = std::pow(static_cast<double>(
                                         smooth_numbers_up_to(d_z, std::pow(d_z, d_u)).size()),
                                     static_cast<double>(shifts.k()));
            if (d_enumerate || volume <= 2e6) {
                EnumeratedTuples et = enumerate_tuples(d_z, d_u, shifts);
                long long s_enum = assemble_S_enumerated(d_x, d_z, d_u, shifts, chi);
                r["result"]["enumeration_mode"] = "full";
                r["result"]["tuples_total"] = et.total;
                r["result"]["tuples_insoluble"] = et.insoluble_count;
                r["result"]["S_enumerated"] = s_enum;
                equal = equal && s_enum == rep.S_direct;
                r["result"]["equal"] = equal;
            } else {
                r["result"]["enumeration_mode"] = "grouped";
                r["result"]["tuples_total"] = rep.tuples_realized;
                r["result"]["tuples_insoluble"] = 0;
            }
            if (!equal) {
                GroupingAudit audit = audit_grouping(d_x, d_z, d_u, shifts, chi, t);
                r["result"]["first_differing_n"] = audit.first_bad_n;
                r["result"]["audit_detail"] = audit.detail;
            }
            out << r.dump(2) << "\n";
            return equal ? 0 : 2;
        }

        if (wb_cmd->parsed()) {
            Rng rng(seed);
            json rows = json::array();
            bool any_violation = false;
            std::string csv = "p,f,abs_sum,bound,ratio,square_case\n";
            for (long long p : primes_up_to(wb_pmax)) {
                if (p < wb_pmin || p < 3) continue;
                for (long long tindex = 0; tindex < wb_trials; ++tindex) {
                    int deg = 1 + static_cast<int>(rng.below(wb_deg));
                    std::vector<i128> coeffs(static_cast<size_t>(deg) + 1);
                    for (int i = 0; i < deg; ++i) coeffs[static_cast<size_t>(i)] = rng.below(p);
                    coeffs[static_cast<size_t>(deg)] = 1 + rng.below(p - 1);
                    IntPolynomial f(std::move(coeffs));
                    WeilCompleteReport wr = weil_complete_sum(p, f);
                    if (!wr.is_square_case && !wr.bound_holds) any_violation = true;
                    double ratio = wr.bound > 0 ? static_cast<double>(wr.abs_sum) / wr.bound : 0.0;
                    char line[256];
                    std::snprintf(line, sizeof line, "%lld,%s,%lld,%.15g,%.15g,%d\n", p,
                                  poly_to_text(f).c_str(), wr.abs_sum, wr.bound, ratio,
                                  wr.is_square_case ? 1 : 0);
                    csv += line;
                    if (wb_format == "json")
                        rows.push_back({{"p", p}, {"f", poly_to_text(f)}, {"abs_sum", wr.abs_sum},
                                        {"bound", sig15(wr.bound)}, {"ratio", sig15(ratio)},
                                        {"square_case", wr.is_square_case}});
                }
            }
            if (wb_format == "json") {
                json r = report_skeleton("weil-bench");
                r["params"] = {{"p_min", wb_pmin}, {"p_max", wb_pmax}, {"trials", wb_trials},
                               {"deg", wb_deg}, {"seed", seed}};
                r["result"]["rows"] = rows;
                out << r.dump(2) << "\n";
            } else {
                out << csv;
            }
            return any_violation ? 2 : 0;
        }

        if (sc_cmd->parsed()) {
            auto hits = search_exceptional(sc_min, sc_max, sc_z, sc_top, threads);
            if (sc_format == "json") {
                json r = report_skeleton("search-characters");
                r["params"] = {{"min", sc_min}, {"max", sc_max}, {"z", sig15(sc_z)},
                               {"top", sc_top}, {"seed", seed}};
                json rows = json::array();
                for (const auto& h : hits)
                    rows.push_back({{"discriminant", h.d}, {"q", std::llabs(h.d)},
                                    {"penalty", sig15(h.score.penalty)},
                                    {"minus_count", h.score.minus_count},
                                    {"prime_count", h.score.prime_count}});
                r["result"]["rows"] = rows;
                out << r.dump(2) << "\n";
            } else {
                out << "discriminant,q,penalty,minus_count,prime_count\n";
                for (const auto& h : hits) {
                    char line[160];
                    std::snprintf(line, sizeof line, "%lld,%lld,%.15g,%lld,%lld\n", h.d,
                                  std::llabs(h.d), h.score.penalty, h.score.minus_count,
                                  h.score.prime_count);
                    out << line;
                }
            }
            return 0;
        }

        if (j_cmd->parsed()) {
            QuadCharacter chi = QuadCharacter::from_discriminant(j_disc);
            double s = joka_sum(chi, j_z, j_x);
            json r = report_skeleton("joka");
            r["params"] = {{"disc", j_disc}, {"z", sig15(j_z)}, {"x", sig15(j_x)}, {"seed", seed}};
            r["result"]["sum"] = sig15(s);
            out << r.dump(2) << "\n";
            return 0;
        }
    } catch (const identity_violation& e) {
        err << "identity violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace chowla::cli
