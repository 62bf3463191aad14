// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. The CLI binary path is taken from argv[1] for the determinism
// criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chowla/chowla.hpp"

using namespace chowla;

namespace {

struct Harness {
    int failures = 0;
    void criterion(int id, const std::string& name, double time_limit_s,
                   const std::function<std::pair<bool, std::string>()>& fn) {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            auto [o, d] = fn();
            ok = o;
            detail = d;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > time_limit_s) {
            ok = false;
            detail += " [over time limit]";
        }
        std::printf("[%s] %02d %s (%s, %.2fs, limit %.0fs)\n", ok ? "PASS" : "FAIL", id,
                    name.c_str(), detail.c_str(), secs, time_limit_s);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

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
    long long in(long long lo, long long hi) { return lo + below(hi - lo + 1); }
};

std::string run_capture(const std::string& cmd, int* status) {
    std::string full = cmd + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (pipe == nullptr) {
        *status = -1;
        return {};
    }
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    *status = pclose(pipe);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli_path = argc > 1 ? argv[1] : "";
    Harness h;

    // shared tables
    auto table_small = LiouvilleTable::build(100000);
    auto table_mid = LiouvilleTable::build(10010);

    h.criterion(1, "sieve-oracle-equivalence", 5.0, [&]() -> std::pair<bool, std::string> {
        for (std::uint64_t n = 1; n <= 100000; ++n)
            if (table_small.lambda(n) != lambda_trial_division(n))
                return {false, "mismatch at n = " + std::to_string(n)};
        return {true, "100000 values exact"};
    });

    h.criterion(2, "decomposition-identity", 120.0, [&]() -> std::pair<bool, std::string> {
        std::vector<ShiftSystem> per_k{ShiftSystem{0}, ShiftSystem{0, 1}, ShiftSystem{0, 2, 5}};
        long long runs = 0;
        for (double x : {1000.0, 10000.0})
            for (double z : {5.0, 10.0, 30.0})
                for (double u : {2.0, 3.0})
                    for (const auto& shifts : per_k)
                        for (long long d : {-4LL, 5LL, -163LL}) {
                            auto chi = QuadCharacter::from_discriminant(d);
                            AssembleReport rep = assemble_S(x, z, u, shifts, chi, table_mid);
                            ++runs;
                            if (rep.S_direct != rep.S_decomposed)
                                return {false,
                                        "mismatch at x=" + std::to_string(x) + " z=" + std::to_string(z) +
                                            " u=" + std::to_string(u) + " k=" + std::to_string(shifts.k()) +
                                            " d=" + std::to_string(d) + ": " + std::to_string(rep.S_direct) +
                                            " vs " + std::to_string(rep.S_decomposed)};
                        }
        return {true, std::to_string(runs) + " grid points exactly equal"};
    });

    h.criterion(3, "crt-correctness", 10.0, [&]() -> std::pair<bool, std::string> {
        Rng rng(101);
        long long soluble_done = 0, insoluble_done = 0;
        while (soluble_done < 10000 || insoluble_done < 1000) {
            int k = static_cast<int>(rng.in(1, 4));
            std::vector<Congruence> sys;
            long long lcm = 1;
            bool ok = true;
            for (int i = 0; i < k; ++i) {
                long long m = rng.in(1, 50);
                sys.push_back({rng.in(0, m - 1), m});
                lcm = std::lcm(lcm, m);
                if (lcm > 10000) { ok = false; break; }
            }
            if (!ok) continue;
            auto got = crt_solve(std::span<const Congruence>(sys.data(), sys.size()));
            long long expect = 0;
            for (long long n = 1; n <= lcm; ++n) {
                bool sat = true;
                for (const auto& c : sys)
                    if (n % c.modulus != c.residue) { sat = false; break; }
                if (sat) { expect = n; break; }
            }
            if (expect == 0) {
                if (insoluble_done >= 1000) continue;
                ++insoluble_done;
                if (got.has_value()) return {false, "false solution on an insoluble system"};
            } else {
                if (soluble_done >= 10000) continue;
                ++soluble_done;
                if (!got || got->r_star != expect || got->modulus != lcm)
                    return {false, "wrong solution on a soluble system"};
            }
        }
        return {true, "10000 soluble + 1000 insoluble systems agree with exhaustive search"};
    });

    h.criterion(4, "sieve-weight-bullets", 60.0, [&]() -> std::pair<bool, std::string> {
        double worst_C = 0;
        for (auto [z, u, beta] : std::vector<std::array<double, 3>>{
                 {3, 2, 2}, {10, 4, 3}, {10, 6, 3}, {20, 5, 4}}) {
            SieveWeightSet w = build_weights(z, u, beta);
            double box = std::pow(z, u);
            for (const auto& [d, wd] : w.weights) {
                if (std::abs(wd) > 1) return {false, "|w(d)| > 1"};
                if (static_cast<double>(d) > box) return {false, "support outside the box"};
                auto f = factorize(static_cast<long long>(d));
                for (const auto& [p, e] : f)
                    if (e > 1 || static_cast<double>(p) > z)
                        return {false, "support not squarefree z-smooth"};
            }
            EnvelopeReport rep = verify_envelope(w, 100000, table_small, 4);
            if (!rep.exact_outside_envelope) return {false, "Delta nonzero where envelope vanishes"};
            if (!std::isfinite(rep.min_C) || rep.min_C > 100.0)
                return {false, "min_C out of range: " + std::to_string(rep.min_C)};
            worst_C = std::max(worst_C, rep.min_C);
        }
        return {true, "4 parameter triples, worst min_C = " + std::to_string(worst_C)};
    });

    h.criterion(5, "weil-complete-sum-bound", 30.0, [&]() -> std::pair<bool, std::string> {
        Rng rng(102);
        for (long long p : {101LL, 1009LL, 10007LL}) {
            int done = 0;
            while (done < 200) {
                int deg = 1 + static_cast<int>(rng.below(4));
                std::vector<i128> c(static_cast<size_t>(deg) + 1);
                for (auto& v : c) v = rng.below(p);
                if (c.back() == 0) c.back() = 1 + rng.below(p - 1);
                IntPolynomial f(std::move(c));
                WeilCompleteReport rep = weil_complete_sum(p, f);  // throws on violation
                if (rep.is_square_case) continue;
                ++done;
                if (!rep.bound_holds) return {false, "bound violated at p = " + std::to_string(p)};
            }
        }
        return {true, "600 non-square polynomials within (g-1)sqrt(p) exactly"};
    });

    h.criterion(6, "excess-smooth-counting-identity", 30.0, [&]() -> std::pair<bool, std::string> {
        const std::uint64_t X = 10000;
        for (double z : {2.0, 5.0, 10.0}) {
            for (double u : {1.0, 2.0, 3.0}) {
                double threshold = std::pow(z, u);
                // direct prefix counts
                std::vector<std::uint32_t> direct(X + 1, 0);
                for (std::uint64_t n = 1; n <= X; ++n) {
                    direct[n] = direct[n - 1] +
                                (static_cast<double>(table_mid.smooth_part(n, z)) > threshold ? 1 : 0);
                }
                // factorization-pair prefix counts
                std::vector<std::uint32_t> pairs(X + 1, 0);
                for (std::uint64_t a = 1; a <= X; ++a) {
                    if (static_cast<double>(a) <= threshold) continue;
                    if (table_mid.smooth_part(a, z) != a) continue;
                    for (std::uint64_t b = 1; b * a <= X; ++b)
                        if (b == 1 || static_cast<double>(table_mid.smallest_prime_factor(b)) > z)
                            ++pairs[a * b];
                }
                for (std::uint64_t n = 1; n <= X; ++n) {
                    pairs[n] += pairs[n - 1];
                    if (pairs[n] != direct[n])
                        return {false, "identity fails at x=" + std::to_string(n) +
                                           " z=" + std::to_string(z) + " u=" + std::to_string(u)};
                }
            }
        }
        return {true, "all x <= 10^4 over 9 (z, u) pairs exact"};
    });

    h.criterion(7, "lcm-lower-bound", 10.0, [&]() -> std::pair<bool, std::string> {
        Rng rng(103);
        for (int t = 0; t < 100000; ++t) {
            int k = static_cast<int>(rng.in(1, 6));
            std::vector<long long> m(static_cast<size_t>(k));
            for (auto& v : m) v = rng.in(1, 10000);
            auto r = lcm_lower_bound(std::span<const long long>(m.data(), m.size()));
            if (!r.holds_exactly) return {false, "inequality failed"};
        }
        return {true, "100000 random tuples, inequality exact"};
    });

    h.criterion(8, "rho-structure", 60.0, [&]() -> std::pair<bool, std::string> {
        long long terms_checked = 0;
        for (const auto& shifts : {ShiftSystem{0, 1}, ShiftSystem{0, 3}, ShiftSystem{0, 2, 5},
                                   ShiftSystem{1, 2, 6}}) {
            std::set<std::vector<long long>> tuples;
            double z = 10, u = 2, box = std::pow(z, u);
            for (long long n = 1; n <= 4000 && tuples.size() < 25; ++n) {
                std::vector<long long> a(shifts.k());
                bool inside = true;
                for (std::size_t i = 0; i < shifts.k(); ++i) {
                    a[i] = static_cast<long long>(
                        table_mid.smooth_part(static_cast<std::uint64_t>(n + shifts.h(i)), z));
                    if (static_cast<double>(a[i]) > box) { inside = false; break; }
                }
                if (inside) tuples.insert(a);
            }
            for (const auto& a : tuples) {
                auto term = reduce(SmoothTuple{a}, shifts);
                if (!term) return {false, "realized tuple insoluble"};
                RhoReport rep = rho_structure_check(*term, 1000);
                if (!rep.ok) {
                    const auto& v = rep.violations.front();
                    return {false, "violation at p=" + std::to_string(v.p) + " rho=" +
                                       std::to_string(v.rho) + " (" + v.expected + ")"};
                }
                ++terms_checked;
            }
        }
        if (terms_checked < 100)
            return {false, "only " + std::to_string(terms_checked) + " terms constructed"};
        return {true, std::to_string(terms_checked) + " terms, all primes <= 10^3 conform"};
    });

    h.criterion(9, "exceptional-character-sanity", 5.0, [&]() -> std::pair<bool, std::string> {
        for (long long p : primes_up_to(37))
            if (kronecker(-163, p) != -1)
                return {false, "kronecker(-163, " + std::to_string(p) + ") != -1"};
        auto hits = search_exceptional(-200, -3, 40, 1);
        if (hits.empty() || hits[0].d != -163)
            return {false, "search did not rank -163 first"};
        return {true, "chi(-163) = -1 below 40 and the range scan ranks it first"};
    });

    h.criterion(10, "chowla-scale-measurement", 10.0, [&]() -> std::pair<bool, std::string> {
        auto t = LiouvilleTable::build(1000001, {.with_spf = false, .threads = 4});
        long long c = correlate(
            [&](long long n) { return t.lambda(static_cast<std::uint64_t>(n)); },
            ShiftSystem{0, 1}, 1000000, 4);
        double normalized = std::abs(static_cast<double>(c)) / 1e6;
        if (normalized >= 0.01)
            return {false, "normalized correlation " + std::to_string(normalized)};
        return {true, "sum = " + std::to_string(c) + ", normalized " + std::to_string(normalized)};
    });

    h.criterion(11, "cli-determinism", 120.0, [&]() -> std::pair<bool, std::string> {
        if (cli_path.empty()) return {false, "no CLI binary path supplied"};
        std::string tmp = "acceptance_tmp_table";
        std::vector<std::pair<std::string, std::string>> cases = {
            {"sieve-build", "sieve-build --limit 300000 --segment-size 8192 --out " + tmp},
            {"correlate", "correlate --x 50000 --shifts 0,1 --z 10 --disc -163 --eta 50"},
            {"proxy-gap", "proxy-gap --x 20000 --z 10 --disc -163 --eta 100 --shifts 0,1"},
            {"bound", "bound --q 10000 --eta 1000 --V 1 --eps 0.1 --k 2 --c 0.01"},
            {"weights-verify", "weights-verify --z 20 --u 5 --beta 4 --N 100000"},
            {"decompose-verify", "decompose-verify --x 1000 --z 5 --u 2 --shifts 0,1 --disc -4"},
            {"weil-bench", "weil-bench --p-min 101 --p-max 211 --trials 10 --deg 4 --seed 0"},
            {"search-characters", "search-characters --min -500 --max 500 --z 40 --top 10"},
            {"joka", "joka --disc -163 --z 2 --x 100000"},
        };
        for (const auto& [name, args] : cases) {
            std::string ref_out, ref_file;
            bool first = true;
            for (const char* threads : {"1", "4", "8"}) {
                std::string cmd = "'" + cli_path + "' --threads " + threads + " " + args;
                int status = 0;
                std::string out = run_capture(cmd, &status);
                if (status != 0) return {false, name + " exited nonzero with threads " + threads};
                std::string fbytes = name == "sieve-build" ? read_file(tmp) : "";
                if (first) {
                    ref_out = out;
                    ref_file = fbytes;
                    first = false;
                } else if (out != ref_out || fbytes != ref_file) {
                    return {false, name + " payload differs at threads " + threads};
                }
            }
        }
        std::remove(tmp.c_str());
        return {true, "9 subcommands byte-identical across threads {1,4,8}"};
    });

    std::printf("ACCEPTANCE: %d/11 criteria passed\n", 11 - h.failures);
    return h.failures == 0 ? 0 : 1;
}
