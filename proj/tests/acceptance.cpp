// Acceptance suite: every gate runs at its pinned tolerance and prints one
// PASS/FAIL line. Exit code 0 iff all gates pass.
//
//   ./acceptance                 run everything
//   ./acceptance --only K        run gate K alone
//   ./acceptance --pilot-containment
//                                print the containment-growth rates used to
//                                pin the committed baseline

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "netarch/detect.hpp"
#include "netarch/estimator.hpp"
#include "netarch/experiments.hpp"
#include "netarch/generators.hpp"
#include "netarch/graph.hpp"
#include "netarch/oracle.hpp"

#include "acceptance_baseline.hpp"
#include "expected_values.hpp"
#include "fixtures.hpp"

using namespace netarch;

namespace {

struct gate_result {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

unsigned worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 2 : hw;
}

/// Run fn(0..count-1) over `threads` workers.
void parallel_for(std::uint32_t count, unsigned threads,
                  const std::function<void(std::uint32_t)>& fn) {
    if (threads <= 1) {
        for (std::uint32_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint32_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (true) {
                const std::uint32_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- gate 1

gate_result gate_oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<graph> corpus;

    for (std::uint32_t l : {1u, 2u, 3u})
        for (vertex_id n : {6u, 8u, 10u, 12u})
            for (std::uint64_t seed = 0; seed < 20; ++seed)
                corpus.push_back(make_ldag(n, l, {1000 + seed, l * 100 + n}));

    for (double c : {0.5, 2.0})
        for (vertex_id n : {6u, 9u, 12u})
            for (std::uint64_t seed = 0; seed < 20; ++seed)
                corpus.push_back(make_cooper_frieze(n, c, {2000 + seed, n}));

    for (vertex_id n : {8u, 10u, 12u})
        for (std::uint64_t seed = 0; seed < 60; ++seed)
            corpus.push_back(fixtures::make_uniform_er(n, 0.3, {3000 + seed, n}));

    corpus.push_back(fixtures::make_theta(1, 3, 3));
    corpus.push_back(fixtures::make_theta(1, 2, 2));
    corpus.push_back(fixtures::make_theta(2, 3, 4));
    corpus.push_back(fixtures::make_figure_eight());
    corpus.push_back(fixtures::make_cycle(5));
    corpus.push_back(fixtures::make_path(9));

    std::atomic<std::uint64_t> mismatches{0};
    parallel_for(static_cast<std::uint32_t>(corpus.size()), worker_count(), [&](std::uint32_t i) {
        for (std::uint32_t m = 3; m <= 6; ++m) {
            const auto fast = compute_anchor_set(corpus[i], m).members;
            const auto slow = brute_force_anchor_set(corpus[i], m).members;
            if (fast != slow) mismatches.fetch_add(1);
        }
    });

    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << corpus.size() << " graphs x m in {3..6}, " << mismatches.load()
           << " mismatches, " << elapsed << " s (budget 120 s)";
    return {mismatches.load() == 0 && corpus.size() >= 500 && elapsed < 120.0, detail.str()};
}

// ---------------------------------------------------------------- gate 2

gate_result gate_canned_cases() {
    bool ok = true;
    std::ostringstream detail;

    const auto check = [&](const char* name, const graph& g, std::uint32_t m,
                           const std::vector<vertex_id>& want) {
        const auto got = compute_anchor_set(g, m).members;
        if (got != want) {
            ok = false;
            detail << name << " wrong; ";
        }
    };

    check("figure-eight S3", fixtures::make_figure_eight(), 3, {1});
    check("theta(1,3,3) S4", fixtures::make_theta(1, 3, 3), 4, {1, 2});
    check("theta(1,2,2) S7", fixtures::make_theta(1, 2, 2), 7, {});
    check("C5 S6", fixtures::make_cycle(5), 6, {});
    check("path S8", fixtures::make_path(12), 8, {});
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        check("tree S8", make_urrt(60, {40 + seed, 0}), 8, {});

    if (ok) detail << "figure-eight, thetas, C5 and trees all exact";
    return {ok, detail.str()};
}

// ---------------------------------------------------------------- gate 3

gate_result gate_exponent_lemmas() {
    const auto start = std::chrono::steady_clock::now();
    constexpr std::uint32_t reps = 10000;
    std::atomic<std::uint64_t> witnesses{0};
    std::atomic<std::uint64_t> failures{0};

    parallel_for(reps, worker_count(), [&](std::uint32_t rep) {
        const graph g = make_ldag(500, 2, {616100, rep});
        const anchor_set s = compute_anchor_set(g, 8, {1, true});
        for (std::size_t i = 0; i < s.members.size(); ++i) {
            if (!s.witnesses[i].has_value()) {
                failures.fetch_add(1);
                continue;
            }
            const auto& w = *s.witnesses[i];
            witnesses.fetch_add(1);
            if (!validate_witness(g, w)) {
                failures.fetch_add(1);
                continue;
            }
            for (vertex_id anchor : w.anchors)
                if (!check_exponent_lemmas(compute_exponent_profile(w, anchor)))
                    failures.fetch_add(1);
        }
    });

    std::ostringstream detail;
    detail << witnesses.load() << " witnesses from " << reps << " dags (l=2, n=500, m=8), "
           << failures.load() << " lemma/validation failures, " << seconds_since(start) << " s";
    return {failures.load() == 0, detail.str()};
}

// ---------------------------------------------------------------- gate 4

gate_result gate_domination() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::vector<std::pair<vertex_id, vertex_id>>> patterns = {
        {{1, 4}},
        {{1, 4}, {2, 4}},
        {{1, 3}, {3, 5}, {2, 5}},
    };
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const auto rep = check_domination(2, 6, patterns[i], 100000, 616200 + i, 3.0);
        detail << "p" << i + 1 << ": " << rep.empirical << " vs bound "
               << rep.extra.at("product_bound").get<double>() << (rep.pass ? " ok; " : " FAIL; ");
        ok = ok && rep.pass;
    }
    const double elapsed = seconds_since(start);
    detail << elapsed << " s (budget 60 s)";
    return {ok && elapsed < 60.0, detail.str()};
}

// ---------------------------------------------------------------- gate 5

gate_result gate_urrt_diagnostics() {
    bool ok = true;
    std::ostringstream detail;

    const auto marginal = check_edge_marginal(10, 5, 100000, 616301, 4.0);
    ok = ok && marginal.pass;
    detail << "edge{1,5}: " << marginal.empirical << (marginal.pass ? " ok; " : " FAIL; ");

    const auto bracket = check_xk_bracket(100, 100000, 616302, 3.0);
    ok = ok && bracket.pass;
    detail << "E[X_100]: " << bracket.empirical << " in [" << bracket.target_lo << ", "
           << bracket.target_hi << "]" << (bracket.pass ? " ok; " : " FAIL; ");

    const auto tail = check_xk_tail(0.5, 20000, 616303, 3.0);
    ok = ok && tail.pass;
    detail << "P{X_k_eps>=2}: " << tail.empirical << " >= " << tail.target_lo
           << (tail.pass ? " ok; " : " FAIL; ");

    const auto height = check_tree_height(1000, 0.1, 10000, 616304, 3.0);
    ok = ok && height.pass;
    detail << "height pass-rate: " << height.empirical << " >= " << height.target_lo
           << (height.pass ? " ok" : " FAIL");

    return {ok, detail.str()};
}

// ---------------------------------------------------------------- gate 6

struct containment_growth {
    std::vector<std::uint32_t> budgets{4, 8, 12, 16, 20};
    std::vector<double> rates;
    bool subsets_ok = true;
    double elapsed = 0.0;
};

containment_growth run_containment_growth() {
    const auto start = std::chrono::steady_clock::now();
    constexpr std::uint32_t reps = 200;
    constexpr std::uint64_t master = 20260810;

    containment_growth out;
    std::vector<std::vector<char>> contained(out.budgets.size(),
                                             std::vector<char>(reps, 0));
    std::atomic<std::uint32_t> subset_violations{0};

    parallel_for(reps, worker_count(), [&](std::uint32_t rep) {
        const graph g = make_ldag(2000, 2, {master, rep});
        std::vector<vertex_id> prev;
        for (std::size_t bi = 0; bi < out.budgets.size(); ++bi) {
            const auto members = compute_anchor_set(g, out.budgets[bi]).members;
            if (!std::includes(members.begin(), members.end(), prev.begin(), prev.end()))
                subset_violations.fetch_add(1);
            contained[bi][rep] =
                std::binary_search(members.begin(), members.end(), vertex_id{1}) ? 1 : 0;
            prev = members;
        }
    });

    out.subsets_ok = subset_violations.load() == 0;
    for (std::size_t bi = 0; bi < out.budgets.size(); ++bi) {
        std::uint32_t hits = 0;
        for (char c : contained[bi]) hits += c;
        out.rates.push_back(static_cast<double>(hits) / reps);
    }
    out.elapsed = seconds_since(start);
    return out;
}

gate_result gate_containment_growth() {
    const containment_growth run = run_containment_growth();

    bool monotone = true;
    for (std::size_t i = 1; i < run.rates.size(); ++i)
        monotone = monotone && run.rates[i] >= run.rates[i - 1];

    const double rate20 = run.rates.back();
    const bool meets_baseline = rate20 >= baseline::containment_rate_m20;

    std::ostringstream detail;
    detail << "rates";
    for (std::size_t i = 0; i < run.budgets.size(); ++i)
        detail << " m" << run.budgets[i] << "=" << run.rates[i];
    detail << ", baseline m20=" << baseline::containment_rate_m20 << ", per-rep subsets "
           << (run.subsets_ok ? "exact" : "VIOLATED") << ", " << run.elapsed
           << " s (budget 600 s)";
    return {run.subsets_ok && monotone && meets_baseline && run.elapsed < 600.0, detail.str()};
}

// ---------------------------------------------------------------- gate 7

gate_result gate_formulas() {
    bool ok = true;
    std::ostringstream detail;

    if (m_epsilon_ldag(2, std::exp(-2.0)) != 30) {
        ok = false;
        detail << "m_epsilon_ldag(2, e^-2) != 30; ";
    }
    if (m_epsilon_cf(12.0, std::exp(-1.0)) != 10) {
        ok = false;
        detail << "m_epsilon_cf(12, e^-1) != 10; ";
    }

    std::size_t points = 0;
    double worst = 0.0;
    for (const auto& c : expected::k_bound_ldag_cases) {
        const double got = k_bound_log_ldag(static_cast<std::uint32_t>(c.rate_param), c.epsilon);
        worst = std::max(worst, std::abs(got - c.log_bound) / c.log_bound);
        ++points;
    }
    for (const auto& c : expected::k_bound_cf_cases) {
        const double got = k_bound_log_cf(c.rate_param, c.epsilon);
        worst = std::max(worst, std::abs(got - c.log_bound) / c.log_bound);
        ++points;
    }
    ok = ok && points >= 10 && worst <= 1e-9;
    detail << "m_eps gates exact, " << points << " k-bound points, worst rel err " << worst;
    return {ok, detail.str()};
}

// ---------------------------------------------------------------- gate 8

gate_result gate_determinism_invariance() {
    namespace fs = std::filesystem;
    bool ok = true;
    std::ostringstream detail;

    experiment_config cfg;
    cfg.model = model_spec::make_ldag(300, 2);
    cfg.epsilon = 0.5;
    cfg.m = 8;
    cfg.replications = 40;
    cfg.master_seed = 2718;

    const auto tmp = fs::temp_directory_path() / "netarch_acceptance_csv";
    fs::remove_all(tmp);
    const auto read_all = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const auto p1 = emit_containment(run_containment(cfg, 1), (tmp / "w1").string());
    const auto p8 = emit_containment(run_containment(cfg, 8), (tmp / "w8").string());
    const bool csv_ok = read_all(p1.csv) == read_all(p8.csv) && !read_all(p1.csv).empty();
    fs::remove_all(tmp);
    ok = ok && csv_ok;
    detail << "csv 1 vs 8 workers " << (csv_ok ? "byte-identical" : "DIFFER") << "; ";

    rng_stream rng(rng_seed{616400, 0});
    std::uint32_t relabelings = 0, equivariant = 0;
    for (std::uint32_t gi = 0; gi < 20; ++gi) {
        const vertex_id n = 40 + 2 * gi;
        const graph g = (gi % 2 == 0) ? make_ldag(n, 2, {616401, gi})
                                      : make_cooper_frieze(n, 1.5, {616402, gi});
        const auto base = compute_anchor_set(g, 6).members;
        for (int k = 0; k < 5; ++k) {
            const permutation perm = sample_permutation(n, rng);
            auto mapped = base;
            for (auto& v : mapped) v = perm(v);
            std::sort(mapped.begin(), mapped.end());
            ++relabelings;
            if (compute_anchor_set(relabel(g, perm), 6).members == mapped) ++equivariant;
        }
    }
    ok = ok && relabelings == 100 && equivariant == relabelings;
    detail << equivariant << "/" << relabelings << " relabelings equivariant";
    return {ok, detail.str()};
}

// ---------------------------------------------------------------- gate 9

gate_result gate_performance() {
    const graph g = make_ldag(100000, 2, {616500, 0});
    const auto start = std::chrono::steady_clock::now();
    const anchor_set s = compute_anchor_set(g, 8, {worker_count(), false});
    const double elapsed = seconds_since(start);

    std::ostringstream detail;
    detail << "n=1e5, m=8: " << elapsed << " s on " << worker_count()
           << " workers (target 60 s, hard gate 120 s), |S_8| = " << s.members.size();
    return {elapsed < 120.0, detail.str()};
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    bool pilot = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--pilot-containment") == 0)
            pilot = true;
    }

    if (pilot) {
        const containment_growth run = run_containment_growth();
        std::printf("containment-growth pilot (ldag l=2 n=2000, 200 reps, seed 20260810)\n");
        for (std::size_t i = 0; i < run.budgets.size(); ++i)
            std::printf("  m=%u rate=%.6f\n", run.budgets[i], run.rates[i]);
        std::printf("  subsets %s, %.1f s\n", run.subsets_ok ? "exact" : "VIOLATED", run.elapsed);
        std::printf("baseline::containment_rate_m20 = %.6f\n", run.rates.back());
        return 0;
    }

    struct gate {
        int id;
        const char* name;
        gate_result (*fn)();
    };
    const gate gates[] = {
        {1, "oracle equivalence", gate_oracle_equivalence},
        {2, "canned structural cases", gate_canned_cases},
        {3, "exponent lemmas", gate_exponent_lemmas},
        {4, "domination", gate_domination},
        {5, "urrt marginals and diagnostics", gate_urrt_diagnostics},
        {6, "containment growth", gate_containment_growth},
        {7, "formula gates", gate_formulas},
        {8, "determinism and invariance", gate_determinism_invariance},
        {9, "performance", gate_performance},
    };

    int failures = 0;
    for (const gate& g : gates) {
        if (only != 0 && g.id != only) continue;
        const gate_result res = g.fn();
        std::printf("%s criterion %d (%s): %s\n", res.pass ? "PASS" : "FAIL", g.id, g.name,
                    res.detail.c_str());
        std::fflush(stdout);
        if (!res.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
