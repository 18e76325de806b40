#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netarch/detect.hpp"
#include "netarch/estimator.hpp"
#include "netarch/generators.hpp"
#include "netarch/graph.hpp"
#include "netarch/models.hpp"
#include "netarch/oracle.hpp"
#include "netarch/rng.hpp"
#include "netarch/stats.hpp"

namespace netarch {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct tolerance_config {
    double se_mult = 3.0;
};

struct experiment_guards {
    vertex_id oracle_max_n = 12;
    std::uint32_t oracle_max_m = 6;
};

/// A seeded containment experiment: sample `replications` graphs from the
/// model, compute S_m per replication, and record whether vertex 1 landed
/// in it. Replication r draws from stream (master_seed, r).
struct experiment_config {
    model_spec model;
    double epsilon = 0.1;
    std::optional<std::uint32_t> m;  // nullopt = "auto" via the model's formula
    std::uint32_t replications = 1;
    std::uint64_t master_seed = 0;
    tolerance_config tolerances;
    experiment_guards guards;
    bool oracle_cross_check = false;
    bool record_timing = false;      // when false the CSV ms column is zeroed
    std::string output_dir = ".";

    /// The cycle budget actually used: explicit m, or the model formula
    /// clamped to >= 3.
    std::uint32_t resolved_m() const {
        if (m) {
            if (*m < 3) throw config_error("experiment: m must be >= 3");
            return *m;
        }
        switch (model.kind) {
            case model_kind::ldag:
                return detail::clamp_m(m_epsilon_ldag(model.l, epsilon));
            case model_kind::cooper_frieze:
                return detail::clamp_m(m_epsilon_cf(model.c, epsilon));
            case model_kind::cf_process:
                return detail::clamp_m(m_epsilon_cf(model.c_alpha(), epsilon));
            case model_kind::urrt:
            case model_kind::inhom_er:
                throw config_error("experiment: m=\"auto\" needs a model with a budget formula; '" +
                                   to_string(model.kind) + "' requires an explicit m");
        }
        throw std::logic_error("resolved_m: unknown model kind");
    }

    void validate() const {
        model.validate();
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw config_error("experiment: epsilon must lie in (0, 1)");
        if (replications == 0) throw config_error("experiment: replications must be >= 1");
        (void)resolved_m();
    }
};

inline experiment_config experiment_config_from_json(const nlohmann::json& j) {
    experiment_config cfg;
    try {
        cfg.model = j.at("model").get<model_spec>();
        cfg.epsilon = j.at("epsilon").get<double>();
        const auto& m = j.at("m");
        if (m.is_string()) {
            if (m.get<std::string>() != "auto")
                throw config_error("experiment: m must be an integer or \"auto\"");
        } else {
            cfg.m = m.get<std::uint32_t>();
        }
        cfg.replications = j.at("replications").get<std::uint32_t>();
        cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("tolerances"))
            cfg.tolerances.se_mult = j.at("tolerances").value("se_mult", 3.0);
        if (j.contains("guards")) {
            cfg.guards.oracle_max_n = j.at("guards").value("oracle_max_n", cfg.guards.oracle_max_n);
            cfg.guards.oracle_max_m = j.at("guards").value("oracle_max_m", cfg.guards.oracle_max_m);
        }
        cfg.oracle_cross_check = j.value("oracle_cross_check", false);
        cfg.record_timing = j.value("record_timing", false);
        cfg.output_dir = j.value("output_dir", std::string("."));
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline experiment_config load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("experiment config '" + path + "': " + e.what());
    }
    return experiment_config_from_json(j);
}

/// Canonical JSON of the statistically relevant config fields (output
/// location and timing flags excluded), used for the output-file hash.
inline nlohmann::json experiment_config_canonical_json(const experiment_config& cfg) {
    nlohmann::json j;
    j["model"] = cfg.model;
    j["epsilon"] = cfg.epsilon;
    if (cfg.m)
        j["m"] = *cfg.m;
    else
        j["m"] = "auto";
    j["replications"] = cfg.replications;
    j["master_seed"] = cfg.master_seed;
    j["tolerances"] = {{"se_mult", cfg.tolerances.se_mult}};
    return j;
}

inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

inline std::string config_hash_hex(const experiment_config& cfg) {
    return fnv1a_hex(experiment_config_canonical_json(cfg).dump());
}

struct containment_row {
    std::uint32_t rep = 0;        // replication index
    std::uint64_t seed = 0;       // stream index used (equals rep)
    vertex_id n = 0;              // vertex count of the sampled graph
    std::uint32_t m = 0;
    bool contained = false;       // vertex 1 in S_m
    std::uint32_t set_size = 0;   // |S_m|
    std::int64_t ms = 0;          // wall time of this replication
};

struct experiment_result {
    experiment_config config;
    std::vector<containment_row> rows;
    double containment_rate = 0.0;
    interval wilson;
    std::uint32_t size_min = 0;
    std::uint32_t size_max = 0;
    double size_mean = 0.0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> size_histogram; // (size, count)
    std::int64_t total_ms = 0;
};

/// Run the containment experiment. Replications are distributed over
/// `threads` workers; every replication draws from its own stream, so the
/// rows are identical for any worker count.
inline experiment_result run_containment(const experiment_config& cfg, unsigned threads = 1) {
    cfg.validate();
    const std::uint32_t m = cfg.resolved_m();
    const auto t_start = std::chrono::steady_clock::now();

    std::vector<containment_row> rows(cfg.replications);
    auto run_rep = [&](std::uint32_t rep) {
        const auto r_start = std::chrono::steady_clock::now();
        const rng_seed seed{cfg.master_seed, rep};
        const graph g = generate(cfg.model, seed);
        const anchor_set s = compute_anchor_set(g, m);
        if (cfg.oracle_cross_check && g.vertex_count() <= cfg.guards.oracle_max_n &&
            m <= cfg.guards.oracle_max_m) {
            oracle_guard guard;
            guard.max_n = cfg.guards.oracle_max_n;
            guard.max_m = cfg.guards.oracle_max_m;
            const anchor_set ref = brute_force_anchor_set(g, m, guard);
            if (ref.members != s.members)
                throw std::logic_error("containment: detector disagrees with oracle at replication " +
                                       std::to_string(rep));
        }
        containment_row row;
        row.rep = rep;
        row.seed = rep;
        row.n = g.vertex_count();
        row.m = m;
        row.contained = std::binary_search(s.members.begin(), s.members.end(), vertex_id{1});
        row.set_size = static_cast<std::uint32_t>(s.members.size());
        row.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - r_start)
                     .count();
        rows[rep] = row;
    };

    threads = std::max(1u, threads);
    if (threads == 1 || cfg.replications < 2) {
        for (std::uint32_t rep = 0; rep < cfg.replications; ++rep) run_rep(rep);
    } else {
        std::atomic<std::uint32_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                while (true) {
                    const std::uint32_t rep = next.fetch_add(1);
                    if (rep >= cfg.replications) break;
                    run_rep(rep);
                }
            });
        for (auto& th : pool) th.join();
    }

    experiment_result res;
    res.config = cfg;
    res.rows = std::move(rows);

    std::uint64_t contained = 0;
    std::map<std::uint32_t, std::uint32_t> hist;
    double size_sum = 0.0;
    res.size_min = res.rows.front().set_size;
    res.size_max = res.rows.front().set_size;
    for (const auto& row : res.rows) {
        contained += row.contained ? 1 : 0;
        ++hist[row.set_size];
        size_sum += row.set_size;
        res.size_min = std::min(res.size_min, row.set_size);
        res.size_max = std::max(res.size_max, row.set_size);
    }
    res.containment_rate = static_cast<double>(contained) / cfg.replications;
    res.wilson = wilson_interval(contained, cfg.replications);
    res.size_mean = size_sum / cfg.replications;
    res.size_histogram.assign(hist.begin(), hist.end());
    res.total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
    return res;
}

struct emitted_paths {
    std::string csv;
    std::string json;
};

/// Write the per-replication CSV and the JSON summary into output_dir.
/// File names embed the config hash. Overwrites idempotently. The ms
/// column is zeroed unless the config asked for timing, keeping the CSV
/// byte-identical across runs and worker counts; real timing lives in the
/// JSON summary's total_ms.
inline emitted_paths emit_containment(const experiment_result& res, const std::string& output_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + output_dir + "': " + ec.message());

    const std::string hash = config_hash_hex(res.config);
    emitted_paths paths;
    paths.csv = (fs::path(output_dir) / ("containment_" + hash + ".csv")).string();
    paths.json = (fs::path(output_dir) / ("containment_" + hash + ".json")).string();

    {
        std::ofstream csv(paths.csv, std::ios::binary | std::ios::trunc);
        if (!csv) throw io_error("cannot open '" + paths.csv + "' for writing");
        csv << "rep,seed,n,m,contained,set_size,ms\n";
        for (const auto& row : res.rows)
            csv << row.rep << ',' << row.seed << ',' << row.n << ',' << row.m << ','
                << (row.contained ? 1 : 0) << ',' << row.set_size << ','
                << (res.config.record_timing ? row.ms : 0) << '\n';
        if (!csv) throw io_error("write failed for '" + paths.csv + "'");
    }
    {
        nlohmann::json j;
        j["config"] = experiment_config_canonical_json(res.config);
        j["config_hash"] = hash;
        j["replications"] = res.config.replications;
        j["containment_rate"] = res.containment_rate;
        j["wilson_ci"] = {res.wilson.lo, res.wilson.hi};
        j["size_stats"] = {
            {"min", res.size_min},
            {"max", res.size_max},
            {"mean", res.size_mean},
            {"histogram", res.size_histogram},
        };
        j["total_ms"] = res.total_ms;
        std::ofstream out(paths.json, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + paths.json + "' for writing");
        out << j.dump(2) << '\n';
        if (!out) throw io_error("write failed for '" + paths.json + "'");
    }
    return paths;
}

/// One named statistical check: an empirical statistic against a
/// theoretical target or bracket, passing or failing only by the
/// pre-registered tolerance rule.
struct diagnostic_report {
    std::string check;
    std::uint64_t sample_size = 0;
    double empirical = 0.0;
    double target_lo = 0.0;
    double target_hi = 0.0;
    double se = 0.0;
    double se_mult = 0.0;
    bool pass = false;
    nlohmann::json extra;
};

inline void to_json(nlohmann::json& j, const diagnostic_report& r) {
    j = nlohmann::json{
        {"check", r.check},       {"sample_size", r.sample_size},
        {"empirical", r.empirical}, {"target_lo", r.target_lo},
        {"target_hi", r.target_hi}, {"se", r.se},
        {"se_mult", r.se_mult},   {"pass", r.pass},
    };
    if (!r.extra.is_null()) j["extra"] = r.extra;
}

/// Frequency of edge {1, i} over seeded recursive trees against the exact
/// marginal 1/(i-1), two-sided at se_mult standard errors.
inline diagnostic_report check_edge_marginal(vertex_id n, vertex_id i, std::uint64_t replications,
                                             std::uint64_t master_seed, double se_mult = 4.0) {
    if (n < 2 || i < 2 || i > n)
        throw std::invalid_argument("check_edge_marginal: require 2 <= i <= n");
    if (replications == 0) throw std::invalid_argument("check_edge_marginal: replications >= 1");

    std::uint64_t hits = 0;
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
        rng_stream rng(rng_seed{master_seed, rep});
        const auto parents = urrt_parents(n, rng);
        hits += parents[i] == 1 ? 1 : 0;
    }
    const double target = 1.0 / (static_cast<double>(i) - 1.0);
    diagnostic_report rep;
    rep.check = "edge_marginal";
    rep.sample_size = replications;
    rep.empirical = static_cast<double>(hits) / static_cast<double>(replications);
    rep.se = proportion_se(target, replications);
    rep.se_mult = se_mult;
    rep.target_lo = target - se_mult * rep.se;
    rep.target_hi = target + se_mult * rep.se;
    rep.pass = rep.empirical >= rep.target_lo && rep.empirical <= rep.target_hi;
    rep.extra = {{"n", n}, {"i", i}, {"target", target}};
    return rep;
}

/// Joint presence frequency of a fixed edge pattern in seeded l-dags,
/// compared one-sidedly against the independent-edge product bound
/// prod min(1, l/(max(a,b)-1)): pass iff empirical + se_mult * SE <= bound.
inline diagnostic_report check_domination(std::uint32_t l, vertex_id n,
                                          std::vector<std::pair<vertex_id, vertex_id>> pattern,
                                          std::uint64_t replications, std::uint64_t master_seed,
                                          double se_mult = 3.0) {
    if (l == 0) throw std::invalid_argument("check_domination: l must be >= 1");
    if (n < 2) throw std::invalid_argument("check_domination: n must be >= 2");
    if (replications == 0) throw std::invalid_argument("check_domination: replications >= 1");
    for (auto& [a, b] : pattern) {
        if (a == b) throw std::invalid_argument("check_domination: self-pair in pattern");
        if (a == 0 || b == 0 || a > n || b > n)
            throw std::invalid_argument("check_domination: pattern endpoint out of range");
        if (a > b) std::swap(a, b);
    }
    {
        auto sorted = pattern;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("check_domination: duplicate pair in pattern");
    }

    double bound = 1.0;
    for (const auto& [a, b] : pattern) bound *= inhom_edge_probability(a, b, l);

    std::uint64_t hits = 0;
    std::vector<std::vector<vertex_id>> trees(l);
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
        rng_stream rng(rng_seed{master_seed, rep});
        for (std::uint32_t tree = 0; tree < l; ++tree) trees[tree] = urrt_parents(n, rng);
        bool all_present = true;
        for (const auto& [a, b] : pattern) {
            // Edge {a, b} with a < b is present iff b attached to a in some tree.
            bool present = false;
            for (std::uint32_t tree = 0; tree < l && !present; ++tree)
                present = trees[tree][b] == a;
            if (!present) {
                all_present = false;
                break;
            }
        }
        hits += all_present ? 1 : 0;
    }

    diagnostic_report rep;
    rep.check = "domination";
    rep.sample_size = replications;
    rep.empirical = static_cast<double>(hits) / static_cast<double>(replications);
    rep.se = proportion_se(rep.empirical, replications);
    rep.se_mult = se_mult;
    rep.target_lo = 0.0;
    rep.target_hi = bound;
    rep.pass = rep.empirical + se_mult * rep.se <= bound;
    nlohmann::json pat = nlohmann::json::array();
    for (const auto& [a, b] : pattern) pat.push_back({a, b});
    rep.extra = {{"l", l}, {"n", n}, {"pattern", pat}, {"product_bound", bound}};
    return rep;
}

namespace detail {

/// X_k for one replication: edges {1, i}, i <= k, present in the second
/// tree but absent from the first. Only the parent draws matter, so the
/// two trees are sampled as parent arrays.
inline std::uint32_t sample_xk(vertex_id k, rng_stream& rng) {
    std::uint32_t x = 0;
    std::vector<vertex_id> first = urrt_parents(k, rng);
    std::vector<vertex_id> second = urrt_parents(k, rng);
    for (vertex_id i = 2; i <= k; ++i)
        x += (second[i] == 1 && first[i] != 1) ? 1 : 0;
    return x;
}

} // namespace detail

/// Mean of X_k over seeded tree pairs against the bracket
/// [ln(k) - 2, ln(k) - 1], widened by se_mult standard errors of the mean.
inline diagnostic_report check_xk_bracket(vertex_id k, std::uint64_t replications,
                                          std::uint64_t master_seed, double se_mult = 3.0) {
    if (k < 3) throw std::invalid_argument("check_xk_bracket: k must be >= 3");
    if (replications == 0) throw std::invalid_argument("check_xk_bracket: replications >= 1");

    std::vector<double> xs(replications);
    std::uint32_t x_min = 0xFFFFFFFFu, x_max = 0;
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
        rng_stream rng(rng_seed{master_seed, rep});
        const std::uint32_t x = detail::sample_xk(k, rng);
        xs[rep] = x;
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    const sample_summary s = summarize(xs);

    diagnostic_report rep;
    rep.check = "xk_bracket";
    rep.sample_size = replications;
    rep.empirical = s.mean;
    rep.se = s.se_mean;
    rep.se_mult = se_mult;
    rep.target_lo = std::log(static_cast<double>(k)) - 2.0;
    rep.target_hi = std::log(static_cast<double>(k)) - 1.0;
    rep.pass = s.mean >= rep.target_lo - se_mult * s.se_mean &&
               s.mean <= rep.target_hi + se_mult * s.se_mean;
    rep.extra = {{"k", k}, {"x_min", x_min}, {"x_max", x_max}, {"stddev", s.stddev}};
    return rep;
}

/// k chosen so that two root edges survive with probability >= 1 - eps/4.
inline vertex_id k_epsilon(double eps) {
    detail::check_epsilon(eps);
    return static_cast<vertex_id>(std::ceil(16.0 * std::exp(5.0) / (eps * eps)));
}

/// P{X_{k_eps} >= 2} against its lower bound 1 - eps/4, one-sided at
/// se_mult standard errors.
inline diagnostic_report check_xk_tail(double eps, std::uint64_t replications,
                                       std::uint64_t master_seed, double se_mult = 3.0) {
    if (replications == 0) throw std::invalid_argument("check_xk_tail: replications >= 1");
    const vertex_id k = k_epsilon(eps);

    std::uint64_t hits = 0;
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
        rng_stream rng(rng_seed{master_seed, rep});
        hits += detail::sample_xk(k, rng) >= 2 ? 1 : 0;
    }

    diagnostic_report rep;
    rep.check = "xk_tail";
    rep.sample_size = replications;
    rep.empirical = static_cast<double>(hits) / static_cast<double>(replications);
    rep.se = proportion_se(rep.empirical, replications);
    rep.se_mult = se_mult;
    rep.target_lo = 1.0 - eps / 4.0;
    rep.target_hi = 1.0;
    rep.pass = rep.empirical >= rep.target_lo - se_mult * rep.se;
    rep.extra = {{"epsilon", eps}, {"k_epsilon", k}};
    return rep;
}

/// Fraction of seeded recursive trees on [k] whose height (root-to-deepest
/// edge count, rooted at vertex 1) stays within e ln(k) + e ln(4e/eps),
/// against the lower bound 1 - eps/4, one-sided at se_mult standard errors.
inline diagnostic_report check_tree_height(vertex_id k, double eps, std::uint64_t replications,
                                           std::uint64_t master_seed, double se_mult = 3.0) {
    if (k < 2) throw std::invalid_argument("check_tree_height: k must be >= 2");
    detail::check_epsilon(eps);
    if (replications == 0) throw std::invalid_argument("check_tree_height: replications >= 1");

    const double e = std::exp(1.0);
    const double bound = e * std::log(static_cast<double>(k)) + e * std::log(4.0 * e / eps);

    std::uint64_t within = 0;
    std::uint32_t height_min = 0xFFFFFFFFu, height_max = 0;
    std::vector<std::uint32_t> depth(static_cast<std::size_t>(k) + 1, 0);
    for (std::uint64_t rep = 0; rep < replications; ++rep) {
        rng_stream rng(rng_seed{master_seed, rep});
        const auto parents = urrt_parents(k, rng);
        std::uint32_t height = 0;
        for (vertex_id i = 2; i <= k; ++i) {
            depth[i] = depth[parents[i]] + 1; // parents precede children
            height = std::max(height, depth[i]);
        }
        within += static_cast<double>(height) <= bound ? 1 : 0;
        height_min = std::min(height_min, height);
        height_max = std::max(height_max, height);
    }

    diagnostic_report rep;
    rep.check = "tree_height";
    rep.sample_size = replications;
    rep.empirical = static_cast<double>(within) / static_cast<double>(replications);
    rep.se = proportion_se(rep.empirical, replications);
    rep.se_mult = se_mult;
    rep.target_lo = 1.0 - eps / 4.0;
    rep.target_hi = 1.0;
    rep.pass = rep.empirical >= rep.target_lo - se_mult * rep.se;
    rep.extra = {{"k", k},
                 {"epsilon", eps},
                 {"height_bound", bound},
                 {"height_min", height_min},
                 {"height_max", height_max}};
    return rep;
}

/// Write a diagnostic report as one JSON object under output_dir.
inline std::string emit_diagnostic(const diagnostic_report& rep, const std::string& output_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + output_dir + "': " + ec.message());
    const std::string path = (fs::path(output_dir) / ("diagnostic_" + rep.check + ".json")).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << nlohmann::json(rep).dump(2) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
    return path;
}

} // namespace netarch
