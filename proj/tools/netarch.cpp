// Command-line front end: graph generation, anchor detection, root
// estimation, Monte Carlo experiments, the brute-force oracle, and
// statistical diagnostics. Exit codes: 0 success, 1 I/O failure,
// 2 usage or validation error, 3 resource guard tripped.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netarch/detect.hpp"
#include "netarch/estimator.hpp"
#include "netarch/experiments.hpp"
#include "netarch/generators.hpp"
#include "netarch/graph.hpp"
#include "netarch/models.hpp"
#include "netarch/oracle.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_io = 1;
constexpr int exit_usage = 2;
constexpr int exit_guard = 3;

netarch::graph read_graph_arg(const std::string& in) {
    if (in == "-") return netarch::read_edge_list(std::cin);
    std::ifstream file(in);
    if (!file) throw netarch::io_error("cannot open input file: " + in);
    return netarch::read_edge_list(file);
}

struct generate_args {
    std::string model;
    std::uint32_t n = 0;
    std::uint32_t steps = 0;
    std::uint32_t l = 0;
    double c = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string out;
};

netarch::model_spec build_model(const std::string& name, std::uint32_t n, std::uint32_t steps,
                                std::uint32_t l, double c, double alpha) {
    const netarch::model_kind kind = netarch::model_kind_from_string(name);
    netarch::model_spec spec;
    switch (kind) {
        case netarch::model_kind::urrt:
            spec = netarch::model_spec::make_urrt(n);
            break;
        case netarch::model_kind::ldag:
            spec = netarch::model_spec::make_ldag(n, l);
            break;
        case netarch::model_kind::cooper_frieze:
            spec = netarch::model_spec::make_cooper_frieze(n, c);
            break;
        case netarch::model_kind::cf_process:
            spec = netarch::model_spec::make_cf_process(alpha, steps);
            break;
        case netarch::model_kind::inhom_er:
            spec = netarch::model_spec::make_inhom_er(n, c);
            break;
    }
    spec.validate();
    return spec;
}

int run_generate(const generate_args& args) {
    const netarch::model_spec spec =
        build_model(args.model, args.n, args.steps, args.l, args.c, args.alpha);
    const netarch::graph g = netarch::generate(spec, {args.seed, args.stream});

    const json summary = {{"n", g.vertex_count()}, {"edges", g.edge_count()}, {"seed", args.seed}};
    if (args.out == "-") {
        // Raw edge list on stdout for pipelines; the summary moves to stderr.
        netarch::write_edge_list(g, std::cout);
        std::cerr << summary.dump() << '\n';
    } else {
        std::ofstream file(args.out, std::ios::binary | std::ios::trunc);
        if (!file) throw netarch::io_error("cannot open output file: " + args.out);
        netarch::write_edge_list(g, file);
        if (!file) throw netarch::io_error("write failed: " + args.out);
        std::cout << summary.dump() << '\n';
    }
    return exit_ok;
}

int run_anchors(const std::string& in, std::uint32_t m, std::optional<std::uint32_t> vertex,
                bool with_witness) {
    const netarch::graph g = read_graph_arg(in);
    if (!vertex) {
        if (with_witness)
            throw std::invalid_argument("--witness requires --vertex");
        const netarch::anchor_set s = netarch::compute_anchor_set(g, m);
        std::cout << json{{"m", m}, {"anchors", s.members}}.dump() << '\n';
        return exit_ok;
    }
    const auto w = netarch::find_witness(g, *vertex, m);
    if (with_witness) {
        std::cout << (w ? json(*w) : json(nullptr)).dump() << '\n';
    } else {
        std::cout << json{{"m", m}, {"vertex", *vertex}, {"in_set", w.has_value()}}.dump() << '\n';
    }
    return exit_ok;
}

int run_estimate(const std::string& in, const std::string& model, std::uint32_t steps,
                 std::uint32_t l, double c, double alpha, double epsilon,
                 std::optional<std::uint32_t> m) {
    const netarch::graph g = read_graph_arg(in);
    const netarch::model_spec spec =
        build_model(model, g.vertex_count(), steps, l, c, alpha);
    const netarch::confidence_set cs = netarch::estimate_root(g, spec, epsilon, m);
    std::cout << json(cs).dump() << '\n';
    return exit_ok;
}

int run_experiment(const std::string& config_path, unsigned threads) {
    const netarch::experiment_config cfg = netarch::load_experiment_config(config_path);
    const netarch::experiment_result res = netarch::run_containment(cfg, threads);
    const netarch::emitted_paths paths = netarch::emit_containment(res, cfg.output_dir);
    std::cout << json{{"csv", paths.csv},
                      {"json", paths.json},
                      {"config_hash", netarch::config_hash_hex(cfg)},
                      {"containment_rate", res.containment_rate}}
                     .dump()
              << '\n';
    return exit_ok;
}

int run_oracle(const std::string& in, std::uint32_t m, std::uint32_t max_n, std::uint32_t max_m) {
    const netarch::graph g = read_graph_arg(in);
    netarch::oracle_guard guard;
    guard.max_n = max_n;
    guard.max_m = max_m;
    const netarch::anchor_set s = netarch::brute_force_anchor_set(g, m, guard);
    std::cout << json{{"m", m}, {"anchors", s.members}}.dump() << '\n';
    return exit_ok;
}

std::vector<std::pair<netarch::vertex_id, netarch::vertex_id>>
parse_pattern(const std::string& text) {
    std::vector<std::pair<netarch::vertex_id, netarch::vertex_id>> pattern;
    if (text.empty()) return pattern;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos)
            throw std::invalid_argument("--pattern items must look like \"a-b\"");
        try {
            const unsigned long a = std::stoul(item.substr(0, dash));
            const unsigned long b = std::stoul(item.substr(dash + 1));
            pattern.emplace_back(static_cast<netarch::vertex_id>(a),
                                 static_cast<netarch::vertex_id>(b));
        } catch (const std::exception&) {
            throw std::invalid_argument("--pattern items must look like \"a-b\"");
        }
    }
    return pattern;
}

int run_diagnose(const std::string& check, std::uint32_t n, std::uint32_t i, std::uint32_t k,
                 std::uint32_t l, double epsilon, const std::string& pattern_text,
                 std::uint64_t reps, std::uint64_t seed, double se_mult,
                 const std::string& out_dir) {
    netarch::diagnostic_report report;
    if (check == "edge-marginal") {
        report = netarch::check_edge_marginal(n, i, reps, seed, se_mult > 0 ? se_mult : 4.0);
    } else if (check == "domination") {
        report = netarch::check_domination(l, n, parse_pattern(pattern_text), reps, seed,
                                           se_mult > 0 ? se_mult : 3.0);
    } else if (check == "xk") {
        report = netarch::check_xk_bracket(k, reps, seed, se_mult > 0 ? se_mult : 3.0);
    } else if (check == "xk-tail") {
        report = netarch::check_xk_tail(epsilon, reps, seed, se_mult > 0 ? se_mult : 3.0);
    } else if (check == "height") {
        report = netarch::check_tree_height(k, epsilon, reps, seed, se_mult > 0 ? se_mult : 3.0);
    } else {
        throw std::invalid_argument("unknown --check: " + check);
    }
    if (!out_dir.empty()) netarch::emit_diagnostic(report, out_dir);
    std::cout << json(report).dump() << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Root-vertex confidence sets in growing random networks via "
                 "double-cycle anchors"};
    app.require_subcommand(1);

    // generate
    generate_args gen;
    auto* cmd_gen = app.add_subcommand("generate", "Sample a random graph and write its edge list");
    cmd_gen->add_option("--model", gen.model, "Model: urrt | ldag | cf | cf-process | inhom-er")
        ->required();
    cmd_gen->add_option("--n", gen.n, "Vertex count (urrt, ldag, cf, inhom-er)");
    cmd_gen->add_option("--steps", gen.steps, "Growth steps T (cf-process)");
    cmd_gen->add_option("--l", gen.l, "Number of trees in the union (ldag)");
    cmd_gen->add_option("--c", gen.c, "Edge rate c (cf, inhom-er)");
    cmd_gen->add_option("--alpha", gen.alpha, "Edge-step probability (cf-process)");
    cmd_gen->add_option("--seed", gen.seed, "Master seed (default 0)");
    cmd_gen->add_option("--stream", gen.stream, "Stream index (default 0)");
    cmd_gen->add_option("--out", gen.out, "Output path, or - for stdout")->required();

    // anchors
    std::string anchors_in;
    std::uint32_t anchors_m = 0;
    std::uint32_t anchors_vertex = 0;
    bool anchors_witness = false;
    auto* cmd_anchors = app.add_subcommand("anchors", "Compute the anchor set S_m of a graph");
    cmd_anchors->add_option("--in", anchors_in, "Edge-list path, or - for stdin")->required();
    cmd_anchors->add_option("--m", anchors_m, "Maximum cycle length searched (>= 3)")->required();
    auto* vertex_opt =
        cmd_anchors->add_option("--vertex", anchors_vertex, "Probe a single vertex instead");
    cmd_anchors->add_flag("--witness", anchors_witness,
                          "With --vertex: print the minimal double-cycle witness");

    // estimate
    std::string est_in, est_model;
    std::uint32_t est_steps = 1, est_l = 0;
    double est_c = 0.0, est_alpha = 0.0, est_epsilon = 0.0;
    std::uint32_t est_m = 0;
    auto* cmd_est = app.add_subcommand("estimate", "Root confidence set for an observed graph");
    cmd_est->add_option("--in", est_in, "Edge-list path, or - for stdin")->required();
    cmd_est->add_option("--model", est_model, "Model: urrt | ldag | cf | cf-process | inhom-er")
        ->required();
    cmd_est->add_option("--l", est_l, "Number of trees (ldag)");
    cmd_est->add_option("--c", est_c, "Edge rate c (cf, inhom-er)");
    cmd_est->add_option("--alpha", est_alpha, "Edge-step probability (cf-process)");
    cmd_est->add_option("--steps", est_steps,
                        "Growth steps T (cf-process metadata; not used by the estimate)");
    cmd_est->add_option("--epsilon", est_epsilon, "Error budget in (0, 1)")->required();
    auto* est_m_opt =
        cmd_est->add_option("--m", est_m, "Cycle budget override (required for urrt, inhom-er)");

    // experiment
    std::string exp_config;
    unsigned exp_threads = 1;
    auto* cmd_exp = app.add_subcommand("experiment", "Run a seeded containment experiment");
    cmd_exp->add_option("--config", exp_config, "JSON config path")->required();
    cmd_exp->add_option("--threads", exp_threads, "Worker threads (default 1)");

    // oracle
    std::string oracle_in;
    std::uint32_t oracle_m = 0, oracle_max_n = 14, oracle_max_m = 8;
    auto* cmd_oracle =
        app.add_subcommand("oracle", "Brute-force anchor set (small graphs only)");
    cmd_oracle->add_option("--in", oracle_in, "Edge-list path, or - for stdin")->required();
    cmd_oracle->add_option("--m", oracle_m, "Maximum cycle length searched (>= 3)")->required();
    cmd_oracle->add_option("--max-n", oracle_max_n, "Size guard on the vertex count (default 14)");
    cmd_oracle->add_option("--max-m", oracle_max_m, "Size guard on m (default 8)");

    // diagnose
    std::string diag_check, diag_pattern, diag_out;
    std::uint32_t diag_n = 0, diag_i = 0, diag_k = 0, diag_l = 2;
    double diag_epsilon = 0.0, diag_se_mult = 0.0;
    std::uint64_t diag_reps = 100000, diag_seed = 0;
    auto* cmd_diag = app.add_subcommand("diagnose", "Statistical checks of the samplers");
    cmd_diag
        ->add_option("--check", diag_check,
                     "Check: edge-marginal | domination | xk | xk-tail | height")
        ->required();
    cmd_diag->add_option("--n", diag_n, "Vertex count (edge-marginal, domination)");
    cmd_diag->add_option("--i", diag_i, "Edge endpoint i for edge {1, i} (edge-marginal)");
    cmd_diag->add_option("--k", diag_k, "Tree size k (xk, height)");
    cmd_diag->add_option("--l", diag_l, "Number of trees (domination; default 2)");
    cmd_diag->add_option("--epsilon", diag_epsilon, "Error budget (xk-tail, height)");
    cmd_diag->add_option("--pattern", diag_pattern,
                         "Edge pattern \"a-b,c-d,...\" (domination)");
    cmd_diag->add_option("--reps", diag_reps, "Replications (default 100000)");
    cmd_diag->add_option("--seed", diag_seed, "Master seed (default 0)");
    cmd_diag->add_option("--se-mult", diag_se_mult,
                         "Tolerance in standard errors (default 3; 4 for edge-marginal)");
    cmd_diag->add_option("--out", diag_out, "Also write the report JSON into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (cmd_gen->parsed()) return run_generate(gen);
        if (cmd_anchors->parsed())
            return run_anchors(anchors_in, anchors_m,
                               vertex_opt->count() ? std::optional<std::uint32_t>(anchors_vertex)
                                                   : std::nullopt,
                               anchors_witness);
        if (cmd_est->parsed())
            return run_estimate(est_in, est_model, est_steps, est_l, est_c, est_alpha, est_epsilon,
                                est_m_opt->count() ? std::optional<std::uint32_t>(est_m)
                                                   : std::nullopt);
        if (cmd_exp->parsed()) return run_experiment(exp_config, exp_threads);
        if (cmd_oracle->parsed()) return run_oracle(oracle_in, oracle_m, oracle_max_n, oracle_max_m);
        if (cmd_diag->parsed())
            return run_diagnose(diag_check, diag_n, diag_i, diag_k, diag_l, diag_epsilon,
                                diag_pattern, diag_reps, diag_seed, diag_se_mult, diag_out);
        std::cerr << "netarch: no subcommand given\n";
        return exit_usage;
    } catch (const netarch::oracle_guard_error& e) {
        std::cerr << "netarch: " << e.what() << '\n';
        return exit_guard;
    } catch (const netarch::io_error& e) {
        std::cerr << "netarch: " << e.what() << '\n';
        return exit_io;
    } catch (const netarch::config_error& e) {
        std::cerr << "netarch: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "netarch: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::out_of_range& e) {
        std::cerr << "netarch: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "netarch: " << e.what() << '\n';
        return exit_io;
    }
}
