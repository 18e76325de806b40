#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "netarch/graph.hpp"

namespace netarch {

enum class model_kind {
    urrt,           // uniform random recursive tree on n vertices
    ldag,           // union of l independent recursive trees
    cooper_frieze,  // recursive tree + independent inhomogeneous ER layer
    cf_process,     // the sequential Bernoulli(alpha) growth process
    inhom_er,       // inhomogeneous ER layer alone, edge prob min(c/(max-1), 1)
};

inline std::string to_string(model_kind kind) {
    switch (kind) {
        case model_kind::urrt: return "urrt";
        case model_kind::ldag: return "ldag";
        case model_kind::cooper_frieze: return "cf";
        case model_kind::cf_process: return "cf-process";
        case model_kind::inhom_er: return "inhom-er";
    }
    throw std::invalid_argument("to_string: unknown model kind");
}

inline model_kind model_kind_from_string(const std::string& name) {
    if (name == "urrt") return model_kind::urrt;
    if (name == "ldag") return model_kind::ldag;
    if (name == "cf") return model_kind::cooper_frieze;
    if (name == "cf-process") return model_kind::cf_process;
    if (name == "inhom-er") return model_kind::inhom_er;
    throw std::invalid_argument("unknown model variant: " + name);
}

/// Which random-graph model to sample, with its parameters. Only the fields
/// relevant to `kind` are meaningful.
struct model_spec {
    model_kind kind = model_kind::urrt;
    vertex_id n = 0;          // urrt, ldag, cf, inhom-er
    std::uint32_t steps = 0;  // cf-process: number of growth steps T
    std::uint32_t l = 1;      // ldag
    double c = 0.0;           // cf, inhom-er
    double alpha = 0.0;       // cf-process

    static model_spec make_urrt(vertex_id n) { return {model_kind::urrt, n, 0, 1, 0.0, 0.0}; }
    static model_spec make_ldag(vertex_id n, std::uint32_t l) { return {model_kind::ldag, n, 0, l, 0.0, 0.0}; }
    static model_spec make_cooper_frieze(vertex_id n, double c) { return {model_kind::cooper_frieze, n, 0, 1, c, 0.0}; }
    static model_spec make_cf_process(double alpha, std::uint32_t steps) { return {model_kind::cf_process, 0, steps, 1, 0.0, alpha}; }
    static model_spec make_inhom_er(vertex_id n, double c) { return {model_kind::inhom_er, n, 0, 1, c, 0.0}; }

    void validate() const {
        switch (kind) {
            case model_kind::urrt:
                if (n == 0) throw std::invalid_argument("urrt: n must be >= 1");
                break;
            case model_kind::ldag:
                if (n == 0) throw std::invalid_argument("ldag: n must be >= 1");
                if (l == 0) throw std::invalid_argument("ldag: l must be >= 1");
                break;
            case model_kind::cooper_frieze:
                if (n == 0) throw std::invalid_argument("cf: n must be >= 1");
                if (!(c > 0.0)) throw std::invalid_argument("cf: c must be > 0");
                break;
            case model_kind::cf_process:
                if (steps == 0) throw std::invalid_argument("cf-process: steps must be >= 1");
                if (!(alpha > 0.0 && alpha < 1.0))
                    throw std::invalid_argument("cf-process: alpha must be in (0, 1)");
                break;
            case model_kind::inhom_er:
                if (n == 0) throw std::invalid_argument("inhom-er: n must be >= 1");
                if (!(c > 0.0)) throw std::invalid_argument("inhom-er: c must be > 0");
                break;
        }
    }

    /// The process with parameter alpha concentrates on per-edge rate
    /// c_alpha = 2 / (1 - alpha); that is the c used wherever a rate is
    /// needed for a cf-process spec.
    double c_alpha() const {
        if (kind != model_kind::cf_process)
            throw std::logic_error("c_alpha is defined for cf-process specs only");
        return 2.0 / (1.0 - alpha);
    }

    /// Effective edge rate for models that have one.
    double effective_c() const {
        switch (kind) {
            case model_kind::cooper_frieze:
            case model_kind::inhom_er: return c;
            case model_kind::cf_process: return c_alpha();
            default:
                throw std::logic_error("effective_c: model has no rate parameter");
        }
    }

    friend bool operator==(const model_spec&, const model_spec&) = default;
};

inline void to_json(nlohmann::json& j, const model_spec& spec) {
    j = nlohmann::json{{"variant", to_string(spec.kind)}};
    switch (spec.kind) {
        case model_kind::urrt:
            j["n"] = spec.n;
            break;
        case model_kind::ldag:
            j["n"] = spec.n;
            j["l"] = spec.l;
            break;
        case model_kind::cooper_frieze:
        case model_kind::inhom_er:
            j["n"] = spec.n;
            j["c"] = spec.c;
            break;
        case model_kind::cf_process:
            j["T"] = spec.steps;
            j["alpha"] = spec.alpha;
            break;
    }
}

inline void from_json(const nlohmann::json& j, model_spec& spec) {
    spec = model_spec{};
    spec.kind = model_kind_from_string(j.at("variant").get<std::string>());
    switch (spec.kind) {
        case model_kind::urrt:
            spec.n = j.at("n").get<vertex_id>();
            break;
        case model_kind::ldag:
            spec.n = j.at("n").get<vertex_id>();
            spec.l = j.at("l").get<std::uint32_t>();
            break;
        case model_kind::cooper_frieze:
        case model_kind::inhom_er:
            spec.n = j.at("n").get<vertex_id>();
            spec.c = j.at("c").get<double>();
            break;
        case model_kind::cf_process:
            spec.steps = j.at("T").get<std::uint32_t>();
            spec.alpha = j.at("alpha").get<double>();
            break;
    }
    spec.validate();
}

} // namespace netarch
