#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "netarch/detect.hpp"
#include "netarch/graph.hpp"
#include "netarch/models.hpp"

namespace netarch {

namespace detail {

/// Ceiling with a snap window around integers. The cycle-budget formulas
/// hit exact integers at natural parameter choices (e.g. epsilon = e^-1),
/// where a one-ulp excursion of log/exp would otherwise bump the ceiling.
inline long ceil_snapped(double x) {
    const double rounded = std::nearbyint(x);
    if (std::abs(x - rounded) < 1e-9) return static_cast<long>(rounded);
    return static_cast<long>(std::ceil(x));
}

inline void check_epsilon(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
}

} // namespace detail

/// Cycle-length budget for an l-dag: ceil((30/l) ln(1/eps)). May be below
/// the minimum searchable cycle length; estimate_root clamps and flags.
inline int m_epsilon_ldag(std::uint32_t l, double eps) {
    if (l == 0) throw std::invalid_argument("m_epsilon_ldag: l must be >= 1");
    detail::check_epsilon(eps);
    return static_cast<int>(detail::ceil_snapped((30.0 / l) * std::log(1.0 / eps)));
}

/// Cycle-length budget for a Cooper-Frieze graph with rate c:
/// ceil((9 + 12/c) ln(1/eps)).
inline int m_epsilon_cf(double c, double eps) {
    if (!(c > 0.0)) throw std::invalid_argument("m_epsilon_cf: c must be > 0");
    detail::check_epsilon(eps);
    return static_cast<int>(detail::ceil_snapped((9.0 + 12.0 / c) * std::log(1.0 / eps)));
}

/// ln(k!) by direct summation; no Stirling approximation error.
inline double log_factorial(std::uint32_t k) {
    double sum = 0.0;
    for (std::uint32_t i = 2; i <= k; ++i) sum += std::log(static_cast<double>(i));
    return sum;
}

namespace detail {

/// ln of the confidence-set size bound 8/eps * rate^(2m) * (2m)! at an
/// explicit cycle budget m.
inline double k_bound_log_at(std::uint32_t m, double rate, double eps) {
    return std::log(8.0 / eps) + 2.0 * m * std::log(rate) +
           log_factorial(2 * static_cast<std::uint32_t>(m));
}

inline std::uint32_t clamp_m(int m_raw) {
    return m_raw < 3 ? 3u : static_cast<std::uint32_t>(m_raw);
}

} // namespace detail

/// ln K for the l-dag guarantee, evaluated at the clamped budget
/// m = max(3, m_epsilon_ldag): ln(8/eps) + 2m ln(l) + ln((2m)!).
inline double k_bound_log_ldag(std::uint32_t l, double eps) {
    const std::uint32_t m = detail::clamp_m(m_epsilon_ldag(l, eps));
    return detail::k_bound_log_at(m, static_cast<double>(l), eps);
}

/// ln K for the Cooper-Frieze guarantee at m = max(3, m_epsilon_cf):
/// ln(8/eps) + 2m ln(c+1) + ln((2m)!); c+1 is the dominating edge rate of
/// the tree-plus-ER union.
inline double k_bound_log_cf(double c, double eps) {
    const std::uint32_t m = detail::clamp_m(m_epsilon_cf(c, eps));
    return detail::k_bound_log_at(m, c + 1.0, eps);
}

/// Root confidence set: the anchor-set members for the budget that was
/// used, plus the parameters that produced it. theoretical_k_log is the
/// natural log of the size bound K (the integer overflows any machine
/// word for small epsilon).
struct confidence_set {
    std::vector<vertex_id> members;
    std::uint32_t m_used = 0;
    bool clamped = false;
    double epsilon = 0.0;
    double theoretical_k_log = 0.0;
    model_spec model;
};

namespace detail {

/// Edge rate of the inhomogeneous ER graph dominating each model: l for
/// the l-dag family (1 for a plain recursive tree), c+1 for the
/// Cooper-Frieze family, and c+1 again for the bare inhomogeneous ER graph
/// (dominated a fortiori by the Cooper-Frieze rate).
inline double dominating_rate(const model_spec& model) {
    switch (model.kind) {
        case model_kind::urrt: return 1.0;
        case model_kind::ldag: return static_cast<double>(model.l);
        case model_kind::cooper_frieze: return model.c + 1.0;
        case model_kind::cf_process: return model.c_alpha() + 1.0;
        case model_kind::inhom_er: return model.c + 1.0;
    }
    throw std::logic_error("dominating_rate: unknown model kind");
}

} // namespace detail

/// Run the root-estimation procedure on an observed graph: pick the cycle
/// budget m (the model formula, clamped to >= 3, unless overridden), list
/// the anchor-set members, and attach the theoretical size bound. Reads
/// only graph structure, never labels, so the output is equivariant under
/// relabeling. Models without a budget formula (urrt, inhom-er) require
/// m_override.
inline confidence_set estimate_root(const graph& g, const model_spec& model, double eps,
                                    std::optional<std::uint32_t> m_override = std::nullopt,
                                    detect_options opts = {}) {
    detail::check_epsilon(eps);
    model.validate();

    confidence_set out;
    out.epsilon = eps;
    out.model = model;

    if (m_override) {
        if (*m_override < 3)
            throw std::invalid_argument("estimate_root: m override must be >= 3");
        out.m_used = *m_override;
        out.clamped = false;
    } else {
        int m_raw = 0;
        switch (model.kind) {
            case model_kind::ldag:
                m_raw = m_epsilon_ldag(model.l, eps);
                break;
            case model_kind::cooper_frieze:
                m_raw = m_epsilon_cf(model.c, eps);
                break;
            case model_kind::cf_process:
                m_raw = m_epsilon_cf(model.c_alpha(), eps);
                break;
            case model_kind::urrt:
            case model_kind::inhom_er:
                throw std::invalid_argument("estimate_root: model '" + to_string(model.kind) +
                                            "' has no cycle-budget formula; pass m explicitly");
        }
        out.m_used = detail::clamp_m(m_raw);
        out.clamped = m_raw < 3;
    }

    out.theoretical_k_log = detail::k_bound_log_at(out.m_used, detail::dominating_rate(model), eps);
    out.members = compute_anchor_set(g, out.m_used, opts).members;
    return out;
}

inline void to_json(nlohmann::json& j, const confidence_set& cs) {
    j = nlohmann::json{
        {"epsilon", cs.epsilon},
        {"m_used", cs.m_used},
        {"clamped", cs.clamped},
        {"members", cs.members},
        {"theoretical_k_log", cs.theoretical_k_log},
        {"model", cs.model},
    };
}

} // namespace netarch
