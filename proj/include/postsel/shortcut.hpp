#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "postsel/prepost.hpp"

namespace postsel {

/// Outcome predicted directly from weak values, without following the time
/// evolution.
struct ShortcutPrediction {
    Ket conditional_state;      // normalized internal state
    double normalizer;          // N = ||sum_k w_k U_k |psi>||^2
    double success_probability; // N * |<f|i>|^2
};

/// One transmission probability per selection path.
struct LossAssignment {
    std::vector<double> transmission;

    void validate(int paths) const {
        if (static_cast<int>(transmission.size()) != paths)
            fail(Errc::SpaceMismatch, "loss assignment does not cover every path");
        for (double t : transmission)
            if (!(t >= 0.0 && t <= 1.0))
                fail(Errc::InvalidTransmission, "transmission " + fmt_g12(t) + " outside [0, 1]");
    }
};

namespace detail {

/// Shared core: conditional state proportional to sum_k w_k sqrt(T_k) U_k |psi>.
/// With all T = 1 this is the per-path-unitary prediction; with all U = I the
/// squared normalizer reduces to |sum_k w_k sqrt(T_k)|^2.
inline ShortcutPrediction predict_weighted(const std::vector<Operator>& unitaries,
                                           const std::vector<double>& transmission,
                                           const PrePost& pp, const Ket& psi) {
    const int paths = pp.dim();
    if (static_cast<int>(unitaries.size()) != paths)
        fail(Errc::SpaceMismatch, "need one unitary per path (identity allowed)");
    auto w = path_weak_values(pp);
    Vector acc = Vector::Zero(psi.dim());
    for (int k = 0; k < paths; ++k) {
        if (unitaries[k].space() != psi.space())
            fail(Errc::SpaceMismatch, "unitary acts on the wrong internal space");
        acc += w[k] * std::sqrt(transmission[k]) * (unitaries[k].matrix() * psi.amps());
    }
    double n = acc.squaredNorm();
    if (n <= kPostselEps * kPostselEps)
        fail(Errc::PostselectionSingular,
             "completely destructive interference, N = " + fmt_g12(n));
    Ket cond(psi.space(), acc / std::sqrt(n));
    return ShortcutPrediction{std::move(cond), n, n * pp.success_probability()};
}

}  // namespace detail

/// Conditional internal state for one unitary per path:
///   |psi>  ->  (1/sqrt(N)) sum_k w_k U_k |psi>,
/// with success probability N |<f|i>|^2.
inline ShortcutPrediction predict_conditional(const std::vector<Operator>& unitaries,
                                              const PrePost& pp, const Ket& psi) {
    std::vector<double> ones(pp.dim(), 1.0);
    return detail::predict_weighted(unitaries, ones, pp, psi);
}

/// sum_k w_k sqrt(T_k): the surviving postselected amplitude relative to the
/// lossless case.
inline Cx loss_amplitude_factor(const std::vector<Cx>& weak_values, const LossAssignment& loss) {
    loss.validate(static_cast<int>(weak_values.size()));
    Cx acc = 0.0;
    for (size_t k = 0; k < weak_values.size(); ++k)
        acc += weak_values[k] * std::sqrt(loss.transmission[k]);
    return acc;
}

/// |<f|i>|^2 |sum_k w_k sqrt(T_k)|^2.
inline double predict_success_probability(const PrePost& pp, const LossAssignment& loss) {
    Cx factor = loss_amplitude_factor(path_weak_values(pp), loss);
    return pp.success_probability() * std::norm(factor);
}

/// Combined per-path prediction (a loss and a unitary may share a path).
inline ShortcutPrediction predict_per_path(const std::vector<Operator>& unitaries,
                                           const LossAssignment& loss, const PrePost& pp,
                                           const Ket& psi) {
    loss.validate(pp.dim());
    return detail::predict_weighted(unitaries, loss.transmission, pp, psi);
}

namespace detail {

struct PerPathForm {
    std::vector<std::optional<Operator>> unitary;  // at most one per path
    std::vector<std::optional<double>> transmission;
};

/// Rejects anything that is not "at most one unitary and one attenuator per
/// path". Shutters count as attenuators with T = 0; a joint shutter is a
/// T = 0 attenuator on each listed composite path.
inline PerPathForm parse_per_path(const Circuit& c) {
    PerPathForm form;
    form.unitary.resize(c.selection.dim());
    form.transmission.resize(c.selection.dim());
    auto add_loss = [&](int path, double t) {
        check_path(c, path);
        if (form.transmission[path])
            fail(Errc::UnsupportedShape, "more than one loss element on path " +
                                             std::to_string(path));
        form.transmission[path] = t;
    };
    for (const auto& el : c.elements) {
        if (const auto* u = std::get_if<UnitaryOnPath>(&el)) {
            check_path(c, u->path);
            if (form.unitary[u->path])
                fail(Errc::UnsupportedShape, "more than one unitary on path " +
                                                 std::to_string(u->path));
            form.unitary[u->path] = u->op;
        } else if (const auto* a = std::get_if<Attenuator>(&el)) {
            add_loss(a->path, a->transmission);
        } else if (const auto* s = std::get_if<Shutter>(&el)) {
            add_loss(s->path, 0.0);
        } else if (const auto* js = std::get_if<JointShutter>(&el)) {
            for (const auto& parts : js->labels) add_loss(c.selection.index_of(parts), 0.0);
        }
    }
    return form;
}

}  // namespace detail

/// Max deviation between the weak-value shortcut and the brute-force
/// evolution over (success probability, conditional state up to global
/// phase). The circuit must be in per-path form.
inline double check_oracle_equivalence(const Circuit& circuit, const PrePost& pp,
                                       const std::optional<Ket>& psi = std::nullopt) {
    auto form = detail::parse_per_path(circuit);
    LossAssignment loss;
    for (const auto& t : form.transmission) loss.transmission.push_back(t.value_or(1.0));

    if (!circuit.internal) {
        // No internal subsystem: only the postselection probability matters.
        for (const auto& u : form.unitary)
            if (u) fail(Errc::UnsupportedShape, "unitary element without an internal subsystem");
        EvolutionResult oracle = evolve_full(circuit, pp, psi);
        double shortcut = predict_success_probability(pp, loss);
        return std::abs(shortcut - oracle.success_probability);
    }

    EvolutionResult oracle = evolve_full(circuit, pp, psi);

    if (!psi)
        fail(Errc::SpaceMismatch, "internal initial state required");
    std::vector<Operator> unitaries;
    for (const auto& u : form.unitary)
        unitaries.push_back(u ? *u : Operator::identity(*circuit.internal));
    ShortcutPrediction shortcut = predict_per_path(unitaries, loss, pp, *psi);

    double dev = std::abs(shortcut.success_probability - oracle.success_probability);
    if (oracle.success_probability > kPostselEps * kPostselEps) {
        Ket oracle_state = conditional_state(oracle);
        double overlap = std::abs(inner(shortcut.conditional_state, oracle_state));
        dev = std::max(dev, 1.0 - overlap);
    }
    return dev;
}

}  // namespace postsel
