#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "postsel/prepost.hpp"
#include "postsel/shortcut.hpp"

namespace postsel {

/// A fully specified, reproducible configuration: pre/post pair, circuit,
/// and an optional interferometer visibility used by the counting emulator.
struct ScenarioSpec {
    std::string name;
    PrePost prepost;
    Circuit circuit;
    std::string documentation;
    std::optional<double> visibility;

    std::optional<Ket> internal_init() const {
        if (!circuit.internal) return std::nullopt;
        return basis_ket(*circuit.internal, 0);
    }
};

enum class ThreeBoxVariant { Intro, Experimental };

/// Three-path pre/postselection whose path projectors carry weak values
/// (1, -1, 1). The "intro" pair uses equal superpositions; the
/// "experimental" pair uses the lopsided amplitudes of the bench setup.
/// Both carry an internal H/V polarization initialized to |H>.
inline ScenarioSpec three_box(ThreeBoxVariant variant) {
    const Space paths = Space::single({"1", "2", "3"});
    const Space pol = Space::single({"H", "V"});
    Ket pre = variant == ThreeBoxVariant::Intro
                  ? make_ket(paths, {1.0, 1.0, 1.0}, Normalize::Yes)
                  : make_ket(paths, {1.0 / (2.0 * std::sqrt(2.0)), 0.5, 1.0 / std::sqrt(2.0)},
                             Normalize::Yes);
    Ket post = variant == ThreeBoxVariant::Intro
                   ? make_ket(paths, {1.0, -1.0, 1.0}, Normalize::Yes)
                   : make_ket(paths, {1.0 / std::sqrt(2.0), -0.5, 1.0 / (2.0 * std::sqrt(2.0))},
                              Normalize::Yes);
    ScenarioSpec s{
        variant == ThreeBoxVariant::Intro ? "three-box-intro" : "three-box-experimental",
        PrePost(pre, post),
        Circuit{paths, pol, {}},
        "Three-path interferometer; path projector weak values (1, -1, 1).",
        std::nullopt};
    return s;
}

/// The allowed extra pair-annihilation points between the selections.
/// (O+, O-) is the original overlap P, already excluded from the
/// preselection, so it cannot be requested here.
inline const std::vector<std::pair<std::string, std::string>>& hardy_overlap_choices() {
    static const std::vector<std::pair<std::string, std::string>> choices = {
        {"NO+", "O-"}, {"NO+", "NO-"}, {"O+", "NO-"}};
    return choices;
}

/// Two-particle interferometer pair (positron x electron) with joint weak
/// values (1, 1, 0, -1) on the path projectors. Each requested overlap adds
/// a joint shutter on that composite path, i.e. a two-particle annihilation
/// point between the selections.
inline ScenarioSpec hardy(
    const std::vector<std::pair<std::string, std::string>>& overlaps = {}) {
    const Space sel({{"NO+", "O+"}, {"NO-", "O-"}});
    Vector pre = Vector::Zero(4);
    pre[sel.index_of({"NO+", "NO-"})] = 1.0;
    pre[sel.index_of({"NO+", "O-"})] = 1.0;
    pre[sel.index_of({"O+", "NO-"})] = 1.0;
    Ket pre_ket(sel, pre, Normalize::Yes);

    // (|NO+> - |O+>) (|NO-> - |O->) / 2
    Vector post = Vector::Zero(4);
    post[sel.index_of({"NO+", "NO-"})] = 0.5;
    post[sel.index_of({"NO+", "O-"})] = -0.5;
    post[sel.index_of({"O+", "NO-"})] = -0.5;
    post[sel.index_of({"O+", "O-"})] = 0.5;
    Ket post_ket(sel, post);

    Circuit circuit{sel, std::nullopt, {}};
    std::string name = "hardy";
    for (const auto& ov : overlaps) {
        bool allowed = false;
        for (const auto& c : hardy_overlap_choices()) allowed = allowed || c == ov;
        if (!allowed)
            fail(Errc::NotFound, "overlap (" + ov.first + ", " + ov.second +
                                     ") is not an available annihilation point");
        circuit.elements.push_back(JointShutter{{{ov.first, ov.second}}});
        name += "+" + ov.first + "," + ov.second;
    }
    return ScenarioSpec{std::move(name),
                        PrePost(pre_ket, post_ket),
                        std::move(circuit),
                        "Two-particle dark-port coincidence; joint weak values (1, 1, 0, -1).",
                        std::nullopt};
}

/// Frobenius gap || (2I - U(phi)) - U(-phi) ||_F. The closed form is
/// sqrt(2) * (2 - 2 cos phi), so the negation of a small rotation is the
/// opposite rotation up to O(phi^2).
inline double appendix_rotation_check(double phi) {
    if (std::abs(phi) > std::numbers::pi / 4.0)
        fail(Errc::InvalidStrength, "rotation angle outside [-pi/4, pi/4]");
    const Space pol = Space::single({"H", "V"});
    Matrix negated = 2.0 * Matrix::Identity(2, 2) - rotation(pol, phi).matrix();
    return (negated - rotation(pol, -phi).matrix()).norm();
}

/// Per-path weak-value targets; any pre/post pair realizing them must have
/// them sum to 1.
struct TargetWeakValues {
    std::vector<Cx> targets;
};

/// Synthesizes a pre/post pair whose path-projector weak values equal the
/// targets. Construction: <k|i> = sqrt(max(|w_k|, delta)) and
/// <f|k> = w_k / <k|i>, then normalize both (normalization cancels in every
/// weak value). The floor delta keeps the pre state supported on paths with
/// target 0 while their weak value stays exactly 0.
inline PrePost design_prepost(const TargetWeakValues& targets) {
    constexpr double delta = 1e-6;
    const auto& w = targets.targets;
    if (w.empty())
        fail(Errc::DegenerateTargets, "no targets given");
    bool any_nonzero = false;
    Cx sum = 0.0;
    for (const auto& t : w) {
        any_nonzero = any_nonzero || std::abs(t) > 0.0;
        sum += t;
    }
    if (!any_nonzero)
        fail(Errc::DegenerateTargets, "all targets are zero");
    if (std::abs(sum - Cx(1.0)) > kPostselEps)
        fail(Errc::SumRuleViolation,
             "targets sum to " + fmt_cx(sum) + ", not 1 (residual " +
                 fmt_g12(std::abs(sum - Cx(1.0))) + ")");

    std::vector<std::string> labels;
    std::vector<Cx> pre(w.size()), post(w.size());
    for (size_t k = 0; k < w.size(); ++k) {
        labels.push_back(std::to_string(k + 1));
        const double mag = std::max(std::abs(w[k]), delta);
        pre[k] = std::sqrt(mag);                 // real, positive
        post[k] = std::conj(w[k] / pre[k]);      // so that <f|k><k|i> = w_k
    }
    return PrePost(make_ket(labels, pre), make_ket(labels, post));
}

}  // namespace postsel
