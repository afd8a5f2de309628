#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "postsel/state.hpp"

namespace postsel {

/// A preselection/postselection pair over the same selection space. Inputs
/// may arrive unnormalized; both are normalized on construction. Pairs whose
/// overlap is (numerically) zero are rejected: every weak value would be
/// singular.
class PrePost {
public:
    PrePost(const Ket& pre, const Ket& post)
        : pre_(pre.normalized()), post_(post.normalized()) {
        if (pre.space() != post.space())
            fail(Errc::SpaceMismatch, "pre and post selections live on different spaces");
        overlap_ = inner(post_, pre_);
        if (std::abs(overlap_) <= kPostselEps)
            fail(Errc::PostselectionSingular,
                 "|<f|i>| = " + fmt_g12(std::abs(overlap_)) + " is below " + fmt_g12(kPostselEps));
    }

    const Ket& pre() const { return pre_; }
    const Ket& post() const { return post_; }
    const Space& space() const { return pre_.space(); }
    int dim() const { return pre_.dim(); }

    /// <f|i>. Its magnitude doubles as the conditioning diagnostic: weak
    /// values blow up as it approaches zero.
    Cx overlap() const { return overlap_; }

    /// |<f|i>|^2, the postselection success probability of the bare pair.
    double success_probability() const { return std::norm(overlap_); }

private:
    Ket pre_;
    Ket post_;
    Cx overlap_;
};

/// <f|O|i> / <f|i>.
inline Cx weak_value(const Operator& obs, const PrePost& pp) {
    if (obs.space() != pp.space())
        fail(Errc::SpaceMismatch, "observable space does not match the selection space");
    return inner(pp.post(), apply(obs, pp.pre())) / pp.overlap();
}

/// Same formula on a composite selection space; the projector plays the role
/// of a joint probability.
inline Cx joint_weak_value(const Operator& obs, const PrePost& pp) {
    return weak_value(obs, pp);
}

/// Weak values of all flat basis projectors, in basis order.
inline std::vector<Cx> path_weak_values(const PrePost& pp) {
    std::vector<Cx> w(pp.dim());
    for (int k = 0; k < pp.dim(); ++k)
        w[k] = std::conj(pp.post().amp(k)) * pp.pre().amp(k) / pp.overlap();
    return w;
}

/// |sum_k w_k - 1| for a complete projector decomposition.
inline double sum_rule_residual(const std::vector<Operator>& projectors, const PrePost& pp) {
    if (projectors.empty())
        fail(Errc::IncompleteDecomposition, "no projectors given");
    Matrix sum = Matrix::Zero(pp.dim(), pp.dim());
    for (const auto& p : projectors) {
        if (p.space() != pp.space())
            fail(Errc::SpaceMismatch, "projector space does not match the selection space");
        sum += p.matrix();
    }
    if ((sum - Matrix::Identity(pp.dim(), pp.dim())).norm() > kExactTol)
        fail(Errc::IncompleteDecomposition, "projectors do not sum to the identity");
    Cx total = 0.0;
    for (const auto& p : projectors) total += weak_value(p, pp);
    return std::abs(total - Cx(1.0));
}

// --- circuits -------------------------------------------------------------

/// Unitary acting on the internal factor of one selection path.
struct UnitaryOnPath {
    int path;
    Operator op;
};

/// Phase-free loss: multiplies the path amplitude by sqrt(T).
struct Attenuator {
    int path;
    double transmission;
};

/// Complete block, i.e. an attenuator with T = 0.
struct Shutter {
    int path;
};

/// Zeroes the listed composite selection amplitudes (eg. a two-particle
/// annihilation point). Each label lists one mode per selection factor.
struct JointShutter {
    std::vector<std::vector<std::string>> labels;
};

using CircuitElement = std::variant<UnitaryOnPath, Attenuator, Shutter, JointShutter>;

/// Ordered elements over a selection space, with an optional internal
/// subsystem (eg. polarization) that unitaries act on.
struct Circuit {
    Space selection;
    std::optional<Space> internal;
    std::vector<CircuitElement> elements;

    int internal_dim() const { return internal ? internal->dim() : 1; }
};

struct EvolutionResult {
    Ket conditional_state;        // internal factor after postselection, unnormalized
    double success_probability;   // squared norm of the postselected amplitude
};

namespace detail {

inline void check_path(const Circuit& c, int path) {
    if (path < 0 || path >= c.selection.dim())
        fail(Errc::SpaceMismatch, "element references path " + std::to_string(path) +
                                      " outside the selection space");
}

/// Evolves the joint (selection x internal) amplitude vector through the
/// element list. Layout: flat index p * internal_dim + j.
inline Vector evolve_joint(const Circuit& c, const Vector& pre,
                           const std::optional<Ket>& internal_init) {
    const int d = c.internal_dim();
    if (c.internal.has_value() != internal_init.has_value())
        fail(Errc::SpaceMismatch, "internal initial state must match the circuit's internal space");
    if (internal_init && internal_init->space() != *c.internal)
        fail(Errc::SpaceMismatch, "internal initial state lives on the wrong space");

    Vector joint(pre.size() * d);
    for (Eigen::Index p = 0; p < pre.size(); ++p)
        for (int j = 0; j < d; ++j)
            joint[p * d + j] = pre[p] * (internal_init ? internal_init->amp(j) : Cx(1.0));

    for (const auto& el : c.elements) {
        if (const auto* u = std::get_if<UnitaryOnPath>(&el)) {
            check_path(c, u->path);
            if (!c.internal)
                fail(Errc::SpaceMismatch, "unitary element needs an internal subsystem");
            if (u->op.space() != *c.internal)
                fail(Errc::SpaceMismatch, "unitary acts on the wrong internal space");
            joint.segment(u->path * d, d) = u->op.matrix() * joint.segment(u->path * d, d);
        } else if (const auto* a = std::get_if<Attenuator>(&el)) {
            check_path(c, a->path);
            if (a->transmission < 0.0 || a->transmission > 1.0)
                fail(Errc::InvalidTransmission,
                     "transmission " + fmt_g12(a->transmission) + " outside [0, 1]");
            joint.segment(a->path * d, d) *= std::sqrt(a->transmission);
        } else if (const auto* s = std::get_if<Shutter>(&el)) {
            check_path(c, s->path);
            joint.segment(s->path * d, d).setZero();
        } else if (const auto* js = std::get_if<JointShutter>(&el)) {
            for (const auto& parts : js->labels) {
                int flat = c.selection.index_of(parts);
                joint.segment(flat * d, d).setZero();
            }
        }
    }
    return joint;
}

/// Contracts <post| over the selection factor, leaving the internal ket.
inline Vector contract_post(const Circuit& c, const Ket& post, const Vector& joint) {
    const int d = c.internal_dim();
    Vector out = Vector::Zero(d);
    for (int p = 0; p < post.dim(); ++p)
        out += std::conj(post.amp(p)) * joint.segment(p * d, d);
    return out;
}

inline Space trivial_space() { return Space::single({"unit"}); }

}  // namespace detail

/// Brute-force reference evolution: build the joint ket, apply every element
/// in list order, contract with the postselection. The conditional state is
/// the unnormalized internal ket; its squared norm is the success
/// probability of the postselection.
inline EvolutionResult evolve_full(const Circuit& circuit, const PrePost& pp,
                                   const std::optional<Ket>& internal_init = std::nullopt) {
    if (circuit.selection != pp.space())
        fail(Errc::SpaceMismatch, "circuit selection space does not match the pre/post pair");
    Vector joint = detail::evolve_joint(circuit, pp.pre().amps(), internal_init);
    Vector cond = detail::contract_post(circuit, pp.post(), joint);
    Space out_space = circuit.internal ? *circuit.internal : detail::trivial_space();
    double prob = cond.squaredNorm();
    return EvolutionResult{Ket(std::move(out_space), std::move(cond)), prob};
}

/// Normalized internal state, defined only when the postselection succeeds
/// with nonvanishing probability.
inline Ket conditional_state(const EvolutionResult& result) {
    if (result.success_probability <= kPostselEps * kPostselEps)
        fail(Errc::PostselectionSingular,
             "postselection probability " + fmt_g12(result.success_probability) + " is ~0");
    return result.conditional_state.normalized();
}

/// Per-path postselected internal kets u_k: the contribution of selection
/// path k alone, evolved through the full circuit. Their coherent sum equals
/// evolve_full's conditional state; their incoherent squared norms give the
/// interference-free (classical) probability.
inline std::vector<Vector> per_path_postselected(const Circuit& circuit, const PrePost& pp,
                                                 const std::optional<Ket>& internal_init =
                                                     std::nullopt) {
    if (circuit.selection != pp.space())
        fail(Errc::SpaceMismatch, "circuit selection space does not match the pre/post pair");
    std::vector<Vector> out;
    out.reserve(pp.dim());
    for (int k = 0; k < pp.dim(); ++k) {
        Vector masked = Vector::Zero(pp.dim());
        masked[k] = pp.pre().amp(k);
        Vector joint = detail::evolve_joint(circuit, masked, internal_init);
        out.push_back(detail::contract_post(circuit, pp.post(), joint));
    }
    return out;
}

/// Postselection probability with interferometer visibility V: cross-path
/// interference terms are damped by V, so V = 1 is the coherent result and
/// V = 0 the classical per-path sum.
inline double success_probability_damped(const Circuit& circuit, const PrePost& pp,
                                         const std::optional<Ket>& internal_init, double visibility) {
    if (visibility < 0.0 || visibility > 1.0)
        fail(Errc::InvalidVisibility, "visibility " + fmt_g12(visibility) + " outside [0, 1]");
    auto parts = per_path_postselected(circuit, pp, internal_init);
    Vector coherent = Vector::Zero(circuit.internal_dim());
    double classical = 0.0;
    for (const auto& u : parts) {
        coherent += u;
        classical += u.squaredNorm();
    }
    return (1.0 - visibility) * classical + visibility * coherent.squaredNorm();
}

}  // namespace postsel
