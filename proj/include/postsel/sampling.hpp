#pragma once

#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "postsel/rng.hpp"
#include "postsel/shortcut.hpp"

namespace postsel {

/// Standard normal via Box-Muller.
inline double random_normal(CounterRng& rng) {
    double u1 = rng.uniform01();
    while (u1 == 0.0) u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Cx random_cx(CounterRng& rng) { return Cx(random_normal(rng), random_normal(rng)); }

inline Ket random_ket(const Space& space, CounterRng& rng) {
    Vector v(space.dim());
    for (int i = 0; i < space.dim(); ++i) v[i] = random_cx(rng);
    return Ket(space, std::move(v), Normalize::Yes);
}

/// Haar-like random unitary: Q factor of a Gaussian complex matrix.
inline Operator random_unitary(const Space& space, CounterRng& rng) {
    const int d = space.dim();
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = random_cx(rng);
    Matrix q = Eigen::HouseholderQR<Matrix>(a).householderQ();
    return Operator(space, std::move(q));
}

/// Random pair rejected until the overlap is comfortably nonsingular.
inline PrePost random_prepost(const Space& space, CounterRng& rng, double min_overlap = 1e-3) {
    for (;;) {
        Ket pre = random_ket(space, rng);
        Ket post = random_ket(space, rng);
        if (std::abs(inner(post, pre)) > min_overlap) return PrePost(pre, post);
    }
}

struct RandomPerPathCase {
    Circuit circuit;
    PrePost pp;
    std::optional<Ket> psi;
};

/// A random per-path circuit: 2..max_paths selection paths, each path with
/// an optional random attenuator and (when an internal subsystem is present)
/// an optional random unitary.
inline RandomPerPathCase random_per_path_case(CounterRng& rng, int max_paths = 4,
                                              int internal_dim = 2) {
    const int paths = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_paths - 1));
    std::vector<std::string> labels;
    for (int i = 1; i <= paths; ++i) labels.push_back(std::to_string(i));
    const Space selection = Space::single(labels);

    const bool with_internal = rng.uniform01() < 2.0 / 3.0;
    std::optional<Space> internal;
    if (with_internal) {
        std::vector<std::string> il;
        for (int i = 0; i < internal_dim; ++i) il.push_back("m" + std::to_string(i));
        internal = Space::single(il);
    }

    Circuit circuit{selection, internal, {}};
    for (int p = 0; p < paths; ++p) {
        if (internal && rng.uniform01() < 0.5)
            circuit.elements.push_back(UnitaryOnPath{p, random_unitary(*internal, rng)});
        if (rng.uniform01() < 0.5)
            circuit.elements.push_back(Attenuator{p, rng.uniform01()});
    }

    PrePost pp = random_prepost(selection, rng);
    std::optional<Ket> psi;
    if (internal) psi = random_ket(*internal, rng);
    return RandomPerPathCase{std::move(circuit), std::move(pp), std::move(psi)};
}

/// Runs `count` random per-path circuits and returns the worst deviation
/// between the weak-value shortcut and the brute-force evolution. Cases with
/// (numerically) fully destructive interference are redrawn.
inline double oracle_equivalence_max_deviation(std::uint64_t seed, int count) {
    double worst = 0.0;
    int done = 0;
    std::uint64_t stream = 0;
    while (done < count) {
        CounterRng rng(seed, stream++);
        auto c = random_per_path_case(rng);
        try {
            worst = std::max(worst, check_oracle_equivalence(c.circuit, c.pp, c.psi));
            ++done;
        } catch (const Error& e) {
            if (e.code() != Errc::PostselectionSingular) throw;
        }
    }
    return worst;
}

}  // namespace postsel
