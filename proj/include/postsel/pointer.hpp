#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "postsel/fit.hpp"
#include "postsel/prepost.hpp"

namespace postsel {

/// Which path is marked and how hard. A half-wave plate at mount angle alpha
/// rotates the marked path's polarization from |H> to
/// cos(2a)|H> + sin(2a)|V>; alpha = pi/4 is a full H->V flip (projective
/// marking), alpha -> 0 is the weak limit.
struct MarkingConfig {
    int path;
    double alpha;
};

struct PointerSample {
    double G;       // measurement strength, cos^2(beta) - sin^2(beta)
    double P_plus;  // P(+|f) in the offset analysis basis
    double R;       // normalized readout [P(+|f) - sin^2(beta)] / G
};

struct WeakValueEstimate {
    double intercept;  // estimate of Re(w) at G = 0
    double slope;
    double residual;
};

namespace detail {

inline Space polarization_space() { return Space::single({"H", "V"}); }

}  // namespace detail

/// Writes "which path" into the polarization of one path, postselects, and
/// reads the polarization out in the basis
///   |+-> = cos(a +- pi/4)|H> + sin(a +- pi/4)|V>.
/// With beta = pi/4 - alpha, the strength is G = cos^2(beta) - sin^2(beta)
/// and the normalized readout R = [P(+|f) - sin^2(beta)] / G approaches the
/// real part of the marked path's weak value as G -> 0.
///
/// An optional visibility in [0, 1] damps cross-path interference, modeling
/// imperfect interferometers.
inline PointerSample mark_and_readout(const PrePost& pp, const MarkingConfig& cfg,
                                      std::optional<double> visibility = std::nullopt) {
    constexpr double quarter_pi = std::numbers::pi / 4.0;
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= quarter_pi))
        fail(Errc::InvalidStrength, "marking angle " + fmt_g12(cfg.alpha) +
                                        " outside [0, pi/4]");
    if (cfg.alpha == 0.0)
        fail(Errc::StrengthZero, "G = 0: the readout is 0/0");
    if (visibility && !(*visibility >= 0.0 && *visibility <= 1.0))
        fail(Errc::InvalidVisibility, "visibility " + fmt_g12(*visibility) + " outside [0, 1]");

    const Space pol = detail::polarization_space();
    Circuit circuit{pp.space(), pol, {UnitaryOnPath{cfg.path, rotation(pol, -2.0 * cfg.alpha)}}};
    const Ket h = basis_ket(pol, "H");

    // Per-path postselected polarization vectors; coherent sum = full result.
    auto parts = per_path_postselected(circuit, pp, h);
    const double v = visibility.value_or(1.0);
    Vector coherent = Vector::Zero(2);
    for (const auto& u : parts) coherent += u;

    const double beta = quarter_pi - cfg.alpha;
    Vector plus(2), minus(2);
    plus << std::cos(cfg.alpha + quarter_pi), std::sin(cfg.alpha + quarter_pi);
    minus << std::cos(cfg.alpha - quarter_pi), std::sin(cfg.alpha - quarter_pi);

    auto prob = [&](const Vector& axis) {
        double classical = 0.0;
        for (const auto& u : parts) classical += std::norm(axis.dot(u));
        return (1.0 - v) * classical + v * std::norm(axis.dot(coherent));
    };
    const double p_plus = prob(plus);
    const double p_minus = prob(minus);
    const double total = p_plus + p_minus;
    if (total <= kPostselEps * kPostselEps)
        fail(Errc::PostselectionSingular, "postselection probability ~0 under marking");

    PointerSample s;
    const double c = std::cos(beta), d = std::sin(beta);
    s.G = c * c - d * d;
    s.P_plus = p_plus / total;
    s.R = (s.P_plus - d * d) / s.G;
    return s;
}

/// One readout per grid point with alpha = asin(G)/2.
inline std::vector<PointerSample> sweep_strength(const PrePost& pp, int path,
                                                 std::span<const double> G_grid,
                                                 std::optional<double> visibility = std::nullopt) {
    double prev = 0.0;
    for (double g : G_grid) {
        if (!(g > 0.0 && g <= 1.0))
            fail(Errc::InvalidStrength, "strength " + fmt_g12(g) + " outside (0, 1]");
        if (g <= prev)
            fail(Errc::InvalidStrength, "strength grid must be strictly increasing");
        prev = g;
    }
    std::vector<PointerSample> out;
    out.reserve(G_grid.size());
    for (double g : G_grid)
        out.push_back(mark_and_readout(pp, MarkingConfig{path, std::asin(g) / 2.0}, visibility));
    return out;
}

/// Straight-line extrapolation of R(G) to G = 0; the intercept estimates
/// Re(w) of the marked path's projector.
inline WeakValueEstimate extrapolate_weak_value(std::span<const PointerSample> samples) {
    if (samples.size() < 3)
        fail(Errc::InsufficientData, "need at least three samples to extrapolate");
    std::vector<double> g, r;
    for (const auto& s : samples) {
        g.push_back(s.G);
        r.push_back(s.R);
    }
    LineFit fit = fit_line(g, r);
    return WeakValueEstimate{fit.intercept, fit.slope, fit.rms};
}

/// Ten equally spaced strengths, 0.1 .. 1.0.
inline std::vector<double> default_strength_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 10; ++i) g.push_back(0.1 * i);
    return g;
}

}  // namespace postsel
