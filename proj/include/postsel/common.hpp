#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace postsel {

using Cx = std::complex<double>;

// Tolerance for exact-arithmetic identities (norms, projector algebra, sum
// rules). Every quantity in scope is an O(1) amplitude, so one constant fits
// the whole library.
inline constexpr double kExactTol = 1e-12;

// Postselection counts as singular once |<f|i>| falls at or below this.
inline constexpr double kPostselEps = 1e-9;

inline constexpr const char* kVersion = "1.0.0";

// 12 significant digits, locale-independent, -0 normalized to 0 so that
// reports and CSV files are byte-stable.
inline std::string fmt_g12(double x) {
    if (x == 0.0) x = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string fmt_cx(Cx z) {
    return "(" + fmt_g12(z.real()) + ", " + fmt_g12(z.imag()) + ")";
}

}  // namespace postsel
