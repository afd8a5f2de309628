#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "postsel/postsel.hpp"

namespace testsup {

using namespace postsel;

/// Runs f and returns the postsel error code it throws; fails the test if it
/// does not throw a postsel::Error.
template <class F>
Errc errc_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a postsel::Error");
    return Errc::NotFound;  // unreachable
}

inline double cx_dist(Cx a, Cx b) { return std::abs(a - b); }

inline double ket_dist(const Ket& a, const Ket& b) {
    REQUIRE(a.space() == b.space());
    return (a.amps() - b.amps()).norm();
}

/// 1 - |<a|b>| for normalized kets: zero iff equal up to a global phase.
inline double phase_free_deficit(const Ket& a, const Ket& b) {
    return 1.0 - std::abs(inner(a, b));
}

}  // namespace testsup
