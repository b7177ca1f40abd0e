#pragma once

/*
 * Deliberate fault switches for validating that the test suite has teeth.
 * Each flag, when enabled, introduces one specific bug; the suite must detect
 * every one of them.  All flags default to off and are only toggled by tests
 * and the hidden self-test fault mode.
 */

namespace gognorm::faults {

// barycenter search inspects only the geodesic of the first coordinate pair
inline bool barycenter_candidates = false;

// alternation forgets permutation signs (averages instead of antisymmetrizes)
inline bool drop_alternation_sign = false;

// mapping cone differential uses +inclusion instead of -inclusion
inline bool cone_sign = false;

inline void reset() {
    barycenter_candidates = false;
    drop_alternation_sign = false;
    cone_sign = false;
}

}  // namespace gognorm::faults
