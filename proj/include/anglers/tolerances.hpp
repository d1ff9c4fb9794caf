#pragma once

namespace anglers {

// Central tolerance record for all floating-point geometry. Exact-rational
// code paths never consult these.
struct Tolerances {
  double realizability_margin = 1e-12;  // strictness margin for angle inequalities
  double degeneration = 1e-9;           // Gram / cofactor degeneration guard
  double verify = 1e-12;                // default residual tolerance for float verification
  double segment_meets_h3 = 1e-10;      // <p,q> < -1 slack in the segment test
};

inline Tolerances& default_tolerances() {
  static Tolerances t;
  return t;
}

}  // namespace anglers
