#pragma once

#include <cmath>
#include <memory>

#include "msq/dense_engine.hpp"
#include "msq/detection.hpp"
#include "msq/optics.hpp"

namespace msq::test {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Single thin squeeze layer with uniform s, ending in the near field.
inline std::shared_ptr<SymplecticProgram> thin_squeezer(const TransverseGrid& g, double s, double pump_phase = 0.0) {
  auto p = std::make_shared<SymplecticProgram>(g, Basis::far_field);
  p->append(squeeze_layer(GainProfile::uniform(s, pump_phase), 1.0));
  p->to_basis(Basis::near_field);
  return p;
}

/// LO concentrated on probe point p (amplitude a) and conjugate point p2 (amplitude b).
inline LocalOscillator point_lo(const TransverseGrid& g, std::size_t p, std::complex<double> a, std::size_t p2,
                                std::complex<double> b) {
  Field probe(g.points()), conj(g.points());
  probe[p] = a;
  conj[p2] = b;
  return LocalOscillator::normalized(g, probe, conj);
}

}  // namespace msq::test
