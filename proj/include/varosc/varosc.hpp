#ifndef VAROSC_VAROSC_HPP_
#define VAROSC_VAROSC_HPP_

// Variation and oscillation functionals for ergodic averages of unitary
// operators and contractions on finite-dimensional complex coordinate
// spaces, plus the scalar symbol machinery on the unit circle that controls
// them, a constructive finite-step unitary dilation, and an experiment
// harness with CSV/JSON reporting.

#include "varosc/averages.hpp"
#include "varosc/dilation.hpp"
#include "varosc/errors.hpp"
#include "varosc/harness.hpp"
#include "varosc/io.hpp"
#include "varosc/linalg.hpp"
#include "varosc/parallel.hpp"
#include "varosc/rng.hpp"
#include "varosc/sequences.hpp"
#include "varosc/symbol.hpp"

#endif  // VAROSC_VAROSC_HPP_
