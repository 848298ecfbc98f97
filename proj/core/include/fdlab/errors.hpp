#pragma once

#include <stdexcept>
#include <string>

namespace fdlab {

/// Base of every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FDLAB_DEFINE_ERROR(Name)                         \
  class Name : public Error {                            \
   public:                                               \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// Mittag-Leffler evaluation
FDLAB_DEFINE_ERROR(NonConvergent);
FDLAB_DEFINE_ERROR(OutOfRegime);

// Lattice functions and norms
FDLAB_DEFINE_ERROR(RepresentationMismatch);
FDLAB_DEFINE_ERROR(NotInHomogeneousSpace);

// Cauchy solvers
FDLAB_DEFINE_ERROR(MaxIterations);
FDLAB_DEFINE_ERROR(IterationStall);
FDLAB_DEFINE_ERROR(TailNotConverged);

// Long-time analysis
FDLAB_DEFINE_ERROR(NotCoercive);
FDLAB_DEFINE_ERROR(DegenerateWindow);
FDLAB_DEFINE_ERROR(Inconclusive);

// Interval eigen-expansion
FDLAB_DEFINE_ERROR(QuadratureUnderResolved);
FDLAB_DEFINE_ERROR(NotPositive);

// Experiment runner
FDLAB_DEFINE_ERROR(ConfigError);
FDLAB_DEFINE_ERROR(AssertionFailure);

#undef FDLAB_DEFINE_ERROR

}  // namespace fdlab
