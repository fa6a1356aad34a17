#pragma once

#include <stdexcept>
#include <string>

namespace hypext {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Recomputed rank profile disagrees with claimed Kronecker invariants.
struct InvariantMismatch : Error {
  using Error::Error;
};

/// rank(N.n) < |alpha|: not enough evolution equations in this frame.
struct RankDeficientTimeDirection : Error {
  using Error::Error;
};

struct Condition2Violation : Error {
  using Error::Error;
};

/// Requested direction is numerically parallel to the time covector.
struct DegenerateDirection : Error {
  using Error::Error;
};

/// A metric block is not symmetric Lorentzian.
struct SignatureError : Error {
  using Error::Error;
};

/// Extension spec block layout does not match the system.
struct BlockMismatch : Error {
  using Error::Error;
};

/// M.n is singular: the extension cannot be evolved in this frame.
struct SingularTimeSymbol : Error {
  using Error::Error;
};

/// A characteristic quadratic has no real roots.
struct ComplexRoots : Error {
  using Error::Error;
};

struct UnknownKind : Error {
  using Error::Error;
};

struct NoCoherentPulse : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

/// Non-finite value encountered during evolution.
struct SimulationBlowUp : Error {
  SimulationBlowUp(const std::string& msg, long step_in, double time_in)
      : Error(msg), step(step_in), time(time_in) {}
  long step = 0;
  double time = 0.0;
};

} // namespace hypext
