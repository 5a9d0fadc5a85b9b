#pragma once

#include <stdexcept>
#include <string>

namespace enthom {

// Base class for all library errors so callers can catch in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two objects that must live on the same grid don't.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// A CDF transform was requested for a density with a zero-height cell
// strictly between two positive cells. The CDF is flat there and has no
// inverse; pass restrict_support=true to accept pseudo-inverse semantics.
class InteriorZeroRegion : public Error {
 public:
  using Error::Error;
};

// A point or a positive-mass region falls outside the domain of a map.
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

// A slow-change profile has a non-increasing mean map (m'(e) <= 0 somewhere).
class NonPositiveSlope : public Error {
 public:
  using Error::Error;
};

// Malformed input file (CSV channel/profile, JSON config).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace enthom
