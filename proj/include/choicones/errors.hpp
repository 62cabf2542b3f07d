#pragma once

#include <stdexcept>
#include <string>

namespace choicones {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimMismatch : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct NotPsd : Error {
  using Error::Error;
};
struct ZeroVector : Error {
  using Error::Error;
};
struct BadK : Error {
  using Error::Error;
};
struct RankTooLarge : Error {
  using Error::Error;
};
struct BadCertificate : Error {
  using Error::Error;
};
struct ProjectionFailed : Error {
  using Error::Error;
};
struct UnsupportedCone : Error {
  using Error::Error;
};
struct NonRealPairing : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace choicones
