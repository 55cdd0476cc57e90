#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace tgp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct ConfigError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct IoError : Error {
  using Error::Error;
};

struct IntegrationFailure : Error {
  double t_reached;
  IntegrationFailure(const std::string& what, double t)
      : Error(what), t_reached(t) {}
};

struct StateValidityError : Error {
  double t;
  StateValidityError(const std::string& what, double t_)
      : Error(what), t(t_) {}
};

// eigenbranches could not be matched between two samples
struct BranchAmbiguity : Error {
  std::size_t sample;
  double gap;
  BranchAmbiguity(const std::string& what, std::size_t s, double g)
      : Error(what), sample(s), gap(g) {}
};

struct InvalidInitialState : Error {
  using Error::Error;
};

// consecutive samples nearly orthogonal, sampling too coarse
struct ResolutionError : Error {
  std::size_t sample;
  ResolutionError(const std::string& what, std::size_t s)
      : Error(what), sample(s) {}
};

struct NotInBlock : Error {
  using Error::Error;
};

}  // namespace tgp
