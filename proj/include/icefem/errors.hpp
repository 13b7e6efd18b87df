#ifndef ICEFEM_ERRORS_HPP
#define ICEFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace icefem {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MeshError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct SolveError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ModelError : Error {
  using Error::Error;
};

}  // namespace icefem

#endif
