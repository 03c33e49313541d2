#pragma once

#include <stdexcept>
#include <string>

namespace proxmom {

// Every candidate point of a step evaluated to a non-finite objective value:
// the run has left the representable range.
struct DivergedError : std::runtime_error {
  explicit DivergedError(const std::string& what) : std::runtime_error(what) {}
};

// Well-posed request for a combination this library deliberately does not
// support (e.g. inexact prox of a nonconvex g).
struct UnsupportedModeError : std::invalid_argument {
  explicit UnsupportedModeError(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative numeric routine hit its hard cap without converging.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace proxmom
