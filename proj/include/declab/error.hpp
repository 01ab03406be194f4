#pragma once

#include <stdexcept>
#include <string>

namespace declab {

enum class Errc {
  SpecInvalid,
  GeometryDegenerate,
  Blowup,
  ShapeMismatch,
  RadiusOutOfRange,
  NonpositiveData,
  HypothesisViolated,
  SolverStagnated,
  ParseError,
  ValidationError,
  PlotError,
  IoError,
};

const char* errc_name(Errc c);

// All modules throw this; the CLI maps it to a machine-readable JSON error.
class Error : public std::runtime_error {
public:
  Error(Errc code, std::string module, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + " [" + module + "]: " + message),
        code_(code),
        module_(std::move(module)) {}

  Errc code() const { return code_; }
  const std::string& module() const { return module_; }

private:
  Errc code_;
  std::string module_;
};

} // namespace declab
