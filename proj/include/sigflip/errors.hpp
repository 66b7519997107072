#pragma once

#include <stdexcept>
#include <string>

namespace sigflip {

// Two error families, mapped to process exit codes by the CLI:
// ConfigError -> 2 (bad input: parse errors, invalid config, bad arguments),
// AnalysisError -> 3 (the math refused: domain violations, degenerate data).
// Verdict failures are not exceptions; they are reported and mapped to 1.

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class AnalysisError : public std::runtime_error {
public:
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

// --- expression layer ---

class SyntaxError : public ConfigError {
public:
  SyntaxError(const std::string& what, std::size_t offset)
      : ConfigError(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class UnknownIdentifier : public ConfigError {
public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : ConfigError("unknown identifier '" + name + "' (at byte " +
                    std::to_string(offset) + ")"),
        name_(name), offset_(offset) {}
  const std::string& name() const { return name_; }
  std::size_t offset() const { return offset_; }

private:
  std::string name_;
  std::size_t offset_;
};

class ArityError : public ConfigError {
public:
  ArityError(const std::string& what, std::size_t offset)
      : ConfigError(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Evaluation left the function's domain (division by zero, sqrt of a
// negative, pow corner cases, non-finite result).
class DomainError : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

// --- geometry / analysis layer ---

class EigenFailure : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class DegenerateMetric : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class NotTimelike : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

// Pointwise decomposition was asked for inside the |c| < eps band around H;
// callers should switch to the extrapolating field decomposition.
class NearHypersurface : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class ZeroScale : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class NotTransverseTypeChanging : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class UnknownGalleryItem : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class KernelDimensionError : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class PivotFailure : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class NormalizationError : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class NotTimelikeInLorentzSector : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class ExtrapolationFailure : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

class NotComoving : public AnalysisError {
public:
  using AnalysisError::AnalysisError;
};

}  // namespace sigflip
