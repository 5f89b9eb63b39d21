#pragma once

#include <stdexcept>
#include <string>

namespace erz {

/// Base of every error raised by the library. `kind()` is a short stable tag
/// used by the command-line tools when printing one-line errors.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config", "key=" + key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// An operator was applied outside the set where it is defined (for example
/// a Riesz potential acting on a field with nonzero mean).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// The density dropped to the floor or a field stopped being finite.
class BlowUpError : public Error {
 public:
  BlowUpError(double t, double min_density, const std::string& what)
      : Error("blow-up", what), t_(t), min_density_(min_density) {}
  double time() const noexcept { return t_; }
  double min_density() const noexcept { return min_density_; }

 private:
  double t_;
  double min_density_;
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

class CorruptCheckpointError : public Error {
 public:
  explicit CorruptCheckpointError(const std::string& what)
      : Error("corrupt-checkpoint", what) {}
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error("io", path + ": " + what) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error("fit", what) {}
};

}  // namespace erz
