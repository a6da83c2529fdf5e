#ifndef ONTOPOP_ERROR_H_
#define ONTOPOP_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ontopop {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, or 0 when not line oriented.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string &message, std::size_t line = 0)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Binary embedding file ended inside an entry.
class TruncationError : public ParseError {
 public:
  TruncationError(const std::string &message, std::size_t entry)
      : ParseError(message), entry_(entry) {}

  std::size_t entry() const { return entry_; }

 private:
  std::size_t entry_;
};

// Data model invariant violated (cycles, duplicates, dangling references).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input on which an operation is mathematically undefined (zero vectors,
// too few members).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Invalid or incomplete run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ontopop

#endif  // ONTOPOP_ERROR_H_
