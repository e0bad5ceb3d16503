#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace paraoptic {

// Boundary mismatch when composing functions, lenses or parametrised lenses.
class CompositionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An enumeration would exceed its configured cap.
class SizeError : public std::runtime_error {
 public:
  SizeError(const std::string& what, std::uint64_t count, std::uint64_t cap)
      : std::runtime_error(what + ": " + std::to_string(count) +
                           " exceeds cap " + std::to_string(cap)),
        count_(count),
        cap_(cap) {}

  std::uint64_t count() const noexcept { return count_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t count_;
  std::uint64_t cap_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A NaN or infinity was produced or supplied.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed external input; `path` locates the offending JSON node.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace paraoptic
