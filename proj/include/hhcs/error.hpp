#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hhcs {

// Every library failure derives from Error and carries a short category
// string. The CLI prints "error: <category>: <message>" and maps the
// category to its exit status.
class Error : public std::runtime_error {
 public:
  Error(std::string_view category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  std::string_view category() const noexcept { return category_; }

 private:
  std::string_view category_;
};

struct RangeError : Error {
  explicit RangeError(const std::string& what) : Error("range", what) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

struct SizeError : Error {
  explicit SizeError(const std::string& what) : Error("size", what) {}
};

struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& what) : Error("infeasible", what) {}
};

struct DegenerateError : Error {
  explicit DegenerateError(const std::string& what) : Error("degenerate", what) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace hhcs
