#ifndef SPEQWL_ERRORS_HPP
#define SPEQWL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace speqwl {

// Malformed input files (bad TUDataset rows, unparsable numbers).
class FormatError : public std::runtime_error {
  public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally inconsistent input (asymmetric edge lists, label mismatches).
class ConsistencyError : public std::runtime_error {
  public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Raised before an allocation that would exceed the configured memory budget.
class ResourceError : public std::runtime_error {
  public:
    ResourceError(const std::string& what, std::uint64_t required_bytes)
        : std::runtime_error(what), required_bytes(required_bytes) {}

    std::uint64_t required_bytes;
};

}  // namespace speqwl

#endif  // SPEQWL_ERRORS_HPP
