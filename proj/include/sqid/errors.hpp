#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqid {

/// Thrown when an enumeration or encoding task exceeds its point budget.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::uint64_t budget)
        : std::runtime_error(what + " (budget " + std::to_string(budget) + ")"),
          budget_(budget) {}
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t budget_;
};

/// Malformed input file; carries the byte offset of the failure.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace sqid
