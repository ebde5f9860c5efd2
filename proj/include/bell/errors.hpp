#pragma once

#include <stdexcept>
#include <string>

namespace bell {

// Misuse of an API: bad flag, mixed backends, index out of range.
class usage_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Input outside the domain an operation supports (zero divisor, negative
// value under a square root, lambda outside the proven regime).
class domain_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed textual input.
class parse_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// The coefficient recursion needed to divide by a value that is zero, or an
// interval containing zero. Only reachable with lambda <= 2.
class degenerate_recursion_error : public domain_error {
  public:
    explicit degenerate_recursion_error(long divisor_index)
        : domain_error("degenerate recursion: R_" + std::to_string(divisor_index) +
                       " is zero (or encloses zero) and is required as a divisor"),
          divisor_index_(divisor_index) {}

    long divisor_index() const noexcept { return divisor_index_; }

  private:
    long divisor_index_;
};

} // namespace bell
