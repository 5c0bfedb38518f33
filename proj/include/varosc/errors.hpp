#ifndef VAROSC_ERRORS_HPP_
#define VAROSC_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varosc {

// Bad user input (CLI exit code 2).
class invalid_argument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A sequence that fails the ratio certificate.  `index` points at the first
// offending consecutive pair (0-based index of the left term).
class not_lacunary_error : public invalid_argument {
public:
  not_lacunary_error(const std::string& msg, std::size_t index)
      : invalid_argument(msg), index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_ = 0;
};

// Hermitian input with an eigenvalue below the clip tolerance.
class not_psd_error : public invalid_argument {
public:
  using invalid_argument::invalid_argument;
};

// Operator handed to a contraction-only functional with norm > 1 + tol.
class contract_violation : public invalid_argument {
public:
  using invalid_argument::invalid_argument;
};

// Work/dimension budget exceeded, or a sequence left 64-bit range
// (CLI exit code 3).  The message names the budget that was hit.
class resource_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace varosc

#endif  // VAROSC_ERRORS_HPP_
