#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace emergence {

using Rational = mpq_class;
using BigInt = mpz_class;

// Error taxonomy shared by every module. The CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct SystemMismatch : Error {
  using Error::Error;
};
// A distance was requested at a horizon the word resolution cannot resolve.
struct InexactDistance : Error {
  using Error::Error;
};
struct ResourceCap : Error {
  using Error::Error;
};
struct VerificationFailure : Error {
  using Error::Error;
};
// Unreadable or malformed input document.
struct FormatError : Error {
  using Error::Error;
};

// Accepts "p/q", "p" and plain decimals such as "0.3" (converted exactly).
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

Rational pow(const Rational& base, unsigned exponent);

inline double to_double(const Rational& value) { return value.get_d(); }

// Natural log of a positive big integer without overflowing a double.
double log_of(const BigInt& value);

BigInt binomial(unsigned long n, unsigned long k);

}  // namespace emergence
