#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace subring {

using Int = std::int64_t;

/// Raised when an exact integer operation would leave the representable
/// range. Results are never wrapped.
class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what)
      : std::overflow_error("integer overflow in " + what) {}
};

/// Caller passed malformed input (shape or length mismatch, bad range).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition on a mathematical argument does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A guaranteed mathematical fact failed to materialize; always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace checked {

inline Int add(Int a, Int b) {
  Int out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("add");
  return out;
}

inline Int sub(Int a, Int b) {
  Int out;
  if (__builtin_sub_overflow(a, b, &out)) throw OverflowError("sub");
  return out;
}

inline Int mul(Int a, Int b) {
  Int out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("mul");
  return out;
}

inline Int neg(Int a) {
  if (a == std::numeric_limits<Int>::min()) throw OverflowError("neg");
  return -a;
}

inline Int abs(Int a) { return a < 0 ? neg(a) : a; }

// a - q*b in one checked step
inline Int sub_mul(Int a, Int q, Int b) { return sub(a, mul(q, b)); }

/// Floor division; b != 0.
inline Int floor_div(Int a, Int b) {
  if (b == -1) return neg(a);
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Representative of a mod m in [0, |m|); m != 0.
inline Int mod_floor(Int a, Int m) {
  Int r = a % m;
  if (r < 0) r += (m < 0 ? -m : m);
  return r;
}

inline Int gcd(Int a, Int b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
inline std::tuple<Int, Int, Int> xgcd(Int a, Int b) {
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = sub_mul(old_r, q, r);
    old_r = r;
    r = tmp;
    tmp = sub_mul(old_s, q, s);
    old_s = s;
    s = tmp;
    tmp = sub_mul(old_t, q, t);
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {neg(old_r), neg(old_s), neg(old_t)};
  return {old_r, old_s, old_t};
}

}  // namespace checked
}  // namespace subring
