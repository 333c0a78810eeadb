#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace tridecomp {

// All graph-side statistics (alpha, t_A, lambda_A, capacities, weights) are
// exact rationals; the inequalities this library audits are exact claims and
// must never be decided in floating point.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

BigInt floor_rat(const Rat& q);
BigInt ceil_rat(const Rat& q);

// Canonical lowest-terms "p/q" with q >= 1, e.g. "1/5", "-3/2", "7/1".
std::string rat_to_string(const Rat& q);

// Accepts "p/q", plain integers, and decimal literals ("0.148" -> 37/250).
Rat parse_rat(const std::string& text);

double to_double(const Rat& q);

// Narrowing cast that refuses to lose information.
std::int64_t checked_int64(const BigInt& v);

}  // namespace tridecomp
