/*
 * Copyright 2026 The condatom Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#if defined(CONDATOM_USE_GMP)
#include <boost/multiprecision/gmp.hpp>
#else
#include <boost/multiprecision/cpp_int.hpp>
#endif

#include <cctype>
#include <string>
#include <string_view>

#include "condatom/errors.hpp"

namespace condatom {

/// Exact rational number, kept in lowest terms with a positive denominator.
#if defined(CONDATOM_USE_GMP)
using Scalar = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
#else
using Scalar = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
#endif

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace detail

/// Parses "num/den" or a plain integer. An optional leading '-' is accepted on the numerator.
inline Scalar parse_scalar(std::string_view text) {
  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  std::string_view num_digits = num;
  if (!num_digits.empty() && num_digits.front() == '-') num_digits.remove_prefix(1);
  if (!detail::all_digits(num_digits) || !detail::all_digits(den)) {
    throw ParseError("malformed rational \"" + std::string(text) + "\", expected \"num/den\" or an integer");
  }
  Integer d(std::string{den});
  if (d == 0) throw ParseError("rational \"" + std::string(text) + "\" has zero denominator");
  return Scalar(Integer(std::string{num}), d);
}

/// "num/den" in lowest terms; integers print without a denominator.
inline std::string to_string(const Scalar& x) {
  const Integer& den = boost::multiprecision::denominator(x);
  if (den == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + den.str();
}

/// k * 2^-depth, exact.
inline Scalar dyadic(unsigned long long k, unsigned depth) {
  return Scalar(Integer(k), Integer(1) << depth);
}

inline bool in_unit_interval(const Scalar& x) { return x >= 0 && x <= 1; }

}  // namespace condatom
