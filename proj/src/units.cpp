// Copyright 2026 The v2x-market Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "v2x/units.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace v2x {

std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw Error("units", std::string("integer overflow in ") + what);
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r)) throw Error("units", std::string("integer overflow in ") + what);
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("units", std::string("integer overflow in ") + what);
  return r;
}

Kwh energy_sub(Kwh a, Kwh b) {
  if (a.count() < b.count()) {
    throw Error("units", "energy subtraction would go negative: " + std::to_string(a.count()) +
                             " - " + std::to_string(b.count()));
  }
  return Kwh(a.count() - b.count());
}

std::string format_pence(Money m) {
  std::int64_t mp = m.milli_pence;
  const char* sign = mp < 0 ? "-" : "";
  // avoid UB on INT64_MIN; milli-pence magnitudes never get near it in files
  unsigned long long abs_mp = mp < 0 ? 0ULL - static_cast<unsigned long long>(mp)
                                     : static_cast<unsigned long long>(mp);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%03llu", sign, abs_mp / 1000ULL, abs_mp % 1000ULL);
  return buf;
}

Money parse_pence(const std::string& text) {
  const char* p = text.c_str();
  bool negative = false;
  if (*p == '+' || *p == '-') {
    negative = (*p == '-');
    ++p;
  }
  if (!std::isdigit(static_cast<unsigned char>(*p))) {
    throw Error("io", "bad money literal '" + text + "'");
  }
  std::int64_t pence = 0;
  while (std::isdigit(static_cast<unsigned char>(*p))) {
    pence = checked_add(checked_mul(pence, 10, "money parse"), *p - '0', "money parse");
    ++p;
  }
  std::int64_t milli = 0;
  if (*p == '.') {
    ++p;
    int digits = 0;
    std::int64_t frac = 0;
    while (std::isdigit(static_cast<unsigned char>(*p))) {
      frac = frac * 10 + (*p - '0');
      ++digits;
      ++p;
    }
    if (digits < 1 || digits > 3) {
      throw Error("io", "money literal '" + text + "' must have 1..3 fraction digits");
    }
    for (int i = digits; i < 3; ++i) frac *= 10;
    milli = frac;
  }
  if (*p != '\0') throw Error("io", "trailing characters in money literal '" + text + "'");
  std::int64_t total = checked_add(checked_mul(pence, 1000, "money parse"), milli, "money parse");
  return Money{negative ? -total : total};
}

}  // namespace v2x
