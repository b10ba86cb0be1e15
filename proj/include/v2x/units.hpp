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

#ifndef V2X_UNITS_HPP
#define V2X_UNITS_HPP

#include <compare>
#include <cstdint>
#include <string>

#include "v2x/errors.hpp"

namespace v2x {

// All money is integer milli-pence and all energy is integer kWh, so every
// comparison the mechanism makes (argmax ties, VCG differences, invariants)
// is exact. Arithmetic is overflow-checked; a silent wrap would corrupt an
// auction outcome without any test noticing.

std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what);
std::int64_t checked_sub(std::int64_t a, std::int64_t b, const char* what);
std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what);

// Signed amount in milli-pence (1/1000 of a penny).
struct Money {
  std::int64_t milli_pence = 0;

  constexpr Money() = default;
  constexpr explicit Money(std::int64_t mp) : milli_pence(mp) {}

  auto operator<=>(const Money&) const = default;

  Money& operator+=(Money o) {
    milli_pence = checked_add(milli_pence, o.milli_pence, "money add");
    return *this;
  }
  Money& operator-=(Money o) {
    milli_pence = checked_sub(milli_pence, o.milli_pence, "money sub");
    return *this;
  }
};

inline Money operator+(Money a, Money b) { return a += b; }
inline Money operator-(Money a, Money b) { return a -= b; }
inline Money operator-(Money a) {
  return Money{checked_sub(0, a.milli_pence, "money negate")};
}
inline Money operator*(Money a, std::int64_t k) {
  return Money{checked_mul(a.milli_pence, k, "money scale")};
}

// Non-negative whole kWh.
class Kwh {
 public:
  Kwh() = default;
  explicit Kwh(std::int64_t n) : count_(n) {
    if (n < 0) throw Error("units", "energy must be non-negative kWh, got " + std::to_string(n));
  }

  std::int64_t count() const { return count_; }
  auto operator<=>(const Kwh&) const = default;

 private:
  std::int64_t count_ = 0;
};

inline Kwh operator+(Kwh a, Kwh b) {
  return Kwh(checked_add(a.count(), b.count(), "energy add"));
}
// a - b, throws if the result would be negative.
Kwh energy_sub(Kwh a, Kwh b);
// max(0, a - b).
inline Kwh energy_sub_floor0(Kwh a, Kwh b) {
  return a.count() >= b.count() ? Kwh(a.count() - b.count()) : Kwh(0);
}
inline Kwh min(Kwh a, Kwh b) { return a < b ? a : b; }

// per-kWh price x quantity -> total money.
inline Money scale_by_energy(Money per_kwh, Kwh q) {
  return per_kwh * q.count();
}

// Decimal pence with exactly three fraction digits, e.g. -1250 -> "-1.250".
std::string format_pence(Money m);
// Exact inverse of the file format: optional sign, integer pence, optional
// '.' with 1..3 fraction digits. Anything else is rejected.
Money parse_pence(const std::string& text);

}  // namespace v2x

#endif  // V2X_UNITS_HPP
