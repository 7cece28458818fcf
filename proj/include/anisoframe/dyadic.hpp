#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace anisoframe {

// Exact rational num / 2^shift. Normalized so that num is odd unless shift == 0.
// Arithmetic throws std::overflow_error instead of wrapping.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr Dyadic(std::int64_t integer) : num_(integer) {}  // NOLINT(implicit)

  static Dyadic from_ratio(std::int64_t num, int shift);

  std::int64_t numerator() const { return num_; }
  int shift() const { return shift_; }

  double to_double() const;
  std::int64_t floor() const;
  bool is_integer() const { return shift_ == 0; }

  // Multiply by 2^e (e may be negative).
  Dyadic scaled(int e) const;

  // Value times 2^e as an exact integer; throws if not integral.
  std::int64_t times_pow2(int e) const;

  Dyadic operator-() const;
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  int shift_ = 0;

  static Dyadic normalized(__int128 num, int shift);
};

}  // namespace anisoframe
