#include "anisoframe/dyadic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anisoframe {

namespace {

constexpr int kMaxShift = 62;

bool fits_int64(__int128 v) {
  return v >= static_cast<__int128>(std::numeric_limits<std::int64_t>::min()) &&
         v <= static_cast<__int128>(std::numeric_limits<std::int64_t>::max());
}

__int128 aligned(std::int64_t num, int up) {
  return static_cast<__int128>(num) * (static_cast<__int128>(1) << up);
}

}  // namespace

Dyadic Dyadic::normalized(__int128 num, int shift) {
  if (num == 0) return Dyadic{};
  while (shift > 0 && (num & 1) == 0) {
    num /= 2;
    --shift;
  }
  while (shift < 0) {
    num *= 2;
    ++shift;
    if (!fits_int64(num)) throw std::overflow_error("dyadic numerator overflow");
  }
  if (shift > kMaxShift) throw std::overflow_error("dyadic denominator overflow");
  if (!fits_int64(num)) throw std::overflow_error("dyadic numerator overflow");
  Dyadic out;
  out.num_ = static_cast<std::int64_t>(num);
  out.shift_ = shift;
  return out;
}

Dyadic Dyadic::from_ratio(std::int64_t num, int shift) { return normalized(num, shift); }

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -shift_); }

std::int64_t Dyadic::floor() const {
  if (shift_ == 0) return num_;
  // Arithmetic right shift rounds toward negative infinity.
  return num_ >> shift_;
}

Dyadic Dyadic::scaled(int e) const { return normalized(num_, shift_ - e); }

std::int64_t Dyadic::times_pow2(int e) const {
  Dyadic v = scaled(e);
  if (!v.is_integer()) throw std::domain_error("dyadic value is not integral at this scale");
  return v.num_;
}

Dyadic Dyadic::operator-() const { return normalized(-static_cast<__int128>(num_), shift_); }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  int s = std::max(a.shift_, b.shift_);
  return Dyadic::normalized(aligned(a.num_, s - a.shift_) + aligned(b.num_, s - b.shift_), s);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  int s = std::max(a.shift_, b.shift_);
  return Dyadic::normalized(aligned(a.num_, s - a.shift_) - aligned(b.num_, s - b.shift_), s);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic::normalized(static_cast<__int128>(a.num_) * b.num_, a.shift_ + b.shift_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int s = std::max(a.shift_, b.shift_);
  __int128 x = aligned(a.num_, s - a.shift_);
  __int128 y = aligned(b.num_, s - b.shift_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dyadic::to_string() const {
  if (shift_ == 0) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(std::int64_t{1} << shift_);
}

}  // namespace anisoframe
