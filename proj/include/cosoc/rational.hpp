#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace cosoc {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are stored inline and
/// combined with 128-bit intermediates. Any result that does not fit is
/// carried as an arbitrary-precision rational, so arithmetic never overflows.
class Rational {
 public:
  using Big = boost::multiprecision::cpp_rational;

  constexpr Rational() noexcept = default;
  constexpr Rational(std::int64_t value) noexcept : num_(value) {}  // NOLINT(google-explicit-constructor)

  Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw std::domain_error("Rational: zero denominator");
    assign(static_cast<i128>(numerator), static_cast<i128>(denominator));
  }

  explicit Rational(const Big& value) { assign_big(value); }

  /// Parses "n", "-n" or "n/d".
  static Rational parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty()) throw std::invalid_argument("Rational: empty component in '" + std::string(text) + "'");
      std::size_t pos = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(std::string(s), &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
      }
      if (pos != s.size()) throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
      return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }

  [[nodiscard]] bool is_big() const noexcept { return big_ != nullptr; }
  [[nodiscard]] bool is_zero() const noexcept { return !big_ && num_ == 0; }
  [[nodiscard]] bool is_integer() const noexcept { return !big_ && den_ == 1; }

  /// Inline numerator/denominator; only meaningful when !is_big().
  [[nodiscard]] std::int64_t numerator() const noexcept { return num_; }
  [[nodiscard]] std::int64_t denominator() const noexcept { return den_; }

  [[nodiscard]] Big to_big() const {
    if (big_) return *big_;
    return Big(num_, den_);
  }

  [[nodiscard]] double to_double() const {
    if (big_) return big_->convert_to<double>();
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  [[nodiscard]] std::string to_string() const {
    if (big_) {
      const auto n = boost::multiprecision::numerator(*big_);
      const auto d = boost::multiprecision::denominator(*big_);
      return d == 1 ? n.str() : n.str() + "/" + d.str();
    }
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  [[nodiscard]] Rational reciprocal() const {
    if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
    if (big_) return Rational(Big(1) / *big_);
    return Rational(den_, num_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) return from_i128(static_cast<i128>(a.num_) + b.num_, 1);
      // Knuth's reduction: gcd of the result divides gcd(a.den, b.den).
      const std::int64_t g = gcd64(a.den_, b.den_);
      const i128 n = static_cast<i128>(a.num_) * (b.den_ / g) + static_cast<i128>(b.num_) * (a.den_ / g);
      const i128 d = static_cast<i128>(a.den_ / g) * b.den_;
      if (n == 0) return Rational();
      const std::int64_t g2 = g == 1 ? 1 : gcd64(static_cast<std::int64_t>(abs128(n) % g), g);
      return from_i128(n / g2, d / g2);
    }
    return Rational(a.to_big() + b.to_big());
  }

  friend Rational operator-(const Rational& a) {
    if (a.big_) return Rational(-*a.big_);
    return from_i128(-static_cast<i128>(a.num_), a.den_);
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      const std::int64_t g1 = gcd64(a.num_, b.den_);
      const std::int64_t g2 = gcd64(b.num_, a.den_);
      return from_i128(static_cast<i128>(a.num_ / g1) * (b.num_ / g2),
                       static_cast<i128>(a.den_ / g2) * (b.den_ / g1));
    }
    return Rational(a.to_big() * b.to_big());
  }

  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // a big value never fits inline, so it differs from every inline one
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      const i128 l = static_cast<i128>(a.num_) * b.den_;
      const i128 r = static_cast<i128>(b.num_) * a.den_;
      return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    const Big l = a.to_big();
    const Big r = b.to_big();
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  __extension__ using i128 = __int128;
  __extension__ using u128 = unsigned __int128;

  static i128 abs128(i128 v) noexcept { return v < 0 ? -v : v; }

  static std::int64_t gcd64(std::int64_t a, std::int64_t b) noexcept {
    std::uint64_t x = a < 0 ? 0 - static_cast<std::uint64_t>(a) : static_cast<std::uint64_t>(a);
    std::uint64_t y = b < 0 ? 0 - static_cast<std::uint64_t>(b) : static_cast<std::uint64_t>(b);
    while (y != 0) {
      const std::uint64_t t = x % y;
      x = y;
      y = t;
    }
    return static_cast<std::int64_t>(x);
  }

  static i128 gcd128(i128 a, i128 b) noexcept {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static bool fits64(i128 v) noexcept {
    return v >= static_cast<i128>(INT64_MIN) && v <= static_cast<i128>(INT64_MAX);
  }

  // n/d with d > 0 and already in lowest terms.
  static Rational from_i128(i128 n, i128 d) {
    Rational r;
    if (fits64(n) && fits64(d)) {
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
    r.assign_big(Big(to_cpp_int(n), to_cpp_int(d)));
    return r;
  }

  static boost::multiprecision::cpp_int to_cpp_int(i128 v) {
    const bool neg = v < 0;
    u128 u = neg ? static_cast<u128>(0) - static_cast<u128>(v)
              : static_cast<u128>(v);
    boost::multiprecision::cpp_int out = static_cast<std::uint64_t>(u >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(u);
    return neg ? -out : out;
  }

  void assign(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const i128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n == 0) d = 1;
    *this = from_i128(n, d);
  }

  void assign_big(const Big& value) {
    const auto& n = boost::multiprecision::numerator(value);
    const auto& d = boost::multiprecision::denominator(value);
    static const boost::multiprecision::cpp_int lo = INT64_MIN;
    static const boost::multiprecision::cpp_int hi = INT64_MAX;
    if (n >= lo && n <= hi && d <= hi) {
      num_ = n.convert_to<std::int64_t>();
      den_ = d.convert_to<std::int64_t>();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_shared<const Big>(value);
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const Big> big_;
};

/// A value of T extended with a single point at +infinity, used for distances
/// to unreachable nodes. Infinity compares greater than every finite value and
/// equal to itself.
template <class T>
class Extended {
 public:
  Extended() = delete;
  Extended(T value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)

  static Extended infinite() { return Extended(std::nullopt); }

  [[nodiscard]] bool is_infinite() const noexcept { return !value_.has_value(); }
  [[nodiscard]] bool is_finite() const noexcept { return value_.has_value(); }

  [[nodiscard]] const T& value() const {
    if (!value_) throw std::logic_error("Extended: value() on infinity");
    return *value_;
  }

  friend bool operator==(const Extended& a, const Extended& b) { return a.value_ == b.value_; }

  friend auto operator<=>(const Extended& a, const Extended& b) -> std::strong_ordering {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    const auto c = *a.value_ <=> *b.value_;
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Extended& e) {
    if (e.is_infinite()) return os << "inf";
    return os << *e.value_;
  }

 private:
  explicit Extended(std::nullopt_t) : value_(std::nullopt) {}

  std::optional<T> value_;
};

}  // namespace cosoc
