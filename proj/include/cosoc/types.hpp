#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace cosoc {

/// Day index within the observation window, 1-based.
using Day = int;

/// Dense index tagged by the registry it belongs to.
template <class Tag>
class Index {
 public:
  using value_type = std::uint32_t;

  constexpr Index() noexcept = default;
  constexpr explicit Index(value_type v) noexcept : value_(v) {}

  [[nodiscard]] constexpr value_type get() const noexcept { return value_; }

  friend constexpr auto operator<=>(Index, Index) noexcept = default;

 private:
  value_type value_ = 0;
};

using BlogId = Index<struct BlogTag>;
using TermId = Index<struct TermTag>;
using UrlId = Index<struct UrlTag>;

/// Input that violates a documented contract (bad record, out-of-range day,
/// unknown identifier, invalid parameter).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failure (missing input, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cosoc

template <class Tag>
struct std::hash<cosoc::Index<Tag>> {
  std::size_t operator()(cosoc::Index<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.get()); }
};
