#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "ntpetri/errors.hpp"

namespace ntpetri {

using PlaceId = std::uint32_t;
using ColorId = std::uint32_t;
using TransitionId = std::uint32_t;

struct TokenKey {
  PlaceId place = 0;
  ColorId color = 0;

  auto operator<=>(const TokenKey&) const = default;
};

/// A marking: token counts per (place, color). Canonical form stores only
/// strictly positive counts in key order, so structural equality is marking
/// equality and the lexicographic order over entries is the canonical node
/// order used throughout.
class State {
 public:
  struct Entry {
    TokenKey key;
    std::int64_t count = 0;  // >= 1 once canonicalized

    auto operator<=>(const Entry&) const = default;
  };

  State() = default;

  /// Normalizes: sorts by key, merges duplicate keys by summing, drops
  /// zeros. Throws NegativeTokensError if any merged count is negative.
  explicit State(std::vector<Entry> entries);
  State(std::initializer_list<Entry> entries)
      : State(std::vector<Entry>(entries)) {}

  std::int64_t count(TokenKey key) const;
  std::int64_t count(PlaceId place, ColorId color) const {
    return count(TokenKey{place, color});
  }

  std::int64_t total_tokens() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }

  /// The sub-marking over the given places (used to feed custom transition
  /// callbacks exactly the places they declared).
  State restricted_to(std::span<const PlaceId> places) const;

  bool operator==(const State&) const = default;
  auto operator<=>(const State&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// A signed change to a marking, one element of an update set. Canonical
/// form stores only nonzero changes in key order.
class StateDelta {
 public:
  struct Entry {
    TokenKey key;
    std::int64_t change = 0;  // != 0 once canonicalized

    auto operator<=>(const Entry&) const = default;
  };

  StateDelta() = default;

  /// Normalizes: sorts by key, merges duplicate keys by summing, drops zeros.
  explicit StateDelta(std::vector<Entry> entries);
  StateDelta(std::initializer_list<Entry> entries)
      : StateDelta(std::vector<Entry>(entries)) {}

  std::int64_t change(TokenKey key) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }

  bool operator==(const StateDelta&) const = default;
  auto operator<=>(const StateDelta&) const = default;

 private:
  std::vector<Entry> entries_;
};

/// Returns the canonical s + d. Throws NegativeTokensError if any
/// (place, color) would drop below zero; the inputs are never modified.
State apply_delta(const State& s, const StateDelta& d);

StateDelta negate(const StateDelta& d);

struct StateHash {
  std::size_t operator()(const State& s) const;
};

}  // namespace ntpetri
