#include "ntpetri/state.hpp"

#include <algorithm>
#include <string>

namespace ntpetri {

namespace {

// Shared normalization: sort by key, merge duplicates, drop zeros.
template <typename Entry, typename Get>
std::vector<Entry> normalize(std::vector<Entry> entries, Get get_value) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  std::vector<Entry> out;
  out.reserve(entries.size());
  for (Entry& e : entries) {
    if (!out.empty() && out.back().key == e.key) {
      get_value(out.back()) += get_value(e);
    } else {
      out.push_back(e);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [&](Entry& e) { return get_value(e) == 0; }),
            out.end());
  return out;
}

std::string key_text(TokenKey k) {
  return "(place " + std::to_string(k.place) + ", color " +
         std::to_string(k.color) + ")";
}

}  // namespace

State::State(std::vector<Entry> entries)
    : entries_(normalize(std::move(entries),
                         [](Entry& e) -> std::int64_t& { return e.count; })) {
  for (const Entry& e : entries_) {
    if (e.count < 0) {
      throw NegativeTokensError("negative token count at " + key_text(e.key));
    }
  }
}

std::int64_t State::count(TokenKey key) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const Entry& e, TokenKey k) { return e.key < k; });
  return (it != entries_.end() && it->key == key) ? it->count : 0;
}

std::int64_t State::total_tokens() const {
  std::int64_t total = 0;
  for (const Entry& e : entries_) total += e.count;
  return total;
}

State State::restricted_to(std::span<const PlaceId> places) const {
  State out;
  out.entries_.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (std::find(places.begin(), places.end(), e.key.place) != places.end()) {
      out.entries_.push_back(e);
    }
  }
  return out;
}

StateDelta::StateDelta(std::vector<Entry> entries)
    : entries_(normalize(std::move(entries),
                         [](Entry& e) -> std::int64_t& { return e.change; })) {}

std::int64_t StateDelta::change(TokenKey key) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const Entry& e, TokenKey k) { return e.key < k; });
  return (it != entries_.end() && it->key == key) ? it->change : 0;
}

State apply_delta(const State& s, const StateDelta& d) {
  // Both inputs are key-sorted; merge-walk them.
  std::vector<State::Entry> out;
  out.reserve(s.size() + d.size());
  auto si = s.entries().begin();
  auto se = s.entries().end();
  auto di = d.entries().begin();
  auto de = d.entries().end();
  auto emit = [&](TokenKey key, std::int64_t count) {
    if (count < 0) {
      throw NegativeTokensError("delta drives " + key_text(key) +
                                " below zero");
    }
    if (count > 0) out.push_back({key, count});
  };
  while (si != se && di != de) {
    if (si->key < di->key) {
      out.push_back(*si++);
    } else if (di->key < si->key) {
      emit(di->key, di->change);
      ++di;
    } else {
      emit(si->key, si->count + di->change);
      ++si;
      ++di;
    }
  }
  for (; si != se; ++si) out.push_back(*si);
  for (; di != de; ++di) emit(di->key, di->change);
  return State(std::move(out));
}

StateDelta negate(const StateDelta& d) {
  std::vector<StateDelta::Entry> entries;
  entries.reserve(d.size());
  for (const auto& e : d.entries()) entries.push_back({e.key, -e.change});
  return StateDelta(std::move(entries));
}

std::size_t StateHash::operator()(const State& s) const {
  std::size_t seed = s.size();
  for (const auto& e : s.entries()) {
    std::size_t h = (std::size_t(e.key.place) << 32) ^ std::size_t(e.key.color);
    h ^= std::size_t(e.count) * 0x9e3779b97f4a7c15ULL;
    seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  }
  return seed;
}

}  // namespace ntpetri
