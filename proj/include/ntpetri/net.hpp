#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ntpetri/transitions.hpp"

namespace ntpetri {

struct ValidationFinding {
  enum class Severity { Error, Warning };
  enum class Code {
    DanglingPlace,
    DanglingColor,
    InvalidWeight,
    MalformedXor,
    MissingCallback,
    AlwaysEnabled,
  };

  Severity severity = Severity::Error;
  Code code = Code::DanglingPlace;
  std::optional<TransitionId> transition;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;

  bool ok() const;  // no Error-severity findings (warnings allowed)
  bool empty() const { return findings.empty(); }
};

/// A finalized net: immutable, safe to share across threads. Places and
/// colors are dense ids into the name tables; arcs live inside the
/// transition specs.
class Net {
 public:
  std::size_t place_count() const { return places_.size(); }
  std::size_t color_count() const { return colors_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }

  const std::string& place_name(PlaceId p) const { return places_.at(p); }
  const std::string& color_name(ColorId c) const { return colors_.at(c); }
  const std::vector<std::string>& place_names() const { return places_; }
  const std::vector<std::string>& color_names() const { return colors_; }

  const TransitionSpec& transition(TransitionId t) const {
    return transitions_.at(t);
  }
  const std::vector<TransitionSpec>& transitions() const {
    return transitions_;
  }

  std::optional<PlaceId> find_place(std::string_view name) const;
  std::optional<ColorId> find_color(std::string_view name) const;
  std::optional<TransitionId> find_transition(std::string_view name) const;

  bool has_custom_transitions() const;

 private:
  friend class NetBuilder;
  std::vector<std::string> places_;
  std::vector<std::string> colors_;
  std::vector<TransitionSpec> transitions_;
};

/// Single-threaded construction stage. Ids are assigned densely in
/// insertion order; the constructor rejects duplicate names and an empty
/// color table, everything else is checked by build().
class NetBuilder {
 public:
  NetBuilder(std::vector<std::string> place_names,
             std::vector<std::string> color_names);

  TransitionId add_and(std::string name, std::vector<ArcTerm> inputs,
                       std::vector<ArcTerm> outputs);
  TransitionId add_xor(std::string name, std::vector<XorPair> pairs);
  TransitionId add_custom(std::string name, CustomPayload payload);

  /// Validates and returns the finalized net; throws the first
  /// Error-severity finding as a SemanticError subclass.
  Net build() const;

  /// Skips validation (for tooling that wants to inspect a broken net).
  Net build_unchecked() const;

 private:
  Net net_;
};

ValidationReport validate_net(const Net& n);

/// "{H2:2, O2:1}" for single-color nets, "{P0[blue]:1}" otherwise.
std::string format_state(const Net& n, const State& s);
std::string format_delta(const Net& n, const StateDelta& d);

}  // namespace ntpetri
