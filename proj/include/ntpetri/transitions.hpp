#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ntpetri/state.hpp"

namespace ntpetri {

enum class TransitionKind { And, Xor, Custom };

/// One colored, weighted arc endpoint of an AND transition.
struct ArcTerm {
  PlaceId place = 0;
  ColorId color = 0;
  std::int64_t weight = 1;

  auto operator<=>(const ArcTerm&) const = default;
};

/// Enabled when every input (place, color) holds at least `weight` tokens;
/// fires by removing all inputs and producing all outputs at once.
struct AndPayload {
  std::vector<ArcTerm> inputs;
  std::vector<ArcTerm> outputs;
};

/// One input/output pairing of an XOR transition: firing this branch moves
/// a single token from `input` to `output`.
struct XorPair {
  TokenKey input;
  TokenKey output;

  auto operator<=>(const XorPair&) const = default;
};

struct XorPayload {
  std::vector<XorPair> pairs;
};

/// Host-code transition. `enable` and `updates` receive the marking already
/// restricted to `input_places`, so they cannot observe anything else; every
/// emitted delta may subtract only from `input_places` and add only to
/// `output_places`. Update sets must be finite and non-empty when enabled;
/// `max_deltas` is a hard cap on their size.
struct CustomPayload {
  std::vector<PlaceId> input_places;
  std::vector<PlaceId> output_places;
  std::function<bool(const State&)> enable;
  std::function<std::vector<StateDelta>(const State&)> updates;
  std::size_t max_deltas = 1024;
};

/// A transition node. Construction normalizes the payload (AND inputs and
/// outputs merged per (place, color), XOR pairs and declared place lists
/// sorted) but does not check references; see validate_net.
class TransitionSpec {
 public:
  TransitionSpec(std::string name, AndPayload payload);
  TransitionSpec(std::string name, XorPayload payload);
  TransitionSpec(std::string name, CustomPayload payload);

  const std::string& name() const { return name_; }
  TransitionKind kind() const;

  const AndPayload& and_payload() const { return std::get<AndPayload>(payload_); }
  const XorPayload& xor_payload() const { return std::get<XorPayload>(payload_); }
  const CustomPayload& custom_payload() const {
    return std::get<CustomPayload>(payload_);
  }

  /// Sorted unique places the transition consumes from / produces to.
  const std::vector<PlaceId>& input_places() const { return input_places_; }
  const std::vector<PlaceId>& output_places() const { return output_places_; }

 private:
  std::string name_;
  std::variant<AndPayload, XorPayload, CustomPayload> payload_;
  std::vector<PlaceId> input_places_;
  std::vector<PlaceId> output_places_;
};

/// The enable function: depends only on the input places of the transition.
bool enabled(const TransitionSpec& t, const State& s);

/// The update set for an enabled transition, deduplicated and in canonical
/// delta order. Throws NotEnabledError when enabled(t, s) is false and
/// ContractViolationError when a custom payload breaks its contract.
std::vector<StateDelta> updates(const TransitionSpec& t, const State& s);

}  // namespace ntpetri
