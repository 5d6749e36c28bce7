#include "ntpetri/transitions.hpp"

#include <algorithm>

namespace ntpetri {

namespace {

// Merge duplicate (place, color) terms by summing weights; keep key order.
std::vector<ArcTerm> merge_terms(std::vector<ArcTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const ArcTerm& a, const ArcTerm& b) {
    return TokenKey{a.place, a.color} < TokenKey{b.place, b.color};
  });
  std::vector<ArcTerm> out;
  out.reserve(terms.size());
  for (const ArcTerm& t : terms) {
    if (!out.empty() && out.back().place == t.place &&
        out.back().color == t.color) {
      out.back().weight += t.weight;
    } else {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<PlaceId> sorted_unique(std::vector<PlaceId> places) {
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  return places;
}

std::vector<PlaceId> places_of(const std::vector<ArcTerm>& terms) {
  std::vector<PlaceId> out;
  out.reserve(terms.size());
  for (const ArcTerm& t : terms) out.push_back(t.place);
  return sorted_unique(std::move(out));
}

void canonicalize(std::vector<StateDelta>& deltas) {
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
}

}  // namespace

TransitionSpec::TransitionSpec(std::string name, AndPayload payload)
    : name_(std::move(name)) {
  payload.inputs = merge_terms(std::move(payload.inputs));
  payload.outputs = merge_terms(std::move(payload.outputs));
  input_places_ = places_of(payload.inputs);
  output_places_ = places_of(payload.outputs);
  payload_ = std::move(payload);
}

TransitionSpec::TransitionSpec(std::string name, XorPayload payload)
    : name_(std::move(name)) {
  std::sort(payload.pairs.begin(), payload.pairs.end());
  std::vector<PlaceId> in, out;
  for (const XorPair& p : payload.pairs) {
    in.push_back(p.input.place);
    out.push_back(p.output.place);
  }
  input_places_ = sorted_unique(std::move(in));
  output_places_ = sorted_unique(std::move(out));
  payload_ = std::move(payload);
}

TransitionSpec::TransitionSpec(std::string name, CustomPayload payload)
    : name_(std::move(name)) {
  payload.input_places = sorted_unique(std::move(payload.input_places));
  payload.output_places = sorted_unique(std::move(payload.output_places));
  input_places_ = payload.input_places;
  output_places_ = payload.output_places;
  payload_ = std::move(payload);
}

TransitionKind TransitionSpec::kind() const {
  switch (payload_.index()) {
    case 0:
      return TransitionKind::And;
    case 1:
      return TransitionKind::Xor;
    default:
      return TransitionKind::Custom;
  }
}

bool enabled(const TransitionSpec& t, const State& s) {
  switch (t.kind()) {
    case TransitionKind::And: {
      const auto& p = t.and_payload();
      return std::all_of(p.inputs.begin(), p.inputs.end(),
                         [&](const ArcTerm& in) {
                           return s.count(in.place, in.color) >= in.weight;
                         });
    }
    case TransitionKind::Xor: {
      const auto& p = t.xor_payload();
      return std::any_of(p.pairs.begin(), p.pairs.end(), [&](const XorPair& q) {
        return s.count(q.input) >= 1;
      });
    }
    case TransitionKind::Custom: {
      const auto& p = t.custom_payload();
      if (!p.enable) {
        throw ContractViolationError("custom transition '" + t.name() +
                                     "' has no enable function");
      }
      return p.enable(s.restricted_to(p.input_places));
    }
  }
  return false;
}

namespace {

std::vector<StateDelta> custom_updates(const TransitionSpec& t,
                                       const State& s) {
  const auto& p = t.custom_payload();
  if (!p.updates) {
    throw ContractViolationError("custom transition '" + t.name() +
                                 "' has no update enumerator");
  }
  const State restricted = s.restricted_to(p.input_places);
  std::vector<StateDelta> deltas = p.updates(restricted);
  if (deltas.empty()) {
    throw ContractViolationError("custom transition '" + t.name() +
                                 "' returned an empty update set while enabled");
  }
  if (deltas.size() > p.max_deltas) {
    throw ContractViolationError(
        "custom transition '" + t.name() + "' returned " +
        std::to_string(deltas.size()) + " deltas, cap is " +
        std::to_string(p.max_deltas));
  }
  for (const StateDelta& d : deltas) {
    for (const auto& e : d.entries()) {
      const auto& allowed = e.change < 0 ? p.input_places : p.output_places;
      if (!std::binary_search(allowed.begin(), allowed.end(), e.key.place)) {
        throw ContractViolationError(
            "custom transition '" + t.name() + "' touches place " +
            std::to_string(e.key.place) + " outside its declared " +
            (e.change < 0 ? "inputs" : "outputs"));
      }
      if (e.change < 0 && restricted.count(e.key) + e.change < 0) {
        throw ContractViolationError("custom transition '" + t.name() +
                                     "' emitted an underflowing delta");
      }
    }
  }
  return deltas;
}

}  // namespace

std::vector<StateDelta> updates(const TransitionSpec& t, const State& s) {
  if (!enabled(t, s)) {
    throw NotEnabledError("transition '" + t.name() + "' is not enabled");
  }
  std::vector<StateDelta> deltas;
  switch (t.kind()) {
    case TransitionKind::And: {
      const auto& p = t.and_payload();
      std::vector<StateDelta::Entry> entries;
      entries.reserve(p.inputs.size() + p.outputs.size());
      for (const ArcTerm& in : p.inputs) {
        entries.push_back({{in.place, in.color}, -in.weight});
      }
      for (const ArcTerm& out : p.outputs) {
        entries.push_back({{out.place, out.color}, out.weight});
      }
      deltas.push_back(StateDelta(std::move(entries)));
      break;
    }
    case TransitionKind::Xor: {
      for (const XorPair& q : t.xor_payload().pairs) {
        if (s.count(q.input) >= 1) {
          deltas.push_back(StateDelta{{q.input, -1}, {q.output, +1}});
        }
      }
      break;
    }
    case TransitionKind::Custom:
      deltas = custom_updates(t, s);
      break;
  }
  canonicalize(deltas);
  return deltas;
}

}  // namespace ntpetri
