#include "ntpetri/net.hpp"

#include <algorithm>
#include <unordered_set>

namespace ntpetri {

namespace {

void check_unique(const std::vector<std::string>& names, const char* what) {
  std::unordered_set<std::string_view> seen;
  for (const std::string& n : names) {
    if (!seen.insert(n).second) {
      throw DuplicateNameError(std::string("duplicate ") + what + " name '" +
                               n + "'");
    }
  }
}

template <typename Names>
std::optional<std::uint32_t> find_name(const Names& names,
                                       std::string_view name) {
  for (std::uint32_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

}  // namespace

bool ValidationReport::ok() const {
  return std::none_of(findings.begin(), findings.end(),
                      [](const ValidationFinding& f) {
                        return f.severity == ValidationFinding::Severity::Error;
                      });
}

std::optional<PlaceId> Net::find_place(std::string_view name) const {
  return find_name(places_, name);
}

std::optional<ColorId> Net::find_color(std::string_view name) const {
  return find_name(colors_, name);
}

std::optional<TransitionId> Net::find_transition(std::string_view name) const {
  for (std::uint32_t i = 0; i < transitions_.size(); ++i) {
    if (transitions_[i].name() == name) return i;
  }
  return std::nullopt;
}

bool Net::has_custom_transitions() const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [](const TransitionSpec& t) {
                       return t.kind() == TransitionKind::Custom;
                     });
}

NetBuilder::NetBuilder(std::vector<std::string> place_names,
                       std::vector<std::string> color_names) {
  if (color_names.empty()) {
    throw EmptyColorTableError("a net must declare at least one color");
  }
  check_unique(place_names, "place");
  check_unique(color_names, "color");
  net_.places_ = std::move(place_names);
  net_.colors_ = std::move(color_names);
}

TransitionId NetBuilder::add_and(std::string name, std::vector<ArcTerm> inputs,
                                 std::vector<ArcTerm> outputs) {
  net_.transitions_.emplace_back(
      std::move(name), AndPayload{std::move(inputs), std::move(outputs)});
  return static_cast<TransitionId>(net_.transitions_.size() - 1);
}

TransitionId NetBuilder::add_xor(std::string name, std::vector<XorPair> pairs) {
  net_.transitions_.emplace_back(std::move(name),
                                 XorPayload{std::move(pairs)});
  return static_cast<TransitionId>(net_.transitions_.size() - 1);
}

TransitionId NetBuilder::add_custom(std::string name, CustomPayload payload) {
  net_.transitions_.emplace_back(std::move(name), std::move(payload));
  return static_cast<TransitionId>(net_.transitions_.size() - 1);
}

Net NetBuilder::build() const {
  std::vector<std::string> names;
  for (const TransitionSpec& t : net_.transitions_) names.push_back(t.name());
  check_unique(names, "transition");

  ValidationReport report = validate_net(net_);
  for (const ValidationFinding& f : report.findings) {
    if (f.severity != ValidationFinding::Severity::Error) continue;
    switch (f.code) {
      case ValidationFinding::Code::DanglingPlace:
      case ValidationFinding::Code::DanglingColor:
        throw DanglingReferenceError(f.message);
      default:
        throw SemanticError(f.message);
    }
  }
  return net_;
}

Net NetBuilder::build_unchecked() const { return net_; }

namespace {

class Validator {
 public:
  explicit Validator(const Net& net) : net_(net) {}

  ValidationReport run() {
    for (TransitionId t = 0; t < net_.transition_count(); ++t) {
      check_transition(t, net_.transition(t));
    }
    return std::move(report_);
  }

 private:
  using Severity = ValidationFinding::Severity;
  using Code = ValidationFinding::Code;

  void add(Severity sev, Code code, TransitionId t, std::string msg) {
    report_.findings.push_back({sev, code, t, std::move(msg)});
  }

  void check_key(TransitionId t, const std::string& tname, PlaceId p,
                 ColorId c) {
    if (p >= net_.place_count()) {
      add(Severity::Error, Code::DanglingPlace, t,
          "transition '" + tname + "' references place id " +
              std::to_string(p) + " of " + std::to_string(net_.place_count()));
    }
    if (c >= net_.color_count()) {
      add(Severity::Error, Code::DanglingColor, t,
          "transition '" + tname + "' references color id " +
              std::to_string(c) + " of " + std::to_string(net_.color_count()));
    }
  }

  void check_transition(TransitionId t, const TransitionSpec& spec) {
    const std::string& name = spec.name();
    switch (spec.kind()) {
      case TransitionKind::And: {
        const auto& p = spec.and_payload();
        for (const ArcTerm& term : p.inputs) {
          check_key(t, name, term.place, term.color);
          check_weight(t, name, term.weight);
        }
        for (const ArcTerm& term : p.outputs) {
          check_key(t, name, term.place, term.color);
          check_weight(t, name, term.weight);
        }
        if (p.inputs.empty()) {
          add(Severity::Warning, Code::AlwaysEnabled, t,
              "transition '" + name + "' has no inputs and is always enabled");
        }
        break;
      }
      case TransitionKind::Xor: {
        const auto& p = spec.xor_payload();
        if (p.pairs.empty()) {
          add(Severity::Error, Code::MalformedXor, t,
              "xor transition '" + name + "' has no pairs");
        }
        std::vector<TokenKey> inputs;
        for (const XorPair& q : p.pairs) {
          check_key(t, name, q.input.place, q.input.color);
          check_key(t, name, q.output.place, q.output.color);
          inputs.push_back(q.input);
        }
        std::sort(inputs.begin(), inputs.end());
        if (std::adjacent_find(inputs.begin(), inputs.end()) != inputs.end()) {
          add(Severity::Error, Code::MalformedXor, t,
              "xor transition '" + name +
                  "' has duplicate inputs across pairs");
        }
        break;
      }
      case TransitionKind::Custom: {
        const auto& p = spec.custom_payload();
        for (PlaceId place : p.input_places) check_place(t, name, place);
        for (PlaceId place : p.output_places) check_place(t, name, place);
        if (!p.enable || !p.updates) {
          add(Severity::Error, Code::MissingCallback, t,
              "custom transition '" + name +
                  "' is missing its enable or update function");
        }
        if (p.input_places.empty()) {
          add(Severity::Warning, Code::AlwaysEnabled, t,
              "transition '" + name +
                  "' declares no input places; its enablement is constant");
        }
        break;
      }
    }
  }

  void check_place(TransitionId t, const std::string& tname, PlaceId p) {
    if (p >= net_.place_count()) {
      add(Severity::Error, Code::DanglingPlace, t,
          "transition '" + tname + "' references place id " +
              std::to_string(p) + " of " + std::to_string(net_.place_count()));
    }
  }

  void check_weight(TransitionId t, const std::string& tname,
                    std::int64_t weight) {
    if (weight < 1) {
      add(Severity::Error, Code::InvalidWeight, t,
          "transition '" + tname + "' has arc weight " +
              std::to_string(weight) + "; weights must be >= 1");
    }
  }

  const Net& net_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_net(const Net& n) { return Validator(n).run(); }

namespace {

std::string format_key(const Net& n, TokenKey key) {
  std::string out = key.place < n.place_count()
                        ? n.place_name(key.place)
                        : "place#" + std::to_string(key.place);
  if (n.color_count() > 1) {
    out += '[';
    out += key.color < n.color_count() ? n.color_name(key.color)
                                       : "color#" + std::to_string(key.color);
    out += ']';
  }
  return out;
}

}  // namespace

std::string format_state(const Net& n, const State& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : s.entries()) {
    if (!first) out += ", ";
    first = false;
    out += format_key(n, e.key) + ":" + std::to_string(e.count);
  }
  return out + "}";
}

std::string format_delta(const Net& n, const StateDelta& d) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : d.entries()) {
    if (!first) out += ", ";
    first = false;
    out += format_key(n, e.key) + ":" + (e.change > 0 ? "+" : "") +
           std::to_string(e.change);
  }
  return out + "}";
}

}  // namespace ntpetri
