// Copyright 2026 The dipeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dipeq/order.hpp"

#include <algorithm>
#include <tuple>

#include "dipeq/error.hpp"
#include "dipeq/state.hpp"
#include "text_util.hpp"

namespace dipeq {

namespace {

using Reason = OrderParseError::Reason;

[[noreturn]] void fail(Reason reason, const std::string& message) {
  throw OrderParseError(reason, message);
}

Loc main_loc(Loc loc, const MapSpec& m) { return m.province_of(loc); }

std::string normalize_space(std::string_view s) {
  std::string out;
  bool space = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // U+2013 en dash reads as a plain hyphen.
    if (s.compare(i, 3, "\xE2\x80\x93") == 0) {
      if (space && !out.empty()) out += ' ';
      space = false;
      out += '-';
      i += 2;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += s[i];
  }
  return out;
}

// Cursor over normalized verbose text.
class Cursor {
 public:
  Cursor(std::string_view s, const MapSpec& m) : s_(s), m_(m) {}

  bool done() const { return pos_ >= s_.size(); }
  std::string_view rest() const { return s_.substr(pos_); }

  // Consumes `word` followed by a space or the end.
  bool eat(std::string_view word) {
    std::string_view r = rest();
    if (r.size() < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(r[i])) != word[i]) return false;
    }
    if (r.size() > word.size() && r[word.size()] != ' ') return false;
    pos_ += word.size();
    if (pos_ < s_.size()) ++pos_;
    return true;
  }

  void expect(std::string_view word) {
    if (!eat(word)) {
      fail(Reason::kSyntax, "expected '" + std::string(word) + "' at '" +
                                std::string(rest()) + "'");
    }
  }

  UnitKind kind() {
    if (eat("army")) return UnitKind::kArmy;
    if (eat("fleet")) return UnitKind::kFleet;
    fail(Reason::kSyntax, "expected 'army' or 'fleet' at '" + std::string(rest()) + "'");
  }

  // Longest display name or id at the cursor.
  Loc location() {
    std::string_view r = rest();
    Loc best = kNoLoc;
    std::size_t best_len = 0;
    auto consider = [&](Loc l, std::string_view name) {
      if (name.size() <= best_len || r.size() < name.size()) return;
      if (r.compare(0, name.size(), name) != 0) return;
      if (r.size() > name.size() && r[name.size()] != ' ') return;
      best = l;
      best_len = name.size();
    };
    for (Loc l = 0; l < m_.num_locations(); ++l) {
      consider(l, m_.location(l).display);
      consider(l, m_.location(l).id);
    }
    if (best == kNoLoc) {
      fail(Reason::kUnknownProvince, "unknown province at '" + std::string(r) + "'");
    }
    pos_ += best_len;
    if (pos_ < s_.size()) ++pos_;
    return best;
  }

 private:
  std::string_view s_;
  const MapSpec& m_;
  std::size_t pos_ = 0;
};

Order parse_verbose(const std::string& text, const MapSpec& m) {
  Cursor c(text, m);
  if (c.eat("waive")) {
    if (!c.done()) fail(Reason::kSyntax, "trailing text after 'waive'");
    return Order::waive();
  }
  if (c.eat("build")) {
    UnitKind k = c.kind();
    c.expect("in");
    Loc at = c.location();
    if (!c.done()) fail(Reason::kSyntax, "trailing text '" + std::string(c.rest()) + "'");
    return Order::build(k, at);
  }
  UnitKind k = c.kind();
  c.expect("in");
  Loc at = c.location();
  Order o;
  if (c.eat("holds")) {
    o = Order::hold(k, at);
  } else if (c.eat("moves")) {
    c.expect("to");
    o = Order::move(k, at, c.location());
  } else if (c.eat("retreats")) {
    c.expect("to");
    o = Order::retreat(k, at, c.location());
  } else if (c.eat("disbands")) {
    o = Order::disband(k, at);
  } else if (c.eat("supports")) {
    UnitKind tk = c.kind();
    c.expect("in");
    Loc target = main_loc(c.location(), m);
    if (c.eat("move")) {
      c.expect("to");
      o = Order::support_move(k, at, tk, target, main_loc(c.location(), m));
    } else {
      o = Order::support_hold(k, at, tk, target);
    }
  } else {
    fail(Reason::kSyntax, "expected an order verb at '" + std::string(c.rest()) + "'");
  }
  if (!c.done()) fail(Reason::kSyntax, "trailing text '" + std::string(c.rest()) + "'");
  return o;
}

Order parse_short(const std::string& text, const MapSpec& m) {
  auto toks = text::tokenize(text);
  std::vector<std::string> t;
  for (auto& tok : toks) t.push_back(text::upper(tok.text));
  if (t.size() == 1 && t[0] == "WAIVE") return Order::waive();
  auto kind = [&](std::size_t i) {
    if (i < t.size() && t[i] == "A") return UnitKind::kArmy;
    if (i < t.size() && t[i] == "F") return UnitKind::kFleet;
    fail(Reason::kSyntax, "expected unit kind A or F in '" + text + "'");
  };
  auto loc = [&](std::size_t i) {
    if (i >= t.size()) fail(Reason::kSyntax, "missing location in '" + text + "'");
    auto l = m.find_location(t[i]);
    if (!l) fail(Reason::kUnknownProvince, "unknown province '" + toks[i].text + "'");
    return *l;
  };
  auto arity = [&](std::size_t n) {
    if (t.size() != n) fail(Reason::kSyntax, "malformed order '" + text + "'");
  };
  if (t.size() < 3) fail(Reason::kSyntax, "malformed order '" + text + "'");
  UnitKind k = kind(0);
  Loc at = loc(1);
  const std::string& op = t[2];
  if (op == "H") {
    arity(3);
    return Order::hold(k, at);
  }
  if (op == "-") {
    arity(4);
    return Order::move(k, at, loc(3));
  }
  if (op == "R") {
    arity(4);
    return Order::retreat(k, at, loc(3));
  }
  if (op == "D") {
    arity(3);
    return Order::disband(k, at);
  }
  if (op == "B") {
    arity(3);
    return Order::build(k, at);
  }
  if (op == "S") {
    UnitKind tk = kind(3);
    Loc target = main_loc(loc(4), m);
    if (t.size() == 5) return Order::support_hold(k, at, tk, target);
    if (t.size() == 7 && t[5] == "-") {
      return Order::support_move(k, at, tk, target, main_loc(loc(6), m));
    }
    fail(Reason::kSyntax, "malformed support '" + text + "'");
  }
  fail(Reason::kSyntax, "unknown order operator '" + toks[2].text + "'");
}

// A fleet order naming a split-coast province without its coast is
// resolved when exactly one coast is adjacent.
Loc resolve_coast(UnitKind kind, Loc from, Loc dest, const MapSpec& m) {
  if (kind != UnitKind::kFleet || dest >= m.num_provinces() || !m.has_coasts(dest)) {
    return dest;
  }
  Loc found = kNoLoc;
  for (Loc nb : m.adjacent(kind, from)) {
    if (m.province_of(nb) != dest) continue;
    if (found != kNoLoc) return dest;
    found = nb;
  }
  return found == kNoLoc ? dest : found;
}

}  // namespace

bool canonical_less(const Order& a, const Order& b, const MapSpec& m) {
  auto key = [&](const Order& o) {
    int rank = o.actor == kNoLoc ? m.num_provinces() : m.id_rank(m.province_of(o.actor));
    return std::make_tuple(rank, static_cast<int>(o.type), o.actor, o.dest,
                           static_cast<int>(o.target_kind), o.target);
  };
  return key(a) < key(b);
}

void sort_canonical(std::vector<Order>& orders, const MapSpec& m) {
  std::stable_sort(orders.begin(), orders.end(),
                   [&](const Order& a, const Order& b) { return canonical_less(a, b, m); });
}

Order parse_order_text(std::string_view raw, Dialect dialect, const MapSpec& m) {
  std::string text = normalize_space(raw);
  if (text.empty()) fail(Reason::kSyntax, "empty order");
  return dialect == Dialect::kShort ? parse_short(text, m) : parse_verbose(text, m);
}

Order parse_order(std::string_view raw, Dialect dialect, const GameState& state) {
  const MapSpec& m = *state.map;
  Order o = parse_order_text(raw, dialect, m);
  if (o.type == OrderType::kWaive || o.type == OrderType::kBuild) return o;
  const int prov = m.province_of(o.actor);
  const bool retreat_phase = is_retreat_phase(state.phase);
  const Unit* unit = nullptr;
  if (retreat_phase) {
    for (const auto& d : state.dislodged) {
      if (m.province_of(d.unit.loc) == prov) unit = &d.unit;
    }
  } else {
    int idx = state.unit_at(prov);
    if (idx >= 0) unit = &state.units[idx];
  }
  if (!unit || unit->kind != o.kind) {
    throw OrderParseError(Reason::kNoUnit, std::string("no ") + unit_word(o.kind) + " in " +
                                               m.location(o.actor).display);
  }
  o.actor = unit->loc;
  if (o.type == OrderType::kMove || o.type == OrderType::kRetreat) {
    o.dest = resolve_coast(o.kind, o.actor, o.dest, m);
  }
  return o;
}

std::string render_unit(UnitKind kind, Loc loc, const MapSpec& m) {
  return std::string(unit_word(kind)) + " in " + m.location(loc).display;
}

std::string render_order_tail(const Order& o, const MapSpec& m) {
  switch (o.type) {
    case OrderType::kHold: return "holds";
    case OrderType::kMove: return "moves to " + m.location(o.dest).display;
    case OrderType::kSupportHold: return "supports " + render_unit(o.target_kind, o.target, m);
    case OrderType::kSupportMove:
      return "supports " + render_unit(o.target_kind, o.target, m) + " move to " +
             m.location(o.dest).display;
    case OrderType::kRetreat: return "retreats to " + m.location(o.dest).display;
    case OrderType::kDisband: return "disbands";
    case OrderType::kBuild: return "build";
    case OrderType::kWaive: return "waive";
  }
  return "";
}

std::string render_order(const Order& o, Dialect dialect, const MapSpec& m) {
  if (o.type == OrderType::kWaive) return dialect == Dialect::kShort ? "WAIVE" : "waive";
  if (dialect == Dialect::kVerbose) {
    if (o.type == OrderType::kBuild) return "build " + render_unit(o.kind, o.actor, m);
    return render_unit(o.kind, o.actor, m) + " " + render_order_tail(o, m);
  }
  std::string out;
  out += unit_letter(o.kind);
  out += ' ';
  out += m.location(o.actor).id;
  switch (o.type) {
    case OrderType::kHold: return out + " H";
    case OrderType::kMove: return out + " - " + m.location(o.dest).id;
    case OrderType::kSupportHold:
      return out + " S " + unit_letter(o.target_kind) + " " + m.location(o.target).id;
    case OrderType::kSupportMove:
      return out + " S " + unit_letter(o.target_kind) + " " + m.location(o.target).id + " - " +
             m.location(o.dest).id;
    case OrderType::kRetreat: return out + " R " + m.location(o.dest).id;
    case OrderType::kDisband: return out + " D";
    case OrderType::kBuild: return out + " B";
    case OrderType::kWaive: break;
  }
  return out;
}

std::string render_joint(const JointAction& joint, Dialect dialect, const MapSpec& m) {
  std::vector<std::string> parts;
  for (const Order& o : joint.orders) parts.push_back(render_order(o, dialect, m));
  return text::join(parts, dialect == Dialect::kShort ? "; " : ", ");
}

}  // namespace dipeq
