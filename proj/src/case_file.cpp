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

#include "dipeq/case_file.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "dipeq/error.hpp"
#include "text_util.hpp"

namespace dipeq {

namespace {

enum class Section { kState, kOrders, kExpect };

// Keeps only the lines of one section so parsers report true line numbers.
std::string mask(const std::vector<std::string>& raw, const std::vector<Section>& tag, Section keep) {
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (tag[i] == keep) out += raw[i];
    out += '\n';
  }
  return out;
}

std::shared_ptr<const MapSpec> map_from_ref(const std::string& ref, const std::string& base_dir) {
  std::filesystem::path candidate = std::filesystem::path(base_dir) / ref;
  std::string path = !base_dir.empty() && ref.find('/') != std::string::npos &&
                             std::filesystem::exists(candidate)
                         ? candidate.string()
                         : resolve_map_path(ref);
  return std::make_shared<const MapSpec>(load_map_file(path));
}

Unit parse_unit_tokens(const text::Line& line, std::size_t tok, const MapSpec& m) {
  if (tok + 2 >= line.tokens.size()) text::syntax_error(line, tok, "expected '<power> A|F <loc>'");
  auto power = m.find_power(line.tokens[tok].text);
  if (!power) text::syntax_error(line, tok, "unknown power '" + line.tokens[tok].text + "'");
  const std::string& k = line.tokens[tok + 1].text;
  if (k != "A" && k != "F") text::syntax_error(line, tok + 1, "expected A or F");
  auto loc = m.find_location(line.tokens[tok + 2].text);
  if (!loc) text::syntax_error(line, tok + 2, "unknown location '" + line.tokens[tok + 2].text + "'");
  return Unit{*power, k == "A" ? UnitKind::kArmy : UnitKind::kFleet, *loc};
}

int parse_int(const text::Line& line, std::size_t tok) {
  if (tok >= line.tokens.size()) text::syntax_error(line, tok, "expected a number");
  try {
    std::size_t used = 0;
    int v = std::stoi(line.tokens[tok].text, &used);
    if (used == line.tokens[tok].text.size()) return v;
  } catch (const std::exception&) {
  }
  text::syntax_error(line, tok, "expected a number");
}

CaseExpectation parse_expect(const std::string& doc, const GameState& s) {
  const MapSpec& m = *s.map;
  CaseExpectation e;
  for (const auto& line : text::split_lines(doc)) {
    const std::string& key = line.tokens[0].text;
    if (key == "year") {
      e.year = parse_int(line, 1);
    } else if (key == "phase") {
      if (line.tokens.size() < 2) text::syntax_error(line, 1, "expected a phase");
      e.phase = phase_from_name(line.tokens[1].text);
      if (!e.phase) text::syntax_error(line, 1, "unknown phase '" + line.tokens[1].text + "'");
    } else if (key == "unit") {
      e.has_units = true;
      e.units.push_back(parse_unit_tokens(line, 1, m));
    } else if (key == "dislodged") {
      e.dislodged.push_back(parse_unit_tokens(line, 1, m));
    } else if (key == "owner") {
      if (line.tokens.size() != 3) text::syntax_error(line, 1, "expected 'owner <province> <power>'");
      auto loc = m.find_location(line.tokens[1].text);
      if (!loc) text::syntax_error(line, 1, "unknown province '" + line.tokens[1].text + "'");
      PowerId owner = kNeutral;
      if (line.tokens[2].text != "neutral") {
        auto p = m.find_power(line.tokens[2].text);
        if (!p) text::syntax_error(line, 2, "unknown power '" + line.tokens[2].text + "'");
        owner = *p;
      }
      e.owners.emplace_back(m.province_of(*loc), owner);
    } else if (key == "coerced") {
      e.coerced = parse_int(line, 1);
    } else if (key == "succeeds" || key == "fails") {
      try {
        e.results.emplace_back(parse_order(text::rest_of_line(line, 1), Dialect::kShort, s),
                               key == "succeeds");
      } catch (const OrderParseError& err) {
        text::syntax_error(line, 1, err.what());
      }
    } else {
      text::syntax_error(line, 0, "unknown expectation '" + key + "'");
    }
  }
  return e;
}

AdjudicationCase parse_case_impl(std::string_view doc, const std::string& name,
                                 const std::string& base_dir) {
  std::vector<std::string> raw;
  {
    std::string line;
    std::istringstream in{std::string(doc)};
    while (std::getline(in, line)) raw.push_back(line);
  }
  std::vector<Section> tag(raw.size(), Section::kState);
  Section cur = Section::kState;
  bool saw_orders = false, saw_expect = false;
  std::string map_ref;
  for (const auto& line : text::split_lines(doc)) {
    const std::size_t i = line.number - 1;
    const std::string& k = line.tokens[0].text;
    if (line.tokens.size() == 1 && (k == "orders" || k == "expect")) {
      if (k == "orders" && (saw_orders || saw_expect)) text::syntax_error(line, 0, "misplaced 'orders'");
      if (k == "expect" && saw_expect) text::syntax_error(line, 0, "duplicate 'expect'");
      (k == "orders" ? saw_orders : saw_expect) = true;
      cur = k == "orders" ? Section::kOrders : Section::kExpect;
      tag[i] = Section::kState;  // parse_state skips it below
      raw[i].clear();
      continue;
    }
    tag[i] = cur;
    if (cur == Section::kState && k == "map") {
      if (line.tokens.size() != 2) text::syntax_error(line, 1, "expected 'map <name|path>'");
      map_ref = line.tokens[1].text;
    }
  }
  if (map_ref.empty()) throw SyntaxError("case file has no 'map' line", 1, 1);
  if (!saw_orders) throw SyntaxError("case file has no 'orders' section", 1, 1);

  AdjudicationCase c;
  c.name = name;
  c.state = parse_state(mask(raw, tag, Section::kState), map_from_ref(map_ref, base_dir));
  const MapSpec& m = *c.state.map;
  for (const auto& line : text::split_lines(mask(raw, tag, Section::kOrders))) {
    std::string power_tok = line.tokens[0].text;
    if (power_tok.empty() || power_tok.back() != ':') text::syntax_error(line, 0, "expected '<power>:'");
    power_tok.pop_back();
    auto power = m.find_power(power_tok);
    if (!power) text::syntax_error(line, 0, "unknown power '" + power_tok + "'");
    JointAction joint{*power, {}};
    std::string rest = text::rest_of_line(line, 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t end = std::min(rest.find(';', start), rest.size());
      std::string item = rest.substr(start, end - start);
      const auto first = item.find_first_not_of(" \t");
      if (first != std::string::npos) {
        item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
        try {
          joint.orders.push_back(parse_order(item, Dialect::kShort, c.state));
        } catch (const OrderParseError& err) {
          text::syntax_error(line, 1, "'" + item + "': " + err.what());
        }
      }
      start = end + 1;
    }
    c.orders.push_back(std::move(joint));
  }
  if (saw_expect) c.expect = parse_expect(mask(raw, tag, Section::kExpect), c.state);
  return c;
}

bool unit_less(const Unit& a, const Unit& b) {
  return std::tie(a.loc, a.owner, a.kind) < std::tie(b.loc, b.owner, b.kind);
}

std::string show(const Unit& u, const MapSpec& m) {
  return m.power_name(u.owner) + (u.kind == UnitKind::kArmy ? " A " : " F ") + m.location(u.loc).id;
}

std::string show_all(std::vector<Unit> us, const MapSpec& m) {
  std::sort(us.begin(), us.end(), unit_less);
  std::vector<std::string> parts;
  for (const Unit& u : us) parts.push_back(show(u, m));
  return parts.empty() ? "(none)" : text::join(parts, ", ");
}

}  // namespace

AdjudicationCase parse_case(std::string_view text, const std::string& name) {
  return parse_case_impl(text, name, "");
}

AdjudicationCase load_case(const std::string& path) {
  return parse_case_impl(text::read_file(path), std::filesystem::path(path).stem().string(),
                         std::filesystem::path(path).parent_path().string());
}

CaseOutcome run_case(const AdjudicationCase& c) {
  CaseOutcome out;
  const MapSpec& m = *c.state.map;
  if (is_move_phase(c.state.phase)) {
    Resolution r = adjudicate_moves(c.state, c.orders);
    out.effective = r.orders;
    out.succeeded = r.succeeded;
    out.coercions = r.coercions;
    out.result = r.new_state.dislodged.empty() ? adjudicate_retreats(r.new_state, {}, &out.coercions)
                                               : r.new_state;
  } else {
    out.result = step(c.state, c.orders, &out.coercions);
  }
  if (!c.expect) return out;
  const CaseExpectation& e = *c.expect;
  auto& bad = out.mismatches;
  if (e.year && *e.year != out.result.year) {
    bad.push_back("year: expected " + std::to_string(*e.year) + ", got " + std::to_string(out.result.year));
  }
  if (e.phase && *e.phase != out.result.phase) {
    bad.push_back(std::string("phase: expected ") + phase_name(*e.phase) + ", got " +
                  phase_name(out.result.phase));
  }
  if (e.has_units) {
    auto want = e.units, got = out.result.units;
    std::sort(want.begin(), want.end(), unit_less);
    std::sort(got.begin(), got.end(), unit_less);
    if (!(want == got)) bad.push_back("units: expected " + show_all(want, m) + "; got " + show_all(got, m));
  }
  {
    std::vector<Unit> got;
    for (const auto& d : out.result.dislodged) got.push_back(d.unit);
    auto want = e.dislodged;
    std::sort(want.begin(), want.end(), unit_less);
    std::sort(got.begin(), got.end(), unit_less);
    if (!(want == got)) {
      bad.push_back("dislodged: expected " + show_all(want, m) + "; got " + show_all(got, m));
    }
  }
  for (const auto& [prov, owner] : e.owners) {
    if (out.result.sc_owner[prov] != owner) {
      auto name = [&](PowerId p) { return p == kNeutral ? std::string("neutral") : m.power_name(p); };
      bad.push_back("owner " + m.province(prov).id + ": expected " + name(owner) + ", got " +
                    name(out.result.sc_owner[prov]));
    }
  }
  if (e.coerced && *e.coerced != static_cast<int>(out.coercions.size())) {
    bad.push_back("coerced: expected " + std::to_string(*e.coerced) + ", got " +
                  std::to_string(out.coercions.size()));
  }
  for (const auto& [order, ok] : e.results) {
    auto it = std::find(out.effective.begin(), out.effective.end(), order);
    const std::string text = render_order(order, Dialect::kShort, m);
    if (it == out.effective.end()) {
      bad.push_back("order not in effect: " + text);
    } else if ((out.succeeded[it - out.effective.begin()] != 0) != ok) {
      bad.push_back(text + ": expected " + (ok ? "success" : "failure"));
    }
  }
  return out;
}

}  // namespace dipeq
