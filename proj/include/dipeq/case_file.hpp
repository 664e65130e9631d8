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

// Adjudication test cases: a state, one phase of orders, and the expected
// result. Format in docs/formats.md.

#ifndef DIPEQ_CASE_FILE_HPP
#define DIPEQ_CASE_FILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "dipeq/adjudicator.hpp"
#include "dipeq/state.hpp"

namespace dipeq {

struct CaseExpectation {
  std::optional<int> year;
  std::optional<Phase> phase;
  bool has_units = false;          // compare units only when listed
  std::vector<Unit> units;
  std::vector<Unit> dislodged;     // always compared
  std::vector<std::pair<int, PowerId>> owners;  // listed provinces only
  std::optional<int> coerced;
  std::vector<std::pair<Order, bool>> results;  // "succeeds"/"fails" lines
};

struct AdjudicationCase {
  std::string name;
  GameState state;
  std::vector<JointAction> orders;
  std::optional<CaseExpectation> expect;
};

AdjudicationCase parse_case(std::string_view text, const std::string& name = "");
AdjudicationCase load_case(const std::string& path);

struct CaseOutcome {
  GameState result;
  std::vector<Order> effective;       // move phases only
  std::vector<char> succeeded;
  std::vector<Coercion> coercions;
  std::vector<std::string> mismatches;  // empty when the expectation holds
};

CaseOutcome run_case(const AdjudicationCase& c);

}  // namespace dipeq

#endif  // DIPEQ_CASE_FILE_HPP
