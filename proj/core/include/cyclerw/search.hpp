#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclerw/matrix.hpp"
#include "cyclerw/process.hpp"

namespace cyclerw {

enum class Backend { BuiltIn, ExternalSolver };

struct SearchConfig {
  SemiringKind kind = SemiringKind::Natural;
  std::size_t dim = 1;
  long long coeff_bound = 3;
  bool allow_infinity = true;  // ignored for Natural
  std::chrono::milliseconds budget{2000};
  // Node limit of the built-in entry search before it hands over to the SAT
  // encoding; 0 picks a default.
  std::uint64_t effort = 0;
  Backend backend = Backend::BuiltIn;
  // Shell command; `{file}` is replaced by the path of the SMT-LIB input.
  // Without the placeholder the path is appended.
  std::string solver_command;

  std::string describe() const;
};

enum class SearchStatus { Found, Exhausted, TimedOut, Error };
std::string_view to_string(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Interpretation> interpretation;
  std::string diagnostics;
};

// Weights indexed by symbol id; absent symbols weigh 0.
struct Weights {
  std::vector<Integer> w;
  Integer of(Symbol s) const { return s.id < w.size() ? w[s.id] : Integer(0); }
  Integer of(const Word& u) const;
};

RemovalReport check_counting(const Weights& w, const Srs& problem);

struct CountingResult {
  Weights weights;
  RemovalReport report;
};

std::optional<CountingResult> counting_removal(const Srs& problem, long long bound = 3,
                                               const Deadline& deadline = Deadline::never());

SearchResult find_interpretation(const Srs& problem, const SearchConfig& cfg,
                                 const Deadline& deadline = Deadline::never());

// SMT-LIB 2 encoding; see decode_model for the inverse direction.
std::string encode_constraints(const Srs& problem, const SearchConfig& cfg);
// Reads a solver response (`sat` followed by a get-model answer). Entries
// missing from the model take the least admissible value. Returns nothing
// when the response is not sat or a value is out of range; the result is not
// verified here.
std::optional<Interpretation> decode_model(const Srs& problem, const SearchConfig& cfg,
                                           std::string_view response);

struct RemovalStep {
  enum class Kind { Counting, Matrix } kind;
  Srs input;
  std::optional<Weights> weights;
  std::optional<Interpretation> interpretation;
  std::vector<std::size_t> removed;  // indices into input
  std::string config;                // human-readable origin
};

struct RemovalOutcome {
  std::vector<RemovalStep> steps;
  Srs residual;
  bool success() const { return residual.strict_count() == 0; }
};

Srs without_rules(const Srs& problem, const std::vector<std::size_t>& removed);

// Tropical d=1, then for d in {2,3} and bounds 1 to 3: tropical, natural,
// arctic. `slice` is the first-round budget of each config. Counting is tried
// by removal_loop before the schedule.
std::vector<SearchConfig> default_schedule(std::chrono::milliseconds slice = std::chrono::milliseconds(1000));

RemovalOutcome removal_loop(const Srs& problem, const std::vector<SearchConfig>& schedule,
                            const Deadline& deadline = Deadline::never(), long long counting_bound = 3);

}  // namespace cyclerw
