#pragma once

#include <memory>

#include "cyclerw/search.hpp"

namespace cyclerw::detail {

// Complete search of the bounded space: the removal conditions are
// bit-blasted into CNF and handed to the bundled SAT solver. Unsat means
// Exhausted.
//
// A session keeps the solver and its learnt clauses between calls, so a run
// stopped by its deadline can be resumed later without losing work.
class SatSession {
 public:
  SatSession(const Srs& problem, const SearchConfig& cfg);
  ~SatSession();
  SatSession(SatSession&&) noexcept;
  SatSession& operator=(SatSession&&) noexcept;

  SearchResult run(const Deadline& deadline);

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

SearchResult sat_search(const Srs& problem, const SearchConfig& cfg, const Deadline& deadline);

}  // namespace cyclerw::detail
