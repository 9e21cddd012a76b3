#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "cyclerw/process.hpp"
#include "cyclerw/rewriting.hpp"

namespace cyclerw {

enum class LoopKind { CycleRepetition, StringSelfEmbedding };
std::string_view to_string(LoopKind k);

struct LoopStep {
  std::size_t rule = 0;
  // Cycle steps: rotation offset into the previous word (as recorded).
  // String steps: position of the redex.
  std::size_t position = 0;
  Word word;  // result; cycle words are stored as canonical representatives
  friend bool operator==(const LoopStep&, const LoopStep&) = default;
};

struct LoopWitness {
  LoopKind kind = LoopKind::CycleRepetition;
  Word start;
  std::vector<LoopStep> steps;
  // Self-embedding only: last word = x · start · y.
  Word x, y;
  std::size_t strict_count = 0;
  friend bool operator==(const LoopWitness&, const LoopWitness&) = default;
};

struct NontermConfig {
  std::size_t max_start_len = 4;
  std::size_t max_word_len = 12;
  std::size_t max_depth = 10;
  std::size_t max_states = 20000;  // per start word
  std::chrono::milliseconds budget{2000};
};

// Start words: left-hand sides, then products of two left-hand sides, then
// every word up to max_start_len in length-lexicographic order.
std::vector<Word> start_words(const Srs& problem, std::size_t max_start_len,
                              const Deadline& deadline = Deadline::never());

// [u] ->+ [u] with at least one strict step.
std::optional<LoopWitness> find_cycle_loop(const Srs& problem, const NontermConfig& cfg,
                                           const Deadline& deadline = Deadline::never());
// u ->+ x u y with plain string steps, at least one of them strict.
std::optional<LoopWitness> find_string_loop(const Srs& problem, const NontermConfig& cfg,
                                            const Deadline& deadline = Deadline::never());
// The same searches restricted to one start word.
std::optional<LoopWitness> find_cycle_loop_from(const Srs& problem, const Word& start, const NontermConfig& cfg,
                                                const Deadline& deadline = Deadline::never());
std::optional<LoopWitness> find_string_loop_from(const Srs& problem, const Word& start, const NontermConfig& cfg,
                                                 const Deadline& deadline = Deadline::never());
// Both searches, each on half of the budget; cycle loops first.
std::optional<LoopWitness> find_loop(const Srs& problem, const NontermConfig& cfg,
                                     const Deadline& deadline = Deadline::never());

struct WitnessCheck {
  bool ok = true;
  std::optional<std::size_t> first_bad;  // step index, or steps.size() for the loop condition
  std::string reason;
};

WitnessCheck verify_witness(const Srs& problem, const LoopWitness& w);

}  // namespace cyclerw
