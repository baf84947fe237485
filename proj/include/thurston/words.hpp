#ifndef THURSTON_WORDS_HPP
#define THURSTON_WORDS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "thurston/sft.hpp"

namespace thurston {

// Letter in a free group of rank k: +i is generator i (1-based), -i its
// inverse. Letters order as a < a^-1 < b < b^-1 < ... for canonical forms.
using Letter = int;

inline Letter inverse_letter(Letter x) { return -x; }
// a=0, A=1, b=2, B=3, ...
inline int letter_rank(Letter x) {
  return x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1;
}
Letter letter_from_rank(int r);

struct Word {
  int rank = 0;
  std::vector<Letter> letters;
};

std::string to_string(const Word& w);
Word word_from_string(int rank, const std::string& s);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);

// Free reduction: cancel adjacent inverse pairs until none remain.
Word reduce(Word w);

// Conjugacy class representative: cyclically reduced and rotated to the
// lexicographically minimal position.
struct CyclicWord {
  int rank = 0;
  std::vector<Letter> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool operator==(const CyclicWord&) const = default;
  bool operator<(const CyclicWord& o) const;
};

std::string to_string(const CyclicWord& c);
Word as_word(const CyclicWord& c);
Word word_power(const CyclicWord& c, int n);

// Cyclic reduction then minimal rotation; conjugation invariant.
CyclicWord canonical_class(const Word& w);

// True when the class is not a proper power.
bool is_primitive(const CyclicWord& c);

// All conjugacy classes of cyclically-reduced length <= max_length, each
// exactly once, ordered by (length, lexicographic). primitive_only skips
// proper powers.
std::vector<CyclicWord> enumerate_classes(int rank, int max_length,
                                          bool primitive_only = false,
                                          std::size_t budget = 5000000);

// The letter graph of the free group: states are the 2k letters, with an
// edge x -> y unless y = x^-1. Cycles correspond to cyclically reduced
// cyclic words, so class data pushes onto this subshift.
SubshiftGraph free_group_coding(int rank);

// The cycle tracing the class's letters through the coding.
Cycle class_to_cycle(const SubshiftGraph& coding, const CyclicWord& c);

}  // namespace thurston

#endif
