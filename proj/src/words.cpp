#include "thurston/words.hpp"

#include <algorithm>

namespace thurston {

namespace {

void check_letters(int rank, const std::vector<Letter>& letters) {
  if (rank < 1) fail(errc::invalid_argument, "rank must be >= 1");
  for (Letter x : letters)
    if (x == 0 || std::abs(x) > rank)
      fail(errc::invalid_argument, "letter outside the alphabet of rank " +
                                       std::to_string(rank));
}

bool rank_less(Letter a, Letter b) { return letter_rank(a) < letter_rank(b); }

bool seq_less(const std::vector<Letter>& a, const std::vector<Letter>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return rank_less(a[i], b[i]);
  return false;
}

std::vector<Letter> minimal_rotation(const std::vector<Letter>& v) {
  std::size_t n = v.size(), best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      Letter lhs = v[(r + k) % n], rhs = v[(best + k) % n];
      if (lhs != rhs) {
        if (rank_less(lhs, rhs)) best = r;
        break;
      }
    }
  }
  std::vector<Letter> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = v[(best + k) % n];
  return out;
}

char letter_char(Letter x) {
  int g = std::abs(x) - 1;
  if (g >= 26) fail(errc::invalid_argument, "letters beyond z have no name");
  return static_cast<char>((x > 0 ? 'a' : 'A') + g);
}

}  // namespace

Letter letter_from_rank(int r) {
  int gen = r / 2 + 1;
  return (r % 2 == 0) ? gen : -gen;
}

std::string to_string(const Word& w) {
  std::string s;
  for (Letter x : w.letters) s += letter_char(x);
  return s.empty() ? "1" : s;
}

Word word_from_string(int rank, const std::string& s) {
  Word w{rank, {}};
  if (s == "1") return w;
  for (char ch : s) {
    Letter x;
    if (ch >= 'a' && ch <= 'z')
      x = ch - 'a' + 1;
    else if (ch >= 'A' && ch <= 'Z')
      x = -(ch - 'A' + 1);
    else
      fail(errc::parse_error, std::string("bad letter '") + ch + "'");
    w.letters.push_back(x);
  }
  check_letters(rank, w.letters);
  return w;
}

Word inverse(const Word& w) {
  Word out{w.rank, {}};
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(inverse_letter(*it));
  return out;
}

Word concat(const Word& a, const Word& b) {
  if (a.rank != b.rank) fail(errc::rank_mismatch, "words of different ranks");
  Word out{a.rank, a.letters};
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

Word reduce(Word w) {
  check_letters(w.rank, w.letters);
  std::vector<Letter> stack;
  stack.reserve(w.letters.size());
  for (Letter x : w.letters) {
    if (!stack.empty() && stack.back() == inverse_letter(x))
      stack.pop_back();
    else
      stack.push_back(x);
  }
  w.letters = std::move(stack);
  return w;
}

bool CyclicWord::operator<(const CyclicWord& o) const {
  return seq_less(letters, o.letters);
}

std::string to_string(const CyclicWord& c) {
  return to_string(Word{c.rank, c.letters});
}

Word as_word(const CyclicWord& c) { return Word{c.rank, c.letters}; }

Word word_power(const CyclicWord& c, int n) {
  Word out{c.rank, {}};
  for (int i = 0; i < n; ++i)
    out.letters.insert(out.letters.end(), c.letters.begin(), c.letters.end());
  return out;
}

CyclicWord canonical_class(const Word& w) {
  Word r = reduce(w);
  if (r.letters.empty())
    fail(errc::identity_element, "identity has no conjugacy representative");
  // Cyclic reduction: strip matching inverse pairs from the two ends.
  std::size_t lo = 0, hi = r.letters.size();
  while (hi - lo >= 2 && r.letters[lo] == inverse_letter(r.letters[hi - 1])) {
    ++lo;
    --hi;
  }
  std::vector<Letter> core(r.letters.begin() + lo, r.letters.begin() + hi);
  if (core.empty())
    fail(errc::identity_element, "identity has no conjugacy representative");
  return CyclicWord{r.rank, minimal_rotation(core)};
}

bool is_primitive(const CyclicWord& c) {
  const int n = c.length();
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (int i = 0; i < n && periodic; ++i)
      periodic = c.letters[i] == c.letters[(i + d) % n];
    if (periodic) return false;
  }
  return true;
}

std::vector<CyclicWord> enumerate_classes(int rank, int max_length,
                                          bool primitive_only,
                                          std::size_t budget) {
  if (rank < 2) fail(errc::invalid_argument, "rank must be >= 2");
  if (max_length < 1) fail(errc::invalid_argument, "max_length must be >= 1");
  std::vector<CyclicWord> out;
  std::vector<Letter> letters_by_rank(2 * rank);
  for (int r = 0; r < 2 * rank; ++r) letters_by_rank[r] = letter_from_rank(r);

  std::vector<Letter> cur;
  auto emit = [&](int L) {
    // cur is cyclically reduced; keep only self-minimal rotations.
    if (cur.size() > 1 && cur.front() == inverse_letter(cur.back())) return;
    if (minimal_rotation(cur) != cur) return;
    CyclicWord c{rank, cur};
    if (primitive_only && !is_primitive(c)) return;
    if (out.size() >= budget)
      fail(errc::budget_exceeded,
           "class enumeration exceeded budget of " + std::to_string(budget));
    out.push_back(std::move(c));
    (void)L;
  };
  auto extend = [&](auto&& self, int L) -> void {
    if (static_cast<int>(cur.size()) == L) {
      emit(L);
      return;
    }
    for (Letter x : letters_by_rank) {
      if (!cur.empty()) {
        if (x == inverse_letter(cur.back())) continue;
        // Any letter below the first would start a smaller rotation.
        if (letter_rank(x) < letter_rank(cur.front())) continue;
      }
      cur.push_back(x);
      self(self, L);
      cur.pop_back();
    }
  };
  for (int L = 1; L <= max_length; ++L) extend(extend, L);
  return out;
}

SubshiftGraph free_group_coding(int rank) {
  if (rank < 2) fail(errc::invalid_argument, "rank must be >= 2");
  std::vector<std::string> states;
  for (int r = 0; r < 2 * rank; ++r)
    states.push_back(std::string(1, letter_char(letter_from_rank(r))));
  std::vector<Edge> edges;
  for (int a = 0; a < 2 * rank; ++a)
    for (int b = 0; b < 2 * rank; ++b)
      if (letter_from_rank(b) != inverse_letter(letter_from_rank(a)))
        edges.push_back({a, b});
  return SubshiftGraph(std::move(states), std::move(edges));
}

Cycle class_to_cycle(const SubshiftGraph& coding, const CyclicWord& c) {
  if (coding.num_states() != 2 * c.rank)
    fail(errc::rank_mismatch, "coding and class have different ranks");
  Cycle out;
  const int n = c.length();
  for (int i = 0; i < n; ++i) {
    int from = letter_rank(c.letters[i]);
    int to = letter_rank(c.letters[(i + 1) % n]);
    int e = coding.edge_between(from, to);
    if (e < 0)
      fail(errc::rank_mismatch, "class is not cyclically reduced for coding");
    out.edge_ids.push_back(e);
  }
  return out;
}

}  // namespace thurston
