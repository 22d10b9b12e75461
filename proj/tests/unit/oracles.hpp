#pragma once
// Independent reference computations used by the unit tests. None of these
// call into the library's decision procedures.

#include <gmpxx.h>

#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ordkit/groups.hpp"

namespace oracle {

// Free words as signed 1-based generator indices.
using FWord = std::vector<int>;

inline FWord reduce(const FWord& w) {
  FWord out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

inline FWord inverse(const FWord& w) {
  FWord out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

inline FWord concat(FWord a, const FWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return reduce(a);
}

// Artin action of B_n on F_n (faithful): images of x_1..x_n under the braid,
// letters applied left to right as automorphisms composed on the right.
//   s_i:    x_i -> x_i x_{i+1} x_i^-1,  x_{i+1} -> x_i
//   s_i^-1: x_i -> x_{i+1},              x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
inline std::vector<FWord> artin_images(const ordkit::BraidWord& w) {
  const int n = w.strands();
  std::vector<FWord> img(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) img[static_cast<std::size_t>(k)] = {k + 1};
  // phi_w = phi_{l1} o phi_{l2} o ...; image of x_k is phi_{l1}(phi_{l2}(...x_k)).
  // Apply letters from the right by substitution into current images.
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    const int i = it->index;
    std::vector<FWord> sub(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) sub[static_cast<std::size_t>(k)] = {k + 1};
    if (it->exponent > 0) {
      sub[static_cast<std::size_t>(i - 1)] = {i, i + 1, -i};
      sub[static_cast<std::size_t>(i)] = {i};
    } else {
      sub[static_cast<std::size_t>(i - 1)] = {i + 1};
      sub[static_cast<std::size_t>(i)] = {-(i + 1), i, i + 1};
    }
    for (auto& word : img) {
      FWord out;
      for (int x : word) {
        const FWord& s = sub[static_cast<std::size_t>(std::abs(x) - 1)];
        out = concat(out, x > 0 ? s : inverse(s));
      }
      word = out;
    }
  }
  return img;
}

inline bool artin_equal(const ordkit::BraidWord& a, const ordkit::BraidWord& b) {
  return artin_images(a) == artin_images(b);
}

// Permutation induced on strands.
inline std::vector<int> permutation(const ordkit::BraidWord& w) {
  std::vector<int> p(static_cast<std::size_t>(w.strands()));
  std::iota(p.begin(), p.end(), 0);
  for (const auto& l : w.letters()) std::swap(p[static_cast<std::size_t>(l.index - 1)], p[static_cast<std::size_t>(l.index)]);
  return p;
}

// Magnus expansion truncated at degree 2: x_g -> 1 + X_g. Keys are monomials.
using Poly = std::map<std::vector<int>, mpz_class>;

inline Poly mul2(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      if (ma.size() + mb.size() > 2) continue;
      std::vector<int> m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out[m] += ca * cb;
    }
  }
  return out;
}

inline Poly magnus2(const ordkit::FreeWord& w) {
  Poly p{{{}, 1}};
  for (const auto& l : w.letters()) {
    // (1 + X)^e = 1 + e X + e(e-1)/2 X^2 for any integer e
    const long e = l.exponent;
    Poly f{{{}, 1}, {{l.generator}, e}, {{l.generator, l.generator}, mpz_class(e) * (e - 1) / 2}};
    p = mul2(p, f);
  }
  return p;
}

// Number of sign patterns that orderings of Z^2 induce on a finite set of
// nonzero vectors: 2 * (number of distinct lines through them).
inline std::size_t z2_pattern_count(const std::vector<std::pair<long, long>>& vs) {
  std::set<std::pair<long, long>> lines;
  for (auto [x, y] : vs) {
    long g = std::gcd(std::labs(x), std::labs(y));
    x /= g;
    y /= g;
    if (x < 0 || (x == 0 && y < 0)) {
      x = -x;
      y = -y;
    }
    lines.insert({x, y});
  }
  return 2 * lines.size();
}

inline ordkit::BraidWord random_braid(std::mt19937& rng, int n, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), gen(1, n - 1), sgn(0, 1);
  std::vector<ordkit::BraidLetter> letters;
  const int l = len(rng);
  for (int k = 0; k < l; ++k) letters.push_back({gen(rng), sgn(rng) ? 1 : -1});
  return ordkit::BraidWord(n, letters);
}

inline ordkit::FreeWord random_free(std::mt19937& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), gen(1, rank), sgn(0, 1);
  ordkit::FreeWord w;
  const int l = len(rng);
  for (int k = 0; k < l; ++k) w = w * ordkit::FreeWord({{gen(rng), sgn(rng) ? 1L : -1L}});
  return w;
}

}  // namespace oracle
