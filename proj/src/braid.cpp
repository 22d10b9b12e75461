#include "ordkit/braid.hpp"

#include <algorithm>
#include <array>
#include <atomic>

#include "ordkit/errors.hpp"

namespace ordkit::braid {

namespace {

std::atomic<std::size_t> g_step_cap{kDefaultStepCap};
std::atomic<bool> g_fault{false};

struct Handle {
  std::size_t open;
  std::size_t close;
};

// Leftmost-closing handle, if any.
std::optional<Handle> find_handle(const std::vector<BraidLetter>& word, int strands) {
  // last[i]: position of the most recent letter with index exactly i.
  std::array<long, 64> last_small{};
  std::vector<long> last_large;
  long* last = last_small.data();
  if (strands > static_cast<int>(last_small.size())) {
    last_large.assign(strands, -1);
    last = last_large.data();
  } else {
    std::fill(last_small.begin(), last_small.end(), -1);
  }
  for (std::size_t k = 0; k < word.size(); ++k) {
    const int i = word[k].index;
    long nearest = -1;
    for (int j = 1; j <= i; ++j) nearest = std::max(nearest, last[j]);
    if (nearest >= 0) {
      const BraidLetter& prev = word[static_cast<std::size_t>(nearest)];
      if (prev.index == i && prev.exponent == -word[k].exponent) {
        return Handle{static_cast<std::size_t>(nearest), k};
      }
    }
    last[i] = static_cast<long>(k);
  }
  return std::nullopt;
}

void reduce_handle(std::vector<BraidLetter>& word, const Handle& h) {
  const int i = word[h.open].index;
  const int e = word[h.open].exponent;
  std::vector<BraidLetter> out;
  out.reserve(word.size() + 2 * (h.close - h.open));
  out.insert(out.end(), word.begin(), word.begin() + static_cast<long>(h.open));
  const bool faulty = g_fault.load(std::memory_order_relaxed);
  for (std::size_t k = h.open + 1; k < h.close; ++k) {
    const BraidLetter& x = word[k];
    if (x.index != i + 1) {
      out.push_back(x);
    } else if (faulty) {
      out.push_back({i, x.exponent});
    } else {
      out.push_back({i + 1, -e});
      out.push_back({i, x.exponent});
      out.push_back({i + 1, e});
    }
  }
  out.insert(out.end(), word.begin() + static_cast<long>(h.close) + 1, word.end());
  word = std::move(out);
}

int lowest_index(const BraidWord& w) {
  int lowest = w.strands();
  for (const auto& l : w.letters()) lowest = std::min(lowest, l.index);
  return lowest;
}

BraidSign flip(BraidSign s) { return static_cast<BraidSign>(-static_cast<int>(s)); }

}  // namespace

std::size_t default_step_cap() { return g_step_cap.load(); }

void set_default_step_cap(std::size_t cap) {
  if (cap == 0) throw DomainError("step cap must be positive");
  g_step_cap.store(cap);
}

BraidWord handle_reduce(const BraidWord& w, std::size_t step_cap) {
  std::vector<BraidLetter> word = w.letters();
  std::size_t steps = 0;
  while (auto h = find_handle(word, w.strands())) {
    if (++steps > step_cap) {
      throw ResourceError("handle reduction exceeded step cap of " + std::to_string(step_cap));
    }
    reduce_handle(word, *h);
  }
  return BraidWord(w.strands(), std::move(word));
}

std::string to_string(BraidSign s) {
  switch (s) {
    case BraidSign::kNegative: return "-";
    case BraidSign::kPositive: return "+";
    case BraidSign::kIdentity: break;
  }
  return "id";
}

DehornoySign dehornoy_sign(const BraidWord& w) {
  DehornoySign result;
  result.reduced = handle_reduce(w);
  if (result.reduced.empty()) return result;
  const int i = lowest_index(result.reduced);
  for (const auto& l : result.reduced.letters()) {
    if (l.index == i) {
      result.value = l.exponent > 0 ? BraidSign::kPositive : BraidSign::kNegative;
      break;
    }
  }
  result.witness_index = i;
  return result;
}

bool braid_equal(const BraidWord& w1, const BraidWord& w2) {
  if (w1.strands() != w2.strands()) {
    throw DomainError("braid_equal: strand counts differ");
  }
  return handle_reduce(w1 * w2.inverse()).empty();
}

ParabolicMembership parabolic_membership(const BraidWord& w, int j) {
  if (j < 1 || j > w.strands() - 1) {
    throw DomainError("parabolic_membership: index out of range");
  }
  BraidWord reduced = handle_reduce(w);
  if (!reduced.empty() && lowest_index(reduced) < j) return {};
  return {true, std::move(reduced)};
}

BraidSign dd_sign(const BraidWord& w) {
  DehornoySign d = dehornoy_sign(w);
  if (d.value == BraidSign::kIdentity) return d.value;
  return (*d.witness_index - 1) % 2 == 0 ? d.value : flip(d.value);
}

ConeSpec dd_cone(int strands) {
  if (strands < 2) throw DomainError("dd_cone: need at least 2 strands");
  ConeSpec cone{strands, {}};
  for (int i = 1; i < strands; ++i) {
    std::vector<BraidLetter> v;
    for (int k = i; k < strands; ++k) v.push_back({k, 1});
    BraidWord vi(strands, std::move(v));
    cone.generators.push_back((i - 1) % 2 == 0 ? vi : vi.inverse());
  }
  return cone;
}

BraidWord cone_word_to_braid(const ConeSpec& cone, const std::vector<int>& u_word) {
  BraidWord out(cone.strands);
  for (int u : u_word) {
    if (u < 1 || u > static_cast<int>(cone.generators.size())) {
      throw DomainError("cone word letter out of range");
    }
    out = out * cone.generators[static_cast<std::size_t>(u - 1)];
  }
  return out;
}

std::vector<int> dd_cone_rewrite(const BraidWord& w, std::size_t step_cap) {
  if (w.strands() != 3) throw DomainError("dd_cone_rewrite is only defined on B_3");
  if (dd_sign(w) != BraidSign::kPositive) {
    throw DomainError("dd_cone_rewrite: braid is not DD-positive");
  }
  const BraidWord reduced = handle_reduce(w, step_cap);

  // Letters: +1 = u1, +2 = u2, -2 = u2^-1.
  std::vector<int> word;
  auto push_u2_power = [&word](int m) {
    for (int k = 0; k < std::abs(m); ++k) word.push_back(m > 0 ? 2 : -2);
  };
  if (lowest_index(reduced) == 2) {
    // s2^m with m < 0, i.e. u2^-m.
    int m = 0;
    for (const auto& l : reduced.letters()) m += l.exponent;
    push_u2_power(-m);
  } else {
    // s2^{m_1} s1 s2^{m_2} s1 ... s1 s2^{m_{k+1}} with s1 = u1 u2 and s2 = u2^-1.
    for (const auto& l : reduced.letters()) {
      if (l.index == 1) {
        word.push_back(1);
        word.push_back(2);
      } else {
        push_u2_power(-l.exponent);
      }
    }
  }

  auto cancel = [](std::vector<int>& letters) {
    std::vector<int> out;
    for (int x : letters) {
      if (!out.empty() && out.back() == -x && x != 1) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    letters = std::move(out);
  };

  // Eliminate u2^-1 via u2 u1^2 u2 = u1, i.e. u2^-1 u1 = u1 u1 u2 and u1 u2^-1 = u2 u1 u1.
  std::size_t steps = 0;
  cancel(word);
  for (;;) {
    auto neg = std::find(word.begin(), word.end(), -2);
    if (neg == word.end()) break;
    if (++steps > step_cap) throw ResourceError("dd_cone_rewrite exceeded step cap");
    auto pos = static_cast<std::size_t>(neg - word.begin());
    std::vector<int> next(word.begin(), word.begin() + static_cast<long>(pos));
    if (pos + 1 < word.size() && word[pos + 1] == 1) {
      next.insert(next.end(), {1, 1, 2});
      next.insert(next.end(), word.begin() + static_cast<long>(pos) + 2, word.end());
    } else if (pos > 0 && word[pos - 1] == 1) {
      next.pop_back();
      next.insert(next.end(), {2, 1, 1});
      next.insert(next.end(), word.begin() + static_cast<long>(pos) + 1, word.end());
    } else {
      // A run of u2^-1 with no adjacent u1: move to the run's end and retry.
      auto run_end = pos;
      while (run_end + 1 < word.size() && word[run_end + 1] == -2) ++run_end;
      if (run_end + 1 < word.size() && word[run_end + 1] == 1) {
        next.assign(word.begin(), word.begin() + static_cast<long>(run_end));
        next.insert(next.end(), {1, 1, 2});
        next.insert(next.end(), word.begin() + static_cast<long>(run_end) + 2, word.end());
      } else {
        throw DomainError("dd_cone_rewrite: negative u2 power with no u1 to absorb it");
      }
    }
    word = std::move(next);
    cancel(word);
  }
  return word;
}

BraidWord shift(const BraidWord& w, int offset, int strands) {
  std::vector<BraidLetter> letters;
  letters.reserve(w.size());
  for (const auto& l : w.letters()) letters.push_back({l.index + offset, l.exponent});
  return BraidWord(strands, std::move(letters));
}

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(z & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
  std::uint64_t s = lo + hi;
  return s >= kPrime ? s - kPrime : s;
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kPrime ? s - kPrime : s;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul_mod(r, a);
    a = mul_mod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t burau_hash(const BraidWord& w, std::uint64_t t) {
  const int n = w.strands();
  const std::uint64_t t_inv = pow_mod(t, kPrime - 2);
  const std::uint64_t one_minus_t = add_mod(1, kPrime - t);
  const std::uint64_t one_minus_t_inv = add_mod(1, kPrime - t_inv);
  std::vector<std::uint64_t> m(static_cast<std::size_t>(n * n), 0);
  for (int r = 0; r < n; ++r) m[static_cast<std::size_t>(r * n + r)] = 1;
  for (const auto& l : w.letters()) {
    std::uint64_t a00, a01, a10, a11;
    if (l.exponent > 0) {
      a00 = one_minus_t; a01 = t; a10 = 1; a11 = 0;
    } else {
      a00 = 0; a01 = 1; a10 = t_inv; a11 = one_minus_t_inv;
    }
    const int c0 = l.index - 1;
    const int c1 = l.index;
    for (int r = 0; r < n; ++r) {
      std::uint64_t& x = m[static_cast<std::size_t>(r * n + c0)];
      std::uint64_t& y = m[static_cast<std::size_t>(r * n + c1)];
      std::uint64_t nx = add_mod(mul_mod(x, a00), mul_mod(y, a10));
      std::uint64_t ny = add_mod(mul_mod(x, a01), mul_mod(y, a11));
      x = nx;
      y = ny;
    }
  }
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(n);
  for (std::uint64_t v : m) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

std::uint64_t burau_fingerprint(const BraidWord& w) {
  std::uint64_t h1 = burau_hash(w, 1'000'003);
  std::uint64_t h2 = burau_hash(w, 7'654'321'987ULL);
  return h1 ^ (h2 * 0xff51afd7ed558ccdULL);
}

namespace fault {

void inject_handle_reduction_fault(bool enabled) { g_fault.store(enabled); }
bool handle_reduction_fault() { return g_fault.load(); }

}  // namespace fault

}  // namespace ordkit::braid
