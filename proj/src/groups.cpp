#include "ordkit/groups.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "ordkit/braid.hpp"
#include "ordkit/errors.hpp"

namespace ordkit {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const Rational& q) { return std::hash<std::string>{}(q.get_str()); }

// Splits "x^k" into ("x", k); k defaults to 1.
std::pair<std::string, long> split_power(const std::string& token) {
  auto caret = token.find('^');
  if (caret == std::string::npos) return {token, 1};
  std::string exp = token.substr(caret + 1);
  try {
    std::size_t used = 0;
    long k = std::stol(exp, &used);
    if (used != exp.size()) throw ParseError("malformed exponent in '" + token + "'");
    return {token.substr(0, caret), k};
  } catch (const std::logic_error&) {
    throw ParseError("malformed exponent in '" + token + "'");
  }
}

std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

bool is_identity_text(std::string_view text) {
  auto t = tokens(text);
  return t.empty() || (t.size() == 1 && (t[0] == "id" || t[0] == "1"));
}

std::string power_suffix(long k) { return k == 1 ? "" : "^" + std::to_string(k); }

// Parenthesized groups "( ... )" optionally followed by "^k".
std::vector<std::pair<std::string, long>> parenthesized_terms(std::string_view text) {
  std::vector<std::pair<std::string, long>> out;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  while (pos < text.size()) {
    if (text[pos] != '(') throw ParseError("expected '(' in '" + std::string(text) + "'");
    auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw ParseError("unbalanced '(' in '" + std::string(text) + "'");
    std::string inner(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    long k = 1;
    if (pos < text.size() && text[pos] == '^') {
      std::size_t end = pos + 1;
      while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) && text[end] != '(') ++end;
      k = split_power("x" + std::string(text.substr(pos, end - pos))).second;
      pos = end;
    }
    out.emplace_back(std::move(inner), k);
    skip_space();
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

const char* family_name(Family f) {
  switch (f) {
    case Family::kFree: return "free";
    case Family::kBraid: return "braid";
    case Family::kZn: return "zn";
    case Family::kAffine: return "affine";
    case Family::kKlein: return "klein";
  }
  return "?";
}

}  // namespace

// ---------------------------------------------------------------------------
// FreeWord

FreeWord::FreeWord(std::vector<FreeLetter> letters) {
  for (const auto& l : letters) {
    if (l.generator < 1) throw DomainError("free generator index must be positive");
    if (l.exponent == 0) continue;
    if (!letters_.empty() && letters_.back().generator == l.generator) {
      letters_.back().exponent += l.exponent;
      if (letters_.back().exponent == 0) letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

std::size_t FreeWord::length() const {
  std::size_t n = 0;
  for (const auto& l : letters_) n += static_cast<std::size_t>(std::labs(l.exponent));
  return n;
}

FreeWord FreeWord::inverse() const {
  std::vector<FreeLetter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l.exponent = -l.exponent;
  return FreeWord(std::move(out));
}

FreeWord operator*(const FreeWord& x, const FreeWord& y) {
  std::vector<FreeLetter> letters = x.letters_;
  letters.insert(letters.end(), y.letters_.begin(), y.letters_.end());
  return FreeWord(std::move(letters));
}

// ---------------------------------------------------------------------------
// BraidWord

BraidWord::BraidWord(int strands, std::vector<BraidLetter> letters)
    : strands_(strands), letters_(std::move(letters)) {
  if (strands_ < 2) throw DomainError("braid groups need at least 2 strands");
  for (const auto& l : letters_) {
    if (l.index < 1 || l.index >= strands_) {
      throw DomainError("braid generator s" + std::to_string(l.index) + " out of range for B" +
                        std::to_string(strands_));
    }
    if (l.exponent != 1 && l.exponent != -1) throw DomainError("braid letters carry exponent +-1");
  }
}

BraidWord BraidWord::inverse() const {
  std::vector<BraidLetter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l.exponent = -l.exponent;
  BraidWord w;
  w.strands_ = strands_;
  w.letters_ = std::move(out);
  return w;
}

BraidWord operator*(const BraidWord& x, const BraidWord& y) {
  if (x.strands_ != y.strands_) throw DomainError("braid words on different strand counts");
  BraidWord w;
  w.strands_ = x.strands_;
  w.letters_.reserve(x.letters_.size() + y.letters_.size());
  w.letters_ = x.letters_;
  w.letters_.insert(w.letters_.end(), y.letters_.begin(), y.letters_.end());
  return w;
}

// ---------------------------------------------------------------------------

bool ZnVector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

AffineElement::AffineElement(Rational slope, Rational offset)
    : slope_(std::move(slope)), offset_(std::move(offset)) {
  if (slope_ <= 0) throw DomainError("affine slope must be positive");
}

KleinElement klein_normal_form(const std::vector<KleinLetter>& word) {
  KleinElement acc;
  for (const auto& l : word) {
    KleinElement x;
    if (l.generator == 'a') {
      x.a_exp = l.exponent;
    } else if (l.generator == 'b') {
      x.b_exp = l.exponent;
    } else {
      throw ParseError(std::string("unknown Klein generator '") + l.generator + "'");
    }
    // (b^n a^m)(b^n' a^m') = b^{n+n'} a^{(-1)^n' m + m'}
    std::int64_t flip = (x.b_exp % 2 == 0) ? 1 : -1;
    acc = KleinElement{acc.b_exp + x.b_exp, flip * acc.a_exp + x.a_exp};
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Group

Group::Group(Family family, int rank) : family_(family), rank_(rank) {
  std::vector<Element> gens;
  switch (family_) {
    case Family::kFree:
      for (int i = 1; i <= rank_; ++i) {
        gens.emplace_back(FreeWord({{i, 1}}));
        gens.emplace_back(FreeWord({{i, -1}}));
      }
      break;
    case Family::kBraid:
      for (int i = 1; i < rank_; ++i) {
        gens.emplace_back(BraidWord(rank_, {{i, 1}}));
        gens.emplace_back(BraidWord(rank_, {{i, -1}}));
      }
      break;
    case Family::kZn:
      for (int i = 0; i < rank_; ++i) {
        for (int s : {1, -1}) {
          auto v = ZnVector::zero(rank_);
          auto coords = v.coords();
          coords[static_cast<std::size_t>(i)] = s;
          gens.emplace_back(ZnVector(std::move(coords)));
        }
      }
      break;
    case Family::kAffine:
      gens.emplace_back(AffineElement(2, 0));
      gens.emplace_back(AffineElement(Rational(1, 2), 0));
      gens.emplace_back(AffineElement(1, 1));
      gens.emplace_back(AffineElement(1, -1));
      break;
    case Family::kKlein:
      gens.emplace_back(KleinElement{0, 1});
      gens.emplace_back(KleinElement{0, -1});
      gens.emplace_back(KleinElement{1, 0});
      gens.emplace_back(KleinElement{-1, 0});
      break;
  }
  generators_ = std::make_shared<const std::vector<Element>>(std::move(gens));
}

Group Group::free(int rank) {
  if (rank < 1 || rank > 26) throw DomainError("free rank must be in 1..26");
  return Group(Family::kFree, rank);
}

Group Group::braid(int strands) {
  if (strands < 2) throw DomainError("braid groups need at least 2 strands");
  return Group(Family::kBraid, strands);
}

Group Group::zn(int dim) {
  if (dim < 1) throw DomainError("Z^n needs n >= 1");
  return Group(Family::kZn, dim);
}

Group Group::affine() { return Group(Family::kAffine, 0); }
Group Group::klein() { return Group(Family::kKlein, 0); }

std::string Group::name() const {
  switch (family_) {
    case Family::kFree: return "f" + std::to_string(rank_);
    case Family::kBraid: return "b" + std::to_string(rank_);
    case Family::kZn: return "z" + std::to_string(rank_);
    case Family::kAffine: return "aff";
    case Family::kKlein: return "klein";
  }
  return "?";
}

Group parse_group(std::string_view text) {
  std::string s(text);
  auto rank = [&](std::size_t prefix) {
    try {
      std::size_t used = 0;
      int r = std::stoi(s.substr(prefix), &used);
      if (used != s.size() - prefix) throw ParseError("malformed group '" + s + "'");
      return r;
    } catch (const std::logic_error&) {
      throw ParseError("malformed group '" + s + "'");
    }
  };
  if (s == "aff" || s == "affine") return Group::affine();
  if (s == "klein" || s == "k") return Group::klein();
  if (s.size() >= 2 && s[0] == 'b') return Group::braid(rank(1));
  if (s.size() >= 2 && s[0] == 'f') return Group::free(rank(1));
  if (s.size() >= 2 && s[0] == 'z') return Group::zn(rank(1));
  throw ParseError("unknown group '" + s + "'");
}

bool Group::contains(const Element& g) const {
  switch (family_) {
    case Family::kFree: {
      auto* w = std::get_if<FreeWord>(&g);
      return w && std::all_of(w->letters().begin(), w->letters().end(),
                              [&](const FreeLetter& l) { return l.generator <= rank_; });
    }
    case Family::kBraid: {
      auto* w = std::get_if<BraidWord>(&g);
      return w && w->strands() == rank_;
    }
    case Family::kZn: {
      auto* v = std::get_if<ZnVector>(&g);
      return v && v->dim() == rank_;
    }
    case Family::kAffine: return std::holds_alternative<AffineElement>(g);
    case Family::kKlein: return std::holds_alternative<KleinElement>(g);
  }
  return false;
}

void Group::require(const Element& g) const {
  if (!contains(g)) {
    throw DomainError(std::string("element does not belong to group ") + name() + " (" +
                      family_name(family_) + ")");
  }
}

Element Group::identity() const {
  switch (family_) {
    case Family::kFree: return FreeWord();
    case Family::kBraid: return BraidWord(rank_);
    case Family::kZn: return ZnVector::zero(rank_);
    case Family::kAffine: return AffineElement();
    case Family::kKlein: return KleinElement{};
  }
  return FreeWord();
}

Element Group::multiply(const Element& g, const Element& h) const {
  require(g);
  require(h);
  switch (family_) {
    case Family::kFree: return std::get<FreeWord>(g) * std::get<FreeWord>(h);
    case Family::kBraid: return std::get<BraidWord>(g) * std::get<BraidWord>(h);
    case Family::kZn: {
      auto c = std::get<ZnVector>(g).coords();
      const auto& d = std::get<ZnVector>(h).coords();
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[i];
      return ZnVector(std::move(c));
    }
    case Family::kAffine: {
      const auto& x = std::get<AffineElement>(g);
      const auto& y = std::get<AffineElement>(h);
      return AffineElement(x.slope() * y.slope(), x.slope() * y.offset() + x.offset());
    }
    case Family::kKlein: {
      const auto& x = std::get<KleinElement>(g);
      const auto& y = std::get<KleinElement>(h);
      std::int64_t flip = (y.b_exp % 2 == 0) ? 1 : -1;
      return KleinElement{x.b_exp + y.b_exp, flip * x.a_exp + y.a_exp};
    }
  }
  return identity();
}

Element Group::invert(const Element& g) const {
  require(g);
  switch (family_) {
    case Family::kFree: return std::get<FreeWord>(g).inverse();
    case Family::kBraid: return std::get<BraidWord>(g).inverse();
    case Family::kZn: {
      auto c = std::get<ZnVector>(g).coords();
      for (auto& x : c) x = -x;
      return ZnVector(std::move(c));
    }
    case Family::kAffine: {
      const auto& x = std::get<AffineElement>(g);
      Rational inv = 1 / x.slope();
      return AffineElement(inv, -x.offset() * inv);
    }
    case Family::kKlein: {
      const auto& x = std::get<KleinElement>(g);
      // (b^n a^m)^-1 = a^-m b^-n = b^-n a^{-(-1)^n m}
      std::int64_t flip = (x.b_exp % 2 == 0) ? 1 : -1;
      return KleinElement{-x.b_exp, -flip * x.a_exp};
    }
  }
  return identity();
}

Element Group::power(const Element& g, long long k) const {
  require(g);
  if (family_ == Family::kZn) {
    auto c = std::get<ZnVector>(g).coords();
    for (auto& x : c) x *= k;
    return ZnVector(std::move(c));
  }
  Element base = k < 0 ? invert(g) : g;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Element result = identity();
  while (e) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return result;
}

Element Group::conjugate(const Element& g, const Element& by) const {
  return multiply(multiply(by, g), invert(by));
}

bool Group::is_identity(const Element& g) const {
  require(g);
  switch (family_) {
    case Family::kFree: return std::get<FreeWord>(g).empty();
    case Family::kBraid: return braid::handle_reduce(std::get<BraidWord>(g)).empty();
    case Family::kZn: return std::get<ZnVector>(g).is_zero();
    case Family::kAffine: return std::get<AffineElement>(g).is_identity();
    case Family::kKlein: return std::get<KleinElement>(g) == KleinElement{};
  }
  return false;
}

bool Group::equal(const Element& g, const Element& h) const {
  require(g);
  require(h);
  if (family_ == Family::kBraid) {
    const auto& x = std::get<BraidWord>(g);
    const auto& y = std::get<BraidWord>(h);
    return x == y || braid::braid_equal(x, y);
  }
  return g == h;
}

std::size_t Group::hash(const Element& g) const {
  require(g);
  std::size_t h = static_cast<std::size_t>(family_);
  switch (family_) {
    case Family::kFree:
      for (const auto& l : std::get<FreeWord>(g).letters()) {
        h = mix(h, static_cast<std::size_t>(l.generator));
        h = mix(h, static_cast<std::size_t>(l.exponent));
      }
      return h;
    case Family::kBraid: return static_cast<std::size_t>(braid::burau_fingerprint(std::get<BraidWord>(g)));
    case Family::kZn:
      for (auto c : std::get<ZnVector>(g).coords()) h = mix(h, static_cast<std::size_t>(c));
      return h;
    case Family::kAffine: {
      const auto& x = std::get<AffineElement>(g);
      return mix(mix(h, hash_rational(x.slope())), hash_rational(x.offset()));
    }
    case Family::kKlein: {
      const auto& x = std::get<KleinElement>(g);
      return mix(mix(h, static_cast<std::size_t>(x.b_exp)), static_cast<std::size_t>(x.a_exp));
    }
  }
  return h;
}

Element Group::parse(std::string_view text) const {
  if (is_identity_text(text)) return identity();
  switch (family_) {
    case Family::kFree: {
      std::vector<FreeLetter> letters;
      for (const auto& t : tokens(text)) {
        auto [base, k] = split_power(t);
        if (base.size() != 1 || base[0] < 'a' || base[0] - 'a' >= rank_) {
          throw ParseError("unknown free generator '" + base + "' for F" + std::to_string(rank_));
        }
        letters.push_back({base[0] - 'a' + 1, k});
      }
      return FreeWord(std::move(letters));
    }
    case Family::kBraid: {
      std::vector<BraidLetter> letters;
      for (const auto& t : tokens(text)) {
        auto [base, k] = split_power(t);
        if (base.size() < 2 || base[0] != 's') throw ParseError("malformed braid letter '" + t + "'");
        int index = 0;
        try {
          std::size_t used = 0;
          index = std::stoi(base.substr(1), &used);
          if (used != base.size() - 1) throw ParseError("malformed braid letter '" + t + "'");
        } catch (const std::logic_error&) {
          throw ParseError("malformed braid letter '" + t + "'");
        }
        if (index < 1 || index >= rank_) {
          throw ParseError("braid letter '" + t + "' out of range for B" + std::to_string(rank_));
        }
        for (long r = 0; r < std::labs(k); ++r) letters.push_back({index, k > 0 ? 1 : -1});
      }
      return BraidWord(rank_, std::move(letters));
    }
    case Family::kZn: {
      auto terms = parenthesized_terms(text);
      Element acc = identity();
      for (const auto& [inner, k] : terms) {
        auto parts = split(inner, ',');
        if (static_cast<int>(parts.size()) != rank_) {
          throw ParseError("expected " + std::to_string(rank_) + " coordinates in '(" + inner + ")'");
        }
        std::vector<std::int64_t> coords;
        for (const auto& p : parts) {
          try {
            std::size_t used = 0;
            std::string q = strip(p);
            coords.push_back(std::stoll(q, &used));
            if (used != q.size()) throw ParseError("malformed coordinate '" + p + "'");
          } catch (const std::logic_error&) {
            throw ParseError("malformed coordinate '" + p + "'");
          }
        }
        acc = multiply(acc, power(ZnVector(std::move(coords)), k));
      }
      return acc;
    }
    case Family::kAffine: {
      auto terms = parenthesized_terms(text);
      Element acc = identity();
      for (const auto& [inner, k] : terms) {
        std::optional<Rational> b, a;
        for (const auto& part : split(inner, ',')) {
          auto eq = part.find('=');
          if (eq == std::string::npos) throw ParseError("expected key=value in '(" + inner + ")'");
          std::string key = strip(part.substr(0, eq));
          Rational value = parse_rational(part.substr(eq + 1));
          if (key == "b") b = value;
          else if (key == "a") a = value;
          else throw ParseError("unknown affine key '" + key + "'");
        }
        if (!b || !a) throw ParseError("affine element needs both b= and a=");
        if (*b <= 0) throw ParseError("affine slope must be positive");
        acc = multiply(acc, power(AffineElement(*b, *a), k));
      }
      return acc;
    }
    case Family::kKlein: {
      std::vector<KleinLetter> letters;
      for (const auto& t : tokens(text)) {
        auto [base, k] = split_power(t);
        if (base != "a" && base != "b") throw ParseError("unknown Klein generator '" + base + "'");
        letters.push_back({base[0], k});
      }
      return klein_normal_form(letters);
    }
  }
  return identity();
}

std::string Group::format(const Element& g) const {
  require(g);
  std::ostringstream os;
  switch (family_) {
    case Family::kFree: {
      const auto& w = std::get<FreeWord>(g);
      if (w.empty()) return "id";
      bool first = true;
      for (const auto& l : w.letters()) {
        if (!first) os << ' ';
        first = false;
        os << static_cast<char>('a' + l.generator - 1) << power_suffix(l.exponent);
      }
      return os.str();
    }
    case Family::kBraid: {
      const auto& w = std::get<BraidWord>(g);
      if (w.empty()) return "id";
      const auto& ls = w.letters();
      bool first = true;
      for (std::size_t i = 0; i < ls.size();) {
        std::size_t j = i;
        while (j < ls.size() && ls[j] == ls[i]) ++j;
        if (!first) os << ' ';
        first = false;
        os << 's' << ls[i].index << power_suffix(static_cast<long>(j - i) * ls[i].exponent);
        i = j;
      }
      return os.str();
    }
    case Family::kZn: {
      const auto& c = std::get<ZnVector>(g).coords();
      os << '(';
      for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
      os << ')';
      return os.str();
    }
    case Family::kAffine: {
      const auto& x = std::get<AffineElement>(g);
      os << "(b=" << x.slope().get_str() << ", a=" << x.offset().get_str() << ')';
      return os.str();
    }
    case Family::kKlein: {
      const auto& x = std::get<KleinElement>(g);
      if (x.b_exp == 0 && x.a_exp == 0) return "id";
      if (x.b_exp != 0) os << 'b' << power_suffix(x.b_exp);
      if (x.a_exp != 0) os << (x.b_exp != 0 ? " " : "") << 'a' << power_suffix(x.a_exp);
      return os.str();
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ElementTable / Ball

std::optional<std::size_t> ElementTable::find(const Element& g) const {
  auto [lo, hi] = buckets_.equal_range(group_.hash(g));
  for (auto it = lo; it != hi; ++it) {
    if (group_.equal(elements_[it->second], g)) return it->second;
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> ElementTable::insert(const Element& g) {
  const std::size_t h = group_.hash(g);
  auto [lo, hi] = buckets_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    if (group_.equal(elements_[it->second], g)) return {it->second, false};
  }
  elements_.push_back(g);
  buckets_.emplace(h, elements_.size() - 1);
  return {elements_.size() - 1, true};
}

Ball::Ball(Group group, std::size_t cap) : table_(std::move(group)), cap_(cap) {
  table_.insert(table_.group().identity());
  lengths_.push_back(0);
  sphere_ends_.push_back(1);
}

Ball::Ball(Group group, int radius, std::size_t cap) : Ball(std::move(group), cap) {
  grow_to(radius);
}

std::size_t Ball::count_within(int r) const {
  if (r < 0) return 0;
  if (r > radius_) throw DomainError("ball queried beyond its radius");
  return sphere_ends_[static_cast<std::size_t>(r)];
}

void Ball::grow_one() {
  const std::size_t begin = radius_ == 0 ? 0 : sphere_ends_[static_cast<std::size_t>(radius_ - 1)];
  const std::size_t end = sphere_ends_[static_cast<std::size_t>(radius_)];
  const Group& g = table_.group();
  for (std::size_t i = begin; i < end; ++i) {
    for (const auto& s : g.generators()) {
      Element x = g.multiply(table_[i], s);
      if (table_.insert(x).second) {
        lengths_.push_back(radius_ + 1);
        if (table_.size() > cap_) {
          throw ResourceError("ball of radius " + std::to_string(radius_ + 1) + " in " + g.name() +
                              " exceeds the element cap of " + std::to_string(cap_));
        }
      }
    }
  }
  ++radius_;
  sphere_ends_.push_back(table_.size());
}

void Ball::grow_to(int r) {
  if (r < 0) throw DomainError("negative ball radius");
  while (radius_ < r) grow_one();
}

void Ball::grow_to_count(std::size_t n) {
  while (size() < n) {
    const std::size_t before = size();
    grow_one();
    if (size() == before) throw DomainError("group has fewer elements than requested");
  }
}

std::vector<Element> ball(const Group& group, int radius, std::size_t cap) {
  return Ball(group, radius, cap).elements();
}

std::vector<Element> shortlex_prefix(const Group& group, std::size_t n, std::size_t cap) {
  Ball b(group, cap);
  b.grow_to_count(n);
  return {b.elements().begin(), b.elements().begin() + static_cast<long>(n)};
}

}  // namespace ordkit
