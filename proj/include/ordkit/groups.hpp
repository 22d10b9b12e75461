#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "ordkit/quadratic.hpp"

namespace ordkit {

// ---------------------------------------------------------------------------
// Element representations
// ---------------------------------------------------------------------------

struct FreeLetter {
  int generator;  // 1-based
  long exponent;  // nonzero
  friend bool operator==(const FreeLetter&, const FreeLetter&) = default;
};

/// Freely reduced word in a free group; adjacent letters never share a generator.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<FreeLetter> letters);

  const std::vector<FreeLetter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  /// Sum of absolute exponents.
  std::size_t length() const;
  FreeWord inverse() const;

  friend FreeWord operator*(const FreeWord& x, const FreeWord& y);
  friend bool operator==(const FreeWord&, const FreeWord&) = default;

 private:
  std::vector<FreeLetter> letters_;
};

struct BraidLetter {
  int index;     // 1 <= index < strands
  int exponent;  // +1 or -1
  friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

/// Word in the Artin generators of B_n. Words are not canonical: two words may
/// denote the same braid. Use braid_equal (or Group::equal) to compare braids.
class BraidWord {
 public:
  BraidWord() = default;
  explicit BraidWord(int strands, std::vector<BraidLetter> letters = {});

  int strands() const { return strands_; }
  const std::vector<BraidLetter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  BraidWord inverse() const;

  friend BraidWord operator*(const BraidWord& x, const BraidWord& y);
  /// Literal (letter-by-letter) equality.
  friend bool operator==(const BraidWord&, const BraidWord&) = default;

 private:
  int strands_{2};
  std::vector<BraidLetter> letters_;
};

class ZnVector {
 public:
  ZnVector() = default;
  explicit ZnVector(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  static ZnVector zero(int dim) { return ZnVector(std::vector<std::int64_t>(dim, 0)); }

  const std::vector<std::int64_t>& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  bool is_zero() const;

  friend bool operator==(const ZnVector&, const ZnVector&) = default;

 private:
  std::vector<std::int64_t> coords_;
};

/// The affine map x -> slope*x + offset, slope > 0. Multiplication is
/// composition: (b1,a1)(b2,a2) = (b1 b2, b1 a2 + a1).
class AffineElement {
 public:
  AffineElement() = default;
  AffineElement(Rational slope, Rational offset);

  const Rational& slope() const { return slope_; }
  const Rational& offset() const { return offset_; }
  bool is_identity() const { return slope_ == 1 && offset_ == 0; }

  friend bool operator==(const AffineElement&, const AffineElement&) = default;

 private:
  Rational slope_{1};
  Rational offset_{0};
};

/// Normal form b^n a^m in the Klein-bottle group <a, b | b a b^-1 = a^-1>.
struct KleinElement {
  std::int64_t b_exp{0};
  std::int64_t a_exp{0};
  friend bool operator==(const KleinElement&, const KleinElement&) = default;
};

using Element = std::variant<FreeWord, BraidWord, ZnVector, AffineElement, KleinElement>;

/// Letters of the Klein group's generating alphabet, for klein_normal_form.
struct KleinLetter {
  char generator;  // 'a' or 'b'
  long exponent;
};

KleinElement klein_normal_form(const std::vector<KleinLetter>& word);

// ---------------------------------------------------------------------------
// Group instances
// ---------------------------------------------------------------------------

enum class Family { kFree, kBraid, kZn, kAffine, kKlein };

/// A group instance from one of the supported families, with its fixed
/// symmetric generating set. Cheap to copy.
class Group {
 public:
  static Group free(int rank);
  static Group braid(int strands);
  static Group zn(int dim);
  static Group affine();
  static Group klein();

  Family family() const { return family_; }
  /// Free rank, strand count, or dimension; 0 for the affine and Klein groups.
  int rank() const { return rank_; }
  std::string name() const;

  bool contains(const Element& g) const;

  Element identity() const;
  Element multiply(const Element& g, const Element& h) const;
  Element invert(const Element& g) const;
  Element power(const Element& g, long long k) const;
  Element conjugate(const Element& g, const Element& by) const;  // by * g * by^-1

  bool is_identity(const Element& g) const;
  /// Family equality test: normal forms, or braid_equal for braid words.
  bool equal(const Element& g, const Element& h) const;
  /// Hash compatible with equal().
  std::size_t hash(const Element& g) const;

  /// Fixed generating set, each generator followed by its inverse.
  const std::vector<Element>& generators() const { return *generators_; }

  Element parse(std::string_view text) const;
  std::string format(const Element& g) const;

  friend bool operator==(const Group& x, const Group& y) {
    return x.family_ == y.family_ && x.rank_ == y.rank_;
  }

 private:
  Group(Family family, int rank);
  void require(const Element& g) const;

  Family family_;
  int rank_;
  std::shared_ptr<const std::vector<Element>> generators_;
};

/// Parses the group names used in order specs and the CLI: "b3", "f2", "z2",
/// "aff", "klein".
Group parse_group(std::string_view text);

// ---------------------------------------------------------------------------
// Element sets and balls
// ---------------------------------------------------------------------------

constexpr std::size_t kDefaultBallCap = 250000;

/// Insertion-ordered set of distinct group elements, deduplicated with the
/// family equality test.
class ElementTable {
 public:
  explicit ElementTable(Group group) : group_(std::move(group)) {}

  const Group& group() const { return group_; }
  std::size_t size() const { return elements_.size(); }
  const Element& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Element>& elements() const { return elements_; }

  std::optional<std::size_t> find(const Element& g) const;
  /// Returns (index, inserted).
  std::pair<std::size_t, bool> insert(const Element& g);

 private:
  Group group_;
  std::vector<Element> elements_;
  std::unordered_multimap<std::size_t, std::size_t> buckets_;
};

/// Generator ball, grown sphere by sphere in shortlex order of the fixed
/// generators. Element 0 is the identity.
class Ball {
 public:
  explicit Ball(Group group, std::size_t cap = kDefaultBallCap);
  Ball(Group group, int radius, std::size_t cap = kDefaultBallCap);

  const Group& group() const { return table_.group(); }
  int radius() const { return radius_; }
  std::size_t size() const { return table_.size(); }
  const Element& operator[](std::size_t i) const { return table_[i]; }
  const std::vector<Element>& elements() const { return table_.elements(); }
  const ElementTable& table() const { return table_; }
  /// Word length of element i.
  int length(std::size_t i) const { return lengths_[i]; }
  /// Number of elements of length <= r (r <= radius()).
  std::size_t count_within(int r) const;

  /// Grows to radius r; throws ResourceError past the element cap.
  void grow_to(int r);
  /// Grows until at least n elements are present.
  void grow_to_count(std::size_t n);

 private:
  void grow_one();

  ElementTable table_;
  std::vector<int> lengths_;
  std::vector<std::size_t> sphere_ends_;
  int radius_{0};
  std::size_t cap_;
};

/// Distinct elements of length <= radius (ball(group, radius) of the spec).
std::vector<Element> ball(const Group& group, int radius, std::size_t cap = kDefaultBallCap);

/// The first n elements of the shortlex enumeration, starting at the identity.
std::vector<Element> shortlex_prefix(const Group& group, std::size_t n,
                                     std::size_t cap = kDefaultBallCap);

}  // namespace ordkit
