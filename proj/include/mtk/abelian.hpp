#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtk/int_matrix.hpp"
#include "mtk/integer.hpp"

namespace mtk {

/// Sparse integer combination of generators e_0..e_{size-1}. Terms are kept sorted
/// by index with nonzero coefficients; all arithmetic is overflow-checked.
class GroupWord {
 public:
  using Term = std::pair<std::size_t, std::int64_t>;

  GroupWord() = default;
  explicit GroupWord(std::size_t size) : size_(size) {}
  GroupWord(std::size_t size, std::vector<Term> terms);

  static GroupWord generator(std::size_t size, std::size_t index, std::int64_t coefficient = 1);
  static GroupWord from_dense(const std::vector<std::int64_t>& coefficients);

  std::size_t size() const noexcept { return size_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::int64_t coefficient(std::size_t index) const;
  std::vector<std::int64_t> to_dense() const;

  /// this += factor * other
  GroupWord& add_scaled(const GroupWord& other, std::int64_t factor);
  GroupWord& operator+=(const GroupWord& other) { return add_scaled(other, 1); }
  GroupWord& operator-=(const GroupWord& other) { return add_scaled(other, -1); }
  GroupWord operator+(const GroupWord& other) const;
  GroupWord operator-(const GroupWord& other) const;
  GroupWord operator-() const;
  GroupWord operator*(std::int64_t factor) const;

  bool operator==(const GroupWord&) const = default;
  bool operator<(const GroupWord& other) const;

  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::vector<Term> terms_;
};

/// Finitely presented abelian group Z^g / <relations>. The Smith decomposition is
/// computed lazily once (thread-safe) and cached. Relations are deduplicated
/// (up to sign) and zero rows are dropped at construction.
class FpAbelianGroup {
 public:
  FpAbelianGroup(std::size_t generators, std::vector<GroupWord> relations);

  static std::shared_ptr<const FpAbelianGroup> make(std::size_t generators, std::vector<GroupWord> relations);
  /// Z/d_0 + ... + Z/d_{k-1} + Z^free with its standard presentation.
  static std::shared_ptr<const FpAbelianGroup> cyclic_sum(const std::vector<Integer>& factors, std::size_t free = 0);

  std::size_t generator_count() const noexcept { return generators_; }
  const std::vector<GroupWord>& relations() const noexcept { return relations_; }
  GroupWord generator(std::size_t i, std::int64_t coefficient = 1) const;
  GroupWord zero() const { return GroupWord(generators_); }

  /// Torsion invariant factors > 1 in divisibility order.
  std::vector<Integer> invariant_factors() const;
  std::size_t free_rank() const;
  bool is_finite() const { return free_rank() == 0; }
  bool is_trivial() const { return coordinate_count() == 0; }
  /// Group order; Error{InfiniteGroup} if the free rank is positive.
  Integer order() const;

  /// Canonical coordinates: torsion factors first (reduced into [0, d)), then free.
  std::size_t coordinate_count() const;
  /// Modulus per coordinate; 0 for free coordinates.
  const std::vector<Integer>& coordinate_moduli() const;
  std::vector<Integer> normal_form(const GroupWord& w) const;
  bool is_zero(const GroupWord& w) const;
  bool equal(const GroupWord& a, const GroupWord& b) const { return is_zero(a - b); }
  /// A word whose normal form is the i-th unit coordinate vector.
  const GroupWord& coordinate_generator(std::size_t i) const;
  /// Word with the given canonical coordinates.
  GroupWord from_coordinates(const std::vector<Integer>& coordinates) const;

 private:
  struct Structure {
    std::vector<Integer> moduli;
    std::vector<Integer> torsion;
    std::size_t free = 0;
    // Coordinates of each original generator (reduced for torsion coordinates).
    std::vector<std::vector<Integer>> generator_coordinates;
    std::vector<GroupWord> representatives;
  };

  const Structure& structure() const;
  void compute_structure() const;

  std::size_t generators_;
  std::vector<GroupWord> relations_;
  mutable std::once_flag once_;
  mutable std::unique_ptr<Structure> structure_;
};

using GroupPtr = std::shared_ptr<const FpAbelianGroup>;

/// Homomorphism given by images of generators; construction certifies that every
/// source relation maps to zero and throws RelationNotPreserved otherwise.
class GroupHom {
 public:
  static GroupHom make(GroupPtr source, GroupPtr target, std::vector<GroupWord> images);
  static GroupHom identity(GroupPtr group);
  static GroupHom zero(GroupPtr source, GroupPtr target);

  const GroupPtr& source() const noexcept { return source_; }
  const GroupPtr& target() const noexcept { return target_; }
  const std::vector<GroupWord>& images() const noexcept { return images_; }

  GroupWord apply(const GroupWord& w) const;
  /// next after this.
  GroupHom then(const GroupHom& next) const;
  /// Same source and target and equal images in the target.
  bool equals(const GroupHom& other) const;
  /// Normal forms of images of the source's coordinate generators.
  std::vector<std::vector<Integer>> coordinate_matrix() const;

 private:
  GroupHom(GroupPtr source, GroupPtr target, std::vector<GroupWord> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {}

  GroupPtr source_;
  GroupPtr target_;
  std::vector<GroupWord> images_;
};

/// ker(h) as a group with a certified inclusion into h.source(), plus a solver that
/// expresses kernel elements of the source in the kernel's own generators.
class Kernel {
 public:
  explicit Kernel(const GroupHom& h);

  const GroupPtr& group() const noexcept { return group_; }
  const GroupHom& inclusion() const noexcept { return *inclusion_; }
  /// Kernel-side word for a source element lying in the kernel; nullopt otherwise.
  std::optional<GroupWord> lift(const GroupWord& source_element) const;

 private:
  GroupPtr group_;
  std::optional<GroupHom> inclusion_;
  std::optional<LatticeSolver> solver_;
};

/// Solves for preimages along a hom: the image subgroup is spanned by images of
/// the source's coordinate generators.
class ImageSolver {
 public:
  explicit ImageSolver(const GroupHom& h);
  std::optional<GroupWord> preimage(const GroupWord& target_element) const;

 private:
  GroupPtr source_;
  GroupPtr target_;
  LatticeSolver solver_;
};

bool is_isomorphic(const FpAbelianGroup& a, const FpAbelianGroup& b);
GroupPtr direct_sum(const std::vector<GroupPtr>& parts);
/// Whether x -> m*x is bijective; Error{InfiniteGroup} for infinite groups.
bool mult_by_m_is_bijective(const FpAbelianGroup& g, const Integer& m);
/// Bijectivity of a hom between finite groups (injective and surjective).
bool is_bijective(const GroupHom& h);

std::string factors_to_string(const std::vector<Integer>& factors, std::size_t free_rank);

}  // namespace mtk
