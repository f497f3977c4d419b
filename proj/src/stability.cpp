#include "mtk/stability.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>

#include "mtk/errors.hpp"

namespace mtk {

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t bits = 0) : words_((bits + 63) / 64, 0), bits_(bits) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  std::optional<std::size_t> first_unset() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t inv = ~words_[w];
      if (inv == 0) continue;
      std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(inv));
      if (i < bits_) return i;
      return std::nullopt;
    }
    return std::nullopt;
  }
  bool operator<(const Bitset& o) const { return words_ < o.words_; }
  bool operator==(const Bitset& o) const { return words_ == o.words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t bits_;
};

// Covering the universe by at most `budget` of the given sets. Used for both kinds of
// stability: a breaking tuple is exactly a small cover.
class CoverSearch {
 public:
  CoverSearch(std::size_t universe, std::vector<Bitset> sets) : universe_(universe), sets_(std::move(sets)) {
    containing_.resize(universe_);
    for (std::size_t s = 0; s < sets_.size(); ++s)
      for (std::size_t u = 0; u < universe_; ++u)
        if (sets_[s].test(u)) containing_[u].push_back(s);
  }

  bool coverable(const Bitset& covered, int budget) const {
    auto gap = covered.first_unset();
    if (!gap) return true;
    if (budget <= 0) return false;
    for (std::size_t s : containing_[*gap]) {
      Bitset next = covered;
      next |= sets_[s];
      if (coverable(next, budget - 1)) return true;
    }
    return false;
  }

  const Bitset& set(std::size_t s) const { return sets_[s]; }
  std::size_t universe() const { return universe_; }

 private:
  std::size_t universe_;
  std::vector<Bitset> sets_;
  std::vector<std::vector<std::size_t>> containing_;
};

// Groups candidates with identical sets; returns (class sets, class id per candidate).
std::pair<std::vector<Bitset>, std::vector<std::size_t>> classify(const std::vector<Bitset>& per_candidate) {
  std::map<Bitset, std::size_t> ids;
  std::vector<Bitset> classes;
  std::vector<std::size_t> class_of(per_candidate.size());
  for (std::size_t i = 0; i < per_candidate.size(); ++i) {
    auto [it, inserted] = ids.emplace(per_candidate[i], classes.size());
    if (inserted) classes.push_back(per_candidate[i]);
    class_of[i] = it->second;
  }
  return {std::move(classes), std::move(class_of)};
}

// Lexicographically first sequence of `length` candidates whose sets cover the universe,
// assuming one exists.
std::vector<std::size_t> first_cover(const CoverSearch& search, const std::vector<std::size_t>& class_of,
                                     int length) {
  std::vector<std::size_t> chosen;
  Bitset covered(search.universe());
  for (int pos = 0; pos < length; ++pos) {
    std::map<std::size_t, bool> memo;
    for (std::size_t cand = 0; cand < class_of.size(); ++cand) {
      std::size_t cls = class_of[cand];
      auto it = memo.find(cls);
      bool ok;
      if (it != memo.end()) {
        ok = it->second;
      } else {
        Bitset next = covered;
        next |= search.set(cls);
        ok = search.coverable(next, length - pos - 1);
        memo.emplace(cls, ok);
      }
      if (ok) {
        chosen.push_back(cand);
        covered |= search.set(cls);
        break;
      }
    }
  }
  return chosen;
}

}  // namespace

StabilityReport check_weak_stability(const Ring& ring, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "weak stability needs k >= 2");
  StabilityReport report{StabilityKind::Weak, k, true, {}};
  const auto& units = ring.unit_indices();
  const std::size_t n = ring.size();
  // Element x "blocks" unit r when x + r is not a unit; a tuple breaks stability iff its
  // entries block every unit.
  std::vector<Bitset> blocks(n, Bitset(units.size()));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t u = 0; u < units.size(); ++u)
      if (!ring.is_unit_index(ring.add_index(x, units[u]))) blocks[x].set(u);
  auto [classes, class_of] = classify(blocks);
  CoverSearch search(units.size(), std::move(classes));
  if (!search.coverable(Bitset(units.size()), k - 1)) return report;
  report.holds = false;
  for (std::size_t x : first_cover(search, class_of, k - 1)) report.witness.push_back(ring.element(x));
  return report;
}

StabilityReport check_full_stability(const Ring& ring, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "stability needs k >= 1");
  StabilityReport report{StabilityKind::Full, k, true, {}};
  const std::size_t n = ring.size();
  std::vector<std::vector<std::size_t>> product(n, std::vector<std::size_t>(n));
  std::vector<Bitset> ideal(n, Bitset(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      product[a][b] = ring.mul_index(a, b);
      ideal[a].set(product[a][b]);
    }
  const std::size_t one = ring.index_of(ring.one());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Bitset> bad;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = 0; s < n; ++s) {
      bool unimodular = false;
      for (std::size_t b = 0; b < n && !unimodular; ++b)
        if (ideal[s].test(b) && ideal[r].test(ring.sub_index(one, b))) unimodular = true;
      if (!unimodular) continue;
      Bitset bad_t(n);
      for (std::size_t t = 0; t < n; ++t)
        if (!ring.is_unit_index(ring.add_index(r, product[t][s]))) bad_t.set(t);
      pairs.emplace_back(r, s);
      bad.push_back(std::move(bad_t));
    }
  }
  auto [classes, class_of] = classify(bad);
  CoverSearch search(n, std::move(classes));
  if (!search.coverable(Bitset(n), k)) return report;
  report.holds = false;
  for (std::size_t p : first_cover(search, class_of, k)) {
    report.witness.push_back(ring.element(pairs[p].first));
    report.witness.push_back(ring.element(pairs[p].second));
  }
  return report;
}

}  // namespace mtk
