#include "mtk/ring.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "mtk/errors.hpp"
#include "mtk/integer.hpp"

namespace mtk {

std::size_t default_carrier_cap() {
  if (const char* env = std::getenv("MTK_CARRIER_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultCarrierCap;
}

// ---------------------------------------------------------------------------
// RingSpec

RingSpec RingSpec::zmod(std::int64_t modulus) {
  if (modulus < 2) throw Error(ErrorCode::InvalidArgument, "zmod modulus must be >= 2");
  RingSpec s;
  s.kind_ = Kind::ZMod;
  s.modulus_ = modulus;
  return s;
}

RingSpec RingSpec::poly_quot(RingSpec base, std::string variable, std::vector<std::int64_t> polynomial) {
  const std::int64_t m = base.characteristic();
  for (auto& c : polynomial) c = mod_floor(c, m);
  while (!polynomial.empty() && polynomial.back() == 0) polynomial.pop_back();
  if (polynomial.size() < 2) throw Error(ErrorCode::InvalidArgument, "modulus must have degree >= 1");
  if (polynomial.back() != 1) throw Error(ErrorCode::InvalidArgument, "modulus must be monic");
  RingSpec s;
  s.kind_ = Kind::PolyQuot;
  s.base_ = std::make_shared<const RingSpec>(std::move(base));
  s.variable_ = std::move(variable);
  s.polynomial_ = std::move(polynomial);
  return s;
}

RingSpec RingSpec::dual(RingSpec base) {
  RingSpec s;
  s.kind_ = Kind::Dual;
  s.base_ = std::make_shared<const RingSpec>(std::move(base));
  s.variable_ = "eps";
  s.polynomial_ = {0, 0, 1};
  return s;
}

const RingSpec& RingSpec::base() const {
  if (!base_) throw Error(ErrorCode::InvalidArgument, "zmod spec has no base");
  return *base_;
}

std::int64_t RingSpec::characteristic() const {
  return kind_ == Kind::ZMod ? modulus_ : base_->characteristic();
}

std::size_t RingSpec::carrier_size() const {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  if (kind_ == Kind::ZMod) return static_cast<std::size_t>(modulus_);
  std::size_t b = base_->carrier_size();
  std::size_t result = 1;
  for (std::size_t i = 0; i + 1 < polynomial_.size(); ++i) {
    if (b != 0 && result > kMax / b) return kMax;
    result *= b;
  }
  return result;
}

std::string RingSpec::to_string() const {
  switch (kind_) {
    case Kind::ZMod:
      return "zmod:" + std::to_string(modulus_);
    case Kind::Dual:
      return "dual:" + base_->to_string();
    case Kind::PolyQuot: {
      std::string poly;
      for (std::size_t e = polynomial_.size(); e-- > 0;) {
        std::int64_t c = polynomial_[e];
        if (c == 0) continue;
        if (!poly.empty()) poly += '+';
        if (e == 0) {
          poly += std::to_string(c);
          continue;
        }
        if (c != 1) poly += std::to_string(c) + "*";
        poly += variable_;
        if (e > 1) poly += "^" + std::to_string(e);
      }
      return "poly:" + base_->to_string() + ":" + variable_ + ":" + poly;
    }
  }
  return {};
}

bool RingSpec::operator==(const RingSpec& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::ZMod) return modulus_ == other.modulus_;
  return variable_ == other.variable_ && polynomial_ == other.polynomial_ && *base_ == *other.base_;
}

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  RingSpec parse() {
    RingSpec spec = parse_spec();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(pos_, what);
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::int64_t parse_int() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 15) {
      pos_ = start;
      fail("integer too large");
    }
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  std::string parse_name() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
    }
    if (start == pos_) fail("expected variable name");
    return std::string(text_.substr(start, pos_ - start));
  }

  RingSpec parse_spec() {
    if (consume("zmod:")) {
      std::size_t at = pos_;
      std::int64_t m = parse_int();
      if (m < 2) {
        pos_ = at;
        fail("modulus must be >= 2");
      }
      return RingSpec::zmod(m);
    }
    if (consume("dual:")) return RingSpec::dual(parse_spec());
    if (consume("poly:")) {
      RingSpec base = parse_spec();
      expect(':');
      std::string name = parse_name();
      expect(':');
      const std::int64_t m = base.characteristic();
      std::map<std::int64_t, std::int64_t> terms;
      std::size_t poly_start = pos_;
      while (true) {
        std::size_t term_start = pos_;
        std::int64_t coeff = 1;
        std::int64_t exponent = 0;
        bool have_coeff = false;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          coeff = parse_int();
          have_coeff = true;
          if (coeff >= m) {
            pos_ = term_start;
            fail("coefficient is not a canonical representative");
          }
        }
        bool have_var = false;
        if (!have_coeff || consume("*")) {
          std::size_t name_at = pos_;
          std::string v = parse_name();
          if (v != name) {
            pos_ = name_at;
            fail("unknown variable '" + v + "'");
          }
          have_var = true;
          exponent = 1;
          if (consume("^")) {
            std::size_t exp_at = pos_;
            exponent = parse_int();
            if (exponent > 64) {
              pos_ = exp_at;
              fail("exponent too large");
            }
          }
        }
        if (!have_coeff && !have_var) fail("expected term");
        terms[exponent] = mod_floor(terms[exponent] + coeff, m);
        if (!consume("+")) break;
      }
      std::vector<std::int64_t> poly(static_cast<std::size_t>(terms.rbegin()->first) + 1, 0);
      for (auto [e, c] : terms) poly[static_cast<std::size_t>(e)] = c;
      while (!poly.empty() && poly.back() == 0) poly.pop_back();
      if (poly.size() < 2) {
        pos_ = poly_start;
        fail("modulus must have degree >= 1");
      }
      if (poly.back() != 1) {
        pos_ = poly_start;
        fail("modulus must be monic");
      }
      return RingSpec::poly_quot(std::move(base), std::move(name), std::move(poly));
    }
    fail("expected 'zmod:', 'poly:' or 'dual:'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RingSpec parse_ring_spec(std::string_view text, std::size_t carrier_cap) {
  RingSpec spec = SpecParser(text).parse();
  std::size_t size = spec.carrier_size();
  if (size > carrier_cap)
    throw Error(ErrorCode::CarrierTooLarge, "carrier size " +
                                                (size == std::numeric_limits<std::size_t>::max()
                                                     ? std::string("(overflow)")
                                                     : std::to_string(size)) +
                                                " exceeds cap " + std::to_string(carrier_cap));
  return spec;
}

// ---------------------------------------------------------------------------
// Ring

std::shared_ptr<const Ring> Ring::make(const RingSpec& spec, std::size_t carrier_cap) {
  if (spec.carrier_size() > carrier_cap)
    throw Error(ErrorCode::CarrierTooLarge, "carrier of " + spec.to_string() + " exceeds cap " +
                                                std::to_string(carrier_cap));
  std::shared_ptr<Ring> ring(new Ring());
  ring->spec_ = spec;
  if (spec.kind() != RingSpec::Kind::ZMod) ring->base_ = make(spec.base(), carrier_cap);
  ring->build(carrier_cap);
  return ring;
}

std::shared_ptr<const Ring> Ring::dual_of(std::shared_ptr<const Ring> base, std::size_t carrier_cap) {
  RingSpec spec = RingSpec::dual(base->spec());
  if (spec.carrier_size() > carrier_cap)
    throw Error(ErrorCode::CarrierTooLarge, "carrier of " + spec.to_string() + " exceeds cap " +
                                                std::to_string(carrier_cap));
  std::shared_ptr<Ring> ring(new Ring());
  ring->spec_ = std::move(spec);
  ring->base_ = std::move(base);
  ring->build(carrier_cap);
  return ring;
}

void Ring::build(std::size_t carrier_cap) {
  // Flatten the constructor tree innermost-first.
  std::vector<const RingSpec*> chain;
  for (const RingSpec* s = &spec_; s->kind() != RingSpec::Kind::ZMod; s = &s->base()) chain.push_back(s);
  std::reverse(chain.begin(), chain.end());
  modulus_ = spec_.characteristic();
  degrees_.clear();
  names_.clear();
  polynomials_.clear();
  strides_.assign(1, 1);
  for (const RingSpec* s : chain) {
    degrees_.push_back(s->polynomial().size() - 1);
    names_.push_back(s->variable());
    polynomials_.push_back(s->polynomial());
    strides_.push_back(strides_.back() * degrees_.back());
  }
  rank_ = strides_.back();
  size_ = spec_.carrier_size();
  if (size_ > carrier_cap) throw Error(ErrorCode::CarrierTooLarge, "carrier exceeds cap");

  // Powers x_j^e for e <= 2(d_j - 1), reduced modulo f_j, as dense vectors of length d_j.
  std::vector<std::vector<std::vector<std::int64_t>>> reduced_powers(degrees_.size());
  for (std::size_t j = 0; j < degrees_.size(); ++j) {
    const std::size_t d = degrees_[j];
    const auto& f = polynomials_[j];
    std::vector<std::int64_t> cur(d, 0);
    cur[0] = 1 % modulus_;
    for (std::size_t e = 0; e + 1 <= 2 * d - 1; ++e) {
      reduced_powers[j].push_back(cur);
      // multiply by x_j
      std::int64_t top = cur[d - 1];
      for (std::size_t i = d - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      for (std::size_t i = 0; i < d; ++i) cur[i] = mod_floor(cur[i] - top * f[i], modulus_);
    }
  }

  products_.assign(rank_ * rank_, {});
  for (std::size_t p = 0; p < rank_; ++p) {
    for (std::size_t q = 0; q < rank_; ++q) {
      std::vector<std::pair<std::size_t, std::int64_t>> acc{{0, 1 % modulus_}};
      for (std::size_t j = 0; j < degrees_.size(); ++j) {
        std::size_t e = monomial_exponent(p, j) + monomial_exponent(q, j);
        const auto& red = reduced_powers[j][e];
        std::vector<std::pair<std::size_t, std::int64_t>> next;
        for (auto [idx, c] : acc)
          for (std::size_t i = 0; i < red.size(); ++i)
            if (red[i] != 0) next.emplace_back(idx + i * strides_[j], (c * red[i]) % modulus_);
        acc = std::move(next);
      }
      std::sort(acc.begin(), acc.end());
      std::vector<std::pair<std::size_t, std::int64_t>> merged;
      for (auto [idx, c] : acc) {
        if (!merged.empty() && merged.back().first == idx)
          merged.back().second = (merged.back().second + c) % modulus_;
        else
          merged.emplace_back(idx, c);
      }
      std::erase_if(merged, [](const auto& t) { return t.second == 0; });
      products_[p * rank_ + q] = std::move(merged);
    }
  }
  build_units();
}

void Ring::build_units() {
  inverse_.assign(size_, kNoInverse);
  enum : char { kUnknown, kUnit, kNonUnit };
  std::vector<char> state(size_, kUnknown);
  std::vector<std::uint32_t> stamp(size_, 0);
  std::uint32_t round = 0;
  const std::size_t one_index = index_of(one());
  std::vector<std::size_t> powers;
  for (std::size_t x = 0; x < size_; ++x) {
    if (state[x] != kUnknown) continue;
    ++round;
    powers.clear();
    std::size_t p = x;
    bool unit = false;
    while (true) {
      powers.push_back(p);
      if (p == one_index) {
        unit = true;
        break;
      }
      if (stamp[p] == round || state[p] == kNonUnit) break;
      stamp[p] = round;
      p = mul_index(p, x);
    }
    if (unit) {
      // powers = x^1, ..., x^k = 1; inverse of x^i is x^(k-i).
      const std::size_t k = powers.size();
      for (std::size_t i = 1; i <= k; ++i) {
        std::size_t a = powers[i - 1];
        std::size_t b = i == k ? one_index : powers[k - i - 1];
        state[a] = kUnit;
        inverse_[a] = b;
      }
    } else {
      for (std::size_t q : powers)
        if (q != one_index) state[q] = kNonUnit;
    }
  }
  units_.clear();
  for (std::size_t x = 0; x < size_; ++x)
    if (inverse_[x] != kNoInverse) units_.push_back(x);
}

std::size_t Ring::monomial_exponent(std::size_t b, std::size_t j) const {
  return (b / strides_[j]) % degrees_[j];
}

RingElement Ring::zero() const { return RingElement(std::vector<std::int64_t>(rank_, 0)); }

RingElement Ring::one() const { return from_integer(1); }

RingElement Ring::from_integer(std::int64_t value) const {
  std::vector<std::int64_t> c(rank_, 0);
  c[0] = mod_floor(value, modulus_);
  return RingElement(std::move(c));
}

RingElement Ring::variable(std::size_t j) const {
  if (j >= degrees_.size()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  // a degree-1 modulus x - c makes x_j the constant c
  if (degrees_[j] == 1) {
    return from_integer(-polynomials_[j][0]);
  }
  return monomial(strides_[j]);
}

RingElement Ring::monomial(std::size_t basis_index) const {
  std::vector<std::int64_t> c(rank_, 0);
  c.at(basis_index) = 1 % modulus_;
  return RingElement(std::move(c));
}

RingElement Ring::add(const RingElement& x, const RingElement& y) const {
  std::vector<std::int64_t> c(rank_);
  for (std::size_t i = 0; i < rank_; ++i) {
    std::int64_t s = x[i] + y[i];
    c[i] = s >= modulus_ ? s - modulus_ : s;
  }
  return RingElement(std::move(c));
}

RingElement Ring::sub(const RingElement& x, const RingElement& y) const {
  std::vector<std::int64_t> c(rank_);
  for (std::size_t i = 0; i < rank_; ++i) {
    std::int64_t s = x[i] - y[i];
    c[i] = s < 0 ? s + modulus_ : s;
  }
  return RingElement(std::move(c));
}

RingElement Ring::neg(const RingElement& x) const {
  std::vector<std::int64_t> c(rank_);
  for (std::size_t i = 0; i < rank_; ++i) c[i] = x[i] == 0 ? 0 : modulus_ - x[i];
  return RingElement(std::move(c));
}

RingElement Ring::mul(const RingElement& x, const RingElement& y) const {
  std::vector<std::int64_t> c(rank_, 0);
  for (std::size_t p = 0; p < rank_; ++p) {
    if (x[p] == 0) continue;
    for (std::size_t q = 0; q < rank_; ++q) {
      if (y[q] == 0) continue;
      const std::int64_t xy = (x[p] * y[q]) % modulus_;
      for (auto [idx, t] : products_[p * rank_ + q]) c[idx] = (c[idx] + xy * t) % modulus_;
    }
  }
  return RingElement(std::move(c));
}

RingElement Ring::scale(std::int64_t k, const RingElement& x) const {
  std::int64_t kk = mod_floor(k, modulus_);
  std::vector<std::int64_t> c(rank_);
  for (std::size_t i = 0; i < rank_; ++i) c[i] = (kk * x[i]) % modulus_;
  return RingElement(std::move(c));
}

RingElement Ring::pow(const RingElement& x, std::uint64_t e) const {
  RingElement result = one();
  RingElement base = x;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

RingElement Ring::element(std::size_t index) const {
  if (index >= size_) throw Error(ErrorCode::InvalidArgument, "element index out of range");
  std::vector<std::int64_t> c(rank_);
  const auto m = static_cast<std::size_t>(modulus_);
  for (std::size_t i = 0; i < rank_; ++i) {
    c[i] = static_cast<std::int64_t>(index % m);
    index /= m;
  }
  return RingElement(std::move(c));
}

std::size_t Ring::index_of(const RingElement& x) const {
  if (x.rank() != rank_) throw Error(ErrorCode::SizeMismatch, "element does not belong to this ring");
  std::size_t index = 0;
  const auto m = static_cast<std::size_t>(modulus_);
  for (std::size_t i = rank_; i-- > 0;) index = index * m + static_cast<std::size_t>(x[i]);
  return index;
}

std::vector<RingElement> Ring::enumerate_carrier() const {
  std::vector<RingElement> all;
  all.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) all.push_back(element(i));
  return all;
}

std::size_t Ring::add_index(std::size_t x, std::size_t y) const {
  const auto m = static_cast<std::size_t>(modulus_);
  std::size_t result = 0, place = 1;
  for (std::size_t i = 0; i < rank_; ++i) {
    std::size_t s = x % m + y % m;
    if (s >= m) s -= m;
    result += s * place;
    place *= m;
    x /= m;
    y /= m;
  }
  return result;
}

std::size_t Ring::neg_index(std::size_t x) const {
  const auto m = static_cast<std::size_t>(modulus_);
  std::size_t result = 0, place = 1;
  for (std::size_t i = 0; i < rank_; ++i) {
    std::size_t d = x % m;
    result += (d == 0 ? 0 : m - d) * place;
    place *= m;
    x /= m;
  }
  return result;
}

std::size_t Ring::sub_index(std::size_t x, std::size_t y) const { return add_index(x, neg_index(y)); }

std::size_t Ring::mul_index(std::size_t x, std::size_t y) const { return index_of(mul(element(x), element(y))); }

std::optional<RingElement> Ring::try_invert(const RingElement& x) const {
  std::size_t i = index_of(x);
  if (inverse_[i] == kNoInverse) return std::nullopt;
  return element(inverse_[i]);
}

std::optional<std::size_t> Ring::inverse_index(std::size_t x) const {
  if (inverse_[x] == kNoInverse) return std::nullopt;
  return inverse_[x];
}

std::vector<RingElement> Ring::units() const {
  std::vector<RingElement> out;
  out.reserve(units_.size());
  for (std::size_t u : units_) out.push_back(element(u));
  return out;
}

bool Ring::has_half() const { return is_unit(from_integer(2)); }

std::vector<RingElement> Ring::partial_derivatives(const RingElement& x) const {
  std::vector<RingElement> out;
  out.reserve(degrees_.size());
  for (std::size_t j = 0; j < degrees_.size(); ++j) {
    std::vector<std::int64_t> c(rank_, 0);
    for (std::size_t b = 0; b < rank_; ++b) {
      if (x[b] == 0) continue;
      std::size_t e = monomial_exponent(b, j);
      if (e == 0) continue;
      std::size_t target = b - strides_[j];
      c[target] = (c[target] + static_cast<std::int64_t>(e % static_cast<std::size_t>(modulus_)) * x[b]) % modulus_;
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

RingElement Ring::modulus_derivative(std::size_t j) const {
  const auto& f = polynomials_.at(j);
  std::vector<std::int64_t> c(rank_, 0);
  // f_j'(x_j) = sum_{i>=1} i f_i x_j^(i-1); x_j^(d_j - 1) is still a basis monomial.
  for (std::size_t i = 1; i < f.size(); ++i) {
    std::int64_t coeff = mod_floor(static_cast<std::int64_t>(i) * f[i], modulus_);
    c[(i - 1) * strides_[j]] = (c[(i - 1) * strides_[j]] + coeff) % modulus_;
  }
  return RingElement(std::move(c));
}

std::string Ring::element_to_string(const RingElement& x) const {
  std::string out;
  for (std::size_t b = 0; b < rank_; ++b) {
    if (x[b] == 0) continue;
    std::string mono;
    for (std::size_t j = 0; j < degrees_.size(); ++j) {
      std::size_t e = monomial_exponent(b, j);
      if (e == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += names_[j];
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (!out.empty()) out += '+';
    if (mono.empty())
      out += std::to_string(x[b]);
    else if (x[b] == 1)
      out += mono;
    else
      out += std::to_string(x[b]) + "*" + mono;
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Dual-number maps

namespace {

void require_dual(const Ring& ring) {
  if (!ring.is_dual()) throw Error(ErrorCode::NotDualRing, ring.spec().to_string() + " is not a dual-number ring");
}

}  // namespace

RingElement dual_plain_part(const Ring& dual, const RingElement& x) {
  require_dual(dual);
  auto c = x.coefficients();
  const std::size_t half = dual.rank() / 2;
  return RingElement(std::vector<std::int64_t>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half)));
}

RingElement dual_eps_part(const Ring& dual, const RingElement& x) {
  require_dual(dual);
  auto c = x.coefficients();
  const std::size_t half = dual.rank() / 2;
  return RingElement(std::vector<std::int64_t>(c.begin() + static_cast<std::ptrdiff_t>(half), c.end()));
}

RingElement dual_compose(const Ring& dual, const RingElement& plain, const RingElement& eps) {
  require_dual(dual);
  std::vector<std::int64_t> c(plain.coefficients().begin(), plain.coefficients().end());
  c.insert(c.end(), eps.coefficients().begin(), eps.coefficients().end());
  if (c.size() != dual.rank()) throw Error(ErrorCode::SizeMismatch, "parts do not belong to the base ring");
  return RingElement(std::move(c));
}

RingMap augmentation_hom(const std::shared_ptr<const Ring>& dual) {
  require_dual(*dual);
  const Ring* d = dual.get();
  return RingMap(dual, dual->base(), [d](const RingElement& x) { return dual_plain_part(*d, x); });
}

RingMap base_inclusion(const std::shared_ptr<const Ring>& dual) {
  require_dual(*dual);
  const Ring* d = dual.get();
  return RingMap(dual->base(), dual,
                 [d](const RingElement& x) { return dual_compose(*d, x, d->base()->zero()); });
}

RingMap scaling_endo(const std::shared_ptr<const Ring>& dual, const RingElement& a) {
  require_dual(*dual);
  const Ring* d = dual.get();
  return RingMap(dual, dual, [d, a](const RingElement& x) {
    const Ring& base = *d->base();
    return dual_compose(*d, dual_plain_part(*d, x), base.mul(a, dual_eps_part(*d, x)));
  });
}

}  // namespace mtk
