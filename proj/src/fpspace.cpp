#include "linpat/fpspace.hpp"

#include <charconv>
#include <limits>

#include "linpat/errors.hpp"

namespace linpat {

bool is_prime(std::int64_t v) noexcept {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  for (std::int64_t d = 3; d * d <= v; d += 2) {
    if (v % d == 0) return false;
  }
  return true;
}

int inverse_mod(int a, int p) {
  a = mod_p(a, p);
  if (a == 0) throw UsageError("zero has no inverse mod " + std::to_string(p));
  // Extended Euclid on (a, p).
  std::int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
  }
  return mod_p(s0, p);
}

FpSpace::FpSpace(int p, int n) : p_(p), n_(n), size_(1) {
  if (p < 3 || !is_prime(p)) throw UsageError("modulus must be an odd prime, got " + std::to_string(p));
  if (n < 1) throw UsageError("dimension must be at least 1, got " + std::to_string(n));
  const Index limit = std::numeric_limits<Index>::max() / 4;
  for (int i = 0; i < n; ++i) {
    if (size_ > limit / static_cast<Index>(p)) {
      throw CapacityError(std::to_string(p) + "^" + std::to_string(n) + " overflows the index type");
    }
    size_ *= static_cast<Index>(p);
  }
  weights_.resize(static_cast<std::size_t>(n));
  Index w = 1;
  for (int i = n - 1; i >= 0; --i) {
    weights_[static_cast<std::size_t>(i)] = w;
    w *= static_cast<Index>(p);
  }
}

std::size_t FpSpace::table_size() const {
  if (size_ > kMaxTableSize) {
    throw CapacityError("table of " + std::to_string(p_) + "^" + std::to_string(n_) + " entries exceeds the limit of " +
                        std::to_string(kMaxTableSize));
  }
  return static_cast<std::size_t>(size_);
}

void FpSpace::digits(Index idx, std::span<int> out) const noexcept {
  for (int i = n_ - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<Index>(p_));
    idx /= static_cast<Index>(p_);
  }
}

Index FpSpace::index_of(std::span<const int> digits) const noexcept {
  Index idx = 0;
  for (int i = 0; i < n_; ++i) idx = idx * static_cast<Index>(p_) + static_cast<Index>(digits[static_cast<std::size_t>(i)]);
  return idx;
}

Index FpSpace::negate(Index idx) const noexcept {
  Index out = 0;
  const auto p = static_cast<Index>(p_);
  for (int i = 0; i < n_; ++i) {
    const Index w = weights_[static_cast<std::size_t>(i)];
    const Index d = (idx / w) % p;
    out += ((p - d) % p) * w;
  }
  return out;
}

Index FpSpace::add(Index a, Index b) const noexcept {
  Index out = 0;
  const auto p = static_cast<Index>(p_);
  for (int i = 0; i < n_; ++i) {
    const Index w = weights_[static_cast<std::size_t>(i)];
    out += (((a / w) % p + (b / w) % p) % p) * w;
  }
  return out;
}

Index FpSpace::scale(int c, Index a) const noexcept {
  const auto p = static_cast<Index>(p_);
  const auto cc = static_cast<Index>(mod_p(c, p_));
  Index out = 0;
  for (int i = 0; i < n_; ++i) {
    const Index w = weights_[static_cast<std::size_t>(i)];
    out += ((cc * ((a / w) % p)) % p) * w;
  }
  return out;
}

int FpSpace::dot(Index a, Index b) const noexcept {
  const auto p = static_cast<Index>(p_);
  Index acc = 0;
  for (int i = 0; i < n_; ++i) {
    const Index w = weights_[static_cast<std::size_t>(i)];
    acc = (acc + ((a / w) % p) * ((b / w) % p)) % p;
  }
  return static_cast<int>(acc);
}

int FpSpace::sign(Index idx) const noexcept {
  const auto p = static_cast<Index>(p_);
  for (int i = 0; i < n_; ++i) {
    const int d = static_cast<int>((idx / weights_[static_cast<std::size_t>(i)]) % p);
    if (d != 0) return signed_residue(d, p_) > 0 ? 1 : -1;
  }
  return 0;
}

Index FpSpace::order_rank(Index idx) const noexcept {
  const auto p = static_cast<Index>(p_);
  const int half = (p_ - 1) / 2;
  Index rank = 0;
  for (int i = 0; i < n_; ++i) {
    const int d = static_cast<int>((idx / weights_[static_cast<std::size_t>(i)]) % p);
    rank = rank * p + static_cast<Index>(signed_residue(d, p_) + half);
  }
  return rank;
}

Index FpSpace::from_order_rank(Index rank) const noexcept {
  const auto p = static_cast<Index>(p_);
  const int half = (p_ - 1) / 2;
  Index idx = 0;
  for (int i = 0; i < n_; ++i) {
    const Index w = weights_[static_cast<std::size_t>(i)];
    const int s = static_cast<int>((rank / w) % p) - half;
    idx += static_cast<Index>(mod_p(s, p_)) * w;
  }
  return idx;
}

GroupElement::GroupElement(const FpSpace& space, std::vector<int> coords) : space_(space), coords_(std::move(coords)) {
  if (coords_.size() != static_cast<std::size_t>(space_.dim())) {
    throw UsageError("expected " + std::to_string(space_.dim()) + " coordinates, got " +
                     std::to_string(coords_.size()));
  }
  for (int& c : coords_) c = mod_p(c, space_.prime());
}

GroupElement GroupElement::zero(const FpSpace& space) {
  return GroupElement(space, std::vector<int>(static_cast<std::size_t>(space.dim()), 0));
}

GroupElement GroupElement::from_index(const FpSpace& space, Index idx) {
  if (idx >= space.size()) throw UsageError("group index " + std::to_string(idx) + " out of range");
  std::vector<int> c(static_cast<std::size_t>(space.dim()));
  space.digits(idx, c);
  return GroupElement(space, std::move(c));
}

GroupElement GroupElement::parse(const FpSpace& space, std::string_view text) {
  std::vector<int> c;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    long long v = 0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    while (first != last && *first == ' ') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw UsageError("bad group element '" + std::string(text) + "'");
    c.push_back(mod_p(v, space.prime()));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return GroupElement(space, std::move(c));
}

bool GroupElement::is_zero() const noexcept {
  for (int c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

int GroupElement::sign() const noexcept {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const int s = signed_coord(i);
    if (s != 0) return s > 0 ? 1 : -1;
  }
  return 0;
}

GroupElement GroupElement::operator-() const { return scaled(-1); }

GroupElement GroupElement::operator+(const GroupElement& other) const {
  if (!(space_ == other.space_)) throw UsageError("adding elements of different groups");
  std::vector<int> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] + other.coords_[i];
  return GroupElement(space_, std::move(c));
}

GroupElement GroupElement::operator-(const GroupElement& other) const { return *this + (-other); }

GroupElement GroupElement::scaled(int c) const {
  std::vector<int> out(coords_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod_p(static_cast<std::int64_t>(c) * coords_[i], space_.prime());
  return GroupElement(space_, std::move(out));
}

std::string GroupElement::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s;
}

std::strong_ordering compare(const GroupElement& a, const GroupElement& b) {
  if (!(a.space() == b.space())) throw UsageError("comparing elements of different groups");
  for (std::size_t i = 0; i < a.coords().size(); ++i) {
    const int x = a.signed_coord(i);
    const int y = b.signed_coord(i);
    if (x != y) return x <=> y;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) { return compare(a, b); }

GroupElement abs(const GroupElement& h) { return h.sign() < 0 ? -h : h; }

std::vector<GroupElement> enumerate_group(int p, int n) {
  const FpSpace space(p, n);
  const std::size_t count = space.table_size();
  std::vector<GroupElement> out;
  out.reserve(count);
  for (Index rank = 0; rank < count; ++rank) out.push_back(GroupElement::from_index(space, space.from_order_rank(rank)));
  return out;
}

}  // namespace linpat
