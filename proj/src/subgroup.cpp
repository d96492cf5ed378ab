#include "kzeta/subgroup.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "kzeta/enumerate.hpp"

namespace kz {

namespace {

constexpr std::int64_t kMaxCosetSearchHeight = 12;

}  // namespace

std::vector<GMat2> picard_generators() {
  return {
      GMat2{GaussianInt{1}, GaussianInt{1}, GaussianInt{0}, GaussianInt{1}},
      GMat2{GaussianInt{1}, GaussianInt{0, 1}, GaussianInt{0}, GaussianInt{1}},
      GMat2{GaussianInt{0, 1}, GaussianInt{0}, GaussianInt{0}, GaussianInt{0, -1}},
      GMat2{GaussianInt{0}, GaussianInt{-1}, GaussianInt{1}, GaussianInt{0}},
  };
}

SubgroupDescriptor SubgroupDescriptor::full() { return SubgroupDescriptor{}; }

SubgroupDescriptor::Key SubgroupDescriptor::key_of(const GMat2& g) const {
  const ResidueMat2 r = reduce_mod_unchecked(g, *ring_);
  Key pos = r.e;
  Key neg{ring_->neg(r.e[0]), ring_->neg(r.e[1]), ring_->neg(r.e[2]), ring_->neg(r.e[3])};
  return std::min(pos, neg);
}

SubgroupDescriptor SubgroupDescriptor::principal_congruence(GaussianInt pi) {
  if (pi.is_zero()) throw std::invalid_argument("principal congruence subgroup needs a nonzero modulus");
  SubgroupDescriptor sub;
  if (pi.is_unit()) return sub;
  sub.kind_ = Kind::PrincipalCongruence;
  sub.modulus_ = normalize_associate(pi);
  sub.ring_ = std::make_shared<const ResidueRing>(sub.modulus_);
  sub.cosets_.clear();

  const std::size_t target = quotient_order_by_enumeration(sub.modulus_);
  sub.label_of_key_[sub.key_of(GMat2::identity())] = 0;
  sub.cosets_.push_back(GMat2::identity());
  for (std::int64_t h = 1; h <= kMaxCosetSearchHeight && sub.cosets_.size() < target; ++h) {
    for (const auto& g : enumerate(h)) {
      auto [it, inserted] = sub.label_of_key_.try_emplace(sub.key_of(g), sub.cosets_.size());
      if (inserted) sub.cosets_.push_back(g);
    }
  }
  if (sub.cosets_.size() != target) {
    throw std::runtime_error("coset search for Gamma(" + to_string(pi) + ") found " +
                             std::to_string(sub.cosets_.size()) + " of " + std::to_string(target) + " cosets");
  }
  return sub;
}

std::size_t SubgroupDescriptor::coset_label(const GMat2& g) const {
  if (kind_ == Kind::Full) return 0;
  auto it = label_of_key_.find(key_of(g));
  if (it == label_of_key_.end()) {
    throw std::domain_error("coset_label: " + to_string(g) + " has no coset (not of determinant one?)");
  }
  return it->second;
}

std::string SubgroupDescriptor::describe() const {
  if (kind_ == Kind::Full) return "PSL(2,Z[i])";
  return "Gamma(" + to_string(modulus_) + ")";
}

std::size_t SubgroupDescriptor::quotient_order_by_enumeration(GaussianInt pi) {
  if (pi.is_unit()) return 1;
  const ResidueRing ring(pi);
  const std::int64_t q = ring.order();
  const std::int64_t one = ring.index(GaussianInt{1});
  std::set<std::array<std::int64_t, 4>> seen;
  for (std::int64_t a = 0; a < q; ++a) {
    for (std::int64_t b = 0; b < q; ++b) {
      for (std::int64_t c = 0; c < q; ++c) {
        const std::int64_t bc = ring.mul(b, c);
        for (std::int64_t d = 0; d < q; ++d) {
          if (ring.add(ring.mul(a, d), ring.neg(bc)) != one) continue;
          std::array<std::int64_t, 4> pos{a, b, c, d};
          std::array<std::int64_t, 4> neg{ring.neg(a), ring.neg(b), ring.neg(c), ring.neg(d)};
          seen.insert(std::min(pos, neg));
        }
      }
    }
  }
  return seen.size();
}

}  // namespace kz
