#pragma once

#include <cstdint>
#include <vector>

#include "kzeta/gaussian.hpp"

namespace kz {

/// Pool order: height, then squared Frobenius norm, then lexicographic.
bool pool_less(const GMat2& x, const GMat2& y);

/// All determinant-one matrices over Z[i] whose entries have
/// max(|re|, |im|) <= height, one per +-pair (canonical sign), in pool order.
/// height 0 yields just the identity.
std::vector<GMat2> enumerate(std::int64_t height);

/// The loxodromic part of enumerate(height) with N(T) <= cutoff, generated
/// directly by looping over traces instead of filtering the full pool.
std::vector<GMat2> enumerate_loxodromic(std::int64_t height, double cutoff);

/// Necessary entry bounds for delta(P, g P) <= delta_max at some P of the
/// Picard domain (|z|^2 <= 1/2, r >= sqrt(1/2)), from
/// 2 delta = |a - cz|^2 + |az + b - z(cz + d)|^2 / r^2 + |c|^2 r^2 + |cz + d|^2.
/// False means g moves every point of the domain farther than delta_max.
bool may_displace_within(const GMat2& g, double delta_max);

/// Every loxodromic element (canonical sign) with N(T) <= cutoff passing
/// may_displace_within(., delta_max), in pool order. Complete, with no height
/// horizon: the set {N <= cutoff} is conjugation-invariant.
std::vector<GMat2> enumerate_loxodromic_near(double cutoff, double delta_max);

/// Gaussian integers with max(|re|, |im|) <= height.
std::vector<GaussianInt> gaussian_box(std::int64_t height);

}  // namespace kz
