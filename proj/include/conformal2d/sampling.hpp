#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "conformal2d/fields.hpp"
#include "conformal2d/mobius.hpp"

namespace conformal2d {

using Rng = std::mt19937_64;
using PointPredicate = std::function<bool(Vec2)>;

/// Area-uniform points in the annulus r_in ≤ |x − center| ≤ r_out accepted by
/// `accept`. Throws DomainError after 1000·n rejected draws.
std::vector<Vec2> sample_annulus(std::uint64_t seed, std::size_t n, Vec2 center, double r_in, double r_out,
                                 const PointPredicate& accept = {});

/// Uniform points in the box [lo, hi] accepted by `accept`.
std::vector<Vec2> sample_box(std::uint64_t seed, std::size_t n, Vec2 lo, Vec2 hi,
                             const PointPredicate& accept = {});

/// True when u is defined at x and at eight points on the circle of radius
/// `margin` around it.
bool has_margin(const ScalarField& u, Vec2 x, double margin);

/// Random Möbius map with standard-normal complex coefficients, |ad − bc| ≥ 0.1.
MobiusMap random_mobius(Rng& rng, bool allow_conjugating = true);

/// Sample points x for a covariance check of u under m: images m(x) lie in
/// the disc of radius `image_radius` with `margin` clearance from excluded
/// points of u, |x| ≤ 10, and x keeps distance ≥ margin from the pole of m.
std::vector<Vec2> sample_for_map(std::uint64_t seed, std::size_t n, const ScalarField& u, const MobiusMap& m,
                                 double image_radius = 2.5, double margin = 0.1);

}  // namespace conformal2d
