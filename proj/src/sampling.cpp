#include "conformal2d/sampling.hpp"

#include <cmath>
#include <numbers>

#include "conformal2d/errors.hpp"

namespace conformal2d {

namespace {

template <class Draw>
std::vector<Vec2> rejection(std::size_t n, Draw draw, const PointPredicate& accept) {
    std::vector<Vec2> out;
    out.reserve(n);
    std::size_t tries = 0;
    while (out.size() < n) {
        if (++tries > 1000 * (n + 1)) throw DomainError("sampling: acceptance region too small");
        const Vec2 p = draw();
        if (!accept || accept(p)) out.push_back(p);
    }
    return out;
}

}  // namespace

std::vector<Vec2> sample_annulus(std::uint64_t seed, std::size_t n, Vec2 center, double r_in, double r_out,
                                 const PointPredicate& accept) {
    Rng rng(seed);
    std::uniform_real_distribution<double> area(r_in * r_in, r_out * r_out);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    return rejection(
        n,
        [&] {
            const double r = std::sqrt(area(rng));
            const double t = angle(rng);
            return center + Vec2{r * std::cos(t), r * std::sin(t)};
        },
        accept);
}

std::vector<Vec2> sample_box(std::uint64_t seed, std::size_t n, Vec2 lo, Vec2 hi, const PointPredicate& accept) {
    Rng rng(seed);
    std::uniform_real_distribution<double> ux(lo.x1, hi.x1), uy(lo.x2, hi.x2);
    return rejection(n, [&] { return Vec2{ux(rng), uy(rng)}; }, accept);
}

bool has_margin(const ScalarField& u, Vec2 x, double margin) {
    if (u.excluded(x)) return false;
    for (int k = 0; k < 8; ++k) {
        const double t = 0.25 * std::numbers::pi * k;
        if (u.excluded(x + Vec2{margin * std::cos(t), margin * std::sin(t)})) return false;
    }
    return true;
}

MobiusMap random_mobius(Rng& rng, bool allow_conjugating) {
    std::normal_distribution<double> normal;
    std::bernoulli_distribution coin(0.5);
    for (;;) {
        const Complex a{normal(rng), normal(rng)}, b{normal(rng), normal(rng)};
        const Complex c{normal(rng), normal(rng)}, d{normal(rng), normal(rng)};
        const bool conj = allow_conjugating && coin(rng);
        if (std::abs(a * d - b * c) >= 0.1) return {a, b, c, d, conj};
    }
}

std::vector<Vec2> sample_for_map(std::uint64_t seed, std::size_t n, const ScalarField& u, const MobiusMap& m,
                                 double image_radius, double margin) {
    const MobiusMap back = inverse(m);
    const auto pole = m.pole();
    Rng rng(seed);
    std::uniform_real_distribution<double> area(0.0, image_radius * image_radius);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    return rejection(
        n,
        [&] {
            for (int attempt = 0;; ++attempt) {
                if (attempt > 100000) throw DomainError("sampling: no admissible image points");
                const double r = std::sqrt(area(rng)), t = angle(rng);
                const Vec2 y{r * std::cos(t), r * std::sin(t)};
                if (!has_margin(u, y, margin) || back.near_pole(y)) continue;
                return back.apply(y);
            }
        },
        [&](Vec2 x) {
            if (!x.finite() || x.norm() > 10.0) return false;
            return !pole || (x - *pole).norm() >= margin;
        });
}

}  // namespace conformal2d
