#include "escs/predicates.hpp"

namespace escs {

namespace {

constexpr double kEps = 2.220446049250313e-16;  // 2^-52

int orient2d_exact(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c) {
  Vec2<Rational> ra{Rational(a.x), Rational(a.y)}, rb{Rational(b.x), Rational(b.y)},
      rc{Rational(c.x), Rational(c.y)};
  return orient2d(ra, rb, rc);
}

}  // namespace

int orient2d(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c) {
  double detleft = (a.x - c.x) * (b.y - c.y);
  double detright = (a.y - c.y) * (b.x - c.x);
  double det = detleft - detright;
  double detsum = std::abs(detleft) + std::abs(detright);
  double errbound = 4.0 * kEps * detsum;
  if (det > errbound || -det > errbound) return det > 0 ? 1 : -1;
  return orient2d_exact(a, b, c);
}

int incircle(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c,
             const Vec2<double>& d) {
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;
  double alift = adx * adx + ady * ady;
  double blift = bdx * bdx + bdy * bdy;
  double clift = cdx * cdx + cdy * cdy;
  double det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
               clift * (adx * bdy - ady * bdx);
  double permanent = alift * (std::abs(bdx * cdy) + std::abs(bdy * cdx)) +
                     blift * (std::abs(cdx * ady) + std::abs(cdy * adx)) +
                     clift * (std::abs(adx * bdy) + std::abs(ady * bdx));
  double errbound = 12.0 * kEps * permanent;
  if (det > errbound || -det > errbound) return det > 0 ? 1 : -1;
  Vec2<Rational> ra{Rational(a.x), Rational(a.y)}, rb{Rational(b.x), Rational(b.y)},
      rc{Rational(c.x), Rational(c.y)}, rd{Rational(d.x), Rational(d.y)};
  return incircle(ra, rb, rc, rd);
}

int incircle(const Vec2<Rational>& a, const Vec2<Rational>& b, const Vec2<Rational>& c,
             const Vec2<Rational>& d) {
  Vec2<Rational> ad = a - d, bd = b - d, cd = c - d;
  Rational alift = norm2(ad), blift = norm2(bd), clift = norm2(cd);
  Rational det = alift * cross(bd, cd) + blift * cross(cd, ad) + clift * cross(ad, bd);
  return sign(det);
}

}  // namespace escs
