#pragma once

namespace dpnls {

// Real elliptic special functions on the modulus convention: the second
// argument l is the modulus, and l*l is the parameter some references call m.

// Carlson symmetric integral RF(x,y,z) by duplication; relative error < 1e-14.
// Requires x,y,z >= 0 with at most one zero.
double carlson_rf(double x, double y, double z);

// Complete elliptic integral K(l) = RF(0, 1-l^2, 1), l in [0,1).
double ellip_k(double l);

// Incomplete elliptic integral of the first kind F(phi, l), odd in phi,
// extended beyond |phi| > pi/2 by F(phi + n*pi, l) = F(phi, l) + 2n K(l).
double ellip_f(double phi, double l);

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

// sn, cn, dn by the descending Landen/AGM recursion; l in [0,1].
// Near l = 1 (1-l < 1e-12) the tanh/sech asymptotics are exact to target
// precision.  Arguments are reduced modulo the 4K period first.
JacobiTriple jacobi_sn_cn_dn(double u, double l);

inline double jacobi_sn(double u, double l) { return jacobi_sn_cn_dn(u, l).sn; }

}  // namespace dpnls
