#pragma once

// Math shims so numeric kernels can be instantiated with double, long double,
// or __float128 (via libquadmath).  Kernels call xm::foo(x) unqualified-free;
// the overload set below resolves per type.

#include <cmath>
#include <limits>

#if defined(__GNUC__) && defined(__x86_64__)
#define RING_LADDER_HAVE_FLOAT128 1
#include <quadmath.h>
#endif

namespace ring_ladder {
namespace xm {

using std::sqrt;
using std::cbrt;
using std::sin;
using std::cos;
using std::tan;
using std::asin;
using std::acos;
using std::atan;
using std::atan2;
using std::sinh;
using std::cosh;
using std::tanh;
using std::exp;
using std::log;
using std::pow;
using std::fabs;
using std::fmod;
using std::floor;
using std::hypot;
using std::isfinite;
using std::isnan;

template <class Real>
constexpr Real eps() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
constexpr Real pi() {
    return Real(3.141592653589793238462643383279502884L);
}

#ifdef RING_LADDER_HAVE_FLOAT128
inline __float128 sqrt(__float128 x) { return sqrtq(x); }
inline __float128 cbrt(__float128 x) { return cbrtq(x); }
inline __float128 sin(__float128 x) { return sinq(x); }
inline __float128 cos(__float128 x) { return cosq(x); }
inline __float128 tan(__float128 x) { return tanq(x); }
inline __float128 asin(__float128 x) { return asinq(x); }
inline __float128 acos(__float128 x) { return acosq(x); }
inline __float128 atan(__float128 x) { return atanq(x); }
inline __float128 atan2(__float128 y, __float128 x) { return atan2q(y, x); }
inline __float128 sinh(__float128 x) { return sinhq(x); }
inline __float128 cosh(__float128 x) { return coshq(x); }
inline __float128 tanh(__float128 x) { return tanhq(x); }
inline __float128 exp(__float128 x) { return expq(x); }
inline __float128 log(__float128 x) { return logq(x); }
inline __float128 pow(__float128 x, __float128 y) { return powq(x, y); }
inline __float128 fabs(__float128 x) { return fabsq(x); }
inline __float128 fmod(__float128 x, __float128 y) { return fmodq(x, y); }
inline __float128 floor(__float128 x) { return floorq(x); }
inline __float128 hypot(__float128 x, __float128 y) { return hypotq(x, y); }
inline bool isfinite(__float128 x) { return finiteq(x) != 0; }
inline bool isnan(__float128 x) { return isnanq(x) != 0; }

// FLT128_EPSILON / M_PIq need -fext-numeric-literals; build the constants
// from exact doubles instead (2^-112; pi split into two double summands).
template <>
constexpr __float128 eps<__float128>() {
    return __float128(1) / (__float128(0x1p56) * __float128(0x1p56));
}

template <>
constexpr __float128 pi<__float128>() {
    return __float128(3.141592653589793116) +
           __float128(1.2246467991473531772e-16);
}
#endif

}  // namespace xm
}  // namespace ring_ladder
