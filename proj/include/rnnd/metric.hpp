#pragma once

#include <cstddef>
#include <span>

#include "rnnd/common.hpp"

#if defined(__SSE2__)
#include <emmintrin.h>
#include <xmmintrin.h>
#endif

namespace rnnd {

// Squared Euclidean distance. Squared form only: it is a monotone transform
// of L2, so nearest-neighbor order, ties and recall are unchanged and the
// sqrt is saved.
//
// The summation order is part of the contract, not an implementation detail:
// four float32 partial sums s0..s3 over interleaved lanes (element i goes to
// lane i % 4 within the 4-aligned prefix), combined as ((s0+s1)+(s2+s3)),
// then tail elements added left to right. No FMA contraction (the build sets
// -ffp-contract=off). This makes the scalar and SSE2 paths bit-identical and
// results reproducible across platforms.

inline float l2_sq_scalar(const float* a, const float* b, size_t d) {
  float s0 = 0.f, s1 = 0.f, s2 = 0.f, s3 = 0.f;
  size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    float d0 = a[i] - b[i];
    float d1 = a[i + 1] - b[i + 1];
    float d2 = a[i + 2] - b[i + 2];
    float d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  float sum = (s0 + s1) + (s2 + s3);
  for (; i < d; ++i) {
    float t = a[i] - b[i];
    sum += t * t;
  }
  return sum;
}

#if defined(__SSE2__)
inline float l2_sq(const float* a, const float* b, size_t d) {
  __m128 acc = _mm_setzero_ps();
  size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    __m128 diff = _mm_sub_ps(_mm_loadu_ps(a + i), _mm_loadu_ps(b + i));
    acc = _mm_add_ps(acc, _mm_mul_ps(diff, diff));
  }
  // ((s0+s1)+(s2+s3)), same association as the scalar path
  __m128 swapped = _mm_shuffle_ps(acc, acc, _MM_SHUFFLE(2, 3, 0, 1));
  __m128 pairs = _mm_add_ps(acc, swapped);  // [s0+s1, ., s2+s3, .]
  __m128 high = _mm_movehl_ps(pairs, pairs);
  float sum = _mm_cvtss_f32(_mm_add_ss(pairs, high));
  for (; i < d; ++i) {
    float t = a[i] - b[i];
    sum += t * t;
  }
  return sum;
}
#else
inline float l2_sq(const float* a, const float* b, size_t d) {
  return l2_sq_scalar(a, b, d);
}
#endif

inline float l2_sq(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw ParamError("l2_sq: dimension mismatch");
  return l2_sq(a.data(), b.data(), a.size());
}

}  // namespace rnnd
