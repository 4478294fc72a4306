// AVX2 + FMA kernels. Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "patternboost/kernels/kernels.hpp"

namespace pb::kernels {
namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 sh = _mm_movehdup_ps(lo);
  lo = _mm_add_ps(lo, sh);
  sh = _mm_movehl_ps(sh, lo);
  return _mm_cvtss_f32(_mm_add_ss(lo, sh));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline float dot_f32(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps(), acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  float s = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy_f32(float* y, float alpha, const float* x, std::size_t n) {
  const __m256 a = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(a, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

inline void axpy_f64(double* y, double alpha, const double* x, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

template <class T>
struct Ops;
template <>
struct Ops<float> {
  static float dot(const float* a, const float* b, std::size_t n) { return dot_f32(a, b, n); }
  static void axpy(float* y, float a, const float* x, std::size_t n) { axpy_f32(y, a, x, n); }
};
template <>
struct Ops<double> {
  static double dot(const double* a, const double* b, std::size_t n) { return dot_f64(a, b, n); }
  static void axpy(double* y, double a, const double* x, std::size_t n) { axpy_f64(y, a, x, n); }
};

template <class T>
void linear_fwd(T* out, const T* in, const T* w, const T* bias, std::size_t rows, std::size_t din,
                std::size_t dout) {
  for (std::size_t r = 0; r < rows; ++r) {
    T* o = out + r * dout;
    for (std::size_t j = 0; j < dout; ++j) o[j] = bias ? bias[j] : T(0);
    const T* x = in + r * din;
    for (std::size_t i = 0; i < din; ++i) Ops<T>::axpy(o, x[i], w + i * dout, dout);
  }
}

template <class T>
void linear_bwd(T* d_in, T* d_w, T* d_bias, const T* in, const T* w, const T* d_out, std::size_t rows,
                std::size_t din, std::size_t dout) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* g = d_out + r * dout;
    const T* x = in + r * din;
    if (d_bias) Ops<T>::axpy(d_bias, T(1), g, dout);
    for (std::size_t i = 0; i < din; ++i) {
      if (d_in) d_in[r * din + i] += Ops<T>::dot(g, w + i * dout, dout);
      Ops<T>::axpy(d_w + i * dout, x[i], g, dout);
    }
  }
}

// Four forms per step: sign-extend 32-bit coefficients to 64-bit lanes and use the
// exact 32x32->64 signed multiply.
inline __m256i eval4(const LinearForms5& f, std::size_t t, const __m256i lift[5]) {
  __m256i acc = _mm256_setzero_si256();
  for (int j = 0; j < 5; ++j) {
    __m256i c = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(f.c[j] + t)));
    acc = _mm256_add_epi64(acc, _mm256_mul_epi32(c, lift[j]));
  }
  return acc;
}

inline std::int64_t eval1(const LinearForms5& f, std::size_t t, const std::int32_t lift[5]) {
  std::int64_t s = 0;
  for (int j = 0; j < 5; ++j) s += static_cast<std::int64_t>(f.c[j][t]) * lift[j];
  return s;
}

bool any_zero_form5(const LinearForms5& f, const std::int32_t lift[5]) {
  __m256i l[5];
  for (int j = 0; j < 5; ++j) l[j] = _mm256_set1_epi64x(lift[j]);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t t = 0;
  for (; t + 4 <= f.count; t += 4)
    if (_mm256_movemask_epi8(_mm256_cmpeq_epi64(eval4(f, t, l), zero)) != 0) return true;
  for (; t < f.count; ++t)
    if (eval1(f, t, lift) == 0) return true;
  return false;
}

std::size_t count_zero_form5(const LinearForms5& f, const std::int32_t lift[5]) {
  __m256i l[5];
  for (int j = 0; j < 5; ++j) l[j] = _mm256_set1_epi64x(lift[j]);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t hits = 0, t = 0;
  for (; t + 4 <= f.count; t += 4) {
    int mask = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(eval4(f, t, l), zero)));
    hits += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  for (; t < f.count; ++t) hits += eval1(f, t, lift) == 0;
  return hits;
}

}  // namespace

const KernelTable kAvx2Table = {
    Isa::avx2,
    dot_f32,
    dot_f64,
    axpy_f32,
    axpy_f64,
    linear_fwd<float>,
    linear_fwd<double>,
    linear_bwd<float>,
    linear_bwd<double>,
    any_zero_form5,
    count_zero_form5,
};

}  // namespace pb::kernels
