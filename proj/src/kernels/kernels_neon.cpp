// NEON kernels for aarch64. Same contracts as the scalar reference.

#include <arm_neon.h>

#include "patternboost/kernels/kernels.hpp"

namespace pb::kernels {
namespace {

inline float dot_f32(const float* a, const float* b, std::size_t n) {
  float32x4_t acc0 = vdupq_n_f32(0), acc1 = vdupq_n_f32(0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
    acc1 = vfmaq_f32(acc1, vld1q_f32(a + i + 4), vld1q_f32(b + i + 4));
  }
  float s = vaddvq_f32(vaddq_f32(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double dot_f64(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy_f32(float* y, float alpha, const float* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(y + i, vfmaq_n_f32(vld1q_f32(y + i), vld1q_f32(x + i), alpha));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

inline void axpy_f64(double* y, double alpha, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), alpha));
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

inline int64x2_t eval2(const LinearForms5& f, std::size_t t, const std::int32_t lift[5]) {
  int64x2_t acc = vdupq_n_s64(0);
  for (int j = 0; j < 5; ++j) acc = vmlal_n_s32(acc, vld1_s32(f.c[j] + t), lift[j]);
  return acc;
}

inline std::int64_t eval1(const LinearForms5& f, std::size_t t, const std::int32_t lift[5]) {
  std::int64_t s = 0;
  for (int j = 0; j < 5; ++j) s += static_cast<std::int64_t>(f.c[j][t]) * lift[j];
  return s;
}

bool any_zero_form5(const LinearForms5& f, const std::int32_t lift[5]) {
  std::size_t t = 0;
  for (; t + 2 <= f.count; t += 2) {
    uint64x2_t z = vceqzq_s64(eval2(f, t, lift));
    if (vgetq_lane_u64(z, 0) | vgetq_lane_u64(z, 1)) return true;
  }
  for (; t < f.count; ++t)
    if (eval1(f, t, lift) == 0) return true;
  return false;
}

std::size_t count_zero_form5(const LinearForms5& f, const std::int32_t lift[5]) {
  std::size_t hits = 0, t = 0;
  for (; t + 2 <= f.count; t += 2) {
    uint64x2_t z = vceqzq_s64(eval2(f, t, lift));
    hits += (vgetq_lane_u64(z, 0) & 1) + (vgetq_lane_u64(z, 1) & 1);
  }
  for (; t < f.count; ++t) hits += eval1(f, t, lift) == 0;
  return hits;
}

}  // namespace

const KernelTable kNeonTable = {
    Isa::neon,
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
