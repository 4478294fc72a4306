// Scalar reference kernels. The SIMD variants are tested against these.

#include "patternboost/kernels/kernels.hpp"

namespace pb::kernels {
namespace {

template <class T>
T dot_ref(const T* a, const T* b, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <class T>
void axpy_ref(T* y, T alpha, const T* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <class T>
void linear_fwd_ref(T* out, const T* in, const T* w, const T* bias, std::size_t rows, std::size_t din,
                    std::size_t dout) {
  for (std::size_t r = 0; r < rows; ++r) {
    T* o = out + r * dout;
    for (std::size_t j = 0; j < dout; ++j) o[j] = bias ? bias[j] : T(0);
    const T* x = in + r * din;
    for (std::size_t i = 0; i < din; ++i) axpy_ref(o, x[i], w + i * dout, dout);
  }
}

template <class T>
void linear_bwd_ref(T* d_in, T* d_w, T* d_bias, const T* in, const T* w, const T* d_out, std::size_t rows,
                    std::size_t din, std::size_t dout) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* g = d_out + r * dout;
    const T* x = in + r * din;
    if (d_bias) axpy_ref(d_bias, T(1), g, dout);
    for (std::size_t i = 0; i < din; ++i) {
      if (d_in) d_in[r * din + i] += dot_ref(g, w + i * dout, dout);
      axpy_ref(d_w + i * dout, x[i], g, dout);
    }
  }
}

inline std::int64_t eval_form(const LinearForms5& f, std::size_t t, const std::int32_t lift[5]) {
  std::int64_t s = 0;
  for (int j = 0; j < 5; ++j) s += static_cast<std::int64_t>(f.c[j][t]) * lift[j];
  return s;
}

bool any_zero_form5_ref(const LinearForms5& f, const std::int32_t lift[5]) {
  for (std::size_t t = 0; t < f.count; ++t)
    if (eval_form(f, t, lift) == 0) return true;
  return false;
}

std::size_t count_zero_form5_ref(const LinearForms5& f, const std::int32_t lift[5]) {
  std::size_t hits = 0;
  for (std::size_t t = 0; t < f.count; ++t) hits += eval_form(f, t, lift) == 0;
  return hits;
}

}  // namespace

const KernelTable kScalarTable = {
    Isa::scalar,
    dot_ref<float>,
    dot_ref<double>,
    axpy_ref<float>,
    axpy_ref<double>,
    linear_fwd_ref<float>,
    linear_fwd_ref<double>,
    linear_bwd_ref<float>,
    linear_bwd_ref<double>,
    any_zero_form5_ref,
    count_zero_form5_ref,
};

}  // namespace pb::kernels
