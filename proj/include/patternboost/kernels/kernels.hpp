#pragma once

// Data-parallel inner loops used by the transformer and the sphere search.
//
// Every kernel has a scalar reference implementation. AVX2 (x86-64) and NEON (aarch64)
// variants are compiled in separate translation units and selected at runtime; the
// environment variable PATTERNBOOST_ISA=scalar|avx2|neon pins a choice.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pb::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// Coefficients of the lifted-point linear forms x -> sum_j c_j * lift(x)_j, one form
/// per column, stored as five parallel arrays. Every coefficient must fit in 32 bits.
struct LinearForms5 {
  const std::int32_t* c[5];
  std::size_t count;
};

struct KernelTable {
  Isa isa;

  float (*dot_f32)(const float* a, const float* b, std::size_t n);
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy_f32)(float* y, float alpha, const float* x, std::size_t n);
  void (*axpy_f64)(double* y, double alpha, const double* x, std::size_t n);

  /// out[r] = bias + in[r] . W for r < rows; W is din x dout row-major, bias may be null.
  void (*linear_fwd_f32)(float* out, const float* in, const float* w, const float* bias,
                         std::size_t rows, std::size_t din, std::size_t dout);
  void (*linear_fwd_f64)(double* out, const double* in, const double* w, const double* bias,
                         std::size_t rows, std::size_t din, std::size_t dout);
  /// Accumulates d_in += d_out . W^T, d_w += in^T . d_out, d_bias += sum_r d_out[r].
  /// d_in and d_bias may be null.
  void (*linear_bwd_f32)(float* d_in, float* d_w, float* d_bias, const float* in, const float* w,
                         const float* d_out, std::size_t rows, std::size_t din, std::size_t dout);
  void (*linear_bwd_f64)(double* d_in, double* d_w, double* d_bias, const double* in, const double* w,
                         const double* d_out, std::size_t rows, std::size_t din, std::size_t dout);

  /// True iff some form evaluates to exactly zero at `lift` (64-bit exact arithmetic).
  bool (*any_zero_form5)(const LinearForms5& forms, const std::int32_t lift[5]);
  /// Number of forms that evaluate to zero at `lift`.
  std::size_t (*count_zero_form5)(const LinearForms5& forms, const std::int32_t lift[5]);
};

bool isa_available(Isa isa);
/// Throws std::invalid_argument when the ISA is not compiled in or not supported by this CPU.
const KernelTable& table(Isa isa);
/// Best available table unless PATTERNBOOST_ISA overrides it.
const KernelTable& active();

// Typed conveniences over the active table.
inline float dot(const float* a, const float* b, std::size_t n) { return active().dot_f32(a, b, n); }
inline double dot(const double* a, const double* b, std::size_t n) { return active().dot_f64(a, b, n); }
inline void axpy(float* y, float a, const float* x, std::size_t n) { active().axpy_f32(y, a, x, n); }
inline void axpy(double* y, double a, const double* x, std::size_t n) { active().axpy_f64(y, a, x, n); }

inline void linear_fwd(const KernelTable& k, float* out, const float* in, const float* w, const float* b,
                       std::size_t rows, std::size_t din, std::size_t dout) {
  k.linear_fwd_f32(out, in, w, b, rows, din, dout);
}
inline void linear_fwd(const KernelTable& k, double* out, const double* in, const double* w, const double* b,
                       std::size_t rows, std::size_t din, std::size_t dout) {
  k.linear_fwd_f64(out, in, w, b, rows, din, dout);
}
inline void linear_bwd(const KernelTable& k, float* d_in, float* d_w, float* d_b, const float* in,
                       const float* w, const float* d_out, std::size_t rows, std::size_t din, std::size_t dout) {
  k.linear_bwd_f32(d_in, d_w, d_b, in, w, d_out, rows, din, dout);
}
inline void linear_bwd(const KernelTable& k, double* d_in, double* d_w, double* d_b, const double* in,
                       const double* w, const double* d_out, std::size_t rows, std::size_t din, std::size_t dout) {
  k.linear_bwd_f64(d_in, d_w, d_b, in, w, d_out, rows, din, dout);
}

// Per-ISA tables, defined in their own translation units.
extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif

}  // namespace pb::kernels
