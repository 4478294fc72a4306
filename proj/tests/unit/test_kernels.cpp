#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "patternboost/core/rng.hpp"
#include "patternboost/kernels/kernels.hpp"

using namespace pb;
using namespace pb::kernels;

namespace {

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (isa_available(isa)) out.push_back(&table(isa));
  return out;
}

template <class T>
std::vector<T> randn(Rng& rng, std::size_t n) {
  std::normal_distribution<T> d(0, 1);
  std::vector<T> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Relative to the magnitude of the summed terms, so reassociation is allowed for.
template <class T>
void check_close(const std::vector<T>& a, const std::vector<T>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])) <= tol * (1 + std::abs(static_cast<double>(b[i]))));
}

}  // namespace

TEST_CASE("scalar table is always there and unknown tables are refused") {
  CHECK(isa_available(Isa::scalar));
  CHECK(table(Isa::scalar).isa == Isa::scalar);
  CHECK(isa_available(active().isa));
#if !defined(__aarch64__)
  CHECK_THROWS_AS(table(Isa::neon), std::invalid_argument);
#endif
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const auto& ref = table(Isa::scalar);
  Rng rng = make_rng(17);
  for (const KernelTable* k : vector_tables()) {
    CAPTURE(to_string(k->isa));
    for (std::size_t n : {0UL, 1UL, 3UL, 7UL, 8UL, 9UL, 31UL, 64UL, 101UL}) {
      CAPTURE(n);
      auto a = randn<float>(rng, n), b = randn<float>(rng, n);
      CHECK(std::abs(k->dot_f32(a.data(), b.data(), n) - ref.dot_f32(a.data(), b.data(), n)) <= 1e-4 * (1 + n));
      auto ad = randn<double>(rng, n), bd = randn<double>(rng, n);
      CHECK(std::abs(k->dot_f64(ad.data(), bd.data(), n) - ref.dot_f64(ad.data(), bd.data(), n)) <= 1e-12 * (1 + n));

      auto y1 = a, y2 = a;
      k->axpy_f32(y1.data(), 0.37f, b.data(), n);
      ref.axpy_f32(y2.data(), 0.37f, b.data(), n);
      check_close(y1, y2, 1e-6);
      auto z1 = ad, z2 = ad;
      k->axpy_f64(z1.data(), -1.5, bd.data(), n);
      ref.axpy_f64(z2.data(), -1.5, bd.data(), n);
      check_close(z1, z2, 1e-14);
    }

    for (auto [rows, din, dout] : {std::tuple{1UL, 1UL, 1UL}, {5UL, 16UL, 48UL}, {7UL, 13UL, 9UL}, {3UL, 64UL, 16UL}}) {
      CAPTURE(rows);
      CAPTURE(din);
      CAPTURE(dout);
      auto in = randn<double>(rng, rows * din), w = randn<double>(rng, din * dout), bias = randn<double>(rng, dout);
      std::vector<double> o1(rows * dout), o2(rows * dout);
      k->linear_fwd_f64(o1.data(), in.data(), w.data(), bias.data(), rows, din, dout);
      ref.linear_fwd_f64(o2.data(), in.data(), w.data(), bias.data(), rows, din, dout);
      check_close(o1, o2, 1e-12);
      k->linear_fwd_f64(o1.data(), in.data(), w.data(), nullptr, rows, din, dout);
      ref.linear_fwd_f64(o2.data(), in.data(), w.data(), nullptr, rows, din, dout);
      check_close(o1, o2, 1e-12);

      auto d_out = randn<double>(rng, rows * dout);
      std::vector<double> di1(rows * din, 0.5), di2 = di1, dw1(din * dout, 0.25), dw2 = dw1, db1(dout, 1.0), db2 = db1;
      k->linear_bwd_f64(di1.data(), dw1.data(), db1.data(), in.data(), w.data(), d_out.data(), rows, din, dout);
      ref.linear_bwd_f64(di2.data(), dw2.data(), db2.data(), in.data(), w.data(), d_out.data(), rows, din, dout);
      check_close(di1, di2, 1e-12);
      check_close(dw1, dw2, 1e-12);
      check_close(db1, db2, 1e-12);

      std::vector<float> inf(in.begin(), in.end()), wf(w.begin(), w.end()), bf(bias.begin(), bias.end());
      std::vector<float> f1(rows * dout), f2(rows * dout);
      k->linear_fwd_f32(f1.data(), inf.data(), wf.data(), bf.data(), rows, din, dout);
      ref.linear_fwd_f32(f2.data(), inf.data(), wf.data(), bf.data(), rows, din, dout);
      check_close(f1, f2, 1e-4);
      std::vector<float> dof(d_out.begin(), d_out.end()), g1(din * dout, 0.f), g2 = g1;
      k->linear_bwd_f32(nullptr, g1.data(), nullptr, inf.data(), wf.data(), dof.data(), rows, din, dout);
      ref.linear_bwd_f32(nullptr, g2.data(), nullptr, inf.data(), wf.data(), dof.data(), rows, din, dout);
      check_close(g1, g2, 1e-4);
    }
  }
}

TEST_CASE("zero-form kernels are exact and agree across instruction sets") {
  const auto& ref = table(Isa::scalar);
  Rng rng = make_rng(23);
  for (std::size_t count : {0UL, 1UL, 5UL, 8UL, 13UL, 100UL}) {
    std::vector<std::int32_t> c[5];
    for (auto& col : c) col.resize(count);
    // Small coefficients so that exact zeros actually occur.
    for (auto& col : c)
      for (auto& x : col) x = static_cast<std::int32_t>(uniform_index(rng, 7)) - 3;
    // One large-coefficient form whose value only vanishes in 64-bit arithmetic.
    if (count > 2) {
      c[0][2] = 2000000000;
      c[1][2] = -2000000000;
      c[2][2] = c[3][2] = c[4][2] = 0;
    }
    LinearForms5 forms{{c[0].data(), c[1].data(), c[2].data(), c[3].data(), c[4].data()}, count};
    for (int t = 0; t < 50; ++t) {
      std::int32_t lift[5];
      for (auto& x : lift) x = static_cast<std::int32_t>(uniform_index(rng, 5));
      if (t == 0) lift[0] = lift[1] = 3;
      std::size_t zeros = 0;
      for (std::size_t i = 0; i < count; ++i) {
        std::int64_t v = 0;
        for (int j = 0; j < 5; ++j) v += static_cast<std::int64_t>(c[j][i]) * lift[j];
        zeros += v == 0;
      }
      CHECK(ref.count_zero_form5(forms, lift) == zeros);
      CHECK(ref.any_zero_form5(forms, lift) == (zeros > 0));
      for (const KernelTable* k : vector_tables()) {
        CHECK(k->count_zero_form5(forms, lift) == zeros);
        CHECK(k->any_zero_form5(forms, lift) == (zeros > 0));
      }
    }
  }
}
