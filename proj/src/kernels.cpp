#include "adot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace adot::kernels {

namespace scalar {

void average(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] + b[i]) * 0.5;
}

void add_scaled_diff(double* acc, const double* a, const double* b, double c,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += c * (a[i] - b[i]);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_clamped_shift(const double* v, double tau, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::max(v[i] - tau, 0.0);
  return s;
}

void clamped_shift(const double* v, double tau, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - tau, 0.0);
}

double l1_norm(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(v[i]);
  return s;
}

double sum_squares(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i] * v[i];
  return s;
}

}  // namespace scalar

#if ADOT_HAVE_AVX2_TU
namespace avx2 {
bool supported();
void average(const double*, const double*, double*, std::size_t);
void add_scaled_diff(double*, const double*, const double*, double, std::size_t);
double max_abs_diff(const double*, const double*, std::size_t);
double dot(const double*, const double*, std::size_t);
double sum_clamped_shift(const double*, double, std::size_t);
void clamped_shift(const double*, double, double*, std::size_t);
double l1_norm(const double*, std::size_t);
double sum_squares(const double*, std::size_t);
}  // namespace avx2
#endif

namespace {

struct Table {
  void (*average)(const double*, const double*, double*, std::size_t);
  void (*add_scaled_diff)(double*, const double*, const double*, double, std::size_t);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_clamped_shift)(const double*, double, std::size_t);
  void (*clamped_shift)(const double*, double, double*, std::size_t);
  double (*l1_norm)(const double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
};

constexpr Table kScalarTable = {
    scalar::average,       scalar::add_scaled_diff, scalar::max_abs_diff,
    scalar::dot,           scalar::sum_clamped_shift, scalar::clamped_shift,
    scalar::l1_norm,       scalar::sum_squares,
};

#if ADOT_HAVE_AVX2_TU
constexpr Table kAvx2Table = {
    avx2::average,       avx2::add_scaled_diff, avx2::max_abs_diff,
    avx2::dot,           avx2::sum_clamped_shift, avx2::clamped_shift,
    avx2::l1_norm,       avx2::sum_squares,
};
#endif

Table g_table = kScalarTable;
Backend g_backend = Backend::Scalar;

// Pick the widest available backend at startup; ADOT_KERNELS=scalar|avx2
// overrides the choice (useful for benchmarking and bug triage).
struct Init {
  Init() {
    Backend want = Backend::Avx2;
    if (const char* env = std::getenv("ADOT_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) want = Backend::Scalar;
      if (std::strcmp(env, "avx2") == 0) want = Backend::Avx2;
    }
    if (!set_backend(want)) set_backend(Backend::Scalar);
  }
};
const Init g_init;

}  // namespace

Backend active_backend() { return g_backend; }

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
#if ADOT_HAVE_AVX2_TU
  if (b == Backend::Avx2) return avx2::supported();
#endif
  return false;
}

bool set_backend(Backend b) {
  if (!backend_available(b)) return false;
  switch (b) {
    case Backend::Scalar:
      g_table = kScalarTable;
      break;
    case Backend::Avx2:
#if ADOT_HAVE_AVX2_TU
      g_table = kAvx2Table;
#endif
      break;
  }
  g_backend = b;
  return true;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "?";
}

void average(const double* a, const double* b, double* out, std::size_t n) {
  g_table.average(a, b, out, n);
}
void add_scaled_diff(double* acc, const double* a, const double* b, double c,
                     std::size_t n) {
  g_table.add_scaled_diff(acc, a, b, c, n);
}
double max_abs_diff(const double* a, const double* b, std::size_t n) {
  return g_table.max_abs_diff(a, b, n);
}
double dot(const double* a, const double* b, std::size_t n) {
  return g_table.dot(a, b, n);
}
double sum_clamped_shift(const double* v, double tau, std::size_t n) {
  return g_table.sum_clamped_shift(v, tau, n);
}
void clamped_shift(const double* v, double tau, double* out, std::size_t n) {
  g_table.clamped_shift(v, tau, out, n);
}
double l1_norm(const double* v, std::size_t n) { return g_table.l1_norm(v, n); }
double sum_squares(const double* v, std::size_t n) {
  return g_table.sum_squares(v, n);
}

}  // namespace adot::kernels
