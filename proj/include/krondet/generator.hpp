#pragma once

#include <cstdint>
#include <cmath>
#include <string>
#include <vector>

#include "krondet/det_kernels.hpp"
#include "krondet/instance.hpp"
#include "krondet/matrix.hpp"

namespace krondet {

// splitmix64 (Steele, Lea & Flood; the java.util.SplittableRandom mixer).
// Fixed published constants, pure 64-bit integer arithmetic: a seed produces
// the same stream on every platform and in any language that implements the
// same three-line mixer.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // [0, 1), 53 significant bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // [-1, 1)
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  // Inclusive range by modulo reduction (the tiny modulo bias is irrelevant
  // here; bit-for-bit reproducibility is what matters).
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(next() % span);
  }

 private:
  std::uint64_t state_;
};

enum class Profile {
  kUniform,
  kIntegerSmall,
  kIllConditioned,
  kSingularA,
  kSingularX,
  kSingularY,
  kIdentity,
};

inline const char* profile_name(Profile p) {
  switch (p) {
    case Profile::kUniform: return "uniform";
    case Profile::kIntegerSmall: return "integer_small";
    case Profile::kIllConditioned: return "ill_conditioned";
    case Profile::kSingularA: return "singular_a";
    case Profile::kSingularX: return "singular_x";
    case Profile::kSingularY: return "singular_y";
    case Profile::kIdentity: return "identity";
  }
  return "?";
}

inline Profile parse_profile(const std::string& s) {
  for (Profile p : {Profile::kUniform, Profile::kIntegerSmall,
                    Profile::kIllConditioned, Profile::kSingularA,
                    Profile::kSingularX, Profile::kSingularY,
                    Profile::kIdentity}) {
    if (s == profile_name(p)) return p;
  }
  throw parse_error("unknown profile '" + s + "'");
}

namespace detail {

// Entry distributions. Every value drawn is exactly representable as a
// double, so float-mode and exact-mode instances built from the same seed
// coincide exactly.
//   uniform:         [-1, 1)
//   integer_small:   integers in [-3, 3] (keeps exact-mode rationals small)
//   ill_conditioned: uniform with row i scaled by 2^(-4i)
inline DenseMatrix<double> draw_matrix(SplitMix64& rng, std::size_t rows,
                                       std::size_t cols, Profile profile) {
  DenseMatrix<double> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      switch (profile) {
        case Profile::kIntegerSmall:
          m(i, j) = static_cast<double>(rng.next_int(-3, 3));
          break;
        case Profile::kIllConditioned:
          m(i, j) = rng.next_symmetric() *
                    std::ldexp(1.0, -4 * static_cast<int>(i));
          break;
        default:
          m(i, j) = rng.next_symmetric();
          break;
      }
    }
  }
  return m;
}

inline bool exactly_singular(const DenseMatrix<double>& m) {
  return sgn(bareiss_det(matrix_cast<mpq_class>(m))) == 0;
}

// Redraws until the factor is nonsingular in exact arithmetic, so singular
// profiles are rank-deficient in the targeted factor and nowhere else.
inline DenseMatrix<double> draw_nonsingular(SplitMix64& rng, std::size_t n,
                                            Profile profile) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    DenseMatrix<double> m = draw_matrix(rng, n, n, profile);
    if (!exactly_singular(m)) return m;
  }
  throw resource_error("could not draw a nonsingular factor");
}

// Last row := sum of the other rows (the zero row when n = 1).
inline void force_singular(DenseMatrix<double>& m) {
  const std::size_t last = m.rows() - 1;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < last; ++i) acc += m(i, j);
    m(last, j) = acc;
  }
}

}  // namespace detail

// Deterministic instance construction: a pure function of (N, F, seed,
// profile). The stream is a single SplitMix64 sequence starting at `seed`,
// consumed in a fixed order:
//   singular_a only:  one draw selecting the deficient factor index;
//   then A^(0) ... A^(N-1) row-major, then X row-major, then Y row-major.
// The singular profiles draw integer_small entries, force the target factor
// rank-deficient (last row = sum of the others) and redraw every other
// factor until it is exactly nonsingular. identity consumes no draws.
template <class T>
KronRankOneInstance<T> random_instance(int n, int f, std::uint64_t seed,
                                       Profile profile) {
  if (n < 1 || f < 1) throw shape_error("instance sizes must be positive");
  const auto nn = static_cast<std::size_t>(n);
  const auto ff = static_cast<std::size_t>(f);
  SplitMix64 rng(seed);

  std::vector<DenseMatrix<double>> a;
  a.reserve(nn);
  DenseMatrix<double> x = DenseMatrix<double>::identity(nn);
  DenseMatrix<double> y = DenseMatrix<double>::identity(nn);

  switch (profile) {
    case Profile::kIdentity:
      for (int k = 0; k < n; ++k) a.push_back(DenseMatrix<double>::identity(ff));
      break;

    case Profile::kUniform:
    case Profile::kIntegerSmall:
    case Profile::kIllConditioned:
      for (int k = 0; k < n; ++k) {
        a.push_back(detail::draw_matrix(rng, ff, ff, profile));
      }
      x = detail::draw_matrix(rng, nn, nn, profile);
      y = detail::draw_matrix(rng, nn, nn, profile);
      break;

    case Profile::kSingularA: {
      const auto target = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
      for (int k = 0; k < n; ++k) {
        if (k == target) {
          DenseMatrix<double> m =
              detail::draw_matrix(rng, ff, ff, Profile::kIntegerSmall);
          detail::force_singular(m);
          a.push_back(std::move(m));
        } else {
          a.push_back(detail::draw_nonsingular(rng, ff, Profile::kIntegerSmall));
        }
      }
      x = detail::draw_nonsingular(rng, nn, Profile::kIntegerSmall);
      y = detail::draw_nonsingular(rng, nn, Profile::kIntegerSmall);
      break;
    }

    case Profile::kSingularX:
    case Profile::kSingularY: {
      for (int k = 0; k < n; ++k) {
        a.push_back(detail::draw_nonsingular(rng, ff, Profile::kIntegerSmall));
      }
      if (profile == Profile::kSingularX) {
        x = detail::draw_matrix(rng, nn, nn, Profile::kIntegerSmall);
        detail::force_singular(x);
        y = detail::draw_nonsingular(rng, nn, Profile::kIntegerSmall);
      } else {
        x = detail::draw_nonsingular(rng, nn, Profile::kIntegerSmall);
        y = detail::draw_matrix(rng, nn, nn, Profile::kIntegerSmall);
        detail::force_singular(y);
      }
      break;
    }
  }

  std::vector<DenseMatrix<T>> a_t;
  a_t.reserve(a.size());
  for (const auto& m : a) a_t.push_back(matrix_cast<T>(m));
  return KronRankOneInstance<T>(std::move(a_t), matrix_cast<T>(x),
                                matrix_cast<T>(y));
}

}  // namespace krondet
